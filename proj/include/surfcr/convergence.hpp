#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "surfcr/errors.hpp"

namespace surfcr {

/// Experimental order of convergence between two consecutive levels.
inline double eoc(double coarse_error, double fine_error, double coarse_h, double fine_h) {
  return std::log(coarse_error / fine_error) / std::log(coarse_h / fine_h);
}

/// Orders between consecutive entries; element 0 is empty.
inline std::vector<std::optional<double>> observed_orders(std::span<const double> errors,
                                                          std::span<const double> h) {
  if (errors.size() != h.size()) throw Error("observed_orders: size mismatch");
  std::vector<std::optional<double>> out(errors.size());
  for (std::size_t k = 1; k < errors.size(); ++k) out[k] = eoc(errors[k - 1], errors[k], h[k - 1], h[k]);
  return out;
}

}  // namespace surfcr
