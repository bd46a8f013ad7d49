#pragma once

#include <stdexcept>
#include <string>

namespace surfcr {

/// Base class of everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SURFCR_DEFINE_ERROR(Name)          \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  };

// geometry
SURFCR_DEFINE_ERROR(OutOfTube)
SURFCR_DEFINE_ERROR(DegenerateGradient)
SURFCR_DEFINE_ERROR(NewtonDivergence)
SURFCR_DEFINE_ERROR(NotOnSurface)
SURFCR_DEFINE_ERROR(Unsupported)

// differentiation
SURFCR_DEFINE_ERROR(DomainError)

// meshes
SURFCR_DEFINE_ERROR(DegenerateTriangle)
SURFCR_DEFINE_ERROR(InvalidResolution)
SURFCR_DEFINE_ERROR(InvalidMesh)
SURFCR_DEFINE_ERROR(InsufficientMeshes)

// discretization
SURFCR_DEFINE_ERROR(QuadratureFailure)
SURFCR_DEFINE_ERROR(IndexOutOfRange)
SURFCR_DEFINE_ERROR(NotSymmetric)
SURFCR_DEFINE_ERROR(NotPositiveDefinite)

// io / config
SURFCR_DEFINE_ERROR(IoError)
SURFCR_DEFINE_ERROR(ConfigError)

#undef SURFCR_DEFINE_ERROR

/// Thrown by the CG solver; carries the residual it managed to reach.
class MaxIterations : public Error {
 public:
  MaxIterations(int iterations, double residual)
      : Error("CG did not converge after " + std::to_string(iterations) +
              " iterations (relative residual " + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}

  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

}  // namespace surfcr
