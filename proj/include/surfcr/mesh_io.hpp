#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "surfcr/errors.hpp"
#include "surfcr/surface_mesh.hpp"

namespace surfcr {

/// OFF text format: "OFF", "V F E", V vertex lines, F lines "3 i j k".
inline void write_off(const SurfaceMesh& mesh, std::ostream& os) {
  os << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_triangles() << ' ' << mesh.num_edges() << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& v : mesh.vertices()) os << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  for (const auto& t : mesh.triangles()) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  if (!os) throw IoError("failed writing OFF data");
}

inline void write_off(const SurfaceMesh& mesh, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_off(mesh, os);
}

namespace detail {

// Next token, skipping '#' comments.
inline bool next_token(std::istream& is, std::string& tok) {
  while (is >> tok) {
    if (tok[0] != '#') return true;
    std::string rest;
    std::getline(is, rest);
  }
  return false;
}

template <class T>
T parse_number(std::istream& is, const char* what) {
  std::string tok;
  if (!next_token(is, tok)) throw IoError(std::string("OFF: unexpected end of input reading ") + what);
  std::istringstream ss(tok);
  T value{};
  if (!(ss >> value) || !ss.eof()) throw IoError(std::string("OFF: malformed ") + what + " '" + tok + "'");
  return value;
}

}  // namespace detail

/// Reads a triangle-only OFF mesh; connectivity checks as in SurfaceMesh.
inline SurfaceMesh read_off(std::istream& is) {
  std::string tok;
  if (!detail::next_token(is, tok) || tok != "OFF") throw IoError("OFF: missing header");
  const auto nv = detail::parse_number<long>(is, "vertex count");
  const auto nf = detail::parse_number<long>(is, "face count");
  (void)detail::parse_number<long>(is, "edge count");
  if (nv < 0 || nf < 0) throw IoError("OFF: negative counts");
  std::vector<Vec3> vertices(static_cast<std::size_t>(nv));
  for (auto& v : vertices) {
    for (int c = 0; c < 3; ++c) v[c] = detail::parse_number<double>(is, "coordinate");
  }
  std::vector<Triangle> triangles(static_cast<std::size_t>(nf));
  for (auto& t : triangles) {
    if (detail::parse_number<int>(is, "face size") != 3) throw IoError("OFF: only triangles are supported");
    for (int c = 0; c < 3; ++c) t[c] = detail::parse_number<int>(is, "vertex index");
  }
  return {std::move(vertices), std::move(triangles)};
}

inline SurfaceMesh read_off(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  return read_off(is);
}

}  // namespace surfcr
