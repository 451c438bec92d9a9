#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dagnn/geometry.hpp"

namespace dagnn {

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& file, std::size_t line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what) {}
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

enum class PointFormat { Xyz, Obj, PlyAscii };

/// Guesses from the extension (.xyz, .obj, .ply); anything else is an error.
PointFormat format_from_path(const std::string& path);

struct LoadResult {
  std::vector<Point> points;
  int dimension = 3;
  std::size_t duplicates_removed = 0;
};

/// Vertex positions only: OBJ "v" lines, PLY ascii vertex x/y/z properties,
/// XYZ whitespace-separated rows (2 or 3 columns, fixing the dimension).
/// Exact-duplicate vertices are removed and counted.
LoadResult load_points(const std::string& path, PointFormat format);

}  // namespace dagnn
