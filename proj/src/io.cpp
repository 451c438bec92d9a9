#include "dagnn/io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace dagnn {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, const std::string& file, std::size_t line) {
  double v = 0.0;
  const char* b = tok.data();
  const char* e = b + tok.size();
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc{} || res.ptr != e)
    throw parse_error(file, line, "malformed number '" + tok + "'");
  return v;
}

std::size_t dedup(std::vector<Point>& pts) {
  std::unordered_set<std::uint64_t> seen;
  std::vector<Point> kept;
  kept.reserve(pts.size());
  std::size_t removed = 0;
  for (const Point& p : pts) {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (int k = 0; k < p.dim(); ++k) {
      const double v = p[k] == 0.0 ? 0.0 : p[k];
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      h = (h ^ bits) * 0xff51afd7ed558ccdULL;
    }
    if (!seen.insert(h).second) {
      // hash collision or true duplicate; confirm by scan
      bool dup = false;
      for (const Point& q : kept)
        if (q == p) {
          dup = true;
          break;
        }
      if (dup) {
        ++removed;
        continue;
      }
    }
    kept.push_back(p);
  }
  pts = std::move(kept);
  return removed;
}

LoadResult load_xyz(std::istream& in, const std::string& file) {
  LoadResult r;
  std::string line;
  std::size_t lineno = 0;
  int cols = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    if (cols == 0) {
      if (toks.size() != 2 && toks.size() != 3)
        throw parse_error(file, lineno, "expected 2 or 3 coordinates");
      cols = static_cast<int>(toks.size());
    }
    if (static_cast<int>(toks.size()) != cols)
      throw parse_error(file, lineno, "inconsistent column count");
    if (cols == 2)
      r.points.emplace_back(parse_double(toks[0], file, lineno), parse_double(toks[1], file, lineno));
    else
      r.points.emplace_back(parse_double(toks[0], file, lineno), parse_double(toks[1], file, lineno),
                            parse_double(toks[2], file, lineno));
  }
  r.dimension = cols == 2 ? 2 : 3;
  return r;
}

LoadResult load_obj(std::istream& in, const std::string& file) {
  LoadResult r;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0] != "v") continue;
    if (toks.size() < 4) throw parse_error(file, lineno, "vertex line needs x y z");
    r.points.emplace_back(parse_double(toks[1], file, lineno), parse_double(toks[2], file, lineno),
                          parse_double(toks[3], file, lineno));
  }
  r.dimension = 3;
  return r;
}

LoadResult load_ply(std::istream& in, const std::string& file) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line) || split_ws(line) != std::vector<std::string>{"ply"})
    throw parse_error(file, 1, "not a PLY file");
  ++lineno;
  std::size_t vertex_count = 0;
  int xs = -1, ys = -1, zs = -1;
  int prop = 0;
  bool in_vertex_element = false;
  bool ascii = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "format") {
      if (toks.size() < 2 || toks[1] != "ascii")
        throw parse_error(file, lineno, "only ascii PLY is supported");
      ascii = true;
    } else if (toks[0] == "element") {
      in_vertex_element = toks.size() >= 3 && toks[1] == "vertex";
      if (in_vertex_element) vertex_count = std::stoull(toks[2]);
    } else if (toks[0] == "property" && in_vertex_element) {
      if (toks.size() >= 3 && toks[1] != "list") {
        if (toks[2] == "x") xs = prop;
        if (toks[2] == "y") ys = prop;
        if (toks[2] == "z") zs = prop;
      }
      ++prop;
    } else if (toks[0] == "end_header") {
      break;
    }
  }
  if (!ascii) throw parse_error(file, lineno, "missing ascii format line");
  if (vertex_count == 0) throw parse_error(file, lineno, "no vertex element");
  if (xs < 0 || ys < 0 || zs < 0) throw parse_error(file, lineno, "missing x/y/z properties");

  LoadResult r;
  r.dimension = 3;
  r.points.reserve(vertex_count);
  for (std::size_t i = 0; i < vertex_count; ++i) {
    if (!std::getline(in, line)) throw parse_error(file, lineno, "truncated vertex list");
    ++lineno;
    const auto toks = split_ws(line);
    const int need = std::max(xs, std::max(ys, zs));
    if (static_cast<int>(toks.size()) <= need)
      throw parse_error(file, lineno, "vertex line too short");
    r.points.emplace_back(parse_double(toks[static_cast<std::size_t>(xs)], file, lineno),
                          parse_double(toks[static_cast<std::size_t>(ys)], file, lineno),
                          parse_double(toks[static_cast<std::size_t>(zs)], file, lineno));
  }
  return r;
}

}  // namespace

PointFormat format_from_path(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "xyz" || ext == "txt") return PointFormat::Xyz;
  if (ext == "obj") return PointFormat::Obj;
  if (ext == "ply") return PointFormat::PlyAscii;
  throw parse_error("cannot infer point format from '" + path + "'");
}

LoadResult load_points(const std::string& path, PointFormat format) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open '" + path + "'");
  LoadResult r;
  switch (format) {
    case PointFormat::Xyz: r = load_xyz(in, path); break;
    case PointFormat::Obj: r = load_obj(in, path); break;
    case PointFormat::PlyAscii: r = load_ply(in, path); break;
  }
  if (r.points.empty()) throw parse_error(path + ": no vertices");
  r.duplicates_removed = dedup(r.points);
  return r;
}

}  // namespace dagnn
