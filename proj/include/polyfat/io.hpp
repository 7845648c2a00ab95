#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "polyfat/error.hpp"
#include "polyfat/geometry.hpp"
#include "polyfat/hardness.hpp"
#include "polyfat/jl.hpp"

namespace polyfat::io {

using nlohmann::json;

struct ParseError : Error {
  using Error::Error;
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(trim(cell));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

inline double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("line " + std::to_string(line) + ": not a number: '" + s + "'");
  return v;
}

inline bool blank(const std::string& line) { return trim(line).empty(); }

inline std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path);
  return f;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  return f;
}

}  // namespace detail

/// Header `x1,...,xd,label`, one point per row, labels +1 / -1.
inline Sample read_points_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!detail::blank(line)) break;
  }
  const auto header = detail::split(line);
  if (header.size() < 2 || header.back() != "label") throw ParseError("points CSV header must be x1,...,xd,label");
  const std::size_t d = header.size() - 1;
  for (std::size_t i = 0; i < d; ++i)
    if (header[i] != "x" + std::to_string(i + 1)) throw ParseError("points CSV header column " + std::to_string(i + 1) + " must be x" + std::to_string(i + 1));
  Sample s;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::blank(line)) continue;
    const auto cells = detail::split(line);
    if (cells.size() != d + 1) throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(d + 1) + " fields");
    Vector x(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) x[static_cast<Eigen::Index>(i)] = detail::parse_double(cells[i], lineno);
    const double y = detail::parse_double(cells[d], lineno);
    if (y != 1.0 && y != -1.0) throw ParseError("line " + std::to_string(lineno) + ": label must be +1 or -1");
    s.emplace_back(std::move(x), y > 0 ? Label::Positive : Label::Negative);
  }
  return s;
}

inline Sample read_points_csv(const std::string& path) {
  auto f = detail::open_in(path);
  return read_points_csv(f);
}

inline void write_points_csv(std::ostream& out, std::span<const LabeledPoint> s, std::size_t dim) {
  for (std::size_t i = 0; i < dim; ++i) out << 'x' << i + 1 << ',';
  out << "label\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& p : s) {
    check_dim(dim, p.dim());
    for (Eigen::Index i = 0; i < p.x().size(); ++i) out << p.x()[i] << ',';
    out << (p.label() == Label::Positive ? "1" : "-1") << '\n';
  }
}

inline void write_points_csv(const std::string& path, std::span<const LabeledPoint> s, std::size_t dim) {
  auto f = detail::open_out(path);
  write_points_csv(f, s, dim);
}

inline json to_json_array(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline Vector vector_from_json(const json& a) {
  if (!a.is_array()) throw ParseError("expected a JSON array of numbers");
  Vector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw ParseError("expected a number");
    v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  }
  return v;
}

struct Model {
  Polytope polytope;
  double gamma = 0.0;
};

/// {"dim": d, "gamma": g, "halfspaces": [{"w": [...], "b": b}, ...]}
inline json model_to_json(const Polytope& p, double gamma) {
  json hs = json::array();
  for (const auto& h : p.halfspaces()) hs.push_back({{"w", to_json_array(h.normal())}, {"b", h.offset()}});
  return {{"dim", p.dim()}, {"gamma", gamma}, {"halfspaces", hs}};
}

inline Model model_from_json(const json& j) {
  try {
    const auto d = j.at("dim").get<std::size_t>();
    Model m{Polytope(d), j.at("gamma").get<double>()};
    for (const auto& h : j.at("halfspaces")) {
      Vector w = vector_from_json(h.at("w"));
      check_dim(d, static_cast<std::size_t>(w.size()));
      m.polytope.add(Hyperplane(std::move(w), h.at("b").get<double>()));
    }
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad model JSON: ") + e.what());
  }
}

inline Model read_model(const std::string& path) {
  auto f = detail::open_in(path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return model_from_json(j);
}

inline void write_model(const std::string& path, const Polytope& p, double gamma) {
  auto f = detail::open_out(path);
  f << model_to_json(p, gamma).dump(2) << '\n';
}

/// {"k": k, "d": d, "m": [[row], ...]}
inline json jl_to_json(const JlMap& f) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < f.matrix().rows(); ++r) rows.push_back(to_json_array(f.matrix().row(r).transpose()));
  return {{"k", f.target_dim()}, {"d", f.source_dim()}, {"m", rows}};
}

inline JlMap jl_from_json(const json& j) {
  try {
    const auto k = j.at("k").get<Eigen::Index>();
    const auto d = j.at("d").get<Eigen::Index>();
    const auto& rows = j.at("m");
    if (static_cast<Eigen::Index>(rows.size()) != k) throw ParseError("JL dump has the wrong number of rows");
    Eigen::MatrixXd m(k, d);
    for (Eigen::Index r = 0; r < k; ++r) {
      const Vector row = vector_from_json(rows[static_cast<std::size_t>(r)]);
      if (row.size() != d) throw ParseError("JL dump row has the wrong length");
      m.row(r) = row.transpose();
    }
    return JlMap(std::move(m));
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad JL JSON: ") + e.what());
  }
}

/// Plain numeric CSV without header; blank lines and lines starting with '#'
/// are skipped.
inline Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<double> row;
    for (const auto& c : detail::split(t)) row.push_back(detail::parse_double(c, lineno));
    if (!rows.empty() && row.size() != rows.front().size()) throw ParseError("line " + std::to_string(lineno) + ": ragged matrix row");
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

inline Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  auto f = detail::open_in(path);
  return read_matrix_csv(f);
}

/// Right-hand side as one column or one row.
inline Vector read_vector_csv(const std::string& path) {
  const Eigen::MatrixXd m = read_matrix_csv(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw ParseError(path + ": expected a single row or column");
}

/// One edge per line as "u v" or "u,v"; '#' starts a comment. A line
/// "n <count>" fixes the vertex count, otherwise it is the largest id + 1.
inline Graph read_edges(std::istream& in) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t n = 0;
  bool fixed_n = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = detail::trim(line.substr(0, line.find('#')));
    if (t.empty()) continue;
    for (char& c : t)
      if (c == ',') c = ' ';
    std::istringstream ls(t);
    std::string a, b;
    ls >> a >> b;
    if (a == "n") {
      n = static_cast<std::size_t>(detail::parse_double(b, lineno));
      fixed_n = true;
      continue;
    }
    std::string extra;
    if (b.empty() || (ls >> extra)) throw ParseError("line " + std::to_string(lineno) + ": expected two vertex ids");
    const auto u = static_cast<std::size_t>(detail::parse_double(a, lineno));
    const auto v = static_cast<std::size_t>(detail::parse_double(b, lineno));
    edges.emplace_back(u, v);
    if (!fixed_n) n = std::max({n, u + 1, v + 1});
  }
  return Graph(n, edges);
}

inline Graph read_edges(const std::string& path) {
  auto f = detail::open_in(path);
  return read_edges(f);
}

}  // namespace polyfat::io
