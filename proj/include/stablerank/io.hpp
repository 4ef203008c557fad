#pragma once

// Text formats. '#' starts a comment anywhere; blank lines are ignored.
//
//   frame:    "r p box_1 .. box_r", optional "alpha q", one "v_1 .. v_r dim" line per grid point in
//             lexicographic order, then "map axis v_1 .. v_r entries.." (axis 1-based, row-major
//             dim(v + e_axis) x dim(v)); absent maps are zero.
//   barcode:  "birth death" or "birth inf" per line.
//   graph:    "n p", then "s t" per edge, vertices 1..n.
//   contour:  "standard w_1,..,w_r" or "truncate u_1,..,u_r (inner)".

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stablerank/contour.hpp"
#include "stablerank/errors.hpp"
#include "stablerank/frame.hpp"
#include "stablerank/hardness.hpp"
#include "stablerank/rational.hpp"
#include "stablerank/tame.hpp"

namespace stablerank {

namespace detail {

inline std::vector<std::vector<std::string>> tokenized_lines(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> tokens;
    for (std::string w; words >> w;) tokens.push_back(w);
    if (!tokens.empty()) out.push_back(std::move(tokens));
  }
  return out;
}

inline std::int64_t parse_integer(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw ParseError("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected an integer for " + what + ", got '" + s + "'");
  }
}

inline std::size_t parse_count(const std::string& s, const std::string& what) {
  auto v = parse_integer(s, what);
  if (v < 0) throw ParseError(what + " must be non-negative, got " + s);
  return static_cast<std::size_t>(v);
}

}  // namespace detail

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------------------------

inline std::string print_module(const TameModule& g) {
  const Frame& f = g.frame;
  std::ostringstream out;
  out << f.parameters() << " " << f.field().modulus();
  for (int b : f.box()) out << " " << b;
  out << "\n";
  if (g.alpha != 1) out << "alpha " << to_string(g.alpha) << "\n";
  for (std::size_t idx = 0; idx < f.point_count(); ++idx) {
    for (int x : f.point(idx)) out << x << " ";
    out << f.dim_at(idx) << "\n";
  }
  for (std::size_t axis = 0; axis < f.parameters(); ++axis)
    for (std::size_t idx = 0; idx < f.point_count(); ++idx) {
      GridPoint v = f.point(idx);
      if (v[axis] >= f.box()[axis]) continue;
      const Matrix& m = f.step_at(axis, idx);
      if (m.rows() == 0 || m.cols() == 0 || m.is_zero()) continue;
      out << "map " << axis + 1;
      for (int x : v) out << " " << x;
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out << " " << m(i, j);
      out << "\n";
    }
  return out.str();
}

inline std::string print_frame(const Frame& f) { return print_module(TameModule(f)); }

/// Parses and validates (shapes, commutativity) a frame with optional resolution.
inline TameModule parse_module(const std::string& text) {
  auto lines = detail::tokenized_lines(text);
  if (lines.empty()) throw ParseError("empty frame");
  const auto& head = lines[0];
  if (head.size() < 3) throw ParseError("frame header must be 'r p box_1 .. box_r'");
  std::size_t r = detail::parse_count(head[0], "r");
  if (r == 0 || head.size() != 2 + r) throw ParseError("frame header must be 'r p box_1 .. box_r'");
  auto p = detail::parse_integer(head[1], "p");
  if (p < 2 || p > 65521 || !is_prime(static_cast<std::uint32_t>(p)))
    throw ParseError("field characteristic must be a prime, got " + head[1]);
  PrimeField field(static_cast<std::uint32_t>(p));
  GridPoint box;
  for (std::size_t i = 0; i < r; ++i) box.push_back(static_cast<int>(detail::parse_count(head[2 + i], "box")));
  Frame f(box, field);
  std::size_t line = 1;
  Rational alpha(1);
  if (line < lines.size() && lines[line][0] == "alpha") {
    if (lines[line].size() != 2) throw ParseError("alpha line must be 'alpha q'");
    alpha = parse_rational(lines[line][1]);
    if (alpha <= 0) throw ParseError("alpha must be positive");
    ++line;
  }
  for (std::size_t idx = 0; idx < f.point_count(); ++idx, ++line) {
    GridPoint v = f.point(idx);
    if (line >= lines.size() || lines[line].size() != r + 1 || lines[line][0] == "map")
      throw ParseError("expected dimension line for grid point " + to_string(v));
    for (std::size_t i = 0; i < r; ++i)
      if (detail::parse_integer(lines[line][i], "coordinate") != v[i])
        throw ParseError("dimension lines must list grid points in lexicographic order; expected " + to_string(v));
    f.set_dim(v, detail::parse_count(lines[line][r], "dim"));
  }
  for (; line < lines.size(); ++line) {
    const auto& t = lines[line];
    if (t[0] != "map" || t.size() < 2 + r) throw ParseError("expected 'map axis v_1 .. v_r entries'");
    std::size_t axis = detail::parse_count(t[1], "axis");
    if (axis < 1 || axis > r) throw ParseError("map axis out of range: " + t[1]);
    --axis;
    GridPoint v;
    for (std::size_t i = 0; i < r; ++i) v.push_back(static_cast<int>(detail::parse_count(t[2 + i], "coordinate")));
    if (!f.in_box(v) || v[axis] >= box[axis]) throw ParseError("map at " + to_string(v) + " leaves the box");
    GridPoint next = v;
    ++next[axis];
    std::size_t rows = f.dim(next), cols = f.dim(v);
    if (t.size() != 2 + r + rows * cols)
      throw ParseError("map at " + to_string(v) + " along axis " + std::to_string(axis + 1) + " needs " +
                       std::to_string(rows * cols) + " entries");
    Matrix m(rows, cols, field);
    for (std::size_t i = 0; i < rows * cols; ++i)
      m.set(i / cols, i % cols, field.reduce(detail::parse_integer(t[2 + r + i], "matrix entry")));
    f.set_step(axis, v, std::move(m));
  }
  f.validate();
  return TameModule(std::move(f), alpha);
}

// ---------------------------------------------------------------------------------------------

inline std::string print_barcode(Barcode bars) {
  bars.normalize();
  std::ostringstream out;
  for (const auto& [b, d] : bars.finite_bars) out << to_string(b) << " " << to_string(d) << "\n";
  for (const auto& b : bars.infinite_bars) out << to_string(b) << " inf\n";
  return out.str();
}

inline Barcode parse_barcode(const std::string& text) {
  Barcode bars;
  for (const auto& t : detail::tokenized_lines(text)) {
    if (t.size() != 2) throw ParseError("barcode lines must be 'birth death' or 'birth inf'");
    Rational b = parse_rational(t[0]);
    if (b < 0) throw ParseError("bar births must be non-negative");
    if (t[1] == "inf") {
      bars.infinite_bars.push_back(b);
      continue;
    }
    Rational d = parse_rational(t[1]);
    if (!(b < d)) throw ParseError("bar " + t[0] + " " + t[1] + " needs birth < death");
    bars.finite_bars.emplace_back(b, d);
  }
  bars.normalize();
  return bars;
}

// ---------------------------------------------------------------------------------------------

struct GraphInput {
  Graph graph;
  PrimeField field;
};

inline std::string print_graph(const Graph& x, const PrimeField& field) {
  std::ostringstream out;
  out << x.vertex_count() << " " << field.modulus() << "\n";
  for (const auto& [s, t] : x.edges()) out << s + 1 << " " << t + 1 << "\n";
  return out.str();
}

inline GraphInput parse_graph(const std::string& text) {
  auto lines = detail::tokenized_lines(text);
  if (lines.empty() || lines[0].size() != 2) throw ParseError("graph header must be 'n p'");
  std::size_t n = detail::parse_count(lines[0][0], "n");
  auto p = detail::parse_integer(lines[0][1], "p");
  if (p < 2 || p > 65521 || !is_prime(static_cast<std::uint32_t>(p)))
    throw ParseError("field characteristic must be a prime, got " + lines[0][1]);
  Graph x(n);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].size() != 2) throw ParseError("edge lines must be 's t'");
    std::size_t s = detail::parse_count(lines[i][0], "vertex"), t = detail::parse_count(lines[i][1], "vertex");
    if (s < 1 || s > n || t < 1 || t > n) throw ParseError("edge endpoint out of range 1.." + std::to_string(n));
    if (s == t) throw ParseError("self-loop at vertex " + lines[i][0]);
    if (x.adjacent(s - 1, t - 1)) throw ParseError("duplicate edge " + lines[i][0] + " " + lines[i][1]);
    x.add_edge(s - 1, t - 1);
  }
  return {std::move(x), PrimeField(static_cast<std::uint32_t>(p))};
}

// ---------------------------------------------------------------------------------------------

inline std::string print_contour(const Contour& c) { return c.to_string(); }
inline Contour parse_contour(const std::string& text) { return Contour::parse(text); }

// ---------------------------------------------------------------------------------------------

inline std::string bench_csv_header() {
  return "graph,n,stable_rank,minrank,agree,time_ms_brute,time_ms_minrank,budget_hit\n";
}

/// Times are written as exact rationals of whole microseconds.
inline std::string bench_csv_row(const std::string& name, std::size_t n, const PipelineResult& r) {
  auto value = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string("budget"); };
  auto ms = [](double t) { return to_string(Rational(static_cast<std::int64_t>(t * 1000.0 + 0.5), 1000)); };
  std::ostringstream out;
  out << name << "," << n << "," << value(r.stable_rank) << "," << value(r.minrank) << ","
      << (r.agree() ? "yes" : "no") << "," << ms(r.ms_bruteforce) << "," << ms(r.ms_minrank) << ","
      << (r.budget_hit() ? "yes" : "no") << "\n";
  return out.str();
}

}  // namespace stablerank
