#pragma once

// Tame functors Q^r -> Vect_K: a frame F and a resolution alpha, representing v -> F(floor(v / alpha)).

#include <map>
#include <utility>
#include <vector>

#include "stablerank/errors.hpp"
#include "stablerank/frame.hpp"
#include "stablerank/rational.hpp"

namespace stablerank {

struct TameModule {
  Frame frame;
  Rational alpha{1};

  TameModule(Frame f, Rational a = Rational(1)) : frame(std::move(f)), alpha(a) {
    require(alpha > 0, "tame resolution alpha must be positive");
  }

  std::size_t parameters() const { return frame.parameters(); }
  const PrimeField& field() const { return frame.field(); }

  /// floor(v / alpha), coordinatewise.
  GridPoint grid_index(const RationalPoint& v) const {
    require(v.size() == parameters(), "point has the wrong number of coordinates");
    GridPoint out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      require(v[i] >= 0, "tame functors are indexed by non-negative rationals");
      out[i] = static_cast<int>(floor_div(v[i] / alpha));
    }
    return out;
  }

  /// The rational point alpha * v.
  RationalPoint position(const GridPoint& v) const {
    RationalPoint out;
    for (int x : v) out.push_back(alpha * x);
    return out;
  }

  /// Index of an alpha-aligned rational point; throws if q / alpha is not an integer.
  GridPoint aligned_index(const RationalPoint& v) const {
    GridPoint out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      Rational q = v[i] / alpha;
      require(q.denominator() == 1, "point " + to_string(v) + " is not on the alpha-grid");
      out[i] = static_cast<int>(q.numerator());
    }
    return out;
  }
};

inline std::size_t tame_evaluate(const TameModule& g, const RationalPoint& v) {
  return g.frame.dim(g.grid_index(v));
}

inline Matrix tame_map(const TameModule& g, const RationalPoint& v, const RationalPoint& w) {
  require(leq(v, w), "tame_map needs v <= w");
  return g.frame.map(g.grid_index(v), g.grid_index(w));
}

/// The same functor at resolution alpha / k.
inline TameModule refine(const TameModule& g, int k) { return TameModule(g.frame.refined(k), g.alpha / k); }

/// Refines so that every given rational is an integer multiple of the new resolution.
inline TameModule align_to(const TameModule& g, const std::vector<Rational>& values) {
  std::vector<Rational> scaled;
  for (const auto& q : values) scaled.push_back(q / g.alpha);
  auto k = common_denominator(scaled);
  return k == 1 ? g : refine(g, static_cast<int>(k));
}

/// Betti diagram with coordinates alpha * v.
inline std::map<RationalPoint, std::size_t> tame_betti_diagram(const TameModule& g, std::size_t n) {
  std::map<RationalPoint, std::size_t> out;
  for (const auto& [v, k] : betti_diagram(g.frame, n).entries) out[g.position(v)] = k;
  return out;
}

inline Barcode tame_bar_decomposition(const TameModule& g) {
  Barcode grid = bar_decomposition(g.frame);
  Barcode out;
  for (const auto& [b, d] : grid.finite_bars) out.finite_bars.emplace_back(b * g.alpha, d * g.alpha);
  for (const auto& b : grid.infinite_bars) out.infinite_bars.push_back(b * g.alpha);
  out.normalize();
  return out;
}

/// The one-parameter module realizing a barcode, at the coarsest resolution holding every endpoint.
inline TameModule module_from_barcode(const Barcode& bars, PrimeField field) {
  std::vector<Rational> endpoints;
  for (const auto& [b, d] : bars.finite_bars) {
    require(b >= 0 && b < d, "bars need 0 <= birth < death");
    endpoints.push_back(b);
    endpoints.push_back(d);
  }
  for (const auto& b : bars.infinite_bars) {
    require(b >= 0, "bars need birth >= 0");
    endpoints.push_back(b);
  }
  Rational alpha(1, common_denominator(endpoints));
  auto idx = [&](const Rational& q) { return static_cast<int>((q / alpha).numerator()); };
  Frame f = zero_frame(1, field);
  for (const auto& [b, d] : bars.finite_bars) f = direct_sum(f, bar_module({idx(b)}, {idx(d)}, field));
  for (const auto& b : bars.infinite_bars) f = direct_sum(f, free_bar({idx(b)}, field));
  return TameModule(std::move(f), alpha);
}

}  // namespace stablerank
