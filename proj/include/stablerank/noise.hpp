#pragma once

// The simple noise system of a persistence contour: membership and tau-shifts.

#include <vector>

#include "stablerank/contour.hpp"
#include "stablerank/errors.hpp"
#include "stablerank/frame.hpp"
#include "stablerank/tame.hpp"

namespace stablerank {

struct ShiftedGenerator {
  RationalPoint original;
  ContourPoint shifted;  // infinity when the generator was dropped
};

/// G[tau] as a subframe of G. `ambient` is G refined so that every shifted generator is on the grid,
/// with its box enlarged to contain them; `shifted` lives on that grid.
struct ShiftResult {
  TameModule ambient;
  Subframe shifted;
  std::vector<ShiftedGenerator> generators_used;

  TameModule module() const { return TameModule(shifted.frame, ambient.alpha); }
  /// G / G[tau] on the ambient grid.
  TameModule cokernel() const { return TameModule(quotient(ambient.frame, shifted), ambient.alpha); }
};

namespace detail {

struct PushedGenerator {
  Element generator;
  std::optional<GridPoint> target;  // grid index of C(v_s, tau), or none when infinite
};

inline std::vector<PushedGenerator> push_generators(const TameModule& g, const Contour& c, const Rational& tau) {
  std::vector<PushedGenerator> out;
  for (auto& e : minimal_generators(g.frame)) {
    ContourPoint target = c(g.position(e.at), tau);
    std::optional<GridPoint> idx;
    if (target) idx = g.aligned_index(*target);
    out.push_back({std::move(e), std::move(idx)});
  }
  return out;
}

inline TameModule with_box_covering(const TameModule& g, const std::vector<PushedGenerator>& pushed) {
  GridPoint box = g.frame.box();
  for (const auto& p : pushed)
    if (p.target) box = join(box, *p.target);
  if (box == g.frame.box()) return g;
  return TameModule(g.frame.with_box(box), g.alpha);
}

inline ShiftResult shift_impl(const TameModule& g, const Contour& c, const Rational& tau, bool push) {
  require(c.parameters() == g.parameters(), "contour and module have different numbers of parameters");
  require(tau >= 0, "shift needs tau >= 0");
  TameModule aligned = align_to(g, c.alignment_values(tau));
  auto pushed = push_generators(aligned, c, tau);
  TameModule ambient = with_box_covering(aligned, pushed);
  std::vector<Element> elements;
  std::vector<ShiftedGenerator> used;
  for (const auto& p : pushed) {
    RationalPoint original = ambient.position(p.generator.at);
    if (!p.target) {
      used.push_back({original, std::nullopt});
      continue;
    }
    used.push_back({original, ambient.position(*p.target)});
    if (push)
      elements.push_back({*p.target, ambient.frame.map(p.generator.at, *p.target).apply(p.generator.vector)});
    else
      elements.push_back(p.generator);
  }
  Subframe sub = submodule_generated(ambient.frame, elements);
  return {std::move(ambient), std::move(sub), std::move(used)};
}

}  // namespace detail

/// G[tau]: the subfunctor generated by G(v_s <= C(v_s, tau))(g_s) over minimal generators g_s with
/// C(v_s, tau) finite.
inline ShiftResult shift(const TameModule& g, const Contour& c, const Rational& tau) {
  return detail::shift_impl(g, c, tau, true);
}

/// The domain-noise shift: the subfunctor generated by the minimal generators with C(v_s, tau) finite,
/// left at their own coordinates.
inline ShiftResult domain_shift(const TameModule& g, const Contour& c, const Rational& tau) {
  return detail::shift_impl(g, c, tau, false);
}

/// True iff G(v <= C(v, eps)) is zero whenever C(v, eps) is finite. With eps * w and the corners on
/// the grid the condition is constant on alpha-cubes, and past the box the functor is constant, so
/// the grid points of the box are enough.
inline bool noise_contains(const TameModule& g, const Contour& c, const Rational& eps) {
  require(c.parameters() == g.parameters(), "contour and module have different numbers of parameters");
  TameModule aligned = align_to(g, c.alignment_values(eps));
  const Frame& f = aligned.frame;
  for (std::size_t idx = 0; idx < f.point_count(); ++idx) {
    if (f.dim_at(idx) == 0) continue;
    GridPoint v = f.point(idx);
    ContourPoint target = c(aligned.position(v), eps);
    if (!target) continue;
    if (!f.map(v, aligned.aligned_index(*target)).is_zero()) return false;
  }
  return true;
}

}  // namespace stablerank
