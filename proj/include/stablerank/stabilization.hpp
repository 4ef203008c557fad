#pragma once

// Finite multisets of rationals, non-increasing step functions, the interleaving distance between
// them, and the hierarchical stabilization tau -> min{ f(y) | d(x, y) <= tau } over a finite
// candidate list. Every function here lives on the non-negative rationals.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stablerank/errors.hpp"
#include "stablerank/rational.hpp"

namespace stablerank {

/// A non-negative rational or infinity (std::nullopt).
using Extended = std::optional<Rational>;

inline std::string to_string(const Extended& e) { return e ? to_string(*e) : std::string("inf"); }

/// A finite multi-subset of Q, i.e. a finitely supported function Q -> N.
class RationalMultiset {
 public:
  RationalMultiset() = default;
  RationalMultiset(std::initializer_list<std::pair<const Rational, std::uint64_t>> entries) {
    for (const auto& [t, m] : entries) add(t, m);
  }

  void add(const Rational& t, std::uint64_t multiplicity = 1) {
    require(t >= 0, "multiset elements are non-negative rationals");
    if (multiplicity == 0) return;
    support_[t] += multiplicity;
  }

  std::uint64_t operator()(const Rational& t) const {
    auto it = support_.find(t);
    return it == support_.end() ? 0 : it->second;
  }

  std::vector<Rational> critical_points() const {
    std::vector<Rational> out;
    for (const auto& [t, m] : support_) out.push_back(t);
    return out;
  }

  std::uint64_t rank() const {
    std::uint64_t r = 0;
    for (const auto& [t, m] : support_) r += m;
    return r;
  }

  const std::map<Rational, std::uint64_t>& support() const { return support_; }
  bool operator==(const RationalMultiset&) const = default;

 private:
  std::map<Rational, std::uint64_t> support_;
};

/// Right-continuous non-increasing step function on [0, inf): value[i] on [breakpoint[i], breakpoint[i+1]).
class StepFunction {
 public:
  StepFunction() : breakpoints_{Rational(0)}, values_{0} {}
  StepFunction(std::vector<Rational> breakpoints, std::vector<std::uint64_t> values)
      : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    require(!breakpoints_.empty() && breakpoints_.size() == values_.size(),
            "step function needs one value per breakpoint");
    require(breakpoints_.front() == 0, "step function must start at 0");
    for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
      require(breakpoints_[i - 1] < breakpoints_[i], "step function breakpoints must strictly increase");
      require(values_[i - 1] >= values_[i], "step function values must be non-increasing");
    }
  }

  static StepFunction constant(std::uint64_t value) { return StepFunction({Rational(0)}, {value}); }

  std::uint64_t operator()(const Rational& tau) const {
    require(tau >= 0, "step functions are evaluated at tau >= 0");
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), tau);
    return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
  }

  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  const std::vector<std::uint64_t>& values() const { return values_; }
  std::vector<Rational> critical_points() const { return breakpoints_; }

  /// Merges adjacent equal values.
  StepFunction compressed() const {
    std::vector<Rational> b;
    std::vector<std::uint64_t> v;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!v.empty() && v.back() == values_[i]) continue;
      b.push_back(breakpoints_[i]);
      v.push_back(values_[i]);
    }
    return StepFunction(std::move(b), std::move(v));
  }

  std::string to_csv() const {
    std::ostringstream out;
    out << "tau,value\n";
    for (std::size_t i = 0; i < values_.size(); ++i) out << to_string(breakpoints_[i]) << "," << values_[i] << "\n";
    return out.str();
  }

  bool operator==(const StepFunction&) const = default;

 private:
  std::vector<Rational> breakpoints_;
  std::vector<std::uint64_t> values_;
};

namespace detail {

// g(tau) >= f(tau + eps) for every tau >= 0. Both sides are constant between the points checked here.
template <class Fn>
bool dominates_shift(const Fn& f, const Fn& g, const Rational& eps) {
  std::set<Rational> taus{Rational(0)};
  for (const auto& t : g.critical_points()) taus.insert(t);
  for (const auto& s : f.critical_points())
    if (s >= eps) taus.insert(s - eps);
  for (const auto& tau : taus)
    if (g(tau) < f(tau + eps)) return false;
  return true;
}

template <class Fn>
bool eps_close(const Fn& f, const Fn& g, const Rational& eps) {
  return dominates_shift(f, g, eps) && dominates_shift(g, f, eps);
}

template <class Fn>
std::vector<Rational> distance_candidates(const Fn& f, const Fn& g) {
  std::vector<Rational> fs = f.critical_points(), gs = g.critical_points();
  fs.push_back(0);
  gs.push_back(0);
  std::set<Rational> out{Rational(0)};
  for (const auto& s : fs)
    for (const auto& t : gs) out.insert(s >= t ? s - t : t - s);
  return {out.begin(), out.end()};
}

// Feasibility of eps-closeness only changes at candidate values, so it is constant on each open gap;
// a gap is probed at its midpoint and the unbounded tail one unit past the last candidate.
template <class Fn>
Extended interleaving_scan(const Fn& f, const Fn& g) {
  auto candidates = distance_candidates(f, g);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (eps_close(f, g, candidates[i])) return candidates[i];
    Rational probe = i + 1 < candidates.size() ? (candidates[i] + candidates[i + 1]) / 2 : candidates[i] + 1;
    if (eps_close(f, g, probe)) return candidates[i];
  }
  return std::nullopt;
}

}  // namespace detail

/// True iff g(tau) >= f(tau + eps) and f(tau) >= g(tau + eps) for all tau >= 0.
inline bool eps_close(const RationalMultiset& f, const RationalMultiset& g, const Rational& eps) {
  return detail::eps_close(f, g, eps);
}
inline bool eps_close(const StepFunction& f, const StepFunction& g, const Rational& eps) {
  return detail::eps_close(f, g, eps);
}

/// inf{ eps | f, g eps-close }, or infinity. For finitely supported multisets the infimum need not be
/// attained (e.g. {0:2} against the empty multiset gives 0 although eps = 0 itself fails).
inline Extended interleaving_distance(const RationalMultiset& f, const RationalMultiset& g) {
  return detail::interleaving_scan(f, g);
}

/// For non-increasing right-continuous step functions the infimum is always attained.
inline Extended interleaving_distance(const StepFunction& f, const StepFunction& g) {
  return detail::interleaving_scan(f, g);
}

/// One element y of the disc structure around x: the invariant value f(y) and the distance d(x, y).
struct StabilizationCandidate {
  std::uint64_t value;
  Rational distance;
};

/// tau -> min{ value | distance <= tau } over the given finite candidate list.
inline StepFunction stabilize(std::vector<StabilizationCandidate> candidates) {
  require(!candidates.empty(), "stabilize: empty candidate list");
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) { return a.distance < b.distance; });
  require(candidates.front().distance == 0, "stabilize: the candidate list must contain the center (distance 0)");
  std::vector<Rational> breakpoints;
  std::vector<std::uint64_t> values;
  for (const auto& c : candidates) {
    if (!values.empty() && c.value >= values.back()) continue;
    if (!breakpoints.empty() && breakpoints.back() == c.distance) {
      values.back() = c.value;
      continue;
    }
    breakpoints.push_back(c.distance);
    values.push_back(c.value);
  }
  return StepFunction(std::move(breakpoints), std::move(values));
}

}  // namespace stablerank
