#pragma once

// Persistence contours: the standard contour v + eps * w and truncations at a corner u.

#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stablerank/errors.hpp"
#include "stablerank/rational.hpp"
#include "stablerank/stabilization.hpp"

namespace stablerank {

/// A point of Q^r extended by a top element; std::nullopt is infinity.
using ContourPoint = std::optional<RationalPoint>;

/// Finite(v) <= Finite(w) iff v <= w; everything is <= infinity.
inline bool leq(const ContourPoint& a, const ContourPoint& b) {
  if (!b) return true;
  if (!a) return false;
  return leq(*a, *b);
}

inline std::string to_string(const ContourPoint& p) { return p ? to_string(*p) : std::string("inf"); }

class Contour {
 public:
  /// S_w(v, eps) = v + eps * w.
  static Contour standard(RationalPoint direction) {
    require(!direction.empty(), "contour direction needs at least one coordinate");
    for (const auto& x : direction) require(x >= 0, "contour direction must be coordinatewise >= 0");
    return Contour(Standard{std::move(direction)});
  }

  /// (C/u)(v, eps) = C(v, eps) unless u <= C(v, eps), in which case infinity.
  static Contour truncated(Contour inner, RationalPoint corner) {
    require(corner.size() == inner.parameters(), "truncation corner has the wrong number of coordinates");
    for (const auto& x : corner) require(x >= 0, "truncation corner must be non-negative");
    return Contour(Truncated{std::make_shared<const Contour>(std::move(inner)), std::move(corner)});
  }

  std::size_t parameters() const {
    if (auto s = std::get_if<Standard>(&kind_)) return s->direction.size();
    return std::get<Truncated>(kind_).corner.size();
  }

  ContourPoint operator()(const ContourPoint& v, const Rational& eps) const {
    require(eps >= 0, "contours are evaluated at eps >= 0");
    if (!v) return std::nullopt;
    require(v->size() == parameters(), "contour evaluated at a point with the wrong number of coordinates");
    if (auto s = std::get_if<Standard>(&kind_)) {
      RationalPoint out = *v;
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += eps * s->direction[i];
      return out;
    }
    const auto& t = std::get<Truncated>(kind_);
    ContourPoint inner = (*t.inner)(v, eps);
    if (!inner || leq(t.corner, *inner)) return std::nullopt;
    return inner;
  }

  /// Smallest tau >= 0 with C(v, tau) = inf or target <= C(v, tau); std::nullopt if there is none.
  /// A missing target means only reaching infinity counts.
  Extended exit_time(const RationalPoint& v, const ContourPoint& target) const {
    if (auto s = std::get_if<Standard>(&kind_)) {
      if (!target) return std::nullopt;
      Rational tau(0);
      for (std::size_t i = 0; i < v.size(); ++i) {
        Rational gap = (*target)[i] - v[i];
        if (gap <= 0) continue;
        if (s->direction[i] == 0) return std::nullopt;
        tau = std::max(tau, gap / s->direction[i]);
      }
      return tau;
    }
    const auto& t = std::get<Truncated>(kind_);
    Extended a = t.inner->exit_time(v, target);
    Extended b = t.inner->exit_time(v, t.corner);
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
  }

  /// Rationals that must lie on the grid for shifts by eps to stay grid-aligned: eps * w and corners.
  std::vector<Rational> alignment_values(const Rational& eps) const {
    if (auto s = std::get_if<Standard>(&kind_)) {
      std::vector<Rational> out;
      for (const auto& w : s->direction) out.push_back(eps * w);
      return out;
    }
    const auto& t = std::get<Truncated>(kind_);
    auto out = t.inner->alignment_values(eps);
    out.insert(out.end(), t.corner.begin(), t.corner.end());
    return out;
  }

  std::string to_string() const {
    auto list = [](const RationalPoint& p) {
      std::string s;
      for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + stablerank::to_string(p[i]);
      return s;
    };
    if (auto s = std::get_if<Standard>(&kind_)) return "standard " + list(s->direction);
    const auto& t = std::get<Truncated>(kind_);
    return "truncate " + list(t.corner) + " (" + t.inner->to_string() + ")";
  }

  /// Parses "standard w1,...,wr" and "truncate u1,...,ur (inner)".
  static Contour parse(std::string_view text) {
    std::size_t pos = 0;
    Contour c = parse_at(text, pos);
    skip_space(text, pos);
    if (pos != text.size()) throw ParseError("trailing characters in contour '" + std::string(text) + "'");
    return c;
  }

  bool operator==(const Contour& o) const { return to_string() == o.to_string(); }

 private:
  struct Standard {
    RationalPoint direction;
  };
  struct Truncated {
    std::shared_ptr<const Contour> inner;
    RationalPoint corner;
  };
  using Kind = std::variant<Standard, Truncated>;

  explicit Contour(Kind k) : kind_(std::move(k)) {}

  static void skip_space(std::string_view s, std::size_t& pos) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  static std::string_view word(std::string_view s, std::size_t& pos) {
    skip_space(s, pos);
    std::size_t start = pos;
    while (pos < s.size() && s[pos] != ' ' && s[pos] != '\t' && s[pos] != '(' && s[pos] != ')') ++pos;
    return s.substr(start, pos - start);
  }
  static Contour parse_at(std::string_view s, std::size_t& pos) {
    std::string_view kind = word(s, pos);
    if (kind == "standard") {
      auto w = word(s, pos);
      if (w.empty()) throw ParseError("standard contour needs a direction");
      try {
        return standard(parse_rational_list(w));
      } catch (const PreconditionError& e) {
        throw ParseError(e.what());
      }
    }
    if (kind == "truncate") {
      auto u = word(s, pos);
      if (u.empty()) throw ParseError("truncated contour needs a corner");
      RationalPoint corner = parse_rational_list(u);
      skip_space(s, pos);
      if (pos >= s.size() || s[pos] != '(') throw ParseError("truncated contour needs '(inner)'");
      ++pos;
      Contour inner = parse_at(s, pos);
      skip_space(s, pos);
      if (pos >= s.size() || s[pos] != ')') throw ParseError("unbalanced parentheses in contour");
      ++pos;
      try {
        return truncated(std::move(inner), std::move(corner));
      } catch (const PreconditionError& e) {
        throw ParseError(e.what());
      }
    }
    throw ParseError("unknown contour kind '" + std::string(kind) + "'");
  }

  Kind kind_;
};

/// One sample for the axiom checker: a point v and two scalars eps, tau.
struct ContourSample {
  RationalPoint v;
  Rational eps;
  Rational tau;
};

struct ContourAxiomReport {
  std::vector<std::string> violations;
  bool composition_is_equality = true;  // C(C(v,eps),tau) == C(v,eps+tau) on every sample
  bool ok() const { return violations.empty(); }
};

/// Checks expansion, monotonicity in v and in eps, and C(C(v,eps),tau) <= C(v,eps+tau) on the samples.
inline ContourAxiomReport verify_contour_axioms(const Contour& c, const std::vector<ContourSample>& samples) {
  ContourAxiomReport report;
  for (const auto& s : samples) {
    std::string where = " at v=" + to_string(s.v) + " eps=" + to_string(s.eps) + " tau=" + to_string(s.tau);
    ContourPoint v = s.v;
    ContourPoint ce = c(v, s.eps);
    ContourPoint ct = c(v, s.tau);
    ContourPoint sum = c(v, s.eps + s.tau);
    if (!leq(v, ce)) report.violations.push_back("expansion v <= C(v,eps) fails" + where);
    if (!leq(ce, sum)) report.violations.push_back("monotonicity in eps fails" + where);
    // v <= C(v,tau), so monotonicity in v requires C(v,eps) <= C(C(v,tau),eps)
    if (!leq(ce, c(ct, s.eps))) report.violations.push_back("monotonicity in v fails" + where);
    ContourPoint composed = c(ce, s.tau);
    if (!leq(composed, sum)) report.violations.push_back("C(C(v,eps),tau) <= C(v,eps+tau) fails" + where);
    if (composed != sum) report.composition_is_equality = false;
  }
  return report;
}

}  // namespace stablerank
