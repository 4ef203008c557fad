#pragma once

// The stabilized rank invariant tau -> min{ rank_0 F | d(G, F) <= tau } for the simple noise system
// of a contour: a closed form for one parameter, a finite search over generating sets in general,
// and the equivalent min-rank problem.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "stablerank/contour.hpp"
#include "stablerank/errors.hpp"
#include "stablerank/frame.hpp"
#include "stablerank/linalg.hpp"
#include "stablerank/noise.hpp"
#include "stablerank/stabilization.hpp"
#include "stablerank/tame.hpp"

namespace stablerank {

struct SearchOptions {
  std::uint64_t budget = kDefaultBudget;
  unsigned jobs = 1;
  std::uint64_t* explored = nullptr;  // optional: receives the number of candidates examined
};

struct StableRankFunction {
  StepFunction step;
  std::uint64_t operator()(const Rational& tau) const { return step(tau); }
};

// ---------------------------------------------------------------------------------------------
// One parameter

/// First tau at which a one-parameter bar [birth, death) (death = inf when absent) enters the noise.
inline Extended bar_exit_time(const Contour& c, const Rational& birth, const Extended& death) {
  require(c.parameters() == 1, "bar exit times need a one-parameter contour");
  ContourPoint target;
  if (death) target = RationalPoint{*death};
  return c.exit_time({birth}, target);
}

/// Number of bars, in a bar decomposition of G, that do not lie in the noise at tau.
inline StableRankFunction stable_rank_r1(const TameModule& g, const Contour& c) {
  require(g.parameters() == 1, "stable_rank_r1 needs r = 1");
  Barcode bars = tame_bar_decomposition(g);
  std::vector<Extended> exits;
  for (const auto& [b, d] : bars.finite_bars) exits.push_back(bar_exit_time(c, b, d));
  for (const auto& b : bars.infinite_bars) exits.push_back(bar_exit_time(c, b, std::nullopt));
  auto alive_at = [&](const Rational& tau) {
    std::uint64_t n = 0;
    for (const auto& e : exits)
      if (!e || *e > tau) ++n;
    return n;
  };
  std::set<Rational> breaks{Rational(0)};
  for (const auto& e : exits)
    if (e) breaks.insert(*e);
  std::vector<Rational> bp;
  std::vector<std::uint64_t> values;
  for (const auto& t : breaks) {
    bp.push_back(t);
    values.push_back(alive_at(t));
  }
  return {StepFunction(std::move(bp), std::move(values)).compressed()};
}

struct FingerprintRow {
  Rational tau;
  Rational u;
  std::uint64_t value;
};

/// rank_0 of the shift of G by tau for the standard contour in direction w truncated at u: the number
/// of bars with birth + tau * w < death and birth + tau * w < u.
inline std::vector<FingerprintRow> fingerprint_r1(const TameModule& g, const Rational& w,
                                                  const std::vector<std::pair<Rational, Rational>>& grid) {
  require(g.parameters() == 1, "fingerprint_r1 needs r = 1");
  require(w > 0, "fingerprint direction must be positive");
  Barcode bars = tame_bar_decomposition(g);
  std::vector<FingerprintRow> out;
  for (const auto& [tau, u] : grid) {
    require(tau >= 0, "fingerprint needs tau >= 0");
    std::uint64_t n = 0;
    for (const auto& [b, d] : bars.finite_bars)
      if (b + tau * w < d && b + tau * w < u) ++n;
    for (const auto& b : bars.infinite_bars)
      if (b + tau * w < u) ++n;
    out.push_back({tau, u, n});
  }
  return out;
}

/// All (tau, u) with tau in {0} and the bar lengths (in units of w), u in {birth + tau * w} plus one
/// point past every birth: the pieces on which the fingerprint is constant.
inline std::vector<std::pair<Rational, Rational>> fingerprint_critical_grid(const std::vector<Barcode>& barcodes,
                                                                            const Rational& w) {
  std::set<Rational> taus{Rational(0)}, births;
  for (const auto& bars : barcodes) {
    for (const auto& [b, d] : bars.finite_bars) {
      taus.insert((d - b) / w);
      births.insert(b);
    }
    for (const auto& b : bars.infinite_bars) births.insert(b);
  }
  Rational beyond = births.empty() ? Rational(1) : *births.rbegin() + 1;
  std::vector<std::pair<Rational, Rational>> grid;
  for (const auto& t : taus) {
    std::set<Rational> us{beyond + t * w};
    for (const auto& b : births) us.insert(b + t * w);
    for (const auto& u : us) grid.emplace_back(t, u);
  }
  return grid;
}

inline std::string fingerprint_csv(const std::vector<FingerprintRow>& rows) {
  std::ostringstream out;
  out << "tau,u,value\n";
  for (const auto& r : rows) out << to_string(r.tau) << "," << to_string(r.u) << "," << r.value << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------------------------
// Min-rank problems

/// Vectors x_s and subspaces L_s of GF(p)^n; the answer is min{ dim L | x_s in L + L_s for all s }.
struct MinRankInstance {
  std::size_t ambient_dim;
  PrimeField field;
  std::vector<Vector> targets;
  std::vector<Subspace> subspaces;

  void validate() const {
    require(targets.size() == subspaces.size(), "min-rank instance needs one subspace per target");
    for (const auto& x : targets) require(x.size() == ambient_dim, "min-rank target has the wrong length");
    for (const auto& l : subspaces) {
      require(l.ambient_dim() == ambient_dim, "min-rank subspace has the wrong ambient dimension");
      require(l.field() == field, "min-rank subspace over the wrong field");
    }
  }
};

namespace detail {
template <class Fn>
void run_jobs(unsigned jobs, Fn&& fn) {
  if (jobs <= 1) {
    fn(0u);
    return;
  }
  std::vector<std::jthread> workers;
  for (unsigned t = 0; t < jobs; ++t) workers.emplace_back([&fn, t] { fn(t); });
}
}  // namespace detail

/// Tries d = 0, 1, ... and returns the first d for which some d-dimensional L works.
inline std::size_t minrank_solve(const MinRankInstance& inst, const SearchOptions& options = {}) {
  inst.validate();
  const std::size_t n = inst.ambient_dim;
  std::vector<std::size_t> open;  // targets not already inside their L_s
  for (std::size_t s = 0; s < inst.targets.size(); ++s)
    if (!inst.subspaces[s].contains(inst.targets[s])) open.push_back(s);
  std::uint64_t used = 0;
  for (std::size_t d = 0; d <= n; ++d) {
    std::uint64_t count = gaussian_binomial(n, d, inst.field.modulus());
    if (used + count > options.budget || used + count < used)
      throw BudgetExceeded("min-rank search at dimension " + std::to_string(d) + " needs " +
                           std::to_string(used + count) + " subspaces, budget " + std::to_string(options.budget));
    used += count;
    std::atomic<bool> found{false};
    detail::run_jobs(options.jobs, [&](unsigned t) {
      std::uint64_t i = 0;
      for_each_subspace(n, d, inst.field, count, [&](const Subspace& l) {
        if (found.load(std::memory_order_relaxed)) return false;
        if (i++ % std::max(1u, options.jobs) != t) return true;
        for (std::size_t s : open)
          if (!(l + inst.subspaces[s]).contains(inst.targets[s])) return true;
        found = true;
        return false;
      });
    });
    if (options.explored) *options.explored = used;
    if (found) return d;
  }
  throw PreconditionError("min-rank search failed at full dimension");  // unreachable: L = K^n works
}

/// The min-rank input of G at a meeting point u with v_s <= u <= C(v_s, tau) for every minimal
/// generator: ambient G(u), targets G(v_s <= u)(g_s), L_s = Ker G(u <= C(v_s, tau)) or all of G(u).
/// Without u, the join of the generator coordinates is used.
inline MinRankInstance reduce_to_minrank(const TameModule& g, const Contour& c, const Rational& tau,
                                         const std::optional<RationalPoint>& meeting_point = std::nullopt) {
  require(c.parameters() == g.parameters(), "contour and module have different numbers of parameters");
  std::vector<Rational> grid_values = c.alignment_values(tau);
  if (meeting_point) grid_values.insert(grid_values.end(), meeting_point->begin(), meeting_point->end());
  TameModule aligned = align_to(g, grid_values);
  auto pushed = detail::push_generators(aligned, c, tau);
  GridPoint u_idx(g.parameters(), 0);
  if (meeting_point) {
    u_idx = aligned.aligned_index(*meeting_point);
  } else {
    for (const auto& p : pushed) u_idx = join(u_idx, p.generator.at);
  }
  RationalPoint u = aligned.position(u_idx);
  const std::size_t n = aligned.frame.dim(u_idx);
  MinRankInstance inst{n, aligned.field(), {}, {}};
  for (const auto& p : pushed) {
    RationalPoint v = aligned.position(p.generator.at);
    ContourPoint cv;
    if (p.target) cv = aligned.position(*p.target);
    require(leq(v, u) && leq(ContourPoint(u), cv),
            "meeting point " + to_string(u) + " violates v_s <= u <= C(v_s,tau) for generator at " + to_string(v));
    inst.targets.push_back(aligned.frame.map(p.generator.at, u_idx).apply(p.generator.vector));
    inst.subspaces.push_back(p.target ? kernel(aligned.frame.map(u_idx, *p.target)) : Subspace::full(n, inst.field));
  }
  return inst;
}

// ---------------------------------------------------------------------------------------------
// General parameter count: search over generating sets

namespace detail {

struct Candidate {
  std::vector<std::optional<Vector>> images;  // per target: image at C(v_s, tau), if reached and nonzero
};

// b can replace a in any generating set: wherever a has a nonzero image, b has a nonzero multiple of it.
inline bool dominated_by(const Candidate& a, const Candidate& b, const PrimeField& f) {
  std::optional<std::uint32_t> ratio;  // b = ratio * a on the support of a
  for (std::size_t s = 0; s < a.images.size(); ++s) {
    if (!a.images[s]) continue;
    if (!b.images[s]) return false;
    const Vector& x = *a.images[s];
    const Vector& y = *b.images[s];
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) {
        if (y[i] != 0) return false;
        continue;
      }
      std::uint32_t r = f.mul(y[i], f.inv(x[i]));
      if (!ratio) ratio = r;
      if (*ratio != r || r == 0) return false;
    }
  }
  return true;
}

inline std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace detail

/// min rank_0 F over subfunctors G[tau] <= F <= G, found by trying generating sets of size
/// k = 0, 1, ... and accepting the first k whose generated subfunctor contains G[tau].
///
/// An element (w, x) only matters through its images at the shifted generator coordinates c_s with
/// w <= c_s; it is therefore replaced by its image at the meet of those c_s, and candidates whose
/// images are multiples of another candidate's on a smaller support are dropped.
inline std::size_t stable_rank_bruteforce(const TameModule& g, const Contour& c, const Rational& tau,
                                          const SearchOptions& options = {}) {
  require(c.parameters() == g.parameters(), "contour and module have different numbers of parameters");
  require(tau >= 0, "stable rank needs tau >= 0");
  TameModule aligned = align_to(g, c.alignment_values(tau));
  auto pushed = detail::push_generators(aligned, c, tau);
  TameModule ambient = detail::with_box_covering(aligned, pushed);
  const Frame& f = ambient.frame;
  const PrimeField& field = f.field();

  struct Target {
    GridPoint at;
    Vector h;
  };
  std::vector<Target> targets;
  for (const auto& p : pushed) {
    if (!p.target) continue;
    Vector h = f.map(p.generator.at, *p.target).apply(p.generator.vector);
    if (std::any_of(h.begin(), h.end(), [](std::uint32_t x) { return x != 0; })) targets.push_back({*p.target, h});
  }
  if (options.explored) *options.explored = 0;
  if (targets.empty()) return 0;

  std::set<GridPoint> meets;
  for (const auto& t : targets) {
    std::set<GridPoint> next = meets;
    next.insert(t.at);
    for (const auto& m : meets) next.insert(meet(m, t.at));
    meets = std::move(next);
  }

  std::uint64_t budget_used = 0;
  std::vector<detail::Candidate> candidates;
  for (const auto& w : meets) {
    std::size_t d = f.dim(w);
    if (d == 0) continue;
    std::vector<std::optional<Matrix>> to_target;
    for (const auto& t : targets)
      to_target.push_back(leq(w, t.at) ? std::optional<Matrix>(f.map(w, t.at)) : std::nullopt);
    auto points = projective_points(d, field.modulus());
    budget_used += points.size();
    if (budget_used > options.budget)
      throw BudgetExceeded("generating-set search: more than " + std::to_string(options.budget) + " candidate elements");
    for (const auto& x : points) {
      detail::Candidate cand;
      bool useful = false;
      for (std::size_t s = 0; s < targets.size(); ++s) {
        std::optional<Vector> img;
        if (to_target[s]) {
          Vector y = to_target[s]->apply(x);
          if (std::any_of(y.begin(), y.end(), [](std::uint32_t v) { return v != 0; })) {
            img = std::move(y);
            useful = true;
          }
        }
        cand.images.push_back(std::move(img));
      }
      if (useful) candidates.push_back(std::move(cand));
    }
  }

  // Keep one representative per dominance class (earliest wins among mutual dominance).
  std::vector<detail::Candidate> reduced;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bool drop = false;
    for (std::size_t j = 0; j < candidates.size() && !drop; ++j) {
      if (i == j || !detail::dominated_by(candidates[i], candidates[j], field)) continue;
      drop = !detail::dominated_by(candidates[j], candidates[i], field) || j < i;
    }
    if (!drop) reduced.push_back(candidates[i]);
  }

  const std::size_t m = reduced.size();
  auto contains_shift = [&](const std::vector<std::size_t>& chosen) {
    for (std::size_t s = 0; s < targets.size(); ++s) {
      std::vector<Vector> span;
      for (auto i : chosen)
        if (reduced[i].images[s]) span.push_back(*reduced[i].images[s]);
      if (span.empty()) return false;
      if (!Subspace::span(span, targets[s].h.size(), field).contains(targets[s].h)) return false;
    }
    return true;
  };

  for (std::size_t k = 1; k <= std::min(m, targets.size()); ++k) {
    std::uint64_t combos = detail::binomial_saturating(m, k);
    if (budget_used + combos > options.budget || budget_used + combos < budget_used)
      throw BudgetExceeded("generating-set search: " + std::to_string(combos) + " sets of size " + std::to_string(k) +
                           " exceed the remaining budget (" + std::to_string(options.budget - budget_used) + ")");
    budget_used += combos;
    std::atomic<bool> found{false};
    detail::run_jobs(options.jobs, [&](unsigned t) {
      std::vector<std::size_t> chosen(k);
      for (std::size_t i = 0; i < k; ++i) chosen[i] = i;
      while (!found.load(std::memory_order_relaxed)) {
        if (chosen[0] % std::max(1u, options.jobs) == t && contains_shift(chosen)) {
          found = true;
          return;
        }
        std::size_t i = k;
        while (i > 0 && chosen[i - 1] == m - k + (i - 1)) --i;
        if (i == 0) return;
        ++chosen[i - 1];
        for (std::size_t j = i; j < k; ++j) chosen[j] = chosen[j - 1] + 1;
      }
    });
    if (options.explored) *options.explored = budget_used;
    if (found) return k;
  }
  throw PreconditionError("generating-set search found no generating set containing the shift");  // unreachable
}

/// Samples tau -> stable rank at the given taus (r >= 2) and stabilizes the samples into a step function.
inline StableRankFunction stable_rank_sweep(const TameModule& g, const Contour& c, std::vector<Rational> taus,
                                            const SearchOptions& options = {}) {
  taus.push_back(0);
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
  std::vector<StabilizationCandidate> samples;
  for (const auto& t : taus) samples.push_back({stable_rank_bruteforce(g, c, t, options), t});
  return {stabilize(std::move(samples))};
}

}  // namespace stablerank
