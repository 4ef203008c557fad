#pragma once

// Graphs -> min-rank inputs -> band functors: the gadget that turns min-rank into a stable-rank question.

#include <chrono>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stablerank/contour.hpp"
#include "stablerank/errors.hpp"
#include "stablerank/frame.hpp"
#include "stablerank/linalg.hpp"
#include "stablerank/stable_rank.hpp"
#include "stablerank/tame.hpp"

namespace stablerank {

/// Simple undirected graph. Vertices are 0-based here; the text format is 1-based.
class Graph {
 public:
  explicit Graph(std::size_t n = 0) : n_(n) {}

  std::size_t vertex_count() const { return n_; }
  const std::set<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }

  void add_edge(std::size_t s, std::size_t t) {
    require(s < n_ && t < n_, "edge endpoint out of range");
    require(s != t, "graphs have no self-loops");
    auto e = std::minmax(s, t);
    require(edges_.insert({e.first, e.second}).second,
            "duplicate edge {" + std::to_string(s + 1) + "," + std::to_string(t + 1) + "}");
  }
  bool adjacent(std::size_t s, std::size_t t) const {
    auto e = std::minmax(s, t);
    return edges_.count({e.first, e.second}) > 0;
  }
  bool operator==(const Graph&) const = default;

  static Graph complete(std::size_t n) {
    Graph g(n);
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = s + 1; t < n; ++t) g.add_edge(s, t);
    return g;
  }
  static Graph cycle(std::size_t n) {
    Graph g(n);
    for (std::size_t s = 0; s < n && n > 2; ++s) g.add_edge(s, (s + 1) % n);
    if (n == 2) g.add_edge(0, 1);
    return g;
  }
  static Graph path(std::size_t n) {
    Graph g(n);
    for (std::size_t s = 0; s + 1 < n; ++s) g.add_edge(s, s + 1);
    return g;
  }

 private:
  std::size_t n_;
  std::set<std::pair<std::size_t, std::size_t>> edges_;
};

/// Targets e_s; L_s = { y | y_t = 0 when t = s or {s,t} is an edge }.
inline MinRankInstance graph_to_minrank(const Graph& x, PrimeField field) {
  const std::size_t n = x.vertex_count();
  MinRankInstance inst{n, field, {}, {}};
  for (std::size_t s = 0; s < n; ++s) {
    Vector e(n, 0);
    e[s] = 1;
    inst.targets.push_back(e);
    std::vector<Vector> free;
    for (std::size_t t = 0; t < n; ++t) {
      if (t == s || x.adjacent(s, t)) continue;
      Vector f(n, 0);
      f[t] = 1;
      free.push_back(f);
    }
    inst.subspaces.push_back(Subspace::span(free, n, field));
  }
  return inst;
}

/// M_st = 1 iff s and t share a colour. Requires a proper colouring.
inline Matrix chromatic_witness(const Graph& x, const std::vector<std::size_t>& coloring, PrimeField field) {
  const std::size_t n = x.vertex_count();
  require(coloring.size() == n, "colouring must assign a colour to every vertex");
  for (const auto& [s, t] : x.edges())
    require(coloring[s] != coloring[t], "improper colouring: vertices " + std::to_string(s + 1) + " and " +
                                            std::to_string(t + 1) + " are adjacent and share a colour");
  Matrix m(n, n, field);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t)
      if (coloring[s] == coloring[t]) m.set(s, t, 1);
  return m;
}

struct BandSpec {
  std::size_t n;
  std::vector<Subspace> subspaces;  // L_0 .. L_n in K^{n+1}

  void validate() const {
    require(subspaces.size() == n + 1, "band functor needs n + 1 subspaces");
    for (const auto& l : subspaces) require(l.ambient_dim() == n + 1, "band subspaces live in K^{n+1}");
  }
};

namespace detail {

// Generators of P = (+)_s K((n-s,s),-) alive at (a,b).
inline std::vector<std::size_t> band_slots(std::size_t n, int a, int b) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s <= n; ++s)
    if (static_cast<int>(n - s) <= a && static_cast<int>(s) <= b) out.push_back(s);
  return out;
}

}  // namespace detail

/// B(L_0..L_n): P(a,b) below the anti-diagonal a + b = 3n (inside [0,2n]^2), K^{n+1}/L_{b-n} on it,
/// zero elsewhere; structure maps are induced by P.
inline TameModule band_functor(const BandSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n;
  const PrimeField field = spec.subspaces.front().field();
  const int top = static_cast<int>(2 * n), diag = static_cast<int>(3 * n);
  Frame f({top + 1, top + 1}, field);

  enum class Kind { zero, free, quotient };
  auto kind = [&](int a, int b) {
    if (a > top || b > top || a + b > diag) return Kind::zero;
    return a + b < diag ? Kind::free : Kind::quotient;
  };
  // Matrix from K^{n+1} onto the chosen coordinates of B(a,b).
  auto projection = [&](int a, int b) {
    switch (kind(a, b)) {
      case Kind::zero:
        return Matrix(0, n + 1, field);
      case Kind::quotient:
        return spec.subspaces[static_cast<std::size_t>(b) - n].quotient_projection();
      case Kind::free:
        break;
    }
    auto slots = detail::band_slots(n, a, b);
    Matrix m(slots.size(), n + 1, field);
    for (std::size_t i = 0; i < slots.size(); ++i) m.set(i, slots[i], 1);
    return m;
  };
  // Inclusion of B(a,b) into K^{n+1}; only needed where B(a,b) is a P-value.
  auto inclusion = [&](int a, int b) { return projection(a, b).transpose(); };

  for (int a = 0; a <= top + 1; ++a)
    for (int b = 0; b <= top + 1; ++b) f.set_dim({a, b}, projection(a, b).rows());
  for (int a = 0; a <= top + 1; ++a)
    for (int b = 0; b <= top + 1; ++b) {
      if (kind(a, b) != Kind::free) continue;  // quotient and zero values map to zero
      if (a <= top) f.set_step(0, {a, b}, projection(a + 1, b) * inclusion(a, b));
      if (b <= top) f.set_step(1, {a, b}, projection(a, b + 1) * inclusion(a, b));
    }
  return TameModule(std::move(f));
}

/// The band input for a graph on n vertices: band parameter n - 1, subspaces from graph_to_minrank.
inline BandSpec band_spec_from_graph(const Graph& x, PrimeField field) {
  require(x.vertex_count() > 0, "graph needs at least one vertex");
  return BandSpec{x.vertex_count() - 1, graph_to_minrank(x, field).subspaces};
}

struct PipelineResult {
  std::optional<std::size_t> stable_rank;  // none when the budget ran out
  std::optional<std::size_t> minrank;
  double ms_bruteforce = 0;
  double ms_minrank = 0;
  bool budget_hit() const { return !stable_rank || !minrank; }
  bool agree() const { return stable_rank && minrank && *stable_rank == *minrank; }
};

/// Band functor of X, stable rank at tau = n - 1 for the diagonal standard contour, and min-rank of the
/// induced input at u = (n-1, n-1), timed separately. BudgetExceeded and disagreement are recorded,
/// not thrown.
inline PipelineResult hardness_pipeline(const Graph& x, PrimeField field, const SearchOptions& options = {}) {
  BandSpec spec = band_spec_from_graph(x, field);
  TameModule b = band_functor(spec);
  Contour c = Contour::standard({Rational(1), Rational(1)});
  Rational tau(static_cast<std::int64_t>(spec.n));
  using clock = std::chrono::steady_clock;
  auto ms_since = [](clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  };
  PipelineResult out;
  auto t0 = clock::now();
  try {
    out.stable_rank = stable_rank_bruteforce(b, c, tau, options);
  } catch (const BudgetExceeded&) {
  }
  out.ms_bruteforce = ms_since(t0);
  t0 = clock::now();
  try {
    out.minrank = minrank_solve(reduce_to_minrank(b, c, tau, RationalPoint{tau, tau}), options);
  } catch (const BudgetExceeded&) {
  }
  out.ms_minrank = ms_since(t0);
  return out;
}

}  // namespace stablerank
