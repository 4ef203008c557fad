#pragma once

// Frames: functors N^r -> Vect_K stored on the grid 0..box (inclusive on every axis), constant
// with identity structure maps past the box.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stablerank/errors.hpp"
#include "stablerank/linalg.hpp"
#include "stablerank/rational.hpp"

namespace stablerank {

/// An element of N^r (negative coordinates only appear transiently, e.g. v - e_S).
using GridPoint = std::vector<int>;

inline bool leq(const GridPoint& a, const GridPoint& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline GridPoint join(const GridPoint& a, const GridPoint& b) {
  GridPoint out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
  return out;
}

inline GridPoint meet(const GridPoint& a, const GridPoint& b) {
  GridPoint out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::min(a[i], b[i]);
  return out;
}

inline std::string to_string(const GridPoint& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out + ")";
}

/// An element g of F(v).
struct Element {
  GridPoint at;
  Vector vector;
  bool operator==(const Element&) const = default;
};

class Frame {
 public:
  Frame(GridPoint box, PrimeField field) : box_(std::move(box)), field_(field) {
    require(!box_.empty(), "frames need at least one parameter");
    for (int b : box_) require(b >= 0, "box coordinates must be non-negative");
    strides_.assign(box_.size(), 1);
    for (std::size_t i = box_.size() - 1; i > 0; --i) strides_[i - 1] = strides_[i] * (box_[i] + 1);
    dims_.assign(strides_[0] * (box_[0] + 1), 0);
    steps_.assign(box_.size(), std::vector<Matrix>(dims_.size(), Matrix(0, 0, field_)));
  }

  std::size_t parameters() const { return box_.size(); }
  const GridPoint& box() const { return box_; }
  const PrimeField& field() const { return field_; }
  std::size_t point_count() const { return dims_.size(); }

  std::size_t index(const GridPoint& v) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < box_.size(); ++i) idx += static_cast<std::size_t>(v[i]) * strides_[i];
    return idx;
  }
  GridPoint point(std::size_t idx) const {
    GridPoint v(box_.size());
    for (std::size_t i = 0; i < box_.size(); ++i) {
      v[i] = static_cast<int>(idx / strides_[i]);
      idx %= strides_[i];
    }
    return v;
  }
  bool in_box(const GridPoint& v) const {
    for (std::size_t i = 0; i < box_.size(); ++i)
      if (v[i] < 0 || v[i] > box_[i]) return false;
    return true;
  }
  GridPoint clamp(const GridPoint& v) const {
    GridPoint c(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) c[i] = std::clamp(v[i], 0, box_[i]);
    return c;
  }

  /// dim F(v) for any v in N^r.
  std::size_t dim(const GridPoint& v) const {
    for (int x : v) require(x >= 0, "frame evaluated at a negative coordinate");
    return dims_[index(clamp(v))];
  }
  std::size_t dim_at(std::size_t idx) const { return dims_[idx]; }

  /// F(v <= v + e_axis) for v in the box with v[axis] < box[axis].
  const Matrix& step(std::size_t axis, const GridPoint& v) const { return steps_[axis][index(v)]; }
  const Matrix& step_at(std::size_t axis, std::size_t idx) const { return steps_[axis][idx]; }

  /// F(v <= w) for any v <= w in N^r.
  Matrix map(const GridPoint& v, const GridPoint& w) const {
    require(leq(v, w), "structure map requested for v not <= w");
    GridPoint cur = clamp(v);
    GridPoint target = clamp(w);
    Matrix m = Matrix::identity(dims_[index(cur)], field_);
    for (std::size_t axis = 0; axis < box_.size(); ++axis) {
      while (cur[axis] < target[axis]) {
        m = steps_[axis][index(cur)] * m;
        ++cur[axis];
      }
    }
    return m;
  }

  /// Sets dim F(v) and resets every structure map touching v to zero.
  void set_dim(const GridPoint& v, std::size_t d) {
    require(in_box(v), "set_dim outside the box");
    dims_[index(v)] = d;
    for (std::size_t axis = 0; axis < box_.size(); ++axis) {
      if (v[axis] < box_[axis]) {
        GridPoint next = v;
        ++next[axis];
        steps_[axis][index(v)] = Matrix(dims_[index(next)], d, field_);
      }
      if (v[axis] > 0) {
        GridPoint prev = v;
        --prev[axis];
        steps_[axis][index(prev)] = Matrix(d, dims_[index(prev)], field_);
      }
    }
  }

  void set_step(std::size_t axis, const GridPoint& v, Matrix m) {
    require(in_box(v) && v[axis] < box_[axis], "set_step outside the box");
    GridPoint next = v;
    ++next[axis];
    require(m.rows() == dims_[index(next)] && m.cols() == dims_[index(v)],
            "structure map at " + to_string(v) + " along axis " + std::to_string(axis + 1) + " has wrong shape");
    require(m.field() == field_, "structure map over the wrong field");
    steps_[axis][index(v)] = std::move(m);
  }

  /// Checks shapes and that every square of structure maps inside the box commutes.
  void validate() const {
    for (std::size_t idx = 0; idx < dims_.size(); ++idx) {
      GridPoint v = point(idx);
      for (std::size_t a = 0; a < box_.size(); ++a) {
        if (v[a] >= box_[a]) continue;
        GridPoint va = v;
        ++va[a];
        const Matrix& ma = steps_[a][idx];
        require(ma.rows() == dims_[index(va)] && ma.cols() == dims_[idx], "structure map has wrong shape");
        for (std::size_t b = a + 1; b < box_.size(); ++b) {
          if (v[b] >= box_[b]) continue;
          GridPoint vb = v;
          ++vb[b];
          if (!(step(b, va) * ma == step(a, vb) * steps_[b][idx]))
            throw PreconditionError("structure maps do not commute at " + to_string(v) + " for axes " +
                                    std::to_string(a + 1) + "," + std::to_string(b + 1));
        }
      }
    }
  }

  /// The same functor on a larger box (values past the old box are copies with identity maps).
  Frame with_box(const GridPoint& new_box) const {
    require(leq(box_, new_box), "with_box can only enlarge the box");
    Frame out(new_box, field_);
    for (std::size_t idx = 0; idx < out.dims_.size(); ++idx) out.dims_[idx] = dim(out.point(idx));
    for (std::size_t a = 0; a < box_.size(); ++a)
      for (std::size_t idx = 0; idx < out.dims_.size(); ++idx) {
        GridPoint v = out.point(idx);
        if (v[a] >= new_box[a]) continue;
        GridPoint next = v;
        ++next[a];
        out.steps_[a][idx] = map(v, next);
      }
    return out;
  }

  /// The frame of the same tame functor at resolution alpha / k: F'(i) = F(floor(i / k)).
  Frame refined(int k) const {
    require(k >= 1, "refinement factor must be positive");
    GridPoint new_box = box_;
    for (auto& b : new_box) b *= k;
    Frame out(new_box, field_);
    auto coarse = [&](const GridPoint& v) {
      GridPoint c = v;
      for (auto& x : c) x /= k;
      return c;
    };
    for (std::size_t idx = 0; idx < out.dims_.size(); ++idx) out.dims_[idx] = dim(coarse(out.point(idx)));
    for (std::size_t a = 0; a < box_.size(); ++a)
      for (std::size_t idx = 0; idx < out.dims_.size(); ++idx) {
        GridPoint v = out.point(idx);
        if (v[a] >= new_box[a]) continue;
        GridPoint next = v;
        ++next[a];
        out.steps_[a][idx] = map(coarse(v), coarse(next));
      }
    return out;
  }

  bool is_zero() const {
    return std::all_of(dims_.begin(), dims_.end(), [](std::size_t d) { return d == 0; });
  }

  /// Same box, dims and structure maps.
  bool operator==(const Frame& o) const {
    return box_ == o.box_ && field_ == o.field_ && dims_ == o.dims_ && steps_ == o.steps_;
  }

 private:
  GridPoint box_;
  PrimeField field_;
  std::vector<std::size_t> strides_;
  std::vector<std::size_t> dims_;
  std::vector<std::vector<Matrix>> steps_;  // [axis][point index]
};

/// Same dims at every point of N^r (boxes may differ).
inline bool same_dims(const Frame& f, const Frame& g) {
  GridPoint box = join(f.box(), g.box());
  Frame probe(box, f.field());
  for (std::size_t idx = 0; idx < probe.point_count(); ++idx) {
    GridPoint v = probe.point(idx);
    if (f.dim(v) != g.dim(v)) return false;
  }
  return true;
}

/// The direct sum of K(v_i, -)^{m_i}. Generator slots are ordered as listed.
inline Frame free_module(const GridPoint& box, PrimeField field,
                         const std::vector<std::pair<GridPoint, std::size_t>>& generators) {
  Frame f(box, field);
  for (const auto& [v, m] : generators) {
    require(v.size() == box.size(), "generator has the wrong number of coordinates");
    require(f.in_box(v), "generator " + to_string(v) + " lies outside the box");
  }
  // slots alive at w, in generator order
  auto slots = [&](const GridPoint& w) {
    std::vector<std::size_t> out;
    std::size_t slot = 0;
    for (const auto& [v, m] : generators)
      for (std::size_t j = 0; j < m; ++j, ++slot)
        if (leq(v, w)) out.push_back(slot);
    return out;
  };
  for (std::size_t idx = 0; idx < f.point_count(); ++idx) f.set_dim(f.point(idx), slots(f.point(idx)).size());
  for (std::size_t idx = 0; idx < f.point_count(); ++idx) {
    GridPoint v = f.point(idx);
    auto from = slots(v);
    for (std::size_t a = 0; a < box.size(); ++a) {
      if (v[a] >= box[a]) continue;
      GridPoint next = v;
      ++next[a];
      auto to = slots(next);
      Matrix m(to.size(), from.size(), field);
      for (std::size_t j = 0; j < from.size(); ++j)
        m.set(static_cast<std::size_t>(std::find(to.begin(), to.end(), from[j]) - to.begin()), j, 1);
      f.set_step(a, v, std::move(m));
    }
  }
  return f;
}

namespace detail {
inline Frame indicator_frame(const GridPoint& box, PrimeField field, const std::function<bool(const GridPoint&)>& in) {
  Frame f(box, field);
  for (std::size_t idx = 0; idx < f.point_count(); ++idx) f.set_dim(f.point(idx), in(f.point(idx)) ? 1 : 0);
  for (std::size_t idx = 0; idx < f.point_count(); ++idx) {
    GridPoint v = f.point(idx);
    for (std::size_t a = 0; a < box.size(); ++a) {
      if (v[a] >= box[a]) continue;
      GridPoint next = v;
      ++next[a];
      if (in(v) && in(next)) f.set_step(a, v, Matrix::identity(1, field));
    }
  }
  return f;
}
}  // namespace detail

/// The bar [a, b): K on { v | a <= v, b not <= v }, zero elsewhere.
inline Frame bar_module(const GridPoint& a, const GridPoint& b, PrimeField field) {
  require(a.size() == b.size(), "bar endpoints have different numbers of coordinates");
  require(leq(a, b) && a != b, "bar [a,b) needs a <= b and a != b");
  return detail::indicator_frame(b, field, [&](const GridPoint& v) { return leq(a, v) && !leq(b, v); });
}

/// The infinite bar K(a, -) (free on one generator).
inline Frame free_bar(const GridPoint& a, PrimeField field) { return free_module(a, field, {{a, 1}}); }

/// The simple functor U_w: K at w and zero elsewhere.
inline Frame simple_module(const GridPoint& w, PrimeField field) {
  GridPoint box = w;
  for (auto& x : box) ++x;
  return detail::indicator_frame(box, field, [&](const GridPoint& v) { return v == w; });
}

inline Frame zero_frame(std::size_t r, PrimeField field) { return Frame(GridPoint(r, 0), field); }

namespace detail {
inline Matrix block_diagonal(const Matrix& a, const Matrix& b) {
  Matrix m(a.rows() + b.rows(), a.cols() + b.cols(), a.field());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m.set(i, j, a(i, j));
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m.set(a.rows() + i, a.cols() + j, b(i, j));
  return m;
}
}  // namespace detail

inline Frame direct_sum(const Frame& f, const Frame& g) {
  require(f.parameters() == g.parameters(), "direct sum of frames with different numbers of parameters");
  require(f.field() == g.field(), "direct sum of frames over different fields");
  GridPoint box = join(f.box(), g.box());
  Frame out(box, f.field());
  for (std::size_t idx = 0; idx < out.point_count(); ++idx) {
    GridPoint v = out.point(idx);
    out.set_dim(v, f.dim(v) + g.dim(v));
  }
  for (std::size_t idx = 0; idx < out.point_count(); ++idx) {
    GridPoint v = out.point(idx);
    for (std::size_t a = 0; a < box.size(); ++a) {
      if (v[a] >= box[a]) continue;
      GridPoint next = v;
      ++next[a];
      out.set_step(a, v, detail::block_diagonal(f.map(v, next), g.map(v, next)));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Koszul complexes, Betti diagrams, Euler characteristic

/// Delta F(v): terms indexed by subsets S of {0..r-1} with |S| = i in lexicographic order.
struct KoszulComplex {
  GridPoint v;
  std::vector<std::vector<std::vector<std::size_t>>> subsets;  // [degree][k] -> sorted axes
  std::vector<std::vector<std::size_t>> block_dims;             // [degree][k] -> dim F(v - e_S)
  std::vector<std::size_t> term_dims;                           // [degree]
  std::vector<Matrix> differentials;                            // [degree] : term i -> term i-1, degree 0 unused

  std::size_t max_degree() const { return term_dims.size() - 1; }

  /// dim H_i = dim C_i - rank d_i - rank d_{i+1}.
  std::size_t homology_dim(std::size_t i) const {
    if (i > max_degree()) return 0;
    std::size_t out = term_dims[i];
    if (i > 0) out -= rank(differentials[i]);
    if (i < max_degree()) out -= rank(differentials[i + 1]);
    return out;
  }
};

namespace detail {
inline std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t r, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> s(k);
  for (std::size_t i = 0; i < k; ++i) s[i] = i;
  while (true) {
    out.push_back(s);
    std::size_t i = k;
    while (i > 0 && s[i - 1] == r - k + (i - 1)) --i;
    if (i == 0) break;
    ++s[i - 1];
    for (std::size_t j = i; j < k; ++j) s[j] = s[j - 1] + 1;
  }
  return out;
}
}  // namespace detail

inline KoszulComplex koszul_at(const Frame& f, const GridPoint& v) {
  const std::size_t r = f.parameters();
  require(v.size() == r, "koszul_at: point has the wrong number of coordinates");
  KoszulComplex kc;
  kc.v = v;
  auto shifted = [&](const std::vector<std::size_t>& s) {
    GridPoint u = v;
    for (auto a : s) --u[a];
    return u;
  };
  auto valid = [](const GridPoint& u) { return std::all_of(u.begin(), u.end(), [](int x) { return x >= 0; }); };
  for (std::size_t i = 0; i <= r; ++i) {
    kc.subsets.push_back(detail::subsets_of_size(r, i));
    std::vector<std::size_t> dims;
    std::size_t total = 0;
    for (const auto& s : kc.subsets.back()) {
      GridPoint u = shifted(s);
      dims.push_back(valid(u) ? f.dim(u) : 0);
      total += dims.back();
    }
    kc.block_dims.push_back(std::move(dims));
    kc.term_dims.push_back(total);
  }
  kc.differentials.push_back(Matrix(0, kc.term_dims[0], f.field()));
  const PrimeField& field = f.field();
  for (std::size_t i = 1; i <= r; ++i) {
    Matrix d(kc.term_dims[i - 1], kc.term_dims[i], field);
    std::size_t col = 0;
    for (std::size_t si = 0; si < kc.subsets[i].size(); ++si) {
      const auto& s = kc.subsets[i][si];
      std::size_t s_dim = kc.block_dims[i][si];
      if (s_dim == 0) continue;
      GridPoint from = shifted(s);
      std::size_t row = 0;
      for (std::size_t ti = 0; ti < kc.subsets[i - 1].size(); ++ti) {
        const auto& t = kc.subsets[i - 1][ti];
        std::size_t t_dim = kc.block_dims[i - 1][ti];
        if (t_dim > 0 && std::includes(s.begin(), s.end(), t.begin(), t.end())) {
          // the removed axis and its 1-based order in S
          std::size_t order = 0;
          for (std::size_t k = 0; k < s.size(); ++k)
            if (!std::binary_search(t.begin(), t.end(), s[k])) order = k + 1;
          Matrix block = f.map(from, shifted(t));
          if (order % 2 == 1) block = block.scaled(field.neg(1));
          for (std::size_t a = 0; a < block.rows(); ++a)
            for (std::size_t b = 0; b < block.cols(); ++b) d.set(row + a, col + b, block(a, b));
        }
        row += t_dim;
      }
      col += s_dim;
    }
    kc.differentials.push_back(std::move(d));
  }
  return kc;
}

/// beta_n F: v -> dim H_n(Delta F(v)), nonzero entries only.
struct BettiDiagram {
  std::size_t degree = 0;
  std::map<GridPoint, std::size_t> entries;

  std::size_t rank() const {
    std::size_t total = 0;
    for (const auto& [v, k] : entries) total += k;
    return total;
  }
  bool operator==(const BettiDiagram&) const = default;
};

namespace detail {
inline void for_each_point_upto(const GridPoint& upper, const std::function<void(const GridPoint&)>& fn) {
  GridPoint v(upper.size(), 0);
  while (true) {
    fn(v);
    std::size_t k = v.size();
    while (k > 0) {
      --k;
      if (++v[k] <= upper[k]) break;
      v[k] = 0;
      if (k == 0) return;
    }
  }
}
}  // namespace detail

/// Scans v <= box + (1,...,1).
inline BettiDiagram betti_diagram(const Frame& f, std::size_t n) {
  BettiDiagram out;
  out.degree = n;
  if (n > f.parameters()) return out;
  GridPoint upper = f.box();
  for (auto& x : upper) ++x;
  detail::for_each_point_upto(upper, [&](const GridPoint& v) {
    std::size_t h = koszul_at(f, v).homology_dim(n);
    if (h > 0) out.entries[v] = h;
  });
  return out;
}

inline std::size_t betti_rank(const Frame& f, std::size_t n) { return betti_diagram(f, n).rank(); }

inline std::int64_t euler_characteristic(const Frame& f) {
  std::int64_t chi = 0;
  for (std::size_t n = 0; n <= f.parameters(); ++n) {
    auto rk = static_cast<std::int64_t>(betti_rank(f, n));
    chi += (n % 2 == 0) ? rk : -rk;
  }
  return chi;
}

/// Generators whose classes form a basis of H_0(Delta F(v)) at each v; coset representatives are the
/// standard vectors on the non-pivot coordinates of the image of delta_1.
inline std::vector<Element> minimal_generators(const Frame& f) {
  std::vector<Element> out;
  for (std::size_t idx = 0; idx < f.point_count(); ++idx) {
    GridPoint v = f.point(idx);
    std::size_t d = f.dim_at(idx);
    if (d == 0) continue;
    std::vector<Vector> incoming;
    for (std::size_t a = 0; a < f.parameters(); ++a) {
      if (v[a] == 0) continue;
      GridPoint prev = v;
      --prev[a];
      const Matrix& m = f.step(a, prev);
      for (std::size_t j = 0; j < m.cols(); ++j) incoming.push_back(m.column(j));
    }
    Subspace im = Subspace::span(incoming, d, f.field());
    for (std::size_t c : im.free_coordinates()) {
      Vector e(d, 0);
      e[c] = 1;
      out.push_back({v, std::move(e)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Subframes and quotients

/// A subfunctor S of a frame F: the subspace S(v) of F(v) at every grid point, and S as a frame in
/// the RREF bases of those subspaces.
struct Subframe {
  Frame frame;
  std::vector<Subspace> spaces;  // indexed by point index of the ambient box

  /// Columns: the basis of S(v) inside F(v).
  Matrix inclusion(std::size_t idx) const {
    const Subspace& s = spaces[idx];
    return s.basis().transpose();
  }

  const Subspace& at(const GridPoint& v) const { return spaces[frame.index(frame.clamp(v))]; }

  bool contains(const Subframe& other) const {
    GridPoint box = join(frame.box(), other.frame.box());
    bool ok = true;
    detail::for_each_point_upto(box, [&](const GridPoint& v) {
      if (ok && !at(v).contains(other.at(v))) ok = false;
    });
    return ok;
  }
};

namespace detail {
inline Frame frame_of_subspaces(const Frame& f, const std::vector<Subspace>& spaces) {
  Frame out(f.box(), f.field());
  for (std::size_t idx = 0; idx < f.point_count(); ++idx) out.set_dim(f.point(idx), spaces[idx].dim());
  for (std::size_t idx = 0; idx < f.point_count(); ++idx) {
    GridPoint v = f.point(idx);
    for (std::size_t a = 0; a < f.parameters(); ++a) {
      if (v[a] >= f.box()[a]) continue;
      GridPoint next = v;
      ++next[a];
      const Subspace& src = spaces[idx];
      const Subspace& dst = spaces[f.index(next)];
      Matrix m(dst.dim(), src.dim(), f.field());
      for (std::size_t j = 0; j < src.dim(); ++j) {
        Vector image = f.step(a, v).apply(src.basis_vector(j));
        Vector c = dst.coordinates(image);
        for (std::size_t i = 0; i < c.size(); ++i) m.set(i, j, c[i]);
      }
      out.set_step(a, v, std::move(m));
    }
  }
  return out;
}
}  // namespace detail

/// The subfunctor generated by the given elements: at w, the span of F(v_s <= w)(g_s) over v_s <= w.
inline Subframe submodule_generated(const Frame& f, const std::vector<Element>& elements) {
  std::vector<std::vector<Vector>> seeds(f.point_count());
  for (const auto& e : elements) {
    require(e.at.size() == f.parameters() && f.in_box(e.at),
            "generating element at " + to_string(e.at) + " lies outside the box");
    require(e.vector.size() == f.dim(e.at), "generating element at " + to_string(e.at) + " has the wrong length");
    seeds[f.index(e.at)].push_back(e.vector);
  }
  std::vector<Subspace> spaces;
  spaces.reserve(f.point_count());
  // lexicographic order visits every predecessor v - e_a before v
  for (std::size_t idx = 0; idx < f.point_count(); ++idx) {
    GridPoint v = f.point(idx);
    std::vector<Vector> span = seeds[idx];
    for (std::size_t a = 0; a < f.parameters(); ++a) {
      if (v[a] == 0) continue;
      GridPoint prev = v;
      --prev[a];
      const Subspace& below = spaces[f.index(prev)];
      for (std::size_t j = 0; j < below.dim(); ++j) span.push_back(f.step(a, prev).apply(below.basis_vector(j)));
    }
    spaces.push_back(Subspace::span(span, f.dim_at(idx), f.field()));
  }
  Frame sub = detail::frame_of_subspaces(f, spaces);
  return {std::move(sub), std::move(spaces)};
}

/// The whole of F as a subframe of itself.
inline Subframe whole(const Frame& f) {
  std::vector<Subspace> spaces;
  for (std::size_t idx = 0; idx < f.point_count(); ++idx) spaces.push_back(Subspace::full(f.dim_at(idx), f.field()));
  return {f, std::move(spaces)};
}

/// F / S with the induced structure maps. Quotient coordinates are the non-pivot coordinates of S(v).
inline Frame quotient(const Frame& f, const Subframe& s) {
  require(s.frame.box() == f.box(), "quotient: subframe lives on a different box");
  Frame out(f.box(), f.field());
  for (std::size_t idx = 0; idx < f.point_count(); ++idx)
    out.set_dim(f.point(idx), f.dim_at(idx) - s.spaces[idx].dim());
  for (std::size_t idx = 0; idx < f.point_count(); ++idx) {
    GridPoint v = f.point(idx);
    for (std::size_t a = 0; a < f.parameters(); ++a) {
      if (v[a] >= f.box()[a]) continue;
      GridPoint next = v;
      ++next[a];
      Matrix m = s.spaces[f.index(next)].quotient_projection() * f.step(a, v) * s.spaces[idx].quotient_section();
      out.set_step(a, v, std::move(m));
    }
  }
  return out;
}

/// The quotient map F(v) -> (F/S)(v) at a point (matching quotient()).
inline Matrix quotient_projection(const Subframe& s, const GridPoint& v) { return s.at(v).quotient_projection(); }

// ---------------------------------------------------------------------------------------------
// One-parameter bar decomposition

/// A multiset of bars [birth, death) and [birth, inf), kept sorted.
struct Barcode {
  std::vector<std::pair<Rational, Rational>> finite_bars;
  std::vector<Rational> infinite_bars;

  void normalize() {
    std::sort(finite_bars.begin(), finite_bars.end());
    std::sort(infinite_bars.begin(), infinite_bars.end());
  }
  std::size_t size() const { return finite_bars.size() + infinite_bars.size(); }
  bool operator==(const Barcode& o) const {
    Barcode a = *this, b = o;
    a.normalize();
    b.normalize();
    return a.finite_bars == b.finite_bars && a.infinite_bars == b.infinite_bars;
  }
};

/// Elder-rule reduction along the single axis: images of older basis vectors reduce younger ones,
/// a vector that reduces to zero closes its bar.
inline Barcode bar_decomposition(const Frame& f) {
  require(f.parameters() == 1, "bar decomposition needs r = 1");
  const PrimeField& field = f.field();
  const int box = f.box()[0];
  struct Alive {
    Vector vector;
    int birth;
  };
  std::vector<Alive> alive;
  for (std::size_t j = 0; j < f.dim({0}); ++j) {
    Vector e(f.dim({0}), 0);
    e[j] = 1;
    alive.push_back({std::move(e), 0});
  }
  Barcode out;
  for (int i = 0; i < box; ++i) {
    const Matrix& m = f.step(0, {i});
    const std::size_t n = m.rows();
    std::vector<Alive> next;
    std::vector<std::size_t> pivots;
    auto reduce = [&](Vector y) {
      for (std::size_t k = 0; k < next.size(); ++k) {
        std::uint32_t c = y[pivots[k]];
        if (c == 0) continue;
        for (std::size_t j = 0; j < n; ++j) y[j] = field.sub(y[j], field.mul(c, next[k].vector[j]));
      }
      return y;
    };
    auto keep = [&](Vector y, int birth) {
      std::size_t p = 0;
      while (p < n && y[p] == 0) ++p;
      if (p == n) return false;
      std::uint32_t inv = field.inv(y[p]);
      for (auto& x : y) x = field.mul(x, inv);
      next.push_back({std::move(y), birth});
      pivots.push_back(p);
      return true;
    };
    std::stable_sort(alive.begin(), alive.end(), [](const Alive& a, const Alive& b) { return a.birth < b.birth; });
    for (auto& a : alive)
      if (!keep(reduce(m.apply(a.vector)), a.birth)) out.finite_bars.emplace_back(Rational(a.birth), Rational(i + 1));
    for (std::size_t j = 0; j < n; ++j) {
      Vector e(n, 0);
      e[j] = 1;
      keep(reduce(std::move(e)), i + 1);
    }
    alive = std::move(next);
  }
  for (const auto& a : alive) out.infinite_bars.push_back(Rational(a.birth));
  out.normalize();
  return out;
}

}  // namespace stablerank
