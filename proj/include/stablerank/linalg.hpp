#pragma once

// Dense exact linear algebra over GF(p).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "stablerank/errors.hpp"

namespace stablerank {

using Vector = std::vector<std::uint32_t>;

inline bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// Arithmetic in GF(p). Construction checks primality.
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (!is_prime(p)) throw PreconditionError("modulus " + std::to_string(p) + " is not prime");
  }

  std::uint32_t modulus() const { return p_; }
  std::uint32_t reduce(std::int64_t x) const {
    auto r = x % static_cast<std::int64_t>(p_);
    return static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<std::uint32_t>(s >= p_ ? s - p_ : s);
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return a >= b ? a - b : a + p_ - b; }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>((std::uint64_t{a} * b) % p_);
  }
  std::uint32_t inv(std::uint32_t a) const {
    if (a == 0) throw PreconditionError("division by zero in GF(" + std::to_string(p_) + ")");
    // Fermat: a^(p-2)
    std::uint64_t result = 1, base = a, e = p_ - 2;
    while (e) {
      if (e & 1) result = result * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return static_cast<std::uint32_t>(result);
  }

  bool operator==(const PrimeField&) const = default;

 private:
  std::uint32_t p_;
};

/// Element of GF(p) carrying its modulus.
class FieldScalar {
 public:
  FieldScalar(std::int64_t value, PrimeField field) : field_(field), value_(field.reduce(value)) {}

  std::uint32_t value() const { return value_; }
  std::uint32_t modulus() const { return field_.modulus(); }

  FieldScalar operator+(const FieldScalar& o) const { return {field_.add(value_, checked(o)), field_}; }
  FieldScalar operator-(const FieldScalar& o) const { return {field_.sub(value_, checked(o)), field_}; }
  FieldScalar operator*(const FieldScalar& o) const { return {field_.mul(value_, checked(o)), field_}; }
  FieldScalar inverse() const { return {field_.inv(value_), field_}; }
  bool operator==(const FieldScalar& o) const { return value_ == o.value_ && field_ == o.field_; }

 private:
  std::uint32_t checked(const FieldScalar& o) const {
    require(o.field_ == field_, "field scalars with different moduli");
    return o.value_;
  }
  PrimeField field_;
  std::uint32_t value_;
};

/// Dense rows x cols matrix over GF(p), row-major.
class Matrix {
 public:
  Matrix() : field_(2) {}
  Matrix(std::size_t rows, std::size_t cols, PrimeField field)
      : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static Matrix identity(std::size_t n, PrimeField field) {
    Matrix m(n, n, field);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
  }

  /// Rows given explicitly; entries are reduced mod p.
  static Matrix from_rows(const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols, PrimeField field) {
    Matrix m(rows.size(), cols, field);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      require(rows[i].size() == cols, "ragged matrix rows");
      for (std::size_t j = 0; j < cols; ++j) m.set(i, j, field.reduce(rows[i][j]));
    }
    return m;
  }

  /// Matrix whose columns are the given vectors (each of length rows).
  static Matrix from_columns(const std::vector<Vector>& columns, std::size_t rows, PrimeField field) {
    Matrix m(rows, columns.size(), field);
    for (std::size_t j = 0; j < columns.size(); ++j) {
      require(columns[j].size() == rows, "column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m.set(i, j, columns[j][i]);
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const PrimeField& field() const { return field_; }
  std::uint32_t modulus() const { return field_.modulus(); }

  std::uint32_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, std::uint32_t v) { data_[i * cols_ + j] = v; }

  Vector row(std::size_t i) const { return Vector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }
  Vector column(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](std::uint32_t x) { return x == 0; });
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_, field_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.set(j, i, (*this)(i, j));
    return t;
  }

  Matrix operator*(const Matrix& o) const {
    require(cols_ == o.rows_, "matrix product shape mismatch");
    require(field_ == o.field_, "matrix product over different fields");
    Matrix out(rows_, o.cols_, field_);
    const std::uint64_t p = field_.modulus();
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        std::uint64_t a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j)
          out.data_[i * o.cols_ + j] = static_cast<std::uint32_t>((out.data_[i * o.cols_ + j] + a * o(k, j)) % p);
      }
    return out;
  }

  Vector apply(const Vector& x) const {
    require(x.size() == cols_, "vector length does not match matrix columns");
    Vector y(rows_, 0);
    const std::uint64_t p = field_.modulus();
    for (std::size_t i = 0; i < rows_; ++i) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < cols_; ++j) acc = (acc + std::uint64_t{(*this)(i, j)} * x[j]) % p;
      y[i] = static_cast<std::uint32_t>(acc);
    }
    return y;
  }

  Matrix scaled(std::uint32_t c) const {
    Matrix out = *this;
    for (auto& x : out.data_) x = field_.mul(x, c);
    return out;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && field_ == o.field_ && data_ == o.data_;
  }

 private:
  PrimeField field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint32_t> data_;
};

/// Row-reduced echelon form of a matrix together with its pivot columns.
struct Echelon {
  Matrix reduced;  // nonzero rows only
  std::vector<std::size_t> pivots;
};

inline Echelon rref(const Matrix& m) {
  const PrimeField& f = m.field();
  std::vector<Vector> rows;
  rows.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols() && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    std::uint32_t inv = f.inv(rows[rank][col]);
    for (auto& x : rows[rank]) x = f.mul(x, inv);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i][col] == 0) continue;
      std::uint32_t c = rows[i][col];
      for (std::size_t j = col; j < m.cols(); ++j) rows[i][j] = f.sub(rows[i][j], f.mul(c, rows[rank][j]));
    }
    pivots.push_back(col);
    ++rank;
  }
  Matrix reduced(rank, m.cols(), f);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) reduced.set(i, j, rows[i][j]);
  return {std::move(reduced), std::move(pivots)};
}

inline std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

/// A linear subspace of GF(p)^n, stored by its canonical RREF basis (one basis vector per row).
class Subspace {
 public:
  Subspace(std::size_t ambient_dim, PrimeField field) : basis_(0, ambient_dim, field) {}

  /// Span of the rows of m.
  static Subspace row_space(const Matrix& m) {
    Echelon e = rref(m);
    Subspace s(m.cols(), m.field());
    s.basis_ = std::move(e.reduced);
    s.pivots_ = std::move(e.pivots);
    return s;
  }
  static Subspace span(const std::vector<Vector>& vectors, std::size_t ambient_dim, PrimeField field) {
    return row_space(Matrix::from_columns(vectors, ambient_dim, field).transpose());
  }
  static Subspace zero(std::size_t n, PrimeField field) { return Subspace(n, field); }
  static Subspace full(std::size_t n, PrimeField field) { return row_space(Matrix::identity(n, field)); }

  std::size_t ambient_dim() const { return basis_.cols(); }
  std::size_t dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  const PrimeField& field() const { return basis_.field(); }
  Vector basis_vector(std::size_t i) const { return basis_.row(i); }
  std::vector<Vector> basis_vectors() const {
    std::vector<Vector> out;
    for (std::size_t i = 0; i < dim(); ++i) out.push_back(basis_.row(i));
    return out;
  }

  /// x minus its projection along the basis onto the pivot coordinates; zero iff x lies in the subspace.
  Vector residue(Vector x) const {
    require(x.size() == ambient_dim(), "vector length does not match subspace ambient dimension");
    const PrimeField& f = field();
    for (std::size_t i = 0; i < dim(); ++i) {
      std::uint32_t c = x[pivots_[i]];
      if (c == 0) continue;
      for (std::size_t j = 0; j < x.size(); ++j) x[j] = f.sub(x[j], f.mul(c, basis_(i, j)));
    }
    return x;
  }

  bool contains(const Vector& x) const {
    Vector r = residue(x);
    return std::all_of(r.begin(), r.end(), [](std::uint32_t v) { return v == 0; });
  }

  bool contains(const Subspace& other) const {
    for (std::size_t i = 0; i < other.dim(); ++i)
      if (!contains(other.basis_vector(i))) return false;
    return true;
  }

  /// Coordinates of x (assumed in the subspace) in the RREF basis.
  Vector coordinates(const Vector& x) const {
    Vector c(dim());
    for (std::size_t i = 0; i < dim(); ++i) c[i] = x[pivots_[i]];
    return c;
  }

  /// Non-pivot coordinates; the standard vectors at these positions span a complement.
  std::vector<std::size_t> free_coordinates() const {
    std::vector<std::size_t> out;
    std::size_t k = 0;
    for (std::size_t j = 0; j < ambient_dim(); ++j) {
      if (k < pivots_.size() && pivots_[k] == j) {
        ++k;
        continue;
      }
      out.push_back(j);
    }
    return out;
  }

  /// Surjection GF(p)^n -> GF(p)^(n - dim) with kernel exactly this subspace.
  Matrix quotient_projection() const {
    auto free = free_coordinates();
    Matrix q(free.size(), ambient_dim(), field());
    for (std::size_t j = 0; j < ambient_dim(); ++j) {
      Vector e(ambient_dim(), 0);
      e[j] = 1;
      Vector r = residue(std::move(e));
      for (std::size_t i = 0; i < free.size(); ++i) q.set(i, j, r[free[i]]);
    }
    return q;
  }

  /// Section of quotient_projection: places a quotient vector on the free coordinates.
  Matrix quotient_section() const {
    auto free = free_coordinates();
    Matrix s(ambient_dim(), free.size(), field());
    for (std::size_t i = 0; i < free.size(); ++i) s.set(free[i], i, 1);
    return s;
  }

  Subspace operator+(const Subspace& o) const {
    require(o.ambient_dim() == ambient_dim(), "subspace sum: ambient dimension mismatch");
    auto vs = basis_vectors();
    auto ws = o.basis_vectors();
    vs.insert(vs.end(), ws.begin(), ws.end());
    return span(vs, ambient_dim(), field());
  }

  bool operator==(const Subspace& o) const { return basis_ == o.basis_; }

 private:
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

inline Subspace kernel(const Matrix& m) {
  Echelon e = rref(m);
  const PrimeField& f = m.field();
  std::vector<Vector> basis;
  std::size_t k = 0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (k < e.pivots.size() && e.pivots[k] == j) {
      ++k;
      continue;
    }
    Vector v(m.cols(), 0);
    v[j] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = f.neg(e.reduced(i, j));
    basis.push_back(std::move(v));
  }
  return Subspace::span(basis, m.cols(), f);
}

inline Subspace image(const Matrix& m) { return Subspace::row_space(m.transpose()); }

/// Surjection with kernel image(m); coset representatives follow the RREF pivots of image(m).
inline Matrix cokernel_projection(const Matrix& m) { return image(m).quotient_projection(); }

/// True iff x lies in L + Ls.
inline bool sum_contains(const Subspace& l, const Subspace& ls, const Vector& x) {
  require(l.ambient_dim() == ls.ambient_dim() && x.size() == l.ambient_dim(),
          "sum_contains: dimension mismatch");
  return (l + ls).contains(x);
}

/// Gaussian binomial coefficient (n choose d)_p, saturating at the uint64 maximum.
inline std::uint64_t gaussian_binomial(std::size_t n, std::size_t d, std::uint32_t p) {
  if (d > n) return 0;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  // Count RREF patterns: sum over pivot sets of p^(free entries). Done by DP over columns:
  // ways[k] = weighted count after placing k pivots; a non-pivot column contributes p^(pivots so far).
  std::vector<unsigned __int128> ways(d + 1, 0);
  ways[0] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<unsigned __int128> next(d + 1, 0);
    for (std::size_t k = 0; k <= d; ++k) {
      if (ways[k] == 0) continue;
      unsigned __int128 pk = 1;
      for (std::size_t i = 0; i < k && pk <= kMax; ++i) pk *= p;
      unsigned __int128 as_free = ways[k] * (pk > kMax ? kMax : pk);
      next[k] = std::min<unsigned __int128>(next[k] + as_free, kMax);
      if (k < d) next[k + 1] = std::min<unsigned __int128>(next[k + 1] + ways[k], kMax);
    }
    ways = std::move(next);
  }
  return static_cast<std::uint64_t>(std::min<unsigned __int128>(ways[d], kMax));
}

namespace detail {
// Increments digits[from..] as a base-p counter (last digit fastest); false once it wraps to zero.
inline bool advance_odometer(std::vector<std::uint32_t>& digits, std::size_t from, std::uint32_t p) {
  for (std::size_t k = digits.size(); k-- > from;) {
    if (++digits[k] < p) return true;
    digits[k] = 0;
  }
  return false;
}
}  // namespace detail

inline constexpr std::uint64_t kDefaultBudget = 1'000'000;

/// Visits every d-dimensional subspace of GF(p)^n exactly once: pivot sets in lexicographic order,
/// then free entries in lexicographic order. The visitor returns false to stop early.
/// Throws BudgetExceeded if the number of subspaces exceeds budget.
inline void for_each_subspace(std::size_t n, std::size_t d, PrimeField field, std::uint64_t budget,
                              const std::function<bool(const Subspace&)>& visit) {
  require(d <= n, "subspace dimension exceeds ambient dimension");
  std::uint64_t count = gaussian_binomial(n, d, field.modulus());
  if (count > budget)
    throw BudgetExceeded("enumerating " + std::to_string(count) + " subspaces of dimension " + std::to_string(d) +
                         " in GF(" + std::to_string(field.modulus()) + ")^" + std::to_string(n) +
                         " exceeds budget " + std::to_string(budget));
  const std::uint32_t p = field.modulus();
  std::vector<std::size_t> pivots(d);
  for (std::size_t i = 0; i < d; ++i) pivots[i] = i;
  while (true) {
    // free slots: (row, col) with col > pivot[row] and col not a pivot
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = pivots[i] + 1; j < n; ++j)
        if (!std::binary_search(pivots.begin(), pivots.end(), j)) slots.emplace_back(i, j);
    std::vector<std::uint32_t> values(slots.size(), 0);
    do {
      Matrix basis(d, n, field);
      for (std::size_t i = 0; i < d; ++i) basis.set(i, pivots[i], 1);
      for (std::size_t k = 0; k < slots.size(); ++k) basis.set(slots[k].first, slots[k].second, values[k]);
      if (!visit(Subspace::row_space(basis))) return;
    } while (detail::advance_odometer(values, 0, p));
    // next pivot combination
    std::size_t i = d;
    while (i > 0 && pivots[i - 1] == n - d + (i - 1)) --i;
    if (i == 0) return;
    ++pivots[i - 1];
    for (std::size_t j = i; j < d; ++j) pivots[j] = pivots[j - 1] + 1;
  }
}

/// Collects for_each_subspace into a vector.
inline std::vector<Subspace> enumerate_subspaces(std::size_t n, std::size_t d, PrimeField field,
                                                 std::uint64_t budget = kDefaultBudget) {
  std::vector<Subspace> out;
  for_each_subspace(n, d, field, budget, [&](const Subspace& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

/// Nonzero vectors of GF(p)^n whose first nonzero entry is 1, in lexicographic order.
inline std::vector<Vector> projective_points(std::size_t n, std::uint32_t p) {
  std::vector<Vector> out;
  for (std::size_t lead = n; lead-- > 0;) {
    Vector v(n, 0);
    v[lead] = 1;
    do {
      out.push_back(v);
    } while (detail::advance_odometer(v, lead + 1, p));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace stablerank
