// SPDX-License-Identifier: Apache-2.0

#ifndef TWINMDS_FIELD_HPP
#define TWINMDS_FIELD_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "twinmds/error.hpp"

namespace twinmds {

/// Residue in [0, p). Products are formed in 64 bits, so p < 2^31 never overflows.
using Residue = std::uint32_t;
using Vector = std::vector<Residue>;

/**
 * The prime field F_p. Primality is verified by trial division on
 * construction; all arithmetic helpers expect reduced operands.
 */
class PrimeField {
 public:
  static constexpr std::uint64_t kMaxModulus = (std::uint64_t{1} << 31) - 1;

  explicit PrimeField(std::uint64_t modulus) : modulus_(static_cast<Residue>(modulus)) {
    if (modulus < 2 || modulus > kMaxModulus || !is_prime(modulus)) {
      fail(ErrorCode::NotPrime, "modulus " + std::to_string(modulus) + " is not a prime below 2^31");
    }
  }

  Residue modulus() const noexcept { return modulus_; }

  Residue reduce(std::int64_t x) const noexcept {
    const auto p = static_cast<std::int64_t>(modulus_);
    const auto r = x % p;
    return static_cast<Residue>(r < 0 ? r + p : r);
  }
  Residue add(Residue a, Residue b) const noexcept {
    const std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<Residue>(s >= modulus_ ? s - modulus_ : s);
  }
  Residue sub(Residue a, Residue b) const noexcept {
    return a >= b ? a - b : static_cast<Residue>(std::uint64_t{a} + modulus_ - b);
  }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : modulus_ - a; }
  Residue mul(Residue a, Residue b) const noexcept {
    return static_cast<Residue>((std::uint64_t{a} * b) % modulus_);
  }
  Residue pow(Residue base, std::uint64_t exp) const noexcept {
    std::uint64_t result = 1 % modulus_;
    std::uint64_t b = base % modulus_;
    while (exp > 0) {
      if (exp & 1U) result = (result * b) % modulus_;
      b = (b * b) % modulus_;
      exp >>= 1U;
    }
    return static_cast<Residue>(result);
  }
  /// Multiplicative inverse by the extended Euclidean algorithm.
  Residue inv(Residue a) const {
    if (a % modulus_ == 0) fail(ErrorCode::ZeroInverse, "zero has no inverse in F_" + std::to_string(modulus_));
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = modulus_, new_r = a % modulus_;
    while (new_r != 0) {
      const std::int64_t q = r / new_r;
      t = std::exchange(new_t, t - q * new_t);
      r = std::exchange(new_r, r - q * new_r);
    }
    return reduce(t);
  }
  Residue div(Residue a, Residue b) const { return mul(a, inv(b)); }

  bool contains(std::uint64_t v) const noexcept { return v < modulus_; }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  static bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) return false;
    }
    return true;
  }

  Residue modulus_;
};

/// A residue tagged with its field.
struct FieldElement {
  Residue value = 0;
  PrimeField field;

  FieldElement(PrimeField f, std::int64_t v) : value(f.reduce(v)), field(f) {}

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    check_same(a, b);
    return {a.field, a.field.add(a.value, b.value)};
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    check_same(a, b);
    return {a.field, a.field.sub(a.value, b.value)};
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    check_same(a, b);
    return {a.field, a.field.mul(a.value, b.value)};
  }

 private:
  static void check_same(const FieldElement& a, const FieldElement& b) {
    if (a.field != b.field) fail(ErrorCode::FieldMismatch, "operands live in different fields");
  }
};

inline FieldElement field_inv(const FieldElement& x) { return {x.field, x.field.inv(x.value)}; }

/// Dense row-major matrix over a prime field.
class FieldMatrix {
 public:
  FieldMatrix(PrimeField field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  FieldMatrix(PrimeField field, std::size_t rows, std::size_t cols, Vector entries)
      : field_(field), rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      fail(ErrorCode::DimensionMismatch, "entry count " + std::to_string(data_.size()) + " != " +
                                             std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    for (auto v : data_) {
      if (!field_.contains(v)) fail(ErrorCode::DimensionMismatch, "entry " + std::to_string(v) + " not reduced");
    }
  }

  /// Builds from nested rows; entries are reduced mod p (negative values allowed).
  static FieldMatrix from_rows(PrimeField field, const std::vector<std::vector<std::int64_t>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    FieldMatrix m(field, r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) fail(ErrorCode::DimensionMismatch, "ragged rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = field.reduce(rows[i][j]);
    }
    return m;
  }

  static FieldMatrix identity(PrimeField field, std::size_t n) {
    FieldMatrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  const PrimeField& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const Vector& entries() const noexcept { return data_; }

  Residue& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Residue operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Residue> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vector column(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  FieldMatrix transpose() const {
    FieldMatrix t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Columns picked in the given (0-based) order.
  FieldMatrix select_columns(std::span<const std::size_t> cols) const {
    FieldMatrix s(field_, rows_, cols.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = (*this)(i, cols[j]);
    return s;
  }

  /// Leading `count` rows.
  FieldMatrix top_rows(std::size_t count) const {
    FieldMatrix s(field_, count, cols_);
    std::copy_n(data_.begin(), count * cols_, s.data_.begin());
    return s;
  }

  void append_row(std::span<const Residue> r) {
    if (r.size() != cols_) fail(ErrorCode::DimensionMismatch, "appended row has wrong length");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }

  friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

 private:
  PrimeField field_;
  std::size_t rows_;
  std::size_t cols_;
  Vector data_;
};

inline FieldMatrix mat_mul(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.field() != b.field()) fail(ErrorCode::FieldMismatch, "mat_mul operands in different fields");
  if (a.cols() != b.rows()) {
    fail(ErrorCode::DimensionMismatch,
         "mat_mul " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " by " +
             std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  const auto p = std::uint64_t{a.field().modulus()};
  FieldMatrix c(a.field(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      std::uint64_t acc = 0;
      for (std::size_t t = 0; t < a.cols(); ++t) acc = (acc + std::uint64_t{a(i, t)} * b(t, j)) % p;
      c(i, j) = static_cast<Residue>(acc);
    }
  }
  return c;
}

/// Row vector times matrix.
inline Vector vec_mul(const PrimeField& f, std::span<const Residue> v, const FieldMatrix& m) {
  if (v.size() != m.rows()) fail(ErrorCode::DimensionMismatch, "vector length does not match matrix rows");
  const auto p = std::uint64_t{f.modulus()};
  Vector out(m.cols(), 0);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    std::uint64_t acc = 0;
    for (std::size_t t = 0; t < v.size(); ++t) acc = (acc + std::uint64_t{v[t]} * m(t, j)) % p;
    out[j] = static_cast<Residue>(acc);
  }
  return out;
}

/// Matrix times column vector.
inline Vector mat_vec(const FieldMatrix& m, std::span<const Residue> v) {
  if (v.size() != m.cols()) fail(ErrorCode::DimensionMismatch, "vector length does not match matrix cols");
  const auto p = std::uint64_t{m.field().modulus()};
  Vector out(m.rows(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::uint64_t acc = 0;
    for (std::size_t t = 0; t < v.size(); ++t) acc = (acc + std::uint64_t{m(i, t)} * v[t]) % p;
    out[i] = static_cast<Residue>(acc);
  }
  return out;
}

inline Residue dot(const PrimeField& f, std::span<const Residue> a, std::span<const Residue> b) {
  if (a.size() != b.size()) fail(ErrorCode::DimensionMismatch, "dot product of unequal lengths");
  const auto p = std::uint64_t{f.modulus()};
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc = (acc + std::uint64_t{a[i]} * b[i]) % p;
  return static_cast<Residue>(acc);
}

namespace detail {

/// In-place forward elimination with first-nonzero pivoting. Returns pivot columns.
inline std::vector<std::size_t> eliminate(FieldMatrix& m, bool reduce_above) {
  const PrimeField& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t col = 0; col < m.cols() && lead < m.rows(); ++col) {
    std::size_t pr = lead;
    while (pr < m.rows() && m(pr, col) == 0) ++pr;
    if (pr == m.rows()) continue;
    if (pr != lead)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pr, j), m(lead, j));
    const Residue scale = f.inv(m(lead, col));
    for (std::size_t j = col; j < m.cols(); ++j) m(lead, j) = f.mul(m(lead, j), scale);
    for (std::size_t i = reduce_above ? 0 : lead + 1; i < m.rows(); ++i) {
      if (i == lead || m(i, col) == 0) continue;
      const Residue factor = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) = f.sub(m(i, j), f.mul(factor, m(lead, j)));
    }
    pivots.push_back(col);
    ++lead;
  }
  return pivots;
}

}  // namespace detail

inline std::size_t rank(FieldMatrix m) { return detail::eliminate(m, false).size(); }

/// Reduced row echelon form.
inline FieldMatrix rref(FieldMatrix m) {
  detail::eliminate(m, true);
  return m;
}

/// Solves a·x = y for square nonsingular a.
inline Vector solve_square(const FieldMatrix& a, std::span<const Residue> y) {
  if (a.rows() != a.cols()) fail(ErrorCode::DimensionMismatch, "solve_square needs a square matrix");
  if (y.size() != a.rows()) fail(ErrorCode::DimensionMismatch, "right-hand side has wrong length");
  const std::size_t n = a.rows();
  if (n == 0) return {};
  FieldMatrix aug(a.field(), n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = y[i] % a.field().modulus();
  }
  const auto pivots = detail::eliminate(aug, true);
  if (pivots.size() < n || pivots.back() >= n) fail(ErrorCode::SingularMatrix, "matrix is singular");
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug(i, n);
  return x;
}

inline FieldMatrix inverse(const FieldMatrix& a) {
  if (a.rows() != a.cols()) fail(ErrorCode::DimensionMismatch, "inverse needs a square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return a;
  FieldMatrix aug(a.field(), n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  const auto pivots = detail::eliminate(aug, true);
  if (pivots.size() < n || pivots[n - 1] >= n) fail(ErrorCode::SingularMatrix, "matrix is singular");
  FieldMatrix inv(a.field(), n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

inline bool in_row_space(const FieldMatrix& m, std::span<const Residue> v) {
  if (v.size() != m.cols()) fail(ErrorCode::DimensionMismatch, "vector length does not match matrix cols");
  FieldMatrix stacked = m;
  stacked.append_row(v);
  return rank(stacked) == rank(m);
}

}  // namespace twinmds

#endif  // TWINMDS_FIELD_HPP
