// SPDX-License-Identifier: Apache-2.0

#ifndef TWINMDS_MDS_CODE_HPP
#define TWINMDS_MDS_CODE_HPP

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twinmds/combinatorics.hpp"
#include "twinmds/error.hpp"
#include "twinmds/field.hpp"

namespace twinmds {

enum class CodeStyle { vandermonde, systematic, explicit_matrix };

constexpr std::string_view to_string(CodeStyle s) {
  switch (s) {
    case CodeStyle::vandermonde: return "vandermonde";
    case CodeStyle::systematic: return "systematic";
    case CodeStyle::explicit_matrix: return "explicit";
  }
  return "unknown";
}

inline CodeStyle parse_code_style(std::string_view s) {
  if (s == "vandermonde") return CodeStyle::vandermonde;
  if (s == "systematic") return CodeStyle::systematic;
  if (s == "explicit") return CodeStyle::explicit_matrix;
  fail(ErrorCode::ParseError, "unknown code style '" + std::string(s) + "'");
}

/// Largest length for which the all-minors MDS check is run.
inline constexpr std::size_t kMaxExhaustiveMdsLength = 20;

/**
 * An (n, k) linear MDS code over F_p given by its k x n generator matrix.
 * Codeword positions are 1-based on every public entry point.
 */
class MdsCode {
 public:
  MdsCode(FieldMatrix generator, CodeStyle style, std::optional<Vector> eval_points)
      : generator_(std::move(generator)), style_(style), eval_points_(std::move(eval_points)) {}

  std::size_t n() const noexcept { return generator_.cols(); }
  std::size_t k() const noexcept { return generator_.rows(); }
  const PrimeField& field() const noexcept { return generator_.field(); }
  const FieldMatrix& generator() const noexcept { return generator_; }
  CodeStyle style() const noexcept { return style_; }
  const std::optional<Vector>& eval_points() const noexcept { return eval_points_; }

  /// Column j (1-based) of the generator, the encoding vector of position j.
  Vector column(std::size_t j) const {
    if (j < 1 || j > n()) fail(ErrorCode::InvalidIndex, "position " + std::to_string(j) + " outside [1," + std::to_string(n()) + "]");
    return generator_.column(j - 1);
  }

  friend bool operator==(const MdsCode&, const MdsCode&) = default;

 private:
  FieldMatrix generator_;
  CodeStyle style_;
  std::optional<Vector> eval_points_;
};

/**
 * Searches every k x k column submatrix of `generator` for a singular one.
 * Returns the 0-based columns of the first singular minor, or nullopt when
 * the matrix is MDS.
 */
inline std::optional<std::vector<std::size_t>> find_singular_minor(const FieldMatrix& generator) {
  std::optional<std::vector<std::size_t>> found;
  const std::size_t k = generator.rows();
  for_each_combination(generator.cols(), k, [&](const std::vector<std::size_t>& cols) {
    if (rank(generator.select_columns(cols)) < k) {
      found = cols;
      return false;
    }
    return true;
  });
  return found;
}

namespace detail {

inline Vector default_points(std::size_t n) {
  Vector pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = static_cast<Residue>(i);
  return pts;
}

inline Vector checked_points(std::size_t n, std::size_t k, const PrimeField& field,
                             const std::optional<Vector>& points) {
  if (k == 0 || k > n) fail(ErrorCode::DimensionMismatch, "need 1 <= k <= n, got n=" + std::to_string(n) + " k=" + std::to_string(k));
  if (n > field.modulus()) {
    fail(ErrorCode::TooFewPoints, std::to_string(n) + " distinct points do not exist in F_" + std::to_string(field.modulus()));
  }
  Vector pts = points ? *points : default_points(n);
  if (pts.size() != n) fail(ErrorCode::DimensionMismatch, "expected " + std::to_string(n) + " evaluation points");
  std::set<Residue> seen;
  for (auto& x : pts) {
    x %= field.modulus();
    if (!seen.insert(x).second) fail(ErrorCode::DuplicatePoints, "evaluation point " + std::to_string(x) + " repeated");
  }
  return pts;
}

inline FieldMatrix vandermonde_matrix(const PrimeField& field, std::size_t k, const Vector& pts) {
  FieldMatrix g(field, k, pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    Residue power = 1;
    for (std::size_t i = 0; i < k; ++i) {
      g(i, j) = power;
      power = field.mul(power, pts[j]);
    }
  }
  return g;
}

}  // namespace detail

/// Generalized Reed-Solomon generator: entry (i, j) = x_j^i. Default points are 0..n-1.
inline MdsCode make_vandermonde(std::size_t n, std::size_t k, const PrimeField& field,
                                const std::optional<Vector>& points = std::nullopt) {
  Vector pts = detail::checked_points(n, k, field, points);
  FieldMatrix g = detail::vandermonde_matrix(field, k, pts);
  return MdsCode(std::move(g), CodeStyle::vandermonde, std::move(pts));
}

/// Row-reduced Vandermonde generator: identity on the first k positions.
inline MdsCode make_systematic(std::size_t n, std::size_t k, const PrimeField& field,
                               const std::optional<Vector>& points = std::nullopt) {
  Vector pts = detail::checked_points(n, k, field, points);
  FieldMatrix g = rref(detail::vandermonde_matrix(field, k, pts));
  return MdsCode(std::move(g), CodeStyle::systematic, std::move(pts));
}

/// Accepts a caller-supplied generator after verifying every k x k minor.
inline MdsCode load_explicit(FieldMatrix generator) {
  const std::size_t k = generator.rows();
  const std::size_t n = generator.cols();
  if (k == 0 || k > n) fail(ErrorCode::DimensionMismatch, "generator must be k x n with 1 <= k <= n");
  if (n > kMaxExhaustiveMdsLength) {
    fail(ErrorCode::InstanceTooLarge, "explicit generators are limited to n <= " + std::to_string(kMaxExhaustiveMdsLength));
  }
  if (auto bad = find_singular_minor(generator)) {
    std::string cols;
    for (auto c : *bad) cols += (cols.empty() ? "" : ",") + std::to_string(c + 1);
    fail(ErrorCode::NotMds, "singular k x k submatrix on columns {" + cols + "}");
  }
  return MdsCode(std::move(generator), CodeStyle::explicit_matrix, std::nullopt);
}

inline Vector encode_row(const MdsCode& code, std::span<const Residue> message) {
  if (message.size() != code.k()) fail(ErrorCode::DimensionMismatch, "message length must equal k");
  return vec_mul(code.field(), message, code.generator());
}

/// Recovers the message from k symbols at the given 1-based positions.
inline Vector erasure_decode(const MdsCode& code, std::span<const std::size_t> positions,
                             std::span<const Residue> symbols) {
  if (positions.size() != code.k() || symbols.size() != code.k()) {
    fail(ErrorCode::DimensionMismatch, "erasure decoding needs exactly k positions and symbols");
  }
  std::vector<std::size_t> cols;
  cols.reserve(positions.size());
  std::set<std::size_t> seen;
  for (auto pos : positions) {
    if (pos < 1 || pos > code.n()) fail(ErrorCode::InvalidIndex, "position " + std::to_string(pos) + " out of range");
    if (!seen.insert(pos).second) fail(ErrorCode::InvalidIndex, "position " + std::to_string(pos) + " repeated");
    cols.push_back(pos - 1);
  }
  // m * G_S = s  <=>  G_S^T * m^T = s^T
  const FieldMatrix sub_t = code.generator().select_columns(cols).transpose();
  try {
    return solve_square(sub_t, symbols);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SingularMatrix) fail(ErrorCode::SingularSubmatrix, "selected generator columns are dependent");
    throw;
  }
}

}  // namespace twinmds

#endif  // TWINMDS_MDS_CODE_HPP
