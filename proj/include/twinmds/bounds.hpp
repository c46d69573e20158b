// SPDX-License-Identifier: Apache-2.0

#ifndef TWINMDS_BOUNDS_HPP
#define TWINMDS_BOUNDS_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "twinmds/error.hpp"

namespace twinmds {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Regenerating-code operating point: k pieces, d helpers, alpha stored, beta per helper.
struct BoundParams {
  std::int64_t k = 0;
  std::int64_t d = 0;
  std::int64_t alpha = 0;
  std::int64_t beta = 0;

  std::int64_t gamma() const noexcept { return d * beta; }
};

/// Exact n / d.
inline Rational ratio(std::int64_t n, std::int64_t d) { return Rational(Integer(n)) / Integer(d); }

namespace detail {

inline Integer choose2(std::int64_t x) { return Integer(x) * (x - 1) / 2; }

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::BadRange, what);
}

inline Integer sum_min_terms(const BoundParams& p, std::int64_t from) {
  require(p.k >= 1 && p.d >= p.k && p.beta >= 0 && p.alpha >= 0, "bound parameters need 1 <= k <= d and alpha, beta >= 0");
  Integer s = 0;
  for (std::int64_t i = from; i < p.k; ++i) s += std::min<Integer>(Integer(p.alpha), Integer(p.d - i) * p.beta);
  return s;
}

}  // namespace detail

/// Cut-set capacity: sum_{i=0}^{k-1} min(alpha, (d-i) beta).
inline Integer capacity_bound(const BoundParams& p) { return detail::sum_min_terms(p, 0); }

/// Storage and repair bandwidth (alpha, gamma) at the minimum-storage point.
inline std::pair<Rational, Rational> msr_point(std::int64_t S, std::int64_t k, std::int64_t d) {
  detail::require(k >= 1 && d >= k, "msr_point needs 1 <= k <= d");
  const Rational alpha = ratio(S, k);
  return {alpha, alpha * ratio(d, d - k + 1)};
}

/// Storage and repair bandwidth at the minimum-bandwidth point; both equal.
inline std::pair<Rational, Rational> mbr_point(std::int64_t S, std::int64_t k, std::int64_t d) {
  detail::require(k >= 1 && d >= k, "mbr_point needs 1 <= k <= d");
  const Rational v = ratio(S, k) * ratio(2 * d, 2 * d - k + 1);
  return {v, v};
}

inline Integer mbr_file_size(std::int64_t k, std::int64_t d, std::int64_t beta) {
  detail::require(k >= 1 && d >= k && beta >= 0, "mbr_file_size needs 1 <= k <= d, beta >= 0");
  return (Integer(k) * d - detail::choose2(k)) * beta;
}

struct MsrSize {
  Integer file_size;
  Integer alpha;
};

inline MsrSize msr_file_size(std::int64_t k, std::int64_t d, std::int64_t beta) {
  detail::require(k >= 1 && d >= k && beta >= 0, "msr_file_size needs 1 <= k <= d, beta >= 0");
  const Integer alpha = Integer(d - k + 1) * beta;
  return {alpha * k, alpha};
}

inline Integer twin_file_size(std::int64_t k) {
  detail::require(k >= 1, "twin_file_size needs k >= 1");
  return Integer(k) * k;
}

/// Secrecy bound against l stored-data eavesdroppers: sum_{i=l}^{k-1} min(alpha, (d-i) beta).
inline Integer secrecy_bound_pawar(const BoundParams& p, std::int64_t l) {
  detail::require(l >= 0 && l <= p.k, "secrecy bound needs 0 <= l <= k");
  return detail::sum_min_terms(p, l);
}

inline Integer secure_mbr_size(std::int64_t k, std::int64_t d, std::int64_t beta, std::int64_t l) {
  detail::require(l >= 0 && l <= k, "secure_mbr_size needs 0 <= l <= k");
  return mbr_file_size(k, d, beta) - (Integer(l) * d - detail::choose2(l)) * beta;
}

inline Rational secure_msr_size(std::int64_t k, std::int64_t d, std::int64_t alpha, std::int64_t l1, std::int64_t l2) {
  detail::require(k >= 1 && d >= k && l1 >= 0 && l2 >= 0 && l1 + l2 <= k, "secure_msr_size needs l1 + l2 <= k <= d");
  const Rational factor = Rational(1) - ratio(1, d - k + 1);
  Rational r = Rational(Integer(k - l1 - l2)) * alpha;
  for (std::int64_t i = 0; i < l2; ++i) r *= factor;
  return r;
}

enum class SeriesKind { fig5, fig8, fig9 };

inline SeriesKind parse_series_kind(std::string_view s) {
  if (s == "fig5") return SeriesKind::fig5;
  if (s == "fig8") return SeriesKind::fig8;
  if (s == "fig9") return SeriesKind::fig9;
  fail(ErrorCode::BadRange, "unknown series kind '" + std::string(s) + "'");
}

/// Range knobs for comparison_series. Unused fields are ignored per kind.
struct SeriesRange {
  std::int64_t k_min = 3;
  std::int64_t k_max = 50;
  std::int64_t k = 50;
  std::int64_t l1 = 2;
};

struct BoundRow {
  std::int64_t k = 0;
  std::optional<std::int64_t> l1;
  std::optional<std::int64_t> l2;
  std::optional<Rational> s_twin;
  std::optional<Rational> s_mbr;
  std::optional<Rational> s_msr;
};

/**
 * fig5: (k, k^2, k(k+1)/2, k^2) for k in [k_min, k_max].
 * fig8: l = l1 = 1..k-1 at fixed k; twin k(k-l) vs MBR (k-l)(k+1-l)/2.
 * fig9: l2 = 1..k-l1-1 at fixed k, l1; twin k(k-l1-l2) vs MSR with d = 2k-1, alpha = k.
 */
inline std::vector<BoundRow> comparison_series(SeriesKind kind, const SeriesRange& range) {
  std::vector<BoundRow> rows;
  switch (kind) {
    case SeriesKind::fig5:
      detail::require(range.k_min >= 1 && range.k_min <= range.k_max, "fig5 needs 1 <= k_min <= k_max");
      for (std::int64_t k = range.k_min; k <= range.k_max; ++k) {
        rows.push_back({k, std::nullopt, std::nullopt, Rational(twin_file_size(k)), Rational(mbr_file_size(k, k, 1)),
                        Rational(msr_file_size(k, 2 * k - 1, 1).file_size)});
      }
      break;
    case SeriesKind::fig8:
      detail::require(range.k >= 2, "fig8 needs k >= 2");
      for (std::int64_t l = 1; l < range.k; ++l) {
        rows.push_back({range.k, l, 0, Rational(Integer(range.k) * (range.k - l)),
                        Rational(secure_mbr_size(range.k, range.k, 1, l)), std::nullopt});
      }
      break;
    case SeriesKind::fig9:
      detail::require(range.k >= 2 && range.l1 >= 0 && range.l1 + 1 < range.k, "fig9 needs 0 <= l1 and l1 + 1 < k");
      for (std::int64_t l2 = 1; range.l1 + l2 < range.k; ++l2) {
        rows.push_back({range.k, range.l1, l2, Rational(Integer(range.k) * (range.k - range.l1 - l2)), std::nullopt,
                        secure_msr_size(range.k, 2 * range.k - 1, range.k, range.l1, l2)});
      }
      break;
  }
  return rows;
}

/// Integer-valued rationals print exactly; others with 6 decimals, rounded half away from zero.
inline std::string format_rational(const Rational& r) {
  const Integer num = boost::multiprecision::numerator(r);
  const Integer den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  const bool negative = num < 0;
  const Integer scaled = (abs(num) * 1'000'000 * 2 + den) / (den * 2);
  const Integer whole = scaled / 1'000'000;
  std::string frac = Integer(scaled % 1'000'000).str();
  frac.insert(frac.begin(), 6 - frac.size(), '0');
  return (negative ? "-" : "") + whole.str() + "." + frac;
}

inline constexpr std::string_view kSeriesCsvHeader = "k,l1,l2,s_twin,s_mbr,s_msr";

inline std::string series_to_csv(const std::vector<BoundRow>& rows) {
  std::string out(kSeriesCsvHeader);
  out += "\n";
  auto opt_int = [](const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : std::string(); };
  auto opt_rat = [](const std::optional<Rational>& v) { return v ? format_rational(*v) : std::string(); };
  for (const auto& r : rows) {
    out += std::to_string(r.k) + "," + opt_int(r.l1) + "," + opt_int(r.l2) + "," + opt_rat(r.s_twin) + "," +
           opt_rat(r.s_mbr) + "," + opt_rat(r.s_msr) + "\n";
  }
  return out;
}

}  // namespace twinmds

#endif  // TWINMDS_BOUNDS_HPP
