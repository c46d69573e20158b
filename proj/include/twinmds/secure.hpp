// SPDX-License-Identifier: Apache-2.0

#ifndef TWINMDS_SECURE_HPP
#define TWINMDS_SECURE_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twinmds/error.hpp"
#include "twinmds/field.hpp"
#include "twinmds/twin.hpp"

namespace twinmds {

/// Seeded source of uniform field symbols (rejection sampling on mt19937_64).
class SymbolSource {
 public:
  SymbolSource(const PrimeField& field, std::uint64_t seed) : field_(field), engine_(seed) {}

  Residue next() {
    const std::uint64_t p = field_.modulus();
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % p;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<Residue>(x % p);
  }

  Vector draw(std::size_t count) {
    Vector v(count);
    for (auto& x : v) x = next();
    return v;
  }

 private:
  PrimeField field_;
  std::mt19937_64 engine_;
};

/**
 * Message matrix for the (l1, l2)-secure construction: k(l1+l2) random
 * symbols fill the leading l1+l2 columns, the secure payload fills the rest.
 * Both parts are laid out column-major.
 */
struct SecureLayout {
  std::size_t k = 0;
  std::size_t l1 = 0;
  std::size_t l2 = 0;
  std::uint64_t seed = 0;
  Vector random_symbols;
  Vector payload;
  MessageMatrix matrix;

  std::size_t budget() const noexcept { return l1 + l2; }
  /// Source coordinates 0 .. k*(l1+l2)-1 are random, the rest payload.
  std::size_t random_count() const noexcept { return k * budget(); }
  bool is_random_coordinate(std::size_t coord) const noexcept { return coord < random_count(); }

  friend bool operator==(const SecureLayout&, const SecureLayout&) = default;
};

inline std::size_t secure_capacity_twin(std::size_t k, std::size_t l1, std::size_t l2) {
  if (l1 + l2 >= k) {
    fail(ErrorCode::BudgetExceeded, "l1 + l2 = " + std::to_string(l1 + l2) + " must be below k = " + std::to_string(k));
  }
  return k * (k - l1 - l2);
}

inline SecureLayout make_secure_layout(const PrimeField& field, std::span<const Residue> payload, std::size_t l1,
                                       std::size_t l2, std::size_t k, std::uint64_t seed) {
  const std::size_t capacity = secure_capacity_twin(k, l1, l2);
  if (payload.size() != capacity) {
    fail(ErrorCode::BadPayloadLength,
         "payload has " + std::to_string(payload.size()) + " symbols, secure capacity is " + std::to_string(capacity));
  }
  Vector random = SymbolSource(field, seed).draw(k * (l1 + l2));
  Vector secure;
  for (auto v : payload) secure.push_back(v % field.modulus());
  Vector f = random;
  f.insert(f.end(), secure.begin(), secure.end());
  MessageMatrix matrix = build_message_matrix(field, f, k);
  return {k, l1, l2, seed, std::move(random), std::move(secure), std::move(matrix)};
}

/// Plain (non-secure) layout: no random columns.
inline SecureLayout plain_layout(const MessageMatrix& msg) {
  return {msg.a1.rows(), 0, 0, 0, {}, msg.flatten(), msg};
}

/// The payload symbols recovered from a reconstructed message matrix.
inline Vector strip_random(const SecureLayout& layout, const MessageMatrix& recovered) {
  Vector f = recovered.flatten();
  return {f.begin() + static_cast<std::ptrdiff_t>(layout.random_count()), f.end()};
}

enum class SecrecyReason { AllSameTypeWithinBudget, SubmatrixFullRank, NotGuaranteed };

constexpr std::string_view to_string(SecrecyReason r) {
  switch (r) {
    case SecrecyReason::AllSameTypeWithinBudget: return "AllSameTypeWithinBudget";
    case SecrecyReason::SubmatrixFullRank: return "SubmatrixFullRank";
    case SecrecyReason::NotGuaranteed: return "NotGuaranteed";
  }
  return "Unknown";
}

struct SecrecyGuarantee {
  bool guaranteed = false;
  SecrecyReason reason = SecrecyReason::NotGuaranteed;
};

/**
 * Sufficient condition for zero leakage. Holds when every eavesdropped node
 * (stored data or repair traffic) is a Type 1 node, the set fits the budget,
 * and rows 1..l1+l2 of G1 restricted to those columns have full column rank:
 * then, given the payload, the observations decode the random block.
 *
 * Type 2 nodes store A1^T g, whose symbols for payload columns carry no
 * random mask, so any non-empty Type 2 set is reported NotGuaranteed.
 * A repair observation covers the same functionals as the stored content of
 * the node being repaired, so e2 nodes are classified by their own type.
 */
inline SecrecyGuarantee guaranteed_secure_set(const TwinConfig& cfg, const SecureLayout& layout,
                                              std::span<const NodeId> e1, std::span<const NodeId> e2) {
  const SecrecyGuarantee no{false, SecrecyReason::NotGuaranteed};
  std::set<NodeId> nodes(e1.begin(), e1.end());
  nodes.insert(e2.begin(), e2.end());
  if (e1.size() + e2.size() > layout.budget() || nodes.size() != e1.size() + e2.size()) return no;
  if (nodes.empty()) return {true, SecrecyReason::AllSameTypeWithinBudget};
  for (const auto& id : nodes) {
    cfg.check_node(id);
    if (id.type != NodeType::type1) return no;
  }
  const MdsCode& code = cfg.code(NodeType::type1);
  std::vector<std::size_t> cols;
  for (const auto& id : nodes) cols.push_back(id.index - 1);
  const bool full_rank = rank(code.generator().top_rows(layout.budget()).select_columns(cols)) == cols.size();
  if (!full_rank) return no;
  // Rows 1..L of a Vandermonde generator on distinct points are Vandermonde themselves.
  return {true, code.style() == CodeStyle::vandermonde ? SecrecyReason::AllSameTypeWithinBudget
                                                       : SecrecyReason::SubmatrixFullRank};
}

}  // namespace twinmds

#endif  // TWINMDS_SECURE_HPP
