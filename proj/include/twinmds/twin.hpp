// SPDX-License-Identifier: Apache-2.0

#ifndef TWINMDS_TWIN_HPP
#define TWINMDS_TWIN_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "twinmds/error.hpp"
#include "twinmds/field.hpp"
#include "twinmds/mds_code.hpp"

namespace twinmds {

enum class NodeType { type1 = 1, type2 = 2 };

constexpr NodeType opposite(NodeType t) { return t == NodeType::type1 ? NodeType::type2 : NodeType::type1; }
constexpr int type_number(NodeType t) { return static_cast<int>(t); }

inline NodeType node_type_from_int(long long v) {
  if (v == 1) return NodeType::type1;
  if (v == 2) return NodeType::type2;
  fail(ErrorCode::InvalidIndex, "node type must be 1 or 2, got " + std::to_string(v));
}

/// A storage node address; `index` is 1-based.
struct NodeId {
  NodeType type = NodeType::type1;
  std::size_t index = 1;

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

inline std::string to_string(const NodeId& id) {
  return "T" + std::to_string(type_number(id.type)) + "N" + std::to_string(id.index);
}

/**
 * Field, dimension and the two constituent codes. Both codes share k and
 * the field; n1, n2 >= k follows from the codes being MDS.
 */
class TwinConfig {
 public:
  TwinConfig(MdsCode code1, MdsCode code2) : code1_(std::move(code1)), code2_(std::move(code2)) {
    if (code1_.field() != code2_.field()) fail(ErrorCode::FieldMismatch, "Type 1 and Type 2 codes use different fields");
    if (code1_.k() != code2_.k()) fail(ErrorCode::DimensionMismatch, "Type 1 and Type 2 codes have different k");
  }

  const PrimeField& field() const noexcept { return code1_.field(); }
  std::size_t k() const noexcept { return code1_.k(); }
  std::size_t n1() const noexcept { return code1_.n(); }
  std::size_t n2() const noexcept { return code2_.n(); }
  std::size_t n() const noexcept { return n1() + n2(); }
  std::size_t count(NodeType t) const noexcept { return t == NodeType::type1 ? n1() : n2(); }
  const MdsCode& code(NodeType t) const noexcept { return t == NodeType::type1 ? code1_ : code2_; }

  /// Availability advisory: fewer than 2k - 1 nodes of some type. Not an error.
  bool below_recommended_connectivity() const noexcept {
    const std::size_t want = 2 * k() - 1;
    return n1() < want || n2() < want;
  }

  void check_node(const NodeId& id) const {
    if (id.index < 1 || id.index > count(id.type)) {
      fail(ErrorCode::InvalidIndex, "node " + to_string(id) + " outside [1," + std::to_string(count(id.type)) + "]");
    }
  }

  friend bool operator==(const TwinConfig&, const TwinConfig&) = default;

 private:
  MdsCode code1_;
  MdsCode code2_;
};

/// The k x k message matrix A1; A2 is its transpose and never stored.
struct MessageMatrix {
  FieldMatrix a1;
  std::size_t pad_length = 0;

  FieldMatrix a2() const { return a1.transpose(); }

  /// Column-major flattening (f_1 .. f_{k^2}), the inverse of the payload layout.
  Vector flatten() const {
    Vector f;
    f.reserve(a1.rows() * a1.cols());
    for (std::size_t c = 0; c < a1.cols(); ++c)
      for (std::size_t r = 0; r < a1.rows(); ++r) f.push_back(a1(r, c));
    return f;
  }

  friend bool operator==(const MessageMatrix&, const MessageMatrix&) = default;
};

/// Column-major fill; shorter payloads are zero padded and the pad recorded.
inline MessageMatrix build_message_matrix(const PrimeField& field, std::span<const Residue> payload, std::size_t k) {
  if (payload.size() > k * k) {
    fail(ErrorCode::PayloadTooLarge, std::to_string(payload.size()) + " symbols exceed k^2 = " + std::to_string(k * k));
  }
  FieldMatrix a1(field, k, k);
  for (std::size_t i = 0; i < payload.size(); ++i) a1(i % k, i / k) = payload[i] % field.modulus();
  return {std::move(a1), k * k - payload.size()};
}

/// Column j of G_i for the node it belongs to.
struct EncodingVector {
  NodeId node;
  Vector coefficients;
};

inline EncodingVector encoding_vector(const TwinConfig& cfg, const NodeId& id) {
  cfg.check_node(id);
  return {id, cfg.code(id.type).column(id.index)};
}

struct NodeContent {
  NodeId node;
  std::optional<Vector> symbols;

  bool empty() const noexcept { return !symbols.has_value(); }
  friend bool operator==(const NodeContent&, const NodeContent&) = default;
};

/**
 * Snapshot of the whole storage network. Failed nodes have their content
 * erased and are marked not live; mutations go through fail() and
 * install().
 */
class TwinSystem {
 public:
  explicit TwinSystem(TwinConfig config) : config_(std::move(config)) {
    for (auto t : {NodeType::type1, NodeType::type2}) {
      auto& nodes = slot(t);
      for (std::size_t j = 1; j <= config_.count(t); ++j) nodes.push_back({NodeId{t, j}, std::nullopt});
      live_of(t).assign(config_.count(t), false);
    }
  }

  const TwinConfig& config() const noexcept { return config_; }

  const NodeContent& node(const NodeId& id) const {
    config_.check_node(id);
    return slot(id.type)[id.index - 1];
  }
  bool is_live(const NodeId& id) const {
    config_.check_node(id);
    return live_of(id.type)[id.index - 1];
  }
  const std::vector<NodeContent>& nodes(NodeType t) const noexcept { return slot(t); }

  /// Live, non-empty node indices of one type in ascending order.
  std::vector<std::size_t> live_indices(NodeType t) const {
    std::vector<std::size_t> out;
    const auto& live = live_of(t);
    for (std::size_t j = 0; j < live.size(); ++j)
      if (live[j] && !slot(t)[j].empty()) out.push_back(j + 1);
    return out;
  }

  /// Crash-only failure: content erased, node marked dead.
  void fail(const NodeId& id) {
    config_.check_node(id);
    slot(id.type)[id.index - 1].symbols.reset();
    live_of(id.type)[id.index - 1] = false;
  }

  void install(NodeContent content) {
    config_.check_node(content.node);
    if (content.symbols && content.symbols->size() != config_.k()) {
      twinmds::fail(ErrorCode::DimensionMismatch, "node content must hold k symbols");
    }
    const NodeId id = content.node;
    live_of(id.type)[id.index - 1] = content.symbols.has_value();
    slot(id.type)[id.index - 1] = std::move(content);
  }

  friend bool operator==(const TwinSystem&, const TwinSystem&) = default;

 private:
  std::vector<NodeContent>& slot(NodeType t) { return t == NodeType::type1 ? type1_ : type2_; }
  const std::vector<NodeContent>& slot(NodeType t) const { return t == NodeType::type1 ? type1_ : type2_; }
  std::vector<bool>& live_of(NodeType t) { return t == NodeType::type1 ? live1_ : live2_; }
  const std::vector<bool>& live_of(NodeType t) const { return t == NodeType::type1 ? live1_ : live2_; }

  TwinConfig config_;
  std::vector<NodeContent> type1_, type2_;
  std::vector<bool> live1_, live2_;
};

/// Content node `id` must hold: A_i g_(i,j) with A_1 = A1, A_2 = A1^T.
inline Vector node_content_for(const TwinConfig& cfg, const MessageMatrix& msg, const NodeId& id) {
  const Vector g = encoding_vector(cfg, id).coefficients;
  return id.type == NodeType::type1 ? mat_vec(msg.a1, g) : mat_vec(msg.a2(), g);
}

inline TwinSystem encode_system(const TwinConfig& cfg, const MessageMatrix& msg) {
  if (msg.a1.rows() != cfg.k() || msg.a1.cols() != cfg.k()) fail(ErrorCode::DimensionMismatch, "message matrix must be k x k");
  if (msg.a1.field() != cfg.field()) fail(ErrorCode::FieldMismatch, "message matrix field differs from code field");
  TwinSystem sys(cfg);
  const FieldMatrix stored1 = mat_mul(msg.a1, cfg.code(NodeType::type1).generator());
  const FieldMatrix stored2 = mat_mul(msg.a2(), cfg.code(NodeType::type2).generator());
  for (std::size_t j = 1; j <= cfg.n1(); ++j) sys.install({NodeId{NodeType::type1, j}, stored1.column(j - 1)});
  for (std::size_t j = 1; j <= cfg.n2(); ++j) sys.install({NodeId{NodeType::type2, j}, stored2.column(j - 1)});
  return sys;
}

struct Reconstruction {
  MessageMatrix message;
  std::size_t symbols_downloaded = 0;
};

/**
 * Data collection from k live nodes of one type. Row t of A_i is decoded
 * from the t-th symbol of every contacted node; the result is transposed
 * back when the nodes are Type 2.
 */
inline Reconstruction reconstruct(const TwinSystem& sys, std::span<const NodeId> nodes) {
  const auto& cfg = sys.config();
  const std::size_t k = cfg.k();
  if (nodes.size() < k) fail(ErrorCode::NotEnoughLiveNodes, "reconstruction needs k = " + std::to_string(k) + " nodes");
  if (nodes.size() > k) fail(ErrorCode::DimensionMismatch, "reconstruction contacts exactly k nodes");
  const NodeType type = nodes.front().type;
  std::vector<std::size_t> positions;
  for (const auto& id : nodes) {
    if (id.type != type) fail(ErrorCode::MixedTypes, "all contacted nodes must have the same type");
    if (!sys.is_live(id) || sys.node(id).empty()) fail(ErrorCode::DeadNode, to_string(id) + " is not live");
    positions.push_back(id.index);
  }
  FieldMatrix a(cfg.field(), k, k);
  Vector observed(k);
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t c = 0; c < k; ++c) observed[c] = (*sys.node(nodes[c]).symbols)[t];
    const Vector row = erasure_decode(cfg.code(type), positions, observed);
    for (std::size_t c = 0; c < k; ++c) a(t, c) = row[c];
  }
  return {MessageMatrix{type == NodeType::type1 ? std::move(a) : a.transpose(), 0}, k * k};
}

/// Lowest-index live nodes of a type, k of them.
inline std::vector<NodeId> default_nodes(const TwinSystem& sys, NodeType type, ErrorCode shortage) {
  const auto live = sys.live_indices(type);
  const std::size_t k = sys.config().k();
  if (live.size() < k) {
    fail(shortage, "only " + std::to_string(live.size()) + " live Type " + std::to_string(type_number(type)) +
                       " nodes, need " + std::to_string(k));
  }
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back({type, live[i]});
  return out;
}

inline Reconstruction reconstruct(const TwinSystem& sys, NodeType type) {
  const auto nodes = default_nodes(sys, type, ErrorCode::NotEnoughLiveNodes);
  return reconstruct(sys, nodes);
}

/// The single symbol a helper sends: target coefficients dotted with its stored symbols.
inline Residue helper_share(const PrimeField& field, const NodeContent& helper, const EncodingVector& target) {
  if (helper.node.type == target.node.type) fail(ErrorCode::SameTypeHelper, "helper and newcomer have the same type");
  if (helper.empty()) fail(ErrorCode::EmptyHelper, to_string(helper.node) + " holds no data");
  return dot(field, target.coefficients, *helper.symbols);
}

struct RepairResult {
  NodeContent content;
  Vector shares;
  std::size_t symbols_downloaded = 0;
};

/**
 * Regenerates the content of `failed` from k opposite-type helpers without
 * touching the system. The shares g_fail^T A_opp g_helper are erasure-decoded
 * under the helpers' code to give tau, which is the lost content.
 */
inline RepairResult regenerate(const TwinSystem& sys, const NodeId& failed, std::span<const NodeId> helpers) {
  const auto& cfg = sys.config();
  cfg.check_node(failed);
  const std::size_t k = cfg.k();
  if (helpers.size() < k) fail(ErrorCode::NotEnoughHelpers, "repair needs k = " + std::to_string(k) + " helpers");
  if (helpers.size() > k) fail(ErrorCode::DimensionMismatch, "repair contacts exactly k helpers");
  const NodeType helper_type = opposite(failed.type);
  const EncodingVector target = encoding_vector(cfg, failed);
  std::vector<std::size_t> positions;
  std::set<std::size_t> seen;
  Vector shares;
  for (const auto& h : helpers) {
    if (h.type != helper_type) fail(ErrorCode::WrongHelperType, to_string(h) + " is not of the opposite type");
    if (!seen.insert(h.index).second) fail(ErrorCode::InvalidIndex, "helper " + to_string(h) + " repeated");
    if (!sys.is_live(h)) fail(ErrorCode::DeadNode, "helper " + to_string(h) + " is not live");
    shares.push_back(helper_share(cfg.field(), sys.node(h), target));
    positions.push_back(h.index);
  }
  Vector tau = erasure_decode(cfg.code(helper_type), positions, shares);
  return {NodeContent{failed, std::move(tau)}, std::move(shares), k};
}

/// regenerate() followed by installing the newcomer as live.
inline RepairResult repair(TwinSystem& sys, const NodeId& failed, std::span<const NodeId> helpers) {
  RepairResult r = regenerate(sys, failed, helpers);
  sys.install(r.content);
  return r;
}

inline RepairResult repair(TwinSystem& sys, const NodeId& failed) {
  const auto helpers = default_nodes(sys, opposite(failed.type), ErrorCode::NotEnoughHelpers);
  return repair(sys, failed, helpers);
}

struct Deployment {
  TwinSystem system;
  std::size_t repairs = 0;
  std::size_t symbols_transferred = 0;
};

/**
 * Source writes k seed nodes per type; every other node is then filled as
 * a newcomer, alternating Type 1 / Type 2 in ascending index order.
 */
inline Deployment deploy(const TwinConfig& cfg, const MessageMatrix& msg, std::span<const std::size_t> seeds1,
                         std::span<const std::size_t> seeds2) {
  const std::size_t k = cfg.k();
  auto check_seeds = [&](std::span<const std::size_t> seeds, NodeType t) {
    std::set<std::size_t> uniq(seeds.begin(), seeds.end());
    if (seeds.size() != k || uniq.size() != k) {
      fail(ErrorCode::InsufficientSeeds, "need k distinct seeds for Type " + std::to_string(type_number(t)));
    }
    for (auto j : seeds) cfg.check_node({t, j});
    return uniq;
  };
  const auto s1 = check_seeds(seeds1, NodeType::type1);
  const auto s2 = check_seeds(seeds2, NodeType::type2);

  Deployment d{TwinSystem(cfg)};
  for (auto j : s1) d.system.install({NodeId{NodeType::type1, j}, node_content_for(cfg, msg, {NodeType::type1, j})});
  for (auto j : s2) d.system.install({NodeId{NodeType::type2, j}, node_content_for(cfg, msg, {NodeType::type2, j})});

  std::vector<NodeId> pending1, pending2;
  for (std::size_t j = 1; j <= cfg.n1(); ++j)
    if (!s1.contains(j)) pending1.push_back({NodeType::type1, j});
  for (std::size_t j = 1; j <= cfg.n2(); ++j)
    if (!s2.contains(j)) pending2.push_back({NodeType::type2, j});

  std::vector<NodeId> order;
  for (std::size_t i = 0; i < std::max(pending1.size(), pending2.size()); ++i) {
    if (i < pending1.size()) order.push_back(pending1[i]);
    if (i < pending2.size()) order.push_back(pending2[i]);
  }
  for (const auto& id : order) {
    const auto r = repair(d.system, id);
    ++d.repairs;
    d.symbols_transferred += r.symbols_downloaded;
  }
  return d;
}

}  // namespace twinmds

#endif  // TWINMDS_TWIN_HPP
