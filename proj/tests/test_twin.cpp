// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "testing.hpp"
#include "twinmds/twin.hpp"

using namespace twinmds;

namespace {

MessageMatrix message_1_to_16() {
  Vector payload(16);
  std::iota(payload.begin(), payload.end(), 1);
  return build_message_matrix(PrimeField(11), payload, 4);
}

/// A1 g computed entry by entry.
Vector naive_content(const MessageMatrix& msg, NodeType type, const Vector& g) {
  const auto& a = msg.a1;
  const PrimeField& f = a.field();
  Vector out(a.rows(), 0);
  for (std::size_t t = 0; t < a.rows(); ++t)
    for (std::size_t c = 0; c < a.cols(); ++c)
      out[t] = f.add(out[t], f.mul(type == NodeType::type1 ? a(t, c) : a(c, t), g[c]));
  return out;
}

TwinConfig random_config(std::mt19937_64& rng) {
  static const std::uint64_t primes[] = {11, 13, 31, 101};
  const PrimeField f(primes[rng() % 4]);
  const std::size_t k = 2 + rng() % 4;
  const std::size_t n1 = k + rng() % std::min<std::size_t>(k + 1, f.modulus() - k);
  const std::size_t n2 = k + rng() % std::min<std::size_t>(k + 1, f.modulus() - k);
  auto make = [&](std::size_t n) { return rng() % 2 ? make_vandermonde(n, k, f) : make_systematic(n, k, f); };
  return {make(n1), make(n2)};
}

MessageMatrix random_message(const TwinConfig& cfg, std::mt19937_64& rng) {
  return build_message_matrix(cfg.field(), oracle::random_vector(cfg.field(), cfg.k() * cfg.k(), rng), cfg.k());
}

std::vector<NodeId> random_subset(NodeType t, std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 1);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back({t, idx[i]});
  return out;
}

}  // namespace

TEST(MessageMatrix, ColumnMajorLayout) {
  const auto msg = message_1_to_16();
  EXPECT_EQ(msg.a1(0, 0), 1u);
  EXPECT_EQ(msg.a1(3, 0), 4u);
  EXPECT_EQ(msg.a1(0, 1), 5u);
  EXPECT_EQ(msg.a1(1, 3), 14u % 11);
  EXPECT_EQ(msg.a2(), msg.a1.transpose());
  const PrimeField f(11);
  const auto small = build_message_matrix(f, Vector{1, 2, 3}, 2);
  EXPECT_EQ(small.pad_length, 1u);
  EXPECT_EQ(small.a1, FieldMatrix::from_rows(f, {{1, 3}, {2, 0}}));
  EXPECT_EQ(build_message_matrix(f, Vector{}, 3).a1, FieldMatrix(f, 3, 3));
  EXPECT_EQ(code_of([&] { build_message_matrix(f, Vector(5, 1), 2); }), ErrorCode::PayloadTooLarge);
}

TEST(EncodeSystem, MatchesNaiveProducts) {
  const TwinConfig cfg = oracle::worked_config();
  const auto msg = message_1_to_16();
  const TwinSystem sys = encode_system(cfg, msg);
  for (auto t : {NodeType::type1, NodeType::type2}) {
    for (std::size_t j = 1; j <= cfg.count(t); ++j) {
      const NodeId id{t, j};
      EXPECT_TRUE(sys.is_live(id));
      EXPECT_EQ(*sys.node(id).symbols, naive_content(msg, t, cfg.code(t).column(j)));
    }
  }
  const TwinSystem zero = encode_system(cfg, build_message_matrix(cfg.field(), Vector{}, 4));
  for (const auto& n : zero.nodes(NodeType::type2)) EXPECT_EQ(*n.symbols, Vector(4, 0));
  EXPECT_TRUE(cfg.below_recommended_connectivity());
}

TEST(Reconstruct, ExampleAndErrors) {
  const TwinConfig cfg = oracle::worked_config();
  const auto msg = message_1_to_16();
  TwinSystem sys = encode_system(cfg, msg);
  const std::vector<NodeId> t2{{NodeType::type2, 1}, {NodeType::type2, 2}, {NodeType::type2, 3}, {NodeType::type2, 4}};
  const auto r = reconstruct(sys, t2);
  EXPECT_EQ(r.message.a1, msg.a1);
  EXPECT_EQ(r.symbols_downloaded, 16u);
  EXPECT_EQ(reconstruct(sys, NodeType::type1).message.a1, msg.a1);

  const std::vector<NodeId> mixed{{NodeType::type1, 1}, {NodeType::type2, 2}, {NodeType::type2, 3}, {NodeType::type2, 4}};
  EXPECT_EQ(code_of([&] { reconstruct(sys, mixed); }), ErrorCode::MixedTypes);
  EXPECT_EQ(code_of([&] { reconstruct(sys, std::span(t2).first(3)); }), ErrorCode::NotEnoughLiveNodes);
  sys.fail({NodeType::type2, 3});
  EXPECT_EQ(code_of([&] { reconstruct(sys, t2); }), ErrorCode::DeadNode);
  sys.fail({NodeType::type1, 1});
  sys.fail({NodeType::type1, 2});
  EXPECT_EQ(code_of([&] { reconstruct(sys, NodeType::type1); }), ErrorCode::NotEnoughLiveNodes);
}

TEST(Reconstruct, UniversalityRandomConfigs) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const TwinConfig cfg = random_config(rng);
    const auto msg = random_message(cfg, rng);
    const TwinSystem sys = encode_system(cfg, msg);
    const NodeType t = rng() % 2 ? NodeType::type1 : NodeType::type2;
    const auto r = reconstruct(sys, random_subset(t, cfg.count(t), cfg.k(), rng));
    ASSERT_EQ(r.message.a1, msg.a1);
    ASSERT_EQ(r.symbols_downloaded, cfg.k() * cfg.k());
  }
}

TEST(HelperShare, Examples) {
  const TwinConfig cfg = oracle::worked_config();
  const auto msg = message_1_to_16();
  const TwinSystem sys = encode_system(cfg, msg);
  const auto& f = cfg.field();
  const EncodingVector target = encoding_vector(cfg, {NodeType::type1, 1});
  EXPECT_EQ(helper_share(f, sys.node({NodeType::type2, 1}), target), msg.a1(0, 0));
  EXPECT_EQ(helper_share(f, sys.node({NodeType::type2, 4}), target), (1 + 2 + 3 + 4) % 11);
  const EncodingVector zero{{NodeType::type1, 1}, Vector(4, 0)};
  EXPECT_EQ(helper_share(f, sys.node({NodeType::type2, 5}), zero), 0u);
  EXPECT_EQ(code_of([&] { helper_share(f, sys.node({NodeType::type1, 2}), target); }), ErrorCode::SameTypeHelper);
  EXPECT_EQ(code_of([&] { helper_share(f, NodeContent{{NodeType::type2, 1}, std::nullopt}, target); }),
            ErrorCode::EmptyHelper);
}

TEST(Repair, WorkedExampleScenario) {
  const TwinConfig cfg = oracle::worked_config();
  const auto msg = message_1_to_16();
  TwinSystem sys = encode_system(cfg, msg);
  const NodeId failed{NodeType::type2, 2};
  const Vector before = *sys.node(failed).symbols;
  sys.fail(failed);
  EXPECT_FALSE(sys.is_live(failed));
  const std::vector<NodeId> helpers{{NodeType::type1, 1}, {NodeType::type1, 3}, {NodeType::type1, 4}, {NodeType::type1, 5}};
  const auto r = repair(sys, failed, helpers);
  EXPECT_EQ(*r.content.symbols, before);
  EXPECT_EQ(r.symbols_downloaded, 4u);
  EXPECT_EQ(r.shares.size(), 4u);
  EXPECT_TRUE(sys.is_live(failed));
}

TEST(Repair, Errors) {
  const TwinConfig cfg = oracle::worked_config();
  TwinSystem sys = encode_system(cfg, message_1_to_16());
  const NodeId failed{NodeType::type1, 2};
  sys.fail(failed);
  const std::vector<NodeId> three{{NodeType::type2, 1}, {NodeType::type2, 2}, {NodeType::type2, 3}};
  EXPECT_EQ(code_of([&] { repair(sys, failed, three); }), ErrorCode::NotEnoughHelpers);
  const std::vector<NodeId> wrong{{NodeType::type2, 1}, {NodeType::type2, 2}, {NodeType::type2, 3}, {NodeType::type1, 1}};
  EXPECT_EQ(code_of([&] { repair(sys, failed, wrong); }), ErrorCode::WrongHelperType);
  const std::vector<NodeId> dup{{NodeType::type2, 1}, {NodeType::type2, 1}, {NodeType::type2, 2}, {NodeType::type2, 3}};
  EXPECT_EQ(code_of([&] { repair(sys, failed, dup); }), ErrorCode::InvalidIndex);
  sys.fail({NodeType::type2, 4});
  const std::vector<NodeId> dead{{NodeType::type2, 1}, {NodeType::type2, 2}, {NodeType::type2, 3}, {NodeType::type2, 4}};
  EXPECT_EQ(code_of([&] { repair(sys, failed, dead); }), ErrorCode::DeadNode);
  EXPECT_EQ(code_of([&] { repair(sys, NodeId{NodeType::type1, 9}, three); }), ErrorCode::InvalidIndex);
}

TEST(Repair, ExactnessRandomConfigs) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const TwinConfig cfg = random_config(rng);
    const auto msg = random_message(cfg, rng);
    TwinSystem sys = encode_system(cfg, msg);
    const NodeType t = rng() % 2 ? NodeType::type1 : NodeType::type2;
    const NodeId failed{t, 1 + rng() % cfg.count(t)};
    const Vector before = *sys.node(failed).symbols;
    sys.fail(failed);
    const auto helpers = random_subset(opposite(t), cfg.count(opposite(t)), cfg.k(), rng);
    const auto r = repair(sys, failed, helpers);
    ASSERT_EQ(*r.content.symbols, before);
    ASSERT_EQ(r.symbols_downloaded, cfg.k());
  }
}

TEST(Repair, SharesDependOnlyOnHelperAndTarget) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const TwinConfig cfg = random_config(rng);
    const TwinSystem sys = encode_system(cfg, random_message(cfg, rng));
    const NodeId failed{NodeType::type1, 1 + rng() % cfg.n1()};
    const auto helpers = random_subset(NodeType::type2, cfg.n2(), cfg.k(), rng);
    const auto full = regenerate(sys, failed, helpers);

    TwinSystem sparse(cfg);
    for (const auto& h : helpers) sparse.install(sys.node(h));
    const auto isolated = regenerate(sparse, failed, helpers);
    ASSERT_EQ(full.shares, isolated.shares);
    ASSERT_EQ(full.content, isolated.content);
  }
}

TEST(Deploy, EqualsEncode) {
  const TwinConfig cfg = oracle::worked_config();
  const auto msg = message_1_to_16();
  const std::vector<std::size_t> seeds{1, 2, 3, 4};
  const auto d = deploy(cfg, msg, seeds, seeds);
  EXPECT_EQ(d.system, encode_system(cfg, msg));
  EXPECT_EQ(d.repairs, 3u);
  EXPECT_EQ(d.symbols_transferred, 12u);

  const PrimeField f(11);
  const TwinConfig tight(make_vandermonde(3, 3, f), make_vandermonde(3, 3, f));
  const auto m3 = build_message_matrix(f, Vector{1, 2, 3, 4, 5, 6, 7, 8, 9}, 3);
  const std::vector<std::size_t> all{1, 2, 3};
  const auto dt = deploy(tight, m3, all, all);
  EXPECT_EQ(dt.system, encode_system(tight, m3));
  EXPECT_EQ(dt.repairs, 0u);

  const std::vector<std::size_t> short_seeds{1, 2, 3};
  EXPECT_EQ(code_of([&] { deploy(cfg, msg, short_seeds, seeds); }), ErrorCode::InsufficientSeeds);
  const std::vector<std::size_t> dup_seeds{1, 1, 2, 3};
  EXPECT_EQ(code_of([&] { deploy(cfg, msg, seeds, dup_seeds); }), ErrorCode::InsufficientSeeds);
}

TEST(Deploy, RandomConfigs) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const TwinConfig cfg = random_config(rng);
    const auto msg = random_message(cfg, rng);
    std::vector<std::size_t> s1, s2;
    for (const auto& id : random_subset(NodeType::type1, cfg.n1(), cfg.k(), rng)) s1.push_back(id.index);
    for (const auto& id : random_subset(NodeType::type2, cfg.n2(), cfg.k(), rng)) s2.push_back(id.index);
    const auto d = deploy(cfg, msg, s1, s2);
    ASSERT_EQ(d.system, encode_system(cfg, msg));
    ASSERT_EQ(d.symbols_transferred, d.repairs * cfg.k());
    ASSERT_EQ(d.repairs, cfg.n() - 2 * cfg.k());
  }
}

TEST(TwinConfig, RejectsMismatchedCodes) {
  const PrimeField f(11);
  EXPECT_EQ(code_of([&] { TwinConfig(make_vandermonde(5, 3, f), make_vandermonde(5, 4, f)); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([&] { TwinConfig(make_vandermonde(5, 3, f), make_vandermonde(5, 3, PrimeField(13))); }),
            ErrorCode::FieldMismatch);
}

TEST(NodeId, Formatting) {
  EXPECT_EQ(to_string(NodeId{NodeType::type2, 3}), "T2N3");
  EXPECT_EQ(opposite(NodeType::type1), NodeType::type2);
  EXPECT_EQ(code_of([] { node_type_from_int(3); }), ErrorCode::InvalidIndex);
}
