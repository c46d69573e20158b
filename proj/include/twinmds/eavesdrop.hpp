// SPDX-License-Identifier: Apache-2.0

#ifndef TWINMDS_EAVESDROP_HPP
#define TWINMDS_EAVESDROP_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "twinmds/error.hpp"
#include "twinmds/field.hpp"
#include "twinmds/secure.hpp"
#include "twinmds/twin.hpp"

namespace twinmds {

/// Nodes whose stored data is read (e1) and nodes whose repair downloads are observed (e2).
struct EavesdropperSpec {
  std::vector<NodeId> e1;
  std::vector<NodeId> e2;

  std::size_t size() const noexcept { return e1.size() + e2.size(); }
};

/// Which helpers served the repair of an observed node.
struct RepairPlan {
  NodeId failed;
  std::vector<NodeId> helpers;
};

/**
 * The eavesdropper's view as a linear map e = M f over the k^2 source
 * coordinates f = (r, f^s), indexed in column-major message-matrix order.
 */
struct Observation {
  FieldMatrix matrix;
  Vector values;
  std::size_t random_count = 0;

  std::size_t source_count() const noexcept { return matrix.cols(); }
  std::vector<std::size_t> random_cols() const {
    std::vector<std::size_t> c(random_count);
    for (std::size_t i = 0; i < random_count; ++i) c[i] = i;
    return c;
  }
  std::vector<std::size_t> payload_cols() const {
    std::vector<std::size_t> c;
    for (std::size_t i = random_count; i < source_count(); ++i) c.push_back(i);
    return c;
  }
};

/// Functional f -> (content of node id)_t as a row over the k^2 source coordinates.
inline Vector content_functional(const TwinConfig& cfg, const NodeId& id, std::size_t t) {
  const std::size_t k = cfg.k();
  const Vector g = encoding_vector(cfg, id).coefficients;
  Vector row(k * k, 0);
  for (std::size_t c = 0; c < k; ++c) {
    // Type 1: sum_c A1(t,c) g_c.  Type 2: sum_c A1(c,t) g_c.  A1(r,c) is coordinate c*k + r.
    const std::size_t coord = id.type == NodeType::type1 ? c * k + t : t * k + c;
    row[coord] = g[c];
  }
  return row;
}

inline void check_spec(const TwinConfig& cfg, const EavesdropperSpec& spec) {
  std::set<NodeId> seen;
  for (const auto* part : {&spec.e1, &spec.e2}) {
    for (const auto& id : *part) {
      cfg.check_node(id);
      if (!seen.insert(id).second) fail(ErrorCode::InvalidIndex, to_string(id) + " listed twice in eavesdropper spec");
    }
  }
  if (spec.size() >= cfg.k()) {
    fail(ErrorCode::BudgetExceeded, "eavesdropper touches " + std::to_string(spec.size()) + " nodes, must be below k");
  }
}

/**
 * Builds M symbolically from the generators: k rows per e1 node (its stored
 * symbols) and k rows per e2 node (one per helper share g_fail^T A g_helper).
 * Values are M applied to the layout's source vector.
 */
inline Observation observe(const TwinConfig& cfg, const SecureLayout& layout, const EavesdropperSpec& spec,
                           std::span<const RepairPlan> plans) {
  check_spec(cfg, spec);
  const std::size_t k = cfg.k();
  if (layout.k != k) fail(ErrorCode::DimensionMismatch, "layout dimension differs from system k");
  FieldMatrix m(cfg.field(), 0, k * k);
  for (const auto& id : spec.e1)
    for (std::size_t t = 0; t < k; ++t) m.append_row(content_functional(cfg, id, t));

  const PrimeField& f = cfg.field();
  for (const auto& id : spec.e2) {
    const RepairPlan* plan = nullptr;
    for (const auto& p : plans)
      if (p.failed == id) plan = &p;
    if (plan == nullptr) fail(ErrorCode::MissingRepairPlan, "no repair plan for observed node " + to_string(id));
    if (plan->helpers.size() != k) fail(ErrorCode::NotEnoughHelpers, "repair plan for " + to_string(id) + " needs k helpers");
    const Vector target = encoding_vector(cfg, id).coefficients;
    for (const auto& h : plan->helpers) {
      if (h.type != opposite(id.type)) fail(ErrorCode::WrongHelperType, to_string(h) + " cannot help " + to_string(id));
      Vector row(k * k, 0);
      for (std::size_t t = 0; t < k; ++t) {
        const Vector part = content_functional(cfg, h, t);
        for (std::size_t c = 0; c < row.size(); ++c) row[c] = f.add(row[c], f.mul(target[t], part[c]));
      }
      m.append_row(row);
    }
  }
  Vector values = mat_vec(m, layout.matrix.flatten());
  return {std::move(m), std::move(values), layout.random_count()};
}

/// Convenience: e2 nodes repaired from the lowest-index opposite-type nodes.
inline std::vector<RepairPlan> default_repair_plans(const TwinConfig& cfg, const EavesdropperSpec& spec) {
  std::vector<RepairPlan> plans;
  for (const auto& id : spec.e2) {
    RepairPlan p{id, {}};
    for (std::size_t j = 1; j <= cfg.k(); ++j) p.helpers.push_back({opposite(id.type), j});
    plans.push_back(std::move(p));
  }
  return plans;
}

inline std::size_t independent_symbol_count(const Observation& obs) { return rank(obs.matrix); }

/// rank(M) - rank(M restricted to random columns), in q-ary symbols.
inline std::size_t leakage(const Observation& obs) {
  const auto cols = obs.random_cols();
  return rank(obs.matrix) - rank(obs.matrix.select_columns(cols));
}

/// Name of source coordinate i (0-based): r{i+1} or a{i+1}.
inline std::string coordinate_label(const Observation& obs, std::size_t coord) {
  return (coord < obs.random_count ? "r" : "a") + std::to_string(coord + 1);
}

/// Coordinates whose unit functional lies in the row space of M.
inline std::vector<std::string> revealed_symbols(const Observation& obs) {
  std::vector<std::string> out;
  if (obs.matrix.rows() == 0) return out;
  Vector unit(obs.source_count(), 0);
  for (std::size_t i = 0; i < obs.source_count(); ++i) {
    unit[i] = 1;
    if (in_row_space(obs.matrix, unit)) out.push_back(coordinate_label(obs, i));
    unit[i] = 0;
  }
  return out;
}

/// Renders a functional over the source coordinates, e.g. "r1+4r2+3r3+2r4".
inline std::string format_functional(std::span<const Residue> row, std::size_t random_count) {
  std::string s;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] == 0) continue;
    if (!s.empty()) s += "+";
    if (row[i] != 1) s += std::to_string(row[i]);
    s += (i < random_count ? "r" : "a") + std::to_string(i + 1);
  }
  return s.empty() ? "0" : s;
}

/// Upper bound on q^(k^2) for exhaustive mutual-information evaluation.
inline constexpr std::uint64_t kMaxEnumeratedSources = 1'000'000;

/**
 * Exact I(f^s; e) in bits by enumerating every source vector f = (r, f^s)
 * under the uniform distribution and tabulating the joint law of (f^s, M f).
 */
inline double brute_force_mi(const Observation& obs) {
  const PrimeField& field = obs.matrix.field();
  const std::uint64_t q = field.modulus();
  const std::size_t n = obs.source_count();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > kMaxEnumeratedSources / q) fail(ErrorCode::InstanceTooLarge, "q^(k^2) exceeds enumeration limit");
    total *= q;
  }

  std::map<std::pair<Vector, Vector>, std::uint64_t> joint;
  std::map<Vector, std::uint64_t> by_payload, by_obs;
  Vector f(n, 0);
  for (std::uint64_t it = 0; it < total; ++it) {
    std::uint64_t x = it;
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = static_cast<Residue>(x % q);
      x /= q;
    }
    Vector payload(f.begin() + static_cast<std::ptrdiff_t>(obs.random_count), f.end());
    Vector e = mat_vec(obs.matrix, f);
    ++by_payload[payload];
    ++by_obs[e];
    ++joint[{std::move(payload), std::move(e)}];
  }

  const double N = static_cast<double>(total);
  auto entropy = [N](const auto& counts) {
    double h = 0.0;
    for (const auto& [key, c] : counts) {
      const double p = static_cast<double>(c) / N;
      h -= p * std::log2(p);
    }
    return h;
  };
  return entropy(by_payload) + entropy(by_obs) - entropy(joint);
}

}  // namespace twinmds

#endif  // TWINMDS_EAVESDROP_HPP
