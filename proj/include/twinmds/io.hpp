// SPDX-License-Identifier: Apache-2.0

#ifndef TWINMDS_IO_HPP
#define TWINMDS_IO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "twinmds/eavesdrop.hpp"
#include "twinmds/error.hpp"
#include "twinmds/field.hpp"
#include "twinmds/mds_code.hpp"
#include "twinmds/secure.hpp"
#include "twinmds/twin.hpp"

namespace twinmds {

using json = nlohmann::json;

namespace detail {

template <typename Fn>
auto parse_guard(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string(what) + ": " + e.what());
  }
}

inline std::vector<std::vector<std::int64_t>> matrix_rows(const FieldMatrix& m) {
  std::vector<std::vector<std::int64_t>> rows(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) rows[i].assign(m.row(i).begin(), m.row(i).end());
  return rows;
}

inline Vector residues(const json& j, const PrimeField& f) {
  Vector v;
  for (const auto& x : j) {
    const auto value = x.get<std::int64_t>();
    v.push_back(f.reduce(value));
  }
  return v;
}

}  // namespace detail

// ---- generator documents: {"p", "n", "k", "generator"} ----

inline json generator_to_json(const MdsCode& code) {
  return {{"p", code.field().modulus()},
          {"n", code.n()},
          {"k", code.k()},
          {"generator", detail::matrix_rows(code.generator())}};
}

/// Parses the matrix of a generator document without checking the MDS property.
inline FieldMatrix generator_matrix_from_json(const json& j) {
  return detail::parse_guard("generator document", [&] {
    const PrimeField field(j.at("p").get<std::uint64_t>());
    auto rows = j.at("generator").get<std::vector<std::vector<std::int64_t>>>();
    FieldMatrix m = FieldMatrix::from_rows(field, rows);
    if (m.rows() != j.at("k").get<std::size_t>() || m.cols() != j.at("n").get<std::size_t>()) {
      fail(ErrorCode::DimensionMismatch, "generator shape disagrees with declared n, k");
    }
    return m;
  });
}

/// Loads an explicit generator; its MDS property is verified.
inline MdsCode generator_from_json(const json& j) { return load_explicit(generator_matrix_from_json(j)); }

// ---- codes and configurations ----

inline json code_to_json(const MdsCode& code) {
  json j = generator_to_json(code);
  j["style"] = std::string(to_string(code.style()));
  if (code.eval_points()) j["points"] = *code.eval_points();
  return j;
}

inline MdsCode code_from_json(const json& j) {
  const auto style = detail::parse_guard("code", [&] { return parse_code_style(j.at("style").get<std::string>()); });
  if (style == CodeStyle::explicit_matrix) return generator_from_json(j);
  return detail::parse_guard("code", [&] {
    const PrimeField field(j.at("p").get<std::uint64_t>());
    std::optional<Vector> pts;
    if (j.contains("points")) pts = detail::residues(j.at("points"), field);
    const auto n = j.at("n").get<std::size_t>();
    const auto k = j.at("k").get<std::size_t>();
    MdsCode code = style == CodeStyle::vandermonde ? make_vandermonde(n, k, field, pts) : make_systematic(n, k, field, pts);
    if (j.contains("generator") && code.generator() != FieldMatrix::from_rows(field, j.at("generator").get<std::vector<std::vector<std::int64_t>>>())) {
      fail(ErrorCode::ParseError, "stored generator does not match its evaluation points");
    }
    return code;
  });
}

inline json config_to_json(const TwinConfig& cfg) {
  return {{"q", cfg.field().modulus()},
          {"k", cfg.k()},
          {"n1", cfg.n1()},
          {"n2", cfg.n2()},
          {"code1", code_to_json(cfg.code(NodeType::type1))},
          {"code2", code_to_json(cfg.code(NodeType::type2))}};
}

inline TwinConfig config_from_json(const json& j) {
  return detail::parse_guard("config", [&] {
    TwinConfig cfg(code_from_json(j.at("code1")), code_from_json(j.at("code2")));
    if (j.contains("q") && j.at("q").get<std::uint64_t>() != cfg.field().modulus()) {
      fail(ErrorCode::FieldMismatch, "declared q disagrees with codes");
    }
    return cfg;
  });
}

// ---- secure layout ----

inline json layout_to_json(const SecureLayout& layout, const PrimeField& field) {
  return {{"q", field.modulus()},       {"k", layout.k},
          {"l1", layout.l1},            {"l2", layout.l2},
          {"seed", layout.seed},        {"random_symbols", layout.random_symbols},
          {"payload", layout.payload}};
}

/// Rebuilds the layout from its seed; recorded random symbols must agree.
inline SecureLayout layout_from_json(const json& j, const PrimeField& field) {
  return detail::parse_guard("layout", [&] {
    const Vector payload = detail::residues(j.at("payload"), field);
    SecureLayout layout = make_secure_layout(field, payload, j.at("l1").get<std::size_t>(), j.at("l2").get<std::size_t>(),
                                             j.at("k").get<std::size_t>(), j.at("seed").get<std::uint64_t>());
    if (j.contains("random_symbols") && detail::residues(j.at("random_symbols"), field) != layout.random_symbols) {
      fail(ErrorCode::ParseError, "recorded random symbols do not match the seed");
    }
    return layout;
  });
}

// ---- system snapshots ----

inline json node_id_to_json(const NodeId& id) { return json::array({type_number(id.type), id.index}); }

inline NodeId node_id_from_json(const json& j) {
  return detail::parse_guard("node id", [&] {
    if (!j.is_array() || j.size() != 2) fail(ErrorCode::ParseError, "node id must be [type, index]");
    const auto index = j.at(1).get<std::int64_t>();
    if (index < 1) fail(ErrorCode::InvalidIndex, "node indices are 1-based");
    return NodeId{node_type_from_int(j.at(0).get<std::int64_t>()), static_cast<std::size_t>(index)};
  });
}

inline json system_to_json(const TwinSystem& sys, const std::optional<SecureLayout>& layout = std::nullopt) {
  json j = config_to_json(sys.config());
  json nodes = json::object();
  for (auto t : {NodeType::type1, NodeType::type2}) {
    json arr = json::array();
    for (const auto& n : sys.nodes(t)) {
      arr.push_back({{"index", n.node.index},
                     {"live", sys.is_live(n.node)},
                     {"symbols", n.symbols ? json(*n.symbols) : json(nullptr)}});
    }
    nodes[t == NodeType::type1 ? "type1" : "type2"] = std::move(arr);
  }
  j["nodes"] = std::move(nodes);
  if (layout) j["layout"] = layout_to_json(*layout, sys.config().field());
  return j;
}

struct Snapshot {
  TwinSystem system;
  std::optional<SecureLayout> layout;
};

inline Snapshot system_from_json(const json& j) {
  return detail::parse_guard("snapshot", [&] {
    TwinSystem sys(config_from_json(j));
    const PrimeField& f = sys.config().field();
    for (auto t : {NodeType::type1, NodeType::type2}) {
      const auto& arr = j.at("nodes").at(t == NodeType::type1 ? "type1" : "type2");
      if (arr.size() != sys.config().count(t)) fail(ErrorCode::DimensionMismatch, "node count disagrees with config");
      for (const auto& n : arr) {
        const NodeId id{t, n.at("index").get<std::size_t>()};
        std::optional<Vector> symbols;
        if (!n.at("symbols").is_null()) symbols = detail::residues(n.at("symbols"), f);
        sys.install({id, symbols});
        if (symbols && !n.at("live").get<bool>()) sys.fail(id);
      }
    }
    std::optional<SecureLayout> layout;
    if (j.contains("layout")) layout = layout_from_json(j.at("layout"), f);
    return Snapshot{std::move(sys), std::move(layout)};
  });
}

// ---- eavesdrop reports ----

inline json spec_to_json(const EavesdropperSpec& spec) {
  json e1 = json::array(), e2 = json::array();
  for (const auto& id : spec.e1) e1.push_back(node_id_to_json(id));
  for (const auto& id : spec.e2) e2.push_back(node_id_to_json(id));
  return {{"e1", e1}, {"e2", e2}};
}

inline EavesdropperSpec spec_from_json(const json& j) {
  EavesdropperSpec spec;
  detail::parse_guard("eavesdropper spec", [&] {
    if (j.contains("e1"))
      for (const auto& x : j.at("e1")) spec.e1.push_back(node_id_from_json(x));
    if (j.contains("e2"))
      for (const auto& x : j.at("e2")) spec.e2.push_back(node_id_from_json(x));
    return 0;
  });
  return spec;
}

inline json plans_to_json(const std::vector<RepairPlan>& plans) {
  json arr = json::array();
  for (const auto& p : plans) {
    json helpers = json::array();
    for (const auto& h : p.helpers) helpers.push_back(node_id_to_json(h));
    arr.push_back({{"failed", node_id_to_json(p.failed)}, {"helpers", helpers}});
  }
  return arr;
}

inline std::vector<RepairPlan> plans_from_json(const json& j) {
  std::vector<RepairPlan> plans;
  detail::parse_guard("repair plans", [&] {
    for (const auto& p : j) {
      RepairPlan plan{node_id_from_json(p.at("failed")), {}};
      for (const auto& h : p.at("helpers")) plan.helpers.push_back(node_id_from_json(h));
      plans.push_back(std::move(plan));
    }
    return 0;
  });
  return plans;
}

struct EavesdropReport {
  EavesdropperSpec spec;
  std::vector<RepairPlan> plans;
  std::size_t rank = 0;
  std::size_t leakage = 0;
  std::vector<std::string> revealed;
  SecrecyGuarantee guarantee;
};

inline EavesdropReport eavesdrop_report(const TwinConfig& cfg, const SecureLayout& layout, const EavesdropperSpec& spec,
                                        const std::vector<RepairPlan>& plans) {
  const Observation obs = observe(cfg, layout, spec, plans);
  return {spec,
          plans,
          independent_symbol_count(obs),
          leakage(obs),
          revealed_symbols(obs),
          guaranteed_secure_set(cfg, layout, spec.e1, spec.e2)};
}

inline json report_to_json(const EavesdropReport& r) {
  json j = spec_to_json(r.spec);
  j["plans"] = plans_to_json(r.plans);
  j["rank"] = r.rank;
  j["leakage"] = r.leakage;
  j["revealed"] = r.revealed;
  j["guaranteed"] = r.guarantee.guaranteed;
  j["reason"] = std::string(to_string(r.guarantee.reason));
  return j;
}

}  // namespace twinmds

#endif  // TWINMDS_IO_HPP
