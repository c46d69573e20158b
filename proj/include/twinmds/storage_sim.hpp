// SPDX-License-Identifier: Apache-2.0

#ifndef TWINMDS_STORAGE_SIM_HPP
#define TWINMDS_STORAGE_SIM_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "twinmds/combinatorics.hpp"
#include "twinmds/eavesdrop.hpp"
#include "twinmds/io.hpp"
#include "twinmds/secure.hpp"
#include "twinmds/twin.hpp"

namespace twinmds {

struct FailEvent {
  NodeId node;
};
/// Empty helper list means the default policy: lowest-index live opposite-type nodes.
struct RepairEvent {
  NodeId node;
  std::vector<NodeId> helpers;
};
struct ReconstructEvent {
  NodeType type = NodeType::type1;
  std::vector<std::size_t> nodes;
};
struct EavesdropEvent {
  EavesdropperSpec spec;
  std::vector<RepairPlan> plans;
};
struct DeployEvent {
  std::vector<std::size_t> seeds1;
  std::vector<std::size_t> seeds2;
};

using ScenarioEvent = std::variant<FailEvent, RepairEvent, ReconstructEvent, EavesdropEvent, DeployEvent>;

struct Scenario {
  TwinConfig config;
  SecureLayout layout;
  std::uint64_t seed = 0;
  std::vector<ScenarioEvent> events;
};

struct LogRecord {
  std::size_t seq = 0;
  std::string event;
  std::size_t symbols = 0;
  bool ok = true;
  std::string error;
  json detail = json::object();
};

struct EventLog {
  std::vector<LogRecord> records;

  std::size_t total_symbols() const {
    std::size_t s = 0;
    for (const auto& r : records) s += r.symbols;
    return s;
  }
  bool has_errors() const {
    for (const auto& r : records)
      if (!r.ok) return true;
    return false;
  }
};

inline json record_to_json(const LogRecord& r) {
  json j = r.detail;
  j["seq"] = r.seq;
  j["event"] = r.event;
  j["symbols"] = r.symbols;
  j["status"] = r.ok ? "ok" : "error";
  if (!r.ok) j["error"] = r.error;
  return j;
}

/// One JSON object per line.
inline std::string log_to_jsonl(const EventLog& log) {
  std::string out;
  for (const auto& r : log.records) out += record_to_json(r).dump() + "\n";
  return out;
}

/**
 * Static checks before anything runs: every index in range, failures hit
 * live nodes, repairs hit currently-failed nodes (assuming earlier repairs
 * succeed), eavesdropper specs within budget.
 */
inline void validate_scenario(const Scenario& sc) {
  const auto& cfg = sc.config;
  std::set<NodeId> failed;
  auto bad = [](const std::string& what) { fail(ErrorCode::MalformedScenario, what); };
  auto check = [&](const NodeId& id) {
    if (id.index < 1 || id.index > cfg.count(id.type)) bad("node " + to_string(id) + " does not exist");
  };
  for (std::size_t i = 0; i < sc.events.size(); ++i) {
    const std::string where = "event " + std::to_string(i) + ": ";
    std::visit(
        [&](const auto& ev) {
          using T = std::decay_t<decltype(ev)>;
          if constexpr (std::is_same_v<T, FailEvent>) {
            check(ev.node);
            if (!failed.insert(ev.node).second) bad(where + to_string(ev.node) + " is already failed");
          } else if constexpr (std::is_same_v<T, RepairEvent>) {
            check(ev.node);
            for (const auto& h : ev.helpers) check(h);
            if (!ev.helpers.empty() && ev.helpers.size() != cfg.k()) bad(where + "repair lists other than k helpers");
            if (failed.erase(ev.node) == 0) bad(where + to_string(ev.node) + " is not failed");
          } else if constexpr (std::is_same_v<T, ReconstructEvent>) {
            for (auto j : ev.nodes) check({ev.type, j});
            if (!ev.nodes.empty() && ev.nodes.size() != cfg.k()) bad(where + "reconstruction lists other than k nodes");
          } else if constexpr (std::is_same_v<T, EavesdropEvent>) {
            for (const auto& id : ev.spec.e1) check(id);
            for (const auto& id : ev.spec.e2) check(id);
            for (const auto& p : ev.plans)
              for (const auto& h : p.helpers) check(h);
            try {
              check_spec(cfg, ev.spec);
            } catch (const Error& e) {
              bad(where + e.what());
            }
          } else {
            for (auto j : ev.seeds1) check({NodeType::type1, j});
            for (auto j : ev.seeds2) check({NodeType::type2, j});
            failed.clear();
          }
        },
        sc.events[i]);
  }
}

struct RunResult {
  EventLog log;
  TwinSystem system;
};

namespace detail {

inline json node_list(const std::vector<NodeId>& ids) {
  json a = json::array();
  for (const auto& id : ids) a.push_back(node_id_to_json(id));
  return a;
}

inline std::vector<RepairPlan> live_repair_plans(const TwinSystem& sys, const EavesdropEvent& ev) {
  std::vector<RepairPlan> plans = ev.plans;
  for (const auto& id : ev.spec.e2) {
    bool have = false;
    for (const auto& p : plans) have = have || p.failed == id;
    if (have) continue;
    RepairPlan p{id, {}};
    auto live = sys.live_indices(opposite(id.type));
    for (std::size_t j = 1; live.size() < sys.config().k() && j <= sys.config().count(opposite(id.type)); ++j) {
      if (std::find(live.begin(), live.end(), j) == live.end()) live.push_back(j);
    }
    std::sort(live.begin(), live.end());
    for (std::size_t i = 0; i < sys.config().k(); ++i) p.helpers.push_back({opposite(id.type), live[i]});
    plans.push_back(std::move(p));
  }
  return plans;
}

}  // namespace detail

/**
 * Drives the encoded system through the scenario's events. Runtime faults
 * (starvation, dead helpers) become error records and the run continues.
 */
inline RunResult run(const Scenario& sc) {
  validate_scenario(sc);
  const TwinConfig& cfg = sc.config;
  const std::size_t k = cfg.k();
  RunResult res{{}, encode_system(cfg, sc.layout.matrix)};
  TwinSystem& sys = res.system;

  for (std::size_t i = 0; i < sc.events.size(); ++i) {
    LogRecord rec;
    rec.seq = i;
    std::visit(
        [&](const auto& ev) {
          using T = std::decay_t<decltype(ev)>;
          try {
            if constexpr (std::is_same_v<T, FailEvent>) {
              rec.event = "fail";
              rec.detail["node"] = node_id_to_json(ev.node);
              sys.fail(ev.node);
            } else if constexpr (std::is_same_v<T, RepairEvent>) {
              rec.event = "repair";
              rec.detail["node"] = node_id_to_json(ev.node);
              std::vector<NodeId> helpers = ev.helpers;
              if (helpers.empty()) {
                const auto live = sys.live_indices(opposite(ev.node.type));
                if (live.size() < k) {
                  fail(ErrorCode::RepairStarvation, std::to_string(live.size()) + " live helpers, need " + std::to_string(k));
                }
                for (std::size_t h = 0; h < k; ++h) helpers.push_back({opposite(ev.node.type), live[h]});
              }
              rec.detail["helpers"] = detail::node_list(helpers);
              const auto r = repair(sys, ev.node, helpers);
              rec.symbols = r.symbols_downloaded;
              rec.detail["verified"] = *r.content.symbols == node_content_for(cfg, sc.layout.matrix, ev.node);
            } else if constexpr (std::is_same_v<T, ReconstructEvent>) {
              rec.event = "reconstruct";
              std::vector<NodeId> nodes;
              for (auto j : ev.nodes) nodes.push_back({ev.type, j});
              if (nodes.empty()) nodes = default_nodes(sys, ev.type, ErrorCode::NotEnoughLiveNodes);
              rec.detail["nodes"] = detail::node_list(nodes);
              const auto r = reconstruct(sys, nodes);
              rec.symbols = r.symbols_downloaded;
              rec.detail["verified"] = r.message.a1 == sc.layout.matrix.a1;
            } else if constexpr (std::is_same_v<T, EavesdropEvent>) {
              rec.event = "eavesdrop";
              const auto plans = detail::live_repair_plans(sys, ev);
              rec.detail["report"] = report_to_json(eavesdrop_report(cfg, sc.layout, ev.spec, plans));
            } else {
              rec.event = "deploy";
              auto d = deploy(cfg, sc.layout.matrix, ev.seeds1, ev.seeds2);
              rec.symbols = d.symbols_transferred;
              rec.detail["repairs"] = d.repairs;
              rec.detail["verified"] = d.system == encode_system(cfg, sc.layout.matrix);
              sys = std::move(d.system);
            }
          } catch (const Error& e) {
            rec.ok = false;
            rec.error = std::string(to_string(e.code()));
            rec.symbols = 0;
          }
        },
        sc.events[i]);
    res.log.records.push_back(std::move(rec));
  }
  return res;
}

// ---- scenario files ----

namespace detail {

inline std::size_t index_from_json(const json& j) {
  const auto v = j.get<std::int64_t>();
  if (v < 1) fail(ErrorCode::MalformedScenario, "node indices are 1-based, got " + std::to_string(v));
  return static_cast<std::size_t>(v);
}

inline std::vector<std::size_t> index_list(const json& j) {
  std::vector<std::size_t> out;
  for (const auto& x : j) out.push_back(index_from_json(x));
  return out;
}

inline NodeId scenario_node(const json& ev) {
  return {node_type_from_int(ev.at("type").get<std::int64_t>()), index_from_json(ev.at("index"))};
}

inline MdsCode scenario_code(const json& j, CodeStyle style, std::size_t n, std::size_t k, const PrimeField& f,
                             const char* key) {
  if (style == CodeStyle::vandermonde) return make_vandermonde(n, k, f);
  if (style == CodeStyle::systematic) return make_systematic(n, k, f);
  FieldMatrix g = FieldMatrix::from_rows(f, j.at("generators").at(key).get<std::vector<std::vector<std::int64_t>>>());
  MdsCode code = j.value("check_mds", true) ? load_explicit(std::move(g))
                                            : MdsCode(std::move(g), CodeStyle::explicit_matrix, std::nullopt);
  if (code.n() != n || code.k() != k) fail(ErrorCode::DimensionMismatch, std::string(key) + " shape disagrees with n, k");
  return code;
}

inline ScenarioEvent event_from_json(const json& ev) {
  const auto op = ev.at("op").get<std::string>();
  if (op == "fail") return FailEvent{scenario_node(ev)};
  if (op == "repair") {
    RepairEvent r{scenario_node(ev), {}};
    if (ev.contains("helpers")) {
      for (auto j : index_list(ev.at("helpers"))) r.helpers.push_back({opposite(r.node.type), j});
    }
    return r;
  }
  if (op == "reconstruct") {
    ReconstructEvent r{node_type_from_int(ev.at("type").get<std::int64_t>()), {}};
    if (ev.contains("nodes")) r.nodes = index_list(ev.at("nodes"));
    return r;
  }
  if (op == "eavesdrop") {
    EavesdropEvent e{spec_from_json(ev), {}};
    if (ev.contains("plans")) e.plans = plans_from_json(ev.at("plans"));
    return e;
  }
  if (op == "deploy") return DeployEvent{index_list(ev.at("seed1")), index_list(ev.at("seed2"))};
  fail(ErrorCode::MalformedScenario, "unknown event op '" + op + "'");
}

}  // namespace detail

/// Salt separating the payload stream from the random-symbol stream of the same seed.
inline constexpr std::uint64_t kPayloadSeedSalt = 0x9E3779B97F4A7C15ULL;

/**
 * Scenario document:
 *   {"q", "k", "n1", "n2", "style", "generators": {"g1", "g2"} (explicit only),
 *    "check_mds" (explicit only, default true; false skips the all-minors check),
 *    "seed", "l1", "l2", "payload" (optional; drawn from the seed when absent),
 *    "events": [{"op": "fail"|"repair"|"reconstruct"|"eavesdrop"|"deploy", ...}]}
 * Any structural problem is reported as MalformedScenario.
 */
inline Scenario scenario_from_json(const json& j) {
  try {
    const PrimeField field(j.at("q").get<std::uint64_t>());
    const auto k = j.at("k").get<std::size_t>();
    const auto n1 = j.at("n1").get<std::size_t>();
    const auto n2 = j.at("n2").get<std::size_t>();
    const CodeStyle style = parse_code_style(j.value("style", std::string("vandermonde")));
    TwinConfig cfg(detail::scenario_code(j, style, n1, k, field, "g1"), detail::scenario_code(j, style, n2, k, field, "g2"));
    const auto seed = j.value("seed", std::uint64_t{0});
    const auto l1 = j.value("l1", std::size_t{0});
    const auto l2 = j.value("l2", std::size_t{0});
    Vector payload;
    if (j.contains("payload")) {
      payload = detail::residues(j.at("payload"), field);
    } else {
      payload = SymbolSource(field, seed ^ kPayloadSeedSalt).draw(secure_capacity_twin(k, l1, l2));
    }
    SecureLayout layout = make_secure_layout(field, payload, l1, l2, k, seed);
    std::vector<ScenarioEvent> events;
    for (const auto& ev : j.value("events", json::array())) events.push_back(detail::event_from_json(ev));
    Scenario sc{std::move(cfg), std::move(layout), seed, std::move(events)};
    validate_scenario(sc);
    return sc;
  } catch (const json::exception& e) {
    fail(ErrorCode::MalformedScenario, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedScenario) throw;
    fail(ErrorCode::MalformedScenario, e.what());
  }
}

// ---- eavesdropper sweeps ----

struct SweepRow {
  EavesdropperSpec spec;
  std::size_t rank = 0;
  std::size_t leakage = 0;
  bool guaranteed = false;
};

struct SweepSummary {
  std::vector<SweepRow> rows;
  /// Worst leakage per (|e1|, |e2|).
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> worst;
  bool sampled = false;
};

struct SweepOptions {
  bool same_type_only = false;
  std::uint64_t seed = 0;
  std::uint64_t enumeration_limit = 100'000;
  std::size_t samples = 1'000;
};

/**
 * Leakage, rank and guarantee flag for every eavesdropper with
 * |e1| + |e2| <= max_budget (< k). Falls back to seeded sampling when the
 * number of specs exceeds the enumeration limit. e2 nodes are repaired from
 * the lowest-index opposite-type nodes.
 */
inline SweepSummary sweep_eavesdroppers(const TwinConfig& cfg, const SecureLayout& layout, std::size_t max_budget,
                                        const SweepOptions& opt = {}) {
  if (max_budget >= cfg.k()) fail(ErrorCode::BudgetExceeded, "sweep budget must be below k");
  std::vector<NodeId> all;
  for (auto t : {NodeType::type1, NodeType::type2})
    for (std::size_t j = 1; j <= cfg.count(t); ++j) all.push_back({t, j});

  std::vector<std::pair<std::size_t, std::size_t>> shapes;
  std::uint64_t total = 0;
  for (std::size_t a = 0; a <= max_budget; ++a) {
    for (std::size_t b = 0; a + b <= max_budget; ++b) {
      shapes.push_back({a, b});
      total += binomial(all.size(), a) * binomial(all.size() - a, b);
    }
  }

  SweepSummary summary;
  auto consider = [&](EavesdropperSpec spec) {
    if (opt.same_type_only) {
      std::set<NodeType> types;
      for (const auto& id : spec.e1) types.insert(id.type);
      for (const auto& id : spec.e2) types.insert(id.type);
      if (types.size() > 1) return;
    }
    const auto plans = default_repair_plans(cfg, spec);
    const Observation obs = observe(cfg, layout, spec, plans);
    SweepRow row{spec, independent_symbol_count(obs), leakage(obs),
                 guaranteed_secure_set(cfg, layout, spec.e1, spec.e2).guaranteed};
    auto& w = summary.worst[{spec.e1.size(), spec.e2.size()}];
    w = std::max(w, row.leakage);
    summary.rows.push_back(std::move(row));
  };

  if (total <= opt.enumeration_limit) {
    for (auto [a, b] : shapes) {
      for_each_combination(all.size(), a, [&](const std::vector<std::size_t>& first) {
        std::vector<NodeId> rest;
        std::set<std::size_t> used(first.begin(), first.end());
        for (std::size_t i = 0; i < all.size(); ++i)
          if (!used.contains(i)) rest.push_back(all[i]);
        for_each_combination(rest.size(), b, [&](const std::vector<std::size_t>& second) {
          EavesdropperSpec spec;
          for (auto i : first) spec.e1.push_back(all[i]);
          for (auto i : second) spec.e2.push_back(rest[i]);
          consider(std::move(spec));
        });
      });
    }
    return summary;
  }

  summary.sampled = true;
  std::mt19937_64 rng(opt.seed);
  for (std::size_t s = 0; s < opt.samples; ++s) {
    const auto [a, b] = shapes[rng() % shapes.size()];
    std::vector<NodeId> pool = all;
    for (std::size_t i = 0; i + 1 < pool.size(); ++i) std::swap(pool[i], pool[i + rng() % (pool.size() - i)]);
    EavesdropperSpec spec;
    spec.e1.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(a));
    spec.e2.assign(pool.begin() + static_cast<std::ptrdiff_t>(a), pool.begin() + static_cast<std::ptrdiff_t>(a + b));
    std::sort(spec.e1.begin(), spec.e1.end());
    std::sort(spec.e2.begin(), spec.e2.end());
    consider(std::move(spec));
  }
  return summary;
}

}  // namespace twinmds

#endif  // TWINMDS_STORAGE_SIM_HPP
