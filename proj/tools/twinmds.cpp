// SPDX-License-Identifier: Apache-2.0
//
// twinmds command-line tool. Exit codes: 0 success, 1 domain failure, 2 usage or malformed input.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twinmds/twinmds.hpp"

namespace {

using namespace twinmds;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

/// Thrown for unreadable files and bad flag values; maps to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CliConfig {
  std::uint64_t q = 11;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t k = 4;
  std::string style = "vandermonde";
  std::uint64_t seed = 0;
  std::size_t l1 = 0;
  std::size_t l2 = 0;
  std::string in;
  std::string out;
  std::string g1;
  std::string g2;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

void add_system_options(CLI::App* cmd, CliConfig& c) {
  cmd->add_option("--q", c.q, "Field modulus (prime)")->capture_default_str();
  cmd->add_option("--n1", c.n1, "Number of Type 1 nodes (default 2k-1)");
  cmd->add_option("--n2", c.n2, "Number of Type 2 nodes (default 2k-1)");
  cmd->add_option("--k", c.k, "Code dimension")->capture_default_str();
  cmd->add_option("--style", c.style, "Generator style")
      ->check(CLI::IsMember({"vandermonde", "systematic", "explicit"}))
      ->capture_default_str();
  cmd->add_option("--g1", c.g1, "Type 1 generator JSON (explicit style)");
  cmd->add_option("--g2", c.g2, "Type 2 generator JSON (explicit style)");
  cmd->add_option("--seed", c.seed, "Seed for random symbols")->capture_default_str();
  cmd->add_option("--l1", c.l1, "Stored-data eavesdropper budget")->capture_default_str();
  cmd->add_option("--l2", c.l2, "Repair-download eavesdropper budget")->capture_default_str();
}

TwinConfig build_config(const CliConfig& c) {
  const CodeStyle style = parse_code_style(c.style);
  if (style == CodeStyle::explicit_matrix) {
    if (c.g1.empty() || c.g2.empty()) throw UsageError("explicit style needs --g1 and --g2");
    TwinConfig cfg(generator_from_json(read_json(c.g1)), generator_from_json(read_json(c.g2)));
    if (cfg.field().modulus() != c.q) fail(ErrorCode::FieldMismatch, "generator files disagree with --q");
    return cfg;
  }
  const PrimeField field(c.q);
  const std::size_t n1 = c.n1 ? c.n1 : 2 * c.k - 1;
  const std::size_t n2 = c.n2 ? c.n2 : 2 * c.k - 1;
  if (style == CodeStyle::systematic) return {make_systematic(n1, c.k, field), make_systematic(n2, c.k, field)};
  return {make_vandermonde(n1, c.k, field), make_vandermonde(n2, c.k, field)};
}

/// Payload from --in ({"payload": [...]}) or drawn from the seed.
SecureLayout build_layout(const CliConfig& c, const TwinConfig& cfg) {
  const std::size_t capacity = secure_capacity_twin(cfg.k(), c.l1, c.l2);
  Vector payload;
  if (!c.in.empty()) {
    const json j = read_json(c.in);
    if (!j.contains("payload")) throw UsageError(c.in + " has no payload");
    payload = detail::residues(j.at("payload"), cfg.field());
  } else {
    payload = SymbolSource(cfg.field(), c.seed ^ kPayloadSeedSalt).draw(capacity);
  }
  return make_secure_layout(cfg.field(), payload, c.l1, c.l2, cfg.k(), c.seed);
}

/// Parses "2:3" or "T2N3" as a node id.
NodeId parse_node(const std::string& s) {
  std::size_t type = 0, index = 0;
  char sep = 0;
  std::istringstream in(s);
  if (!s.empty() && (s[0] == 'T' || s[0] == 't')) {
    char t = 0, n = 0;
    in >> t >> type >> n >> index;
    if (!in || (n != 'N' && n != 'n')) throw UsageError("bad node id '" + s + "'");
  } else {
    in >> type >> sep >> index;
    if (!in || sep != ':') throw UsageError("bad node id '" + s + "'");
  }
  if (index < 1 || (type != 1 && type != 2)) throw UsageError("bad node id '" + s + "'");
  return {type == 1 ? NodeType::type1 : NodeType::type2, index};
}

std::vector<NodeId> parse_nodes(const std::vector<std::string>& v) {
  std::vector<NodeId> out;
  for (const auto& s : v) out.push_back(parse_node(s));
  return out;
}

Snapshot load_snapshot(const std::string& path) {
  if (path.empty()) throw UsageError("--in snapshot is required");
  return system_from_json(read_json(path));
}

NodeType parse_type(int t) {
  if (t != 1 && t != 2) throw UsageError("--type must be 1 or 2");
  return t == 1 ? NodeType::type1 : NodeType::type2;
}

// ---- commands ----

int cmd_encode(const CliConfig& c) {
  const TwinConfig cfg = build_config(c);
  const SecureLayout layout = build_layout(c, cfg);
  if (cfg.below_recommended_connectivity()) {
    std::cerr << "note: fewer than 2k-1 nodes per type; repair availability is reduced\n";
  }
  emit(c.out, system_to_json(encode_system(cfg, layout.matrix), layout).dump(2) + "\n");
  return kExitOk;
}

int cmd_reconstruct(const CliConfig& c, int type, const std::vector<std::size_t>& indices) {
  const Snapshot snap = load_snapshot(c.in);
  const NodeType t = parse_type(type);
  std::vector<NodeId> nodes;
  for (auto j : indices) nodes.push_back({t, j});
  const Reconstruction r = nodes.empty() ? reconstruct(snap.system, t) : reconstruct(snap.system, nodes);
  json out = {{"symbols", r.symbols_downloaded}, {"message", r.message.flatten()}};
  if (snap.layout) out["payload"] = strip_random(*snap.layout, r.message);
  emit(c.out, out.dump(2) + "\n");
  return kExitOk;
}

int cmd_repair(const CliConfig& c, const std::string& node, const std::vector<std::string>& helpers) {
  Snapshot snap = load_snapshot(c.in);
  const NodeId id = parse_node(node);
  const auto hs = parse_nodes(helpers);
  const RepairResult r = hs.empty() ? repair(snap.system, id) : repair(snap.system, id, hs);
  std::cerr << "repaired " << to_string(id) << " with " << r.symbols_downloaded << " symbols\n";
  emit(c.out, system_to_json(snap.system, snap.layout).dump(2) + "\n");
  return kExitOk;
}

int cmd_eavesdrop(const CliConfig& c, const std::vector<std::string>& e1, const std::vector<std::string>& e2) {
  const Snapshot snap = load_snapshot(c.in);
  if (!snap.layout) throw UsageError("snapshot carries no layout");
  EavesdropperSpec spec{parse_nodes(e1), parse_nodes(e2)};
  const auto& cfg = snap.system.config();
  emit(c.out, report_to_json(eavesdrop_report(cfg, *snap.layout, spec, default_repair_plans(cfg, spec))).dump(2) + "\n");
  return kExitOk;
}

int cmd_sweep(const CliConfig& c, std::size_t budget, bool same_type) {
  const TwinConfig cfg = build_config(c);
  const SecureLayout layout = build_layout(c, cfg);
  SweepOptions opt;
  opt.same_type_only = same_type;
  opt.seed = c.seed;
  const SweepSummary s = sweep_eavesdroppers(cfg, layout, budget, opt);
  json rows = json::array();
  for (const auto& r : s.rows) {
    json row = spec_to_json(r.spec);
    row["rank"] = r.rank;
    row["leakage"] = r.leakage;
    row["guaranteed"] = r.guaranteed;
    rows.push_back(std::move(row));
  }
  json worst = json::array();
  for (const auto& [shape, v] : s.worst) worst.push_back({{"e1", shape.first}, {"e2", shape.second}, {"leakage", v}});
  emit(c.out, json{{"sampled", s.sampled}, {"worst", worst}, {"rows", rows}}.dump(2) + "\n");
  return kExitOk;
}

int cmd_bounds(const std::string& kind, const SeriesRange& range, const std::string& out) {
  emit(out, series_to_csv(comparison_series(parse_series_kind(kind), range)));
  return kExitOk;
}

int cmd_scenario(const CliConfig& c) {
  if (c.in.empty()) throw UsageError("--in scenario is required");
  const Scenario sc = scenario_from_json(read_json(c.in));
  const RunResult r = run(sc);
  emit(c.out, log_to_jsonl(r.log));
  return r.log.has_errors() ? kExitDomain : kExitOk;
}

// ---- worked-example reproduction ----

struct GoldenCheck {
  std::string name;
  std::string expected;
  std::string actual;
};

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return s;
}

/// Worked-example node table, hand-transcribed: row t of each node's stored symbols.
const std::vector<std::pair<NodeId, std::vector<std::string>>>& worked_node_table() {
  static const std::vector<std::pair<NodeId, std::vector<std::string>>> table = {
      {{NodeType::type1, 1}, {"r1", "r2", "r3", "r4"}},
      {{NodeType::type1, 2}, {"r5", "r6", "r7", "r8"}},
      {{NodeType::type1, 3}, {"a9", "a10", "a11", "a12"}},
      {{NodeType::type1, 4}, {"a13", "a14", "a15", "a16"}},
      {{NodeType::type1, 5}, {"r1+r5+a9+a13", "r2+r6+a10+a14", "r3+r7+a11+a15", "r4+r8+a12+a16"}},
      {{NodeType::type2, 1}, {"r1", "r5", "a9", "a13"}},
      {{NodeType::type2, 2}, {"r2", "r6", "a10", "a14"}},
      {{NodeType::type2, 3}, {"r3", "r7", "a11", "a15"}},
      {{NodeType::type2, 4}, {"r1+r2+r3+r4", "r5+r6+r7+r8", "a9+a10+a11+a12", "a13+a14+a15+a16"}},
      {{NodeType::type2, 5}, {"r1+4r2+3r3+2r4", "r5+4r6+3r7+2r8", "a9+4a10+3a11+2a12", "a13+4a14+3a15+2a16"}},
      {{NodeType::type2, 6}, {"r1+3r2+4r3+2r4", "r5+3r6+4r7+2r8", "a9+3a10+4a11+2a12", "a13+3a14+4a15+2a16"}},
  };
  return table;
}

int cmd_demo(const std::string& g1_path, const std::string& g2_path) {
  auto load = [](const std::string& path, const char* fallback) {
    return generator_matrix_from_json(path.empty() ? json::parse(fallback) : read_json(path));
  };
  const FieldMatrix g1 =
      load(g1_path, R"({"p":11,"n":5,"k":4,"generator":[[1,0,0,0,1],[0,1,0,0,1],[0,0,1,0,1],[0,0,0,1,1]]})");
  const FieldMatrix g2 =
      load(g2_path, R"({"p":11,"n":6,"k":4,"generator":[[1,0,0,1,1,1],[0,1,0,1,4,3],[0,0,1,1,3,4],[0,0,0,1,2,2]]})");
  if (g1.rows() != 4 || g1.cols() != 5 || g2.rows() != 4 || g2.cols() != 6 || g1.field().modulus() != 11 ||
      g2.field().modulus() != 11) {
    fail(ErrorCode::DimensionMismatch, "the worked example needs a 4x5 and a 4x6 generator over F_11");
  }

  std::vector<GoldenCheck> checks;
  // The MDS property is reported rather than enforced so the remaining rows still run.
  auto mds_status = [](const FieldMatrix& g) {
    const auto bad = find_singular_minor(g);
    if (!bad) return std::string("MDS");
    std::string cols;
    for (auto c : *bad) cols += (cols.empty() ? "" : ",") + std::to_string(c + 1);
    return "NotMds (singular columns {" + cols + "})";
  };
  checks.push_back({"G1 all-minors check", "MDS", mds_status(g1)});
  checks.push_back({"G2 all-minors check", "MDS", mds_status(g2)});

  const TwinConfig cfg(MdsCode(g1, CodeStyle::explicit_matrix, std::nullopt),
                       MdsCode(g2, CodeStyle::explicit_matrix, std::nullopt));
  const PrimeField& f = cfg.field();
  const SecureLayout layout = make_secure_layout(f, SymbolSource(f, 1).draw(8), 1, 1, 4, 0);

  for (const auto& [id, rows] : worked_node_table()) {
    std::vector<std::string> actual;
    for (std::size_t t = 0; t < 4; ++t) actual.push_back(format_functional(content_functional(cfg, id, t), 8));
    checks.push_back({"stored " + to_string(id), join(rows), join(actual)});
  }

  auto report = [&](const EavesdropperSpec& spec, const std::vector<RepairPlan>& plans) {
    return eavesdrop_report(cfg, layout, spec, plans);
  };
  const NodeId t1n1{NodeType::type1, 1}, t1n2{NodeType::type1, 2}, t1n3{NodeType::type1, 3};
  const NodeId t2n1{NodeType::type2, 1}, t2n2{NodeType::type2, 2};

  const auto r6i = report({{t1n1, t2n2}, {}}, {});
  checks.push_back({"mixed-type pair independent symbols", "7", std::to_string(r6i.rank)});
  checks.push_back({"mixed-type pair revealed", "r1,r2,r3,r4,r6,a10,a14", join(r6i.revealed)});
  checks.push_back({"mixed-type pair leakage", "2", std::to_string(r6i.leakage)});

  const auto r6ii = report({{t1n2, t1n3}, {}}, {});
  checks.push_back({"same-type pair independent symbols", "8", std::to_string(r6ii.rank)});
  checks.push_back({"same-type pair leakage", "4", std::to_string(r6ii.leakage)});

  const std::vector<RepairPlan> plans = {
      {t2n2, {{NodeType::type1, 1}, {NodeType::type1, 3}, {NodeType::type1, 4}, {NodeType::type1, 5}}}};
  const auto r7 = report({{t2n1}, {t2n2}}, plans);
  checks.push_back({"repair observer independent symbols", "8", std::to_string(r7.rank)});
  checks.push_back({"repair observer revealed count", "8", std::to_string(r7.revealed.size())});
  checks.push_back({"repair observer residual secrecy", "yes", r7.leakage < 8 ? "yes" : "no"});

  TwinSystem sys = encode_system(cfg, layout.matrix);
  sys.fail(t2n2);
  const auto rep = repair(sys, t2n2, plans.front().helpers);
  checks.push_back({"repair symbols", "4", std::to_string(rep.symbols_downloaded)});
  checks.push_back({"repaired content", "match",
                    *rep.content.symbols == node_content_for(cfg, layout.matrix, t2n2) ? "match" : "differ"});

  std::size_t failed = 0;
  for (const auto& ch : checks) {
    const bool ok = ch.expected == ch.actual;
    failed += ok ? 0 : 1;
    std::cout << (ok ? "PASS  " : "FAIL  ") << ch.name << ": " << ch.actual;
    if (!ok) std::cout << " (expected " << ch.expected << ")";
    std::cout << "\n";
  }
  std::cout << (checks.size() - failed) << "/" << checks.size() << " golden checks passed\n";
  return failed == 0 ? kExitOk : kExitDomain;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twin-code MDS storage: encode, repair, eavesdropper analysis and capacity bounds"};
  app.require_subcommand(1);
  CliConfig cfg;

  auto* encode = app.add_subcommand("encode", "Encode a payload into a system snapshot");
  add_system_options(encode, cfg);
  encode->add_option("--in", cfg.in, "JSON file with a \"payload\" array");
  encode->add_option("--out", cfg.out, "Snapshot output path (default stdout)");

  int type = 1;
  std::vector<std::size_t> indices;
  auto* recon = app.add_subcommand("reconstruct", "Recover the message from k same-type nodes");
  recon->add_option("--in", cfg.in, "Snapshot")->required();
  recon->add_option("--type", type, "Node type (1 or 2)")->capture_default_str();
  recon->add_option("--nodes", indices, "Node indices (default lowest live)");
  recon->add_option("--out", cfg.out, "Output path");

  std::string node;
  std::vector<std::string> helpers;
  auto* rep = app.add_subcommand("repair", "Regenerate a node from opposite-type helpers");
  rep->add_option("--in", cfg.in, "Snapshot")->required();
  rep->add_option("--node", node, "Failed node, e.g. 2:2 or T2N2")->required();
  rep->add_option("--helpers", helpers, "Helper nodes (default lowest live)");
  rep->add_option("--out", cfg.out, "Updated snapshot output path");

  std::vector<std::string> e1, e2;
  auto* eav = app.add_subcommand("eavesdrop", "Leakage report for an eavesdropper");
  eav->add_option("--in", cfg.in, "Snapshot with layout")->required();
  eav->add_option("--e1", e1, "Nodes whose storage is read");
  eav->add_option("--e2", e2, "Nodes whose repair downloads are observed");
  eav->add_option("--out", cfg.out, "Report output path");

  std::size_t budget = 1;
  bool same_type = false;
  auto* sweep = app.add_subcommand("sweep", "Leakage over all eavesdroppers within a budget");
  add_system_options(sweep, cfg);
  sweep->add_option("--budget", budget, "Largest |e1|+|e2|")->capture_default_str();
  sweep->add_flag("--same-type", same_type, "Only eavesdroppers confined to one node type");
  sweep->add_option("--in", cfg.in, "JSON file with a \"payload\" array");
  sweep->add_option("--out", cfg.out, "Output path");

  std::string kind;
  SeriesRange range;
  auto* bounds = app.add_subcommand("bounds", "Secure and plain file-size comparison series as CSV");
  bounds->add_option("--kind", kind, "Series")->required()->check(CLI::IsMember({"fig5", "fig8", "fig9"}));
  bounds->add_option("--k-min", range.k_min)->capture_default_str();
  bounds->add_option("--k-max", range.k_max)->capture_default_str();
  bounds->add_option("--k", range.k)->capture_default_str();
  bounds->add_option("--l1", range.l1)->capture_default_str();
  bounds->add_option("--out", cfg.out, "CSV output path");

  auto* demo = app.add_subcommand("demo-paper", "Reproduce the worked F_11 example and check golden values");
  demo->add_option("--g1", cfg.g1, "Override the Type 1 generator file");
  demo->add_option("--g2", cfg.g2, "Override the Type 2 generator file");

  auto* scen = app.add_subcommand("scenario", "Run a scenario file and write a JSON-lines log");
  scen->add_option("--in", cfg.in, "Scenario JSON")->required();
  scen->add_option("--out", cfg.out, "Log output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*encode) return cmd_encode(cfg);
    if (*recon) return cmd_reconstruct(cfg, type, indices);
    if (*rep) return cmd_repair(cfg, node, helpers);
    if (*eav) return cmd_eavesdrop(cfg, e1, e2);
    if (*sweep) return cmd_sweep(cfg, budget, same_type);
    if (*bounds) return cmd_bounds(kind, range, cfg.out);
    if (*demo) return cmd_demo(cfg.g1, cfg.g2);
    if (*scen) return cmd_scenario(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    const bool malformed = e.code() == ErrorCode::MalformedScenario || e.code() == ErrorCode::ParseError;
    return malformed ? kExitUsage : kExitDomain;
  }
  return kExitUsage;
}
