// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion, each with a wall-clock
// limit. Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "twinmds/twinmds.hpp"

using namespace twinmds;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<Verdict()> run;
};

FieldMatrix load_generator(const std::string& file) {
  std::ifstream in(std::filesystem::path(TWINMDS_DATA_DIR) / file);
  return generator_matrix_from_json(json::parse(in));
}

MdsCode unchecked(const FieldMatrix& g) { return MdsCode(g, CodeStyle::explicit_matrix, std::nullopt); }

/// The worked example system as printed, accepted without the MDS check so that it can be examined.
TwinConfig example_config() {
  return {unchecked(load_generator("worked_g1.json")), unchecked(load_generator("worked_g2.json"))};
}

/// Parses "r1+4r2+a9" into a coefficient row over r1..r8, a9..a16.
Vector parse_functional(const std::string& s, const PrimeField& f) {
  Vector row(16, 0);
  std::stringstream ss(s);
  for (std::string term; std::getline(ss, term, '+');) {
    const auto sym = term.find_first_of("ra");
    const Residue coef = sym == 0 ? 1 : std::stoull(term.substr(0, sym));
    const std::size_t idx = std::stoul(term.substr(sym + 1)) - 1;
    row[idx] = f.add(row[idx], coef);
  }
  return row;
}

// Stored symbols of every worked-example node over (r1..r8, a9..a16).
const std::map<NodeId, std::vector<std::string>> kStoredSymbols = {
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

SecureLayout example_layout(const PrimeField& f) { return make_secure_layout(f, Vector{3, 1, 4, 1, 5, 9, 2, 6}, 2, 0, 4, 7); }

Verdict golden_encode() {
  const TwinConfig cfg = example_config();
  const PrimeField& f = cfg.field();
  const SecureLayout layout = example_layout(f);
  Vector source = layout.random_symbols;
  source.insert(source.end(), layout.payload.begin(), layout.payload.end());
  const TwinSystem sys = encode_system(cfg, layout.matrix);
  std::size_t mismatches = 0, checked = 0;
  for (const auto& [id, expected] : kStoredSymbols) {
    const Vector& stored = *sys.node(id).symbols;
    for (std::size_t t = 0; t < 4; ++t) {
      const Vector row = parse_functional(expected[t], f);
      Residue value = 0;
      for (std::size_t c = 0; c < 16; ++c) value = f.add(value, f.mul(row[c], source[c]));
      if (content_functional(cfg, id, t) != row || stored[t] != value) ++mismatches;
      ++checked;
    }
  }
  return {mismatches == 0, std::to_string(checked - mismatches) + "/" + std::to_string(checked) + " stored symbols match"};
}

Verdict pair_counts() {
  const TwinConfig cfg = example_config();
  const SecureLayout layout = example_layout(cfg.field());
  const Observation i = observe(cfg, layout, {{{NodeType::type1, 1}, {NodeType::type2, 2}}, {}}, {});
  const Observation ii = observe(cfg, layout, {{{NodeType::type1, 2}, {NodeType::type1, 3}}, {}}, {});
  const auto revealed = revealed_symbols(i);
  const std::vector<std::string> want{"r1", "r2", "r3", "r4", "r6", "a10", "a14"};
  const bool ok = independent_symbol_count(i) == 7 && revealed == want && independent_symbol_count(ii) == 8;
  return {ok, "(i) count " + std::to_string(independent_symbol_count(i)) + ", (ii) count " +
                  std::to_string(independent_symbol_count(ii))};
}

Verdict repair_observer() {
  const TwinConfig cfg = example_config();
  const SecureLayout layout = example_layout(cfg.field());
  const NodeId failed{NodeType::type2, 2};
  const std::vector<RepairPlan> plans{
      {failed, {{NodeType::type1, 1}, {NodeType::type1, 3}, {NodeType::type1, 4}, {NodeType::type1, 5}}}};
  const Observation obs = observe(cfg, layout, {{{NodeType::type2, 1}}, {failed}}, plans);
  const std::size_t count = independent_symbol_count(obs);
  const std::size_t leak = leakage(obs);
  return {count == 8 && leak < 8, "count " + std::to_string(count) + ", leakage " + std::to_string(leak)};
}

Verdict universality() {
  const TwinConfig cfg = example_config();
  const PrimeField& f = cfg.field();
  std::mt19937_64 rng(2024);
  Vector payload(16);
  for (auto& v : payload) v = rng() % f.modulus();
  const MessageMatrix msg = build_message_matrix(f, payload, 4);
  const TwinSystem sys = encode_system(cfg, msg);
  std::size_t total = 0, bad = 0;
  std::set<std::string> bad_sets;
  auto ids = [](NodeType t, const std::vector<std::size_t>& c) {
    std::vector<NodeId> out;
    for (auto j : c) out.push_back({t, j + 1});
    return out;
  };
  auto label = [](NodeType t, const std::vector<std::size_t>& c) {
    std::string s = "T" + std::to_string(type_number(t)) + "{";
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i] + 1);
    return s + "}";
  };
  for (auto t : {NodeType::type1, NodeType::type2}) {
    for_each_combination(cfg.count(t), 4, [&](const std::vector<std::size_t>& c) {
      ++total;
      try {
        if (reconstruct(sys, ids(t, c)).message == msg) return;
      } catch (const Error&) {
      }
      ++bad;
      bad_sets.insert("reconstruct " + label(t, c));
    });
  }
  for (auto t : {NodeType::type1, NodeType::type2}) {
    const NodeType other = t == NodeType::type1 ? NodeType::type2 : NodeType::type1;
    for (std::size_t j = 1; j <= cfg.count(t); ++j) {
      for_each_combination(cfg.count(other), 4, [&](const std::vector<std::size_t>& c) {
        ++total;
        TwinSystem s = sys;
        s.fail({t, j});
        try {
          repair(s, {t, j}, ids(other, c));
          if (s == sys) return;
        } catch (const Error&) {
        }
        ++bad;
        bad_sets.insert("helpers " + label(other, c));
      });
    }
  }
  std::string detail = std::to_string(total - bad) + "/" + std::to_string(total) + " operations exact";
  if (bad) {
    detail += "; failing:";
    for (const auto& s : bad_sets) detail += " " + s;
  }
  return {bad == 0, detail};
}

Verdict plain_series() {
  const auto rows = comparison_series(SeriesKind::fig5, {3, 50, 50, 2});
  bool ok = rows.size() == 48;
  for (const auto& r : rows) {
    const Integer k = r.k;
    ok = ok && *r.s_twin == Rational(k * k) && *r.s_msr == *r.s_twin && *r.s_mbr == Rational(k * (k + 1) / 2) &&
         *r.s_twin >= *r.s_mbr;
  }
  ok = ok && *rows.back().s_twin == 2500 && *rows.back().s_mbr == 1275;
  return {ok, std::to_string(rows.size()) + " rows, k=50: " + format_rational(*rows.back().s_twin) + " vs " +
                  format_rational(*rows.back().s_mbr)};
}

Verdict secure_mbr_series() {
  SeriesRange range;
  range.k = 50;
  const auto rows = comparison_series(SeriesKind::fig8, range);
  bool ok = rows.size() == 49;
  for (const auto& r : rows) {
    const Integer k = r.k, l = *r.l1;
    ok = ok && *r.s_twin == Rational(k * (k - l)) && *r.s_mbr == Rational((k - l) * (k + 1 - l) / 2) &&
         *r.s_twin >= *r.s_mbr;
  }
  ok = ok && *rows.front().s_twin == 2450 && *rows.front().s_mbr == 1225;
  return {ok, std::to_string(rows.size()) + " rows, l=1: " + format_rational(*rows.front().s_twin) + " vs " +
                  format_rational(*rows.front().s_mbr)};
}

Verdict secure_msr_series() {
  const auto rows = comparison_series(SeriesKind::fig9, {3, 50, 50, 2});
  bool ok = rows.size() == 47;
  for (const auto& r : rows) {
    const Integer k = r.k, l1 = *r.l1, l2 = *r.l2;
    Rational msr(k * (k - l1 - l2));
    for (Integer i = 0; i < l2; ++i) msr *= Rational(k - 1, k);
    ok = ok && *r.s_twin == Rational(k * (k - l1 - l2)) && *r.s_msr == msr && *r.s_twin > *r.s_msr;
  }
  ok = ok && *rows.front().s_twin == 2350 && *rows.front().s_msr == Rational(47 * 49);
  return {ok, std::to_string(rows.size()) + " rows, l2=1: " + format_rational(*rows.front().s_twin) + " vs " +
                  format_rational(*rows.front().s_msr)};
}

Verdict mi_oracle() {
  std::size_t checked = 0, bad = 0;
  double worst = 0;
  for (std::uint64_t q : {2, 3}) {
    const PrimeField f(q);
    const TwinConfig cfg(make_vandermonde(q, 2, f), make_vandermonde(q, 2, f));
    std::vector<NodeId> all;
    for (auto t : {NodeType::type1, NodeType::type2})
      for (std::size_t j = 1; j <= q; ++j) all.push_back({t, j});
    std::vector<EavesdropperSpec> specs{{}};
    for (const auto& id : all) {
      specs.push_back({{id}, {}});
      specs.push_back({{}, {id}});
    }
    for (const auto& [l1, l2] : std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 0}, {0, 1}}) {
      const auto payload = Vector(secure_capacity_twin(2, l1, l2), 1);
      const SecureLayout layout = make_secure_layout(f, payload, l1, l2, 2, 11);
      for (const auto& spec : specs) {
        const Observation obs = observe(cfg, layout, spec, default_repair_plans(cfg, spec));
        const double err = std::abs(brute_force_mi(obs) - static_cast<double>(leakage(obs)) * std::log2(double(q)));
        worst = std::max(worst, err);
        ++checked;
        if (err > 1e-9) ++bad;
      }
    }
  }
  std::ostringstream d;
  d << checked << " specs, max |MI - leakage log2 q| = " << worst;
  return {bad == 0, d.str()};
}

Verdict same_type_secrecy() {
  constexpr std::uint64_t kEnumerationLimit = 10'000;
  constexpr std::size_t kSamples = 500;
  std::mt19937_64 rng(9);
  std::size_t specs[2] = {0, 0}, leaking[2] = {0, 0};
  bool capacity_ok = true;
  for (std::uint64_t p : {11, 101}) {
    const PrimeField f(p);
    for (std::size_t k = 2; k <= 6; ++k) {
      const std::size_t n = 2 * k - 1;
      const TwinConfig cfg(make_vandermonde(n, k, f), make_vandermonde(n, k, f));
      for (std::size_t l1 = 0; l1 < k; ++l1) {
        for (std::size_t l2 = 0; l1 + l2 < k; ++l2) {
          Vector payload(secure_capacity_twin(k, l1, l2));
          capacity_ok = capacity_ok && payload.size() == k * (k - l1 - l2);
          for (auto& v : payload) v = rng() % p;
          const SecureLayout layout = make_secure_layout(f, payload, l1, l2, k, rng());
          for (auto t : {NodeType::type1, NodeType::type2}) {
            auto check = [&](const std::vector<std::size_t>& e1, const std::vector<std::size_t>& e2) {
              EavesdropperSpec spec;
              for (auto j : e1) spec.e1.push_back({t, j + 1});
              for (auto j : e2) spec.e2.push_back({t, j + 1});
              const Observation obs = observe(cfg, layout, spec, default_repair_plans(cfg, spec));
              const int slot = t == NodeType::type1 ? 0 : 1;
              ++specs[slot];
              if (leakage(obs) != 0) ++leaking[slot];
            };
            std::uint64_t count = 0;
            for (std::size_t a = 0; a <= l1; ++a)
              for (std::size_t b = 0; b <= l2; ++b) count += binomial(n, a) * binomial(n - a, b);
            if (count <= kEnumerationLimit) {
              for (std::size_t a = 0; a <= l1; ++a) {
                for (std::size_t b = 0; b <= l2; ++b) {
                  for_each_combination(n, a + b, [&](const std::vector<std::size_t>& u) {
                    // Every way of marking b of the chosen nodes as repair-observed.
                    for_each_combination(a + b, b, [&](const std::vector<std::size_t>& pick) {
                      std::vector<std::size_t> e1, e2;
                      std::size_t next = 0;
                      for (std::size_t i = 0; i < u.size(); ++i) {
                        if (next < pick.size() && pick[next] == i) {
                          e2.push_back(u[i]);
                          ++next;
                        } else {
                          e1.push_back(u[i]);
                        }
                      }
                      check(e1, e2);
                    });
                  });
                }
              }
            } else {
              for (std::size_t s = 0; s < kSamples; ++s) {
                std::vector<std::size_t> idx(n);
                std::iota(idx.begin(), idx.end(), std::size_t{0});
                std::shuffle(idx.begin(), idx.end(), rng);
                const std::size_t a = rng() % (l1 + 1), b = rng() % (l2 + 1);
                check({idx.begin(), idx.begin() + a}, {idx.begin() + a, idx.begin() + a + b});
              }
            }
          }
        }
      }
    }
  }
  const std::string detail = "Type 1 sets leaking " + std::to_string(leaking[0]) + "/" + std::to_string(specs[0]) +
                             ", Type 2 sets leaking " + std::to_string(leaking[1]) + "/" + std::to_string(specs[1]);
  return {capacity_ok && leaking[0] == 0 && leaking[1] == 0, detail};
}

std::string columns(const std::optional<std::vector<std::size_t>>& c) {
  if (!c) return "MDS";
  std::string s = "singular columns {";
  for (std::size_t i = 0; i < c->size(); ++i) s += (i ? "," : "") + std::to_string((*c)[i] + 1);
  return s + "}";
}

Verdict mds_check() {
  const FieldMatrix g1 = load_generator("worked_g1.json");
  const FieldMatrix g2 = load_generator("worked_g2.json");
  FieldMatrix mutated = g2;
  mutated(3, 3) = 0;
  const auto s1 = find_singular_minor(g1), s2 = find_singular_minor(g2), sm = find_singular_minor(mutated);
  bool mutated_rejected = false;
  try {
    load_explicit(mutated);
  } catch (const Error& e) {
    mutated_rejected = e.code() == ErrorCode::NotMds;
  }
  return {!s1 && !s2 && sm && mutated_rejected,
          "G1 " + columns(s1) + "; G2 " + columns(s2) + "; mutated G2 " + (mutated_rejected ? "rejected" : "accepted")};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "golden encode of the worked example", 1.0, golden_encode},
      {2, "two-node eavesdrop counts", 1.0, pair_counts},
      {3, "repair eavesdrop counts", 1.0, repair_observer},
      {4, "repair and reconstruction universality", 5.0, universality},
      {5, "file size series over k", 1.0, plain_series},
      {6, "secure MBR series", 1.0, secure_mbr_series},
      {7, "secure MSR series", 1.0, secure_msr_series},
      {8, "leakage agrees with brute-force MI", 30.0, mi_oracle},
      {9, "same-type sets leak nothing", 60.0, same_type_secrecy},
      {10, "all-minors MDS check", 1.0, mds_check},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.limit_s;
    const bool pass = v.ok && in_time;
    failures += pass ? 0 : 1;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(3);
    line << (pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << ": " << v.detail << " (" << secs << " s / "
         << c.limit_s << " s" << (in_time ? "" : ", over limit") << ")";
    std::cout << line.str() << '\n';
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
