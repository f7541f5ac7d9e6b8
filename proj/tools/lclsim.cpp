// lclsim: generate graphs, run algorithms with verification, check the
// speedup inequalities and tabulate the probability bounds.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lcl/lcl.hpp"

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;
using namespace lcl;

constexpr const char* kVersion = "0.1.0";
constexpr int kSchemaVersion = 1;

enum Exit : int { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kBudget = 3 };

struct ConfigError : Error {
  using Error::Error;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << x;
  return os.str();
}

/// Provenance of a result; the hash covers the effective configuration with sorted keys, minus output paths.
ojson provenance(json effective, std::uint64_t seed) {
  for (const char* key : {"output", "dump_stages", "out"}) effective.erase(key);
  return {{"tool", "lclsim"}, {"version", kVersion}, {"seed", seed}, {"config_hash", hex64(fnv1a(effective.dump()))}};
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << text;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
}

void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

PortedGraph generate(const json& spec) {
  require_keys(spec, {"generator", "delta", "radius", "n", "extra", "seed", "file"}, "graph");
  if (spec.contains("file")) {
    if (spec.size() != 1) throw ConfigError("graph.file excludes generator parameters");
    return load_graph(spec.at("file").get<std::string>());
  }
  const auto name = get_or<std::string>(spec, "generator", "");
  const int delta = get_or(spec, "delta", 4);
  const int radius = get_or(spec, "radius", 3);
  if (name == "regular-tree") return gen_regular_tree(delta, radius);
  if (name == "balanced-tree") return gen_balanced_tree(delta, radius);
  if (name == "cycle") return gen_cycle(get_or<std::size_t>(spec, "n", 8));
  if (name == "random")
    return gen_random_bounded_degree(get_or<std::size_t>(spec, "n", 100), delta, get_or<std::size_t>(spec, "extra", 0),
                                     get_or<std::uint64_t>(spec, "seed", 1));
  throw ConfigError("unknown generator '" + name + "'");
}

ojson graph_summary(const PortedGraph& g) {
  return {{"n", g.node_count()}, {"delta", g.delta()}, {"oriented", g.oriented()}, {"edges", g.edge_count()}};
}

int cmd_gen(const std::string& generator, int delta, int radius, int r, std::size_t n, std::size_t extra,
            std::uint64_t seed, const std::string& out) {
  if (generator == "symlower") {
    const auto pair = gen_symlower_pair(delta, r);
    const std::string base = out.empty() ? "symlower" : out;
    save_graph(pair.tree, base + ".T.json");
    save_graph(pair.modified, base + ".Tprime.json");
    ojson s{{"T", base + ".T.json"},
            {"T_prime", base + ".Tprime.json"},
            {"center", pair.center},
            {"summary", graph_summary(pair.tree)}};
    std::cout << s.dump() << "\n";
    return kOk;
  }
  json spec{{"generator", generator}, {"delta", delta}, {"radius", radius}, {"n", n}, {"extra", extra}, {"seed", seed}};
  const auto g = generate(spec);
  if (out.empty())
    std::cout << dump_graph(g);
  else
    save_graph(g, out);
  std::cerr << graph_summary(g).dump() << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

struct RunConfig {
  std::string scenario;
  json graph;
  std::string algorithm;
  int k = 1;
  Label c = 2;
  std::string problem;
  std::string ids = "index";
  json input;
  std::uint64_t seed = 1;
  std::string mode = "exact";
  std::uint64_t samples = 0;
  std::string output;
  std::string dump_stages;
};

RunConfig parse_run_config(const json& j) {
  require_keys(j, {"schema_version", "scenario", "graph", "algorithm", "problem", "input", "engine", "output", "dump_stages"},
               "config");
  if (get_or(j, "schema_version", kSchemaVersion) != kSchemaVersion) throw ConfigError("unsupported schema_version");
  RunConfig rc;
  rc.scenario = get_or<std::string>(j, "scenario", "");
  if (!j.contains("graph")) throw ConfigError("config needs a graph");
  rc.graph = j.at("graph");
  const json alg = j.value("algorithm", json::object());
  require_keys(alg, {"name", "k", "c", "ids"}, "algorithm");
  rc.algorithm = get_or<std::string>(alg, "name", "");
  rc.k = get_or(alg, "k", 1);
  rc.c = get_or<Label>(alg, "c", 2);
  rc.ids = get_or<std::string>(alg, "ids", "index");
  const json prob = j.value("problem", json::object());
  require_keys(prob, {"name"}, "problem");
  rc.problem = get_or<std::string>(prob, "name", "");
  rc.input = j.value("input", json::object());
  require_keys(rc.input, {"kind", "file", "stickiness"}, "input");
  const json eng = j.value("engine", json::object());
  require_keys(eng, {"mode", "seed", "samples"}, "engine");
  rc.mode = get_or<std::string>(eng, "mode", "exact");
  rc.seed = get_or<std::uint64_t>(eng, "seed", 1);
  rc.samples = get_or<std::uint64_t>(eng, "samples", 0);
  if (rc.mode != "exact" && rc.mode != "monte-carlo") throw ConfigError("engine.mode must be exact or monte-carlo");
  rc.output = get_or<std::string>(j, "output", "");
  rc.dump_stages = get_or<std::string>(j, "dump_stages", "");
  return rc;
}

std::vector<std::uint64_t> make_ids(const std::string& kind, std::size_t n, std::uint64_t seed) {
  std::vector<std::uint64_t> ids(n);
  std::iota(ids.begin(), ids.end(), 1);
  if (kind == "index") return ids;
  if (kind == "random") {
    std::mt19937_64 rng(seed);
    std::shuffle(ids.begin(), ids.end(), rng);
    return ids;
  }
  throw ConfigError("ids must be index or random");
}

json pstar_to_json(const PStarLabel& l) {
  if (!l.present) return nullptr;
  return json::array({l.d, l.p ? json(*l.p) : json(nullptr)});
}

int cmd_run(const json& cfg_json) {
  const RunConfig rc = parse_run_config(cfg_json);
  const auto g = generate(rc.graph);
  ojson out;
  out["provenance"] = provenance(cfg_json, rc.seed);
  out["scenario"] = rc.scenario;
  out["graph"] = graph_summary(g);
  out["algorithm"] = rc.algorithm;
  out["engine"] = {{"mode", rc.mode}, {"seed", rc.seed}, {"samples", rc.samples}};
  VerifierReport report;

  if (rc.algorithm == "weak-family-to-weak2") {
    if (rc.problem != "weak-2-coloring" && rc.problem != "weak-coloring")
      throw ConfigError("weak-family-to-weak2 is verified as weak-2-coloring, not '" + rc.problem + "'");
    std::vector<Label> phi;
    const auto kind = get_or<std::string>(rc.input, "kind", "random-weak");
    if (kind == "file") {
      phi = read_json_file(get_or<std::string>(rc.input, "file", "")).get<std::vector<Label>>();
    } else if (kind == "random-weak") {
      phi = random_weak_coloring(g, rc.k, rc.c, rc.seed, get_or(rc.input, "stickiness", 0.75));
    } else {
      throw ConfigError("input.kind must be random-weak or file");
    }
    const auto res = weak_family_to_weak2(g, phi, rc.k, rc.c);
    report = verify_weak_coloring(g, res.labels, 2, 1);
    out["rounds"] = res.round_breakdown();
    out["labels"] = res.labels;
    if (!rc.dump_stages.empty()) {
      ojson d = res.stage_dump();
      d["input"] = phi;
      write_text(rc.dump_stages, d.dump() + "\n");
    }
  } else if (rc.algorithm == "solve-pstar") {
    if (rc.problem != "pstar") throw ConfigError("solve-pstar is verified as pstar, not '" + rc.problem + "'");
    Assignment a = Assignment::zeros(g.node_count(), 0);
    a.ids = make_ids(rc.ids, g.node_count(), rc.seed);
    const auto sol = solve_pstar(g, a);
    report = verify_pstar(g, sol.labels, g.delta());
    out["rounds"] = sol.rounds;
    auto labels = json::array();
    for (const auto& l : sol.labels) labels.push_back(pstar_to_json(l));
    out["labels"] = labels;
  } else if (rc.algorithm == "homogeneous-constant") {
    if (rc.problem != "homogeneous") throw ConfigError("homogeneous-constant is verified as homogeneous");
    Assignment a = Assignment::zeros(g.node_count(), 0);
    a.ids = make_ids(rc.ids, g.node_count(), rc.seed);
    LocalAlgorithm p{0, AlgorithmKind::Node, 1, [](const View&) { return Label{0}; }, "constant"};
    const auto sol = homogeneous_dispatch(g, p, 1, a);
    report = verify_homogeneous(g, sol.labels, [](NodeId) { return true; }, g.delta());
    out["rounds"] = sol.rounds;
    out["pstar_count"] = sol.pstar_count;
    auto labels = json::array();
    for (const auto& l : sol.labels)
      labels.push_back({{"p", l.p_label ? json(*l.p_label) : json(nullptr)}, {"pstar", pstar_to_json(l.pstar)}});
    out["labels"] = labels;
  } else {
    throw ConfigError("unknown algorithm '" + rc.algorithm + "'");
  }

  out["report"] = report.to_json();
  out["all_pass"] = report.all_pass();
  write_text(rc.output, out.dump() + "\n");
  if (!report.all_pass()) {
    std::cerr << "verification failed at nodes:";
    for (auto v : report.fail_nodes()) std::cerr << " " << v;
    std::cerr << "\n";
    return kVerifyFailed;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// speedup
// ---------------------------------------------------------------------------

struct SpeedupArgs {
  int direction = 1;
  std::string rule = "own-first-bit";
  int delta = 4;
  int t = 1;
  int b = 1;
  std::uint64_t c = 2;
  std::string f = "1/40";
  std::uint64_t seed = 1;
  int grid = 100;
  Label value = 0;
  std::string out;
};

Rational parse_rational(const std::string& s) {
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse rational '" + s + "'");
  }
}

int cmd_speedup(const SpeedupArgs& s) {
  SpeedupConfig cfg{s.delta, s.c, s.t, parse_rational(s.f), s.b};
  json effective{{"direction", s.direction}, {"rule", s.rule}, {"delta", s.delta}, {"t", s.t}, {"b", s.b},
                 {"c", s.c},                 {"f", s.f},       {"seed", s.seed},   {"grid", s.grid}};
  SpeedupReport rep;
  if (s.direction == 1) {
    NodeRule A;
    if (s.rule == "own-first-bit") A = own_first_bit_rule(s.delta, s.t, s.b);
    else if (s.rule == "constant") A = constant_node_rule(s.delta, s.t, s.b, s.c, s.value);
    else if (s.rule == "random") A = random_node_rule(s.delta, s.t, s.b, s.c, s.seed);
    else if (s.rule == "sum-mod-c") A = sum_mod_node_rule(s.delta, s.t, s.b, s.c);
    else if (s.rule == "xor") A = xor_node_rule(s.delta, s.t, s.b);
    else if (s.rule == "majority") A = majority_node_rule(s.delta, s.t, s.b);
    else throw ConfigError("unknown node rule '" + s.rule + "'");
    cfg.c = A.c;
    rep = verify_speedup_inequality(A, cfg, default_f_grid(s.grid));
  } else if (s.direction == 2) {
    EdgeRule A;
    if (s.rule == "edge-first-bit") A = edge_first_bit_rule(s.delta, s.t, s.b);
    else if (s.rule == "constant") A = constant_edge_rule(s.delta, s.t, s.b, s.c, s.value);
    else if (s.rule == "random") A = random_edge_rule(s.delta, s.t, s.b, s.c, s.seed);
    else if (s.rule == "sum-mod-c") A = sum_mod_edge_rule(s.delta, s.t, s.b, s.c);
    else throw ConfigError("unknown edge rule '" + s.rule + "'");
    cfg.c = A.c;
    rep = verify_speedup_inequality(A, cfg, default_f_grid(s.grid));
  } else {
    throw ConfigError("direction must be 1 or 2");
  }
  ojson j;
  j["provenance"] = provenance(effective, s.seed);
  j["rule"] = s.rule;
  const ojson body = rep.to_json();
  for (const auto& [key, v] : body.items()) j[key] = v;
  j["violations"] = rep.violations();
  write_text(s.out, j.dump(2) + "\n");
  return rep.inequality_holds() ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

struct BoundsArgs {
  std::string table = "recurrence";
  std::string format = "csv";
  std::vector<std::uint64_t> c0{2, 4};
  std::string p0 = "1/16";
  std::vector<int> t{0, 1, 2, 3};
  int delta = 4;
  std::vector<double> log2n{12, 16, 24, 32, 48, 64, 96, 128};
  int b = 1;
  std::vector<int> c{2, 3, 4, 5, 6, 7, 8};
  std::vector<std::uint64_t> n{8, 27, 64, 1000, 4096, 100000, 1000000};
  std::string out;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<ojson> records;
};

std::string fmt(const BigFloat& x) { return format_float(x, 12); }
std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

Table bounds_table(const BoundsArgs& a) {
  Table tb;
  if (a.table == "recurrence") {
    const Rational p0 = parse_rational(a.p0);
    tb.columns = {"c0", "p0", "t", "delta", "value", "iterated_equal", "relaxed_dominates", "induction_dominates"};
    for (auto c0 : a.c0)
      for (int t : a.t) {
        const Rational v = recurrence_bound(c0, p0, t, a.delta);
        const bool eq = v == recurrence_bound_iterated(c0, p0, t, a.delta);
        const bool rel = recurrence_relaxed(c0, p0, t, a.delta) >= v;
        const bool ind = recurrence_induction_bound(c0, p0, t, a.delta) >= v;
        const BigFloat approx(v);
        tb.rows.push_back({std::to_string(c0), a.p0, std::to_string(t), std::to_string(a.delta), fmt(approx),
                           eq ? "true" : "false", rel ? "true" : "false", ind ? "true" : "false"});
        ojson inputs{{"c0", c0}, {"p0", a.p0}, {"t", t}, {"delta", a.delta}};
        ojson rec = bound_json(inputs, approx);
        rec["iterated_equal"] = eq;
        rec["relaxed_dominates"] = rel;
        rec["induction_dominates"] = ind;
        tb.records.push_back(std::move(rec));
      }
  } else if (a.table == "global") {
    tb.columns = {"log2n", "t", "b", "value", "relaxed", "condition", "condition_holds"};
    for (double l : a.log2n)
      for (int t : a.t) {
        try {
          const auto gb = global_success_upper_bound(BigFloat(l), BigFloat(t), a.b);
          tb.rows.push_back({fmt(l), std::to_string(t), std::to_string(a.b), fmt(gb.value), fmt(gb.relaxed),
                             fmt(gb.condition), gb.condition > 2 ? "true" : "false"});
          ojson rec = bound_json({{"log2n", l}, {"t", t}, {"b", a.b}}, gb.value);
          rec["relaxed"] = fmt(gb.relaxed);
          rec["condition"] = fmt(gb.condition);
          tb.records.push_back(std::move(rec));
        } catch (const DomainError& e) {
          tb.rows.push_back({fmt(l), std::to_string(t), std::to_string(a.b), "domain-error", "", "", ""});
          tb.records.push_back({{"inputs", {{"log2n", l}, {"t", t}, {"b", a.b}}}, {"error", e.what()}});
        }
      }
  } else if (a.table == "zero-round") {
    tb.columns = {"c", "delta", "minimum", "closed_form", "abs_error", "max_dev_from_uniform"};
    for (int c : a.c) {
      const auto z = zero_round_optimum(c, a.delta);
      const double closed = std::pow(static_cast<double>(c), -a.delta);
      double dev = 0;
      for (double x : z.distribution) dev = std::max(dev, std::abs(x - 1.0 / c));
      tb.rows.push_back({std::to_string(c), std::to_string(a.delta), fmt(z.value), fmt(closed),
                         fmt(std::abs(z.value - closed)), fmt(dev)});
      ojson rec{{"inputs", {{"c", c}, {"delta", a.delta}}}, {"value", z.value}, {"precision_bits", 53}};
      rec["distribution"] = z.distribution;
      tb.records.push_back(std::move(rec));
    }
  } else if (a.table == "collision") {
    tb.columns = {"n", "value", "limit", "holds"};
    for (auto n : a.n) {
      const auto cb = id_collision_bound(n);
      tb.rows.push_back({std::to_string(n), fmt(cb.value), fmt(cb.limit), cb.holds ? "true" : "false"});
      ojson rec = bound_json({{"n", n}}, cb.value);
      rec["limit"] = fmt(cb.limit);
      rec["holds"] = cb.holds;
      tb.records.push_back(std::move(rec));
    }
  } else {
    throw ConfigError("unknown table '" + a.table + "'");
  }
  return tb;
}

int cmd_bounds(const BoundsArgs& a) {
  json effective{{"table", a.table}, {"c0", a.c0}, {"p0", a.p0}, {"t", a.t},   {"delta", a.delta},
                 {"log2n", a.log2n}, {"b", a.b},   {"c", a.c},   {"n", a.n}};
  const auto prov = provenance(effective, 0);
  const auto tb = bounds_table(a);
  std::ostringstream os;
  if (a.format == "csv") {
    os << "# tool=lclsim version=" << kVersion << " seed=0 config_hash=" << prov["config_hash"].get<std::string>()
       << "\n";
    for (std::size_t i = 0; i < tb.columns.size(); ++i) os << (i ? "," : "") << tb.columns[i];
    os << "\n";
    for (const auto& row : tb.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << "\n";
    }
  } else if (a.format == "json") {
    ojson j{{"provenance", prov}, {"table", a.table}, {"rows", tb.records}};
    os << j.dump(2) << "\n";
  } else {
    throw ConfigError("format must be csv or json");
  }
  write_text(a.out, os.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and verifier for locally checkable labelings"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a graph file");
  std::string generator;
  int g_delta = 4, g_radius = 3, g_r = 3;
  std::size_t g_n = 8, g_extra = 0;
  std::uint64_t g_seed = 1;
  std::string g_out;
  gen->add_option("generator", generator, "regular-tree | balanced-tree | cycle | random | symlower")->required();
  gen->add_option("--delta", g_delta, "Maximum degree");
  gen->add_option("--radius", g_radius, "Tree radius");
  gen->add_option("--r", g_r, "Radius of the symlower pair");
  gen->add_option("--n", g_n, "Node count");
  gen->add_option("--extra", g_extra, "Extra random edges");
  gen->add_option("--seed", g_seed, "Random seed");
  gen->add_option("--out,-o", g_out, "Output file (prefix for symlower)");

  // run
  auto* run = app.add_subcommand("run", "Run an algorithm and verify its output");
  std::string r_config, r_graph, r_gen, r_alg, r_problem, r_ids, r_input, r_out, r_dump;
  int r_delta = 4, r_radius = 3, r_k = 1;
  std::size_t r_n = 8;
  Label r_c = 2;
  std::uint64_t r_seed = 1;
  run->add_option("--config", r_config, "Experiment config (JSON)");
  run->add_option("--graph", r_graph, "Graph file");
  run->add_option("--gen", r_gen, "Generator instead of a graph file");
  auto* o_delta = run->add_option("--delta", r_delta, "Generator degree");
  auto* o_radius = run->add_option("--radius", r_radius, "Generator radius");
  auto* o_n = run->add_option("--n", r_n, "Generator node count");
  run->add_option("--algorithm", r_alg, "weak-family-to-weak2 | solve-pstar | homogeneous-constant");
  run->add_option("--problem", r_problem, "weak-2-coloring | pstar | homogeneous");
  auto* o_k = run->add_option("--k", r_k, "Distance of the input weak coloring");
  auto* o_c = run->add_option("--c", r_c, "Colors of the input weak coloring");
  run->add_option("--ids", r_ids, "index | random");
  run->add_option("--input", r_input, "Input coloring file (JSON array of colors)");
  auto* o_seed = run->add_option("--seed", r_seed, "Random seed");
  run->add_option("--out,-o", r_out, "Labeling output file");
  run->add_option("--dump-stages", r_dump, "Write intermediate labelings (JSON)");

  // speedup
  auto* sp = app.add_subcommand("speedup", "Check a speedup inequality exactly");
  SpeedupArgs sa;
  sp->add_option("--direction", sa.direction, "1: node to edge, 2: edge to node");
  sp->add_option("--rule", sa.rule,
                 "own-first-bit | xor | majority | sum-mod-c | random | constant | edge-first-bit");
  sp->add_option("--delta", sa.delta);
  sp->add_option("--t", sa.t);
  sp->add_option("--b", sa.b);
  sp->add_option("--c", sa.c);
  sp->add_option("--f", sa.f, "Threshold as a rational, e.g. 1/40");
  sp->add_option("--seed", sa.seed);
  sp->add_option("--grid", sa.grid, "Number of grid points j/(grid+1)");
  sp->add_option("--value", sa.value, "Output of the constant rule");
  sp->add_option("--out,-o", sa.out);

  // bounds
  auto* bd = app.add_subcommand("bounds", "Tabulate the probability bounds");
  BoundsArgs ba;
  bd->add_option("table", ba.table, "recurrence | global | zero-round | collision");
  bd->add_option("--format", ba.format, "csv | json");
  bd->add_option("--c0", ba.c0)->delimiter(',');
  bd->add_option("--p0", ba.p0);
  bd->add_option("--t", ba.t)->delimiter(',');
  bd->add_option("--delta", ba.delta);
  bd->add_option("--log2n", ba.log2n)->delimiter(',');
  bd->add_option("--b", ba.b);
  bd->add_option("--c", ba.c)->delimiter(',');
  bd->add_option("--n", ba.n)->delimiter(',');
  bd->add_option("--out,-o", ba.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*gen) return cmd_gen(generator, g_delta, g_radius, g_r, g_n, g_extra, g_seed, g_out);
    if (*run) {
      json cfg = r_config.empty() ? json::object() : read_json_file(r_config);
      if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
      if (!r_graph.empty()) cfg["graph"] = {{"file", r_graph}};
      if (!r_gen.empty()) {
        cfg["graph"] = {{"generator", r_gen}};
        if (*o_delta || r_gen != "cycle") cfg["graph"]["delta"] = r_delta;
        if (*o_radius || r_gen.find("tree") != std::string::npos) cfg["graph"]["radius"] = r_radius;
        if (*o_n || r_gen == "cycle" || r_gen == "random") cfg["graph"]["n"] = r_n;
      }
      auto section = [&](const char* key) -> json& {
        if (!cfg.contains(key)) cfg[key] = json::object();
        return cfg[key];
      };
      if (!r_alg.empty()) section("algorithm")["name"] = r_alg;
      if (*o_k) section("algorithm")["k"] = r_k;
      if (*o_c) section("algorithm")["c"] = r_c;
      if (!r_ids.empty()) section("algorithm")["ids"] = r_ids;
      if (!r_problem.empty()) section("problem")["name"] = r_problem;
      if (!r_input.empty()) section("input") = {{"kind", "file"}, {"file", r_input}};
      if (*o_seed) section("engine")["seed"] = r_seed;
      if (!r_out.empty()) cfg["output"] = r_out;
      if (!r_dump.empty()) cfg["dump_stages"] = r_dump;
      return cmd_run(cfg);
    }
    if (*sp) return cmd_speedup(sa);
    if (*bd) return cmd_bounds(ba);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}
