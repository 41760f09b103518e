#include "vass/cli.hpp"

#include "vass/avg_decider.hpp"
#include "vass/expected.hpp"
#include "vass/graph.hpp"
#include "vass/sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

namespace vass {

using nlohmann::ordered_json;

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

/// Failure that maps to an exit code and a JSON error object.
struct CliError : std::runtime_error {
  int code;
  std::string kind;
  CliError(int c, std::string k, const std::string& msg) : std::runtime_error(msg), code(c), kind(std::move(k)) {}
};

CliError input_error(const std::string& msg) { return {kExitInput, "input-error", msg}; }
CliError unsupported(const std::string& msg) { return {kExitUnsupported, "unsupported", msg}; }

struct Options {
  std::string format = "json";
  int threads = 0;
  bool timing = false;
  std::string model_path;
  // budgets
  int max_cycle_len = -1;
  int max_compose = 6;
  long long max_mult = 64;
  long ilp_nodes = 100000;
  long long n1_cap = -1;
  std::string thresholds;
  // expected / simulate
  std::string semantics;
  long long horizon = 1000;
  long long episodes = 100;
  std::uint64_t seed = 1;
  double burn_in = 0.0;
  std::string trace_out;
  bool estimate = false;
  // reduce
  std::string from, to, target, out_path;
};

// ---------------------------------------------------------------------------
// JSON helpers

ordered_json int_strings(const IntVec& v) {
  ordered_json a = ordered_json::array();
  for (long long x : v) a.push_back(std::to_string(x));
  return a;
}

ordered_json path_json(const Model& m, const PathSummary& p) {
  ordered_json j;
  j["start"] = m.state_name(p.start);
  j["end"] = m.state_name(p.end(m));
  j["transitions"] = p.transitions;
  j["gain"] = int_strings(p.gain);
  return j;
}

ordered_json state_names(const Model& m, const StateSet& s) {
  ordered_json a = ordered_json::array();
  for (StateId q : s) a.push_back(m.state_name(q));
  return a;
}

ordered_json one_based(const std::vector<int>& v) {
  ordered_json a = ordered_json::array();
  for (int i : v) a.push_back(i + 1);
  return a;
}

ordered_json stages_json(const std::vector<StageReport>& stages) {
  ordered_json a = ordered_json::array();
  for (const auto& s : stages) a.push_back({{"stage", s.stage}, {"exhaustive", s.exhaustive}, {"detail", s.detail}});
  return a;
}

ordered_json witness_json(const Model& m, const Witness& w) {
  ordered_json j;
  j["recurring_state"] = m.state_name(w.recurring_state);
  ordered_json vals = ordered_json::array();
  for (int i = 0; i < m.dimension(); ++i) {
    const bool bounded = std::find(w.partition.bounded.begin(), w.partition.bounded.end(), i) != w.partition.bounded.end();
    if (bounded && i < static_cast<int>(w.recurring_values.size()))
      vals.push_back(std::to_string(w.recurring_values[i]));
    else
      vals.push_back(nullptr);
  }
  j["recurring_values"] = vals;
  j["bounded"] = one_based(w.partition.bounded);
  j["unbounded"] = one_based(w.partition.unbounded);
  ordered_json counters = ordered_json::array();
  for (int i = 0; i < m.dimension(); ++i)
    counters.push_back({{"counter", i + 1},
                        {"cycle", path_json(m, w.cycle[i])},
                        {"in", path_json(m, w.in[i])},
                        {"out", path_json(m, w.out[i])}});
  j["counters"] = counters;
  if (w.reach) j["reach"] = path_json(m, *w.reach);
  return j;
}

ordered_json n1_witness_json(const Model& m, const N1Witness& w) {
  ordered_json j;
  ordered_json sel = ordered_json::array();
  for (const auto& c : w.selecting) sel.push_back({{"state", m.state_name(c.state)}, {"value", std::to_string(c.counters[0])}});
  j["selecting"] = sel;
  j["stem"] = path_json(m, w.stem);
  ordered_json seg = ordered_json::array();
  for (const auto& p : w.segments) seg.push_back(path_json(m, p));
  j["segments"] = seg;
  return j;
}

ordered_json ext_values(const std::vector<ExtRational>& v) {
  ordered_json a = ordered_json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

ordered_json frequencies_json(const Model& m, const FrequencyMap& x) {
  ordered_json j = ordered_json::object();
  for (const auto& [q, v] : x) j[m.state_name(q)] = v.str();
  return j;
}

ordered_json expected_json(const Model& m, const ExpectedReport& r) {
  ordered_json j;
  j["values"] = ext_values(r.values);
  ordered_json notes = ordered_json::array();
  for (const auto& n : r.notes) notes.push_back(n);
  j["notes"] = notes;
  ordered_json bs = ordered_json::array();
  for (const auto& b : r.bsccs) {
    ordered_json d;
    d["states"] = state_names(m, b.states);
    d["entry"] = m.state_name(b.entry);
    d["reach_probability"] = b.reach_probability.str();
    d["frequencies"] = frequencies_json(m, b.frequencies);
    ordered_json cls = ordered_json::array();
    for (const auto& c : b.classes)
      cls.push_back({{"class", to_string(c.tag)}, {"expected_gain", c.expected_gain.str()}, {"value", c.value.str()}});
    d["classes"] = cls;
    d["entry_gain"] = ext_values(b.entry_gain);
    bs.push_back(d);
  }
  j["bsccs"] = bs;
  return j;
}

ordered_json validity_json(const ValidityEstimate& v) {
  return {{"estimate", v.estimate}, {"lower", v.lower},       {"upper", v.upper},
          {"valid", v.valid},       {"episodes", v.episodes}, {"note", "finite-horizon proxy"}};
}

// Indented key/value rendering of the same JSON data.
void render_human(const ordered_json& j, std::ostream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  auto scalar = [](const ordered_json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  auto flat = [&](const ordered_json& a) {
    return std::all_of(a.begin(), a.end(), [](const ordered_json& v) { return v.is_primitive(); });
  };
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_primitive()) {
        os << pad << k << ": " << scalar(v) << '\n';
      } else if (v.is_array() && flat(v)) {
        os << pad << k << ": [";
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << scalar(v[i]);
        os << "]\n";
      } else {
        os << pad << k << ":\n";
        render_human(v, os, indent + 2);
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_primitive()) {
        os << pad << "- " << scalar(v) << '\n';
      } else {
        os << pad << "-\n";
        render_human(v, os, indent + 2);
      }
    }
  } else {
    os << pad << scalar(j) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Commands

ModelFile load(const Options& o) {
  try {
    return load_model(o.model_path);
  } catch (const ModelError& e) {
    throw input_error(e.what());
  }
}

SearchBudget budget_of(const Options& o) {
  SearchBudget b;
  b.max_cycle_len = o.max_cycle_len;
  b.max_compose = o.max_compose;
  b.max_mult = o.max_mult;
  b.ilp_nodes = o.ilp_nodes;
  return b;
}

AvgQuery query_of(const ModelFile& f, const Options& o, bool need_thresholds) {
  if (!f.query) throw input_error("model file has no selecting sets");
  AvgQuery q = *f.query;
  if (!o.thresholds.empty()) {
    q.thresholds.clear();
    std::stringstream ss(o.thresholds);
    std::string item;
    try {
      while (std::getline(ss, item, ',')) q.thresholds.push_back(Rational::parse(item));
    } catch (const std::invalid_argument& e) {
      throw input_error(std::string("bad --thresholds: ") + e.what());
    }
  }
  if (need_thresholds && q.thresholds.empty()) throw input_error("query needs thresholds (in the model file or --thresholds)");
  if (need_thresholds && static_cast<int>(q.thresholds.size()) != f.base().dimension())
    throw input_error("expected " + std::to_string(f.base().dimension()) + " thresholds");
  return q;
}

const ProbModel& prob_of(const ModelFile& f) {
  if (!f.probabilistic()) throw input_error("this command needs a probabilistic model (transition probabilities)");
  return std::get<ProbModel>(f.model);
}

struct Outcome {
  int code = kExitYes;
  ordered_json result;
  ordered_json witness;
  ordered_json diagnostics = ordered_json::object();
};

Outcome zverdict(const Model& m, const Verdict& v) {
  Outcome o;
  if (auto* y = std::get_if<ZYes>(&v)) {
    o.result = {{"verdict", "yes"}};
    o.witness = witness_json(m, y->witness);
  } else if (auto* n = std::get_if<VerdictNo>(&v)) {
    o.code = kExitNo;
    o.result = {{"verdict", "no"}, {"exhaustive", n->exhaustive}};
    o.diagnostics["stages"] = stages_json(n->stages);
  } else {
    const auto& u = std::get<VerdictUnknown>(v);
    o.code = kExitUnknown;
    o.result = {{"verdict", "unknown"}};
    o.diagnostics["reason"] = u.diagnostic;
    o.diagnostics["stages"] = stages_json(u.stages);
  }
  return o;
}

Outcome n1verdict(const Model& m, const N1Verdict& v) {
  Outcome o;
  if (auto* y = std::get_if<N1Yes>(&v)) {
    o.result = {{"verdict", "yes"}};
    o.witness = n1_witness_json(m, y->witness);
  } else if (auto* n = std::get_if<VerdictNo>(&v)) {
    o.code = kExitNo;
    o.result = {{"verdict", "no"}, {"exhaustive", n->exhaustive}};
    o.diagnostics["stages"] = stages_json(n->stages);
  } else {
    const auto& u = std::get<VerdictUnknown>(v);
    o.code = kExitUnknown;
    o.result = {{"verdict", "unknown"}};
    o.diagnostics["reason"] = u.diagnostic;
    o.diagnostics["stages"] = stages_json(u.stages);
  }
  return o;
}

void require_z(const Model& m) {
  if (m.domain() == Domain::N && m.dimension() > 1)
    throw unsupported("the multi-dimensional average problem over N is undecidable");
  if (m.domain() == Domain::N) throw input_error("one-counter models over N are decided by decide-n1");
}

void require_n1(const Model& m) {
  if (m.domain() == Domain::N && m.dimension() > 1)
    throw unsupported("the multi-dimensional average problem over N is undecidable; decide-n1 needs one counter");
  if (m.domain() != Domain::N) throw input_error("decide-n1 needs a model over N; use decide-z for Z");
}

Outcome cmd_check(const ModelFile& f) {
  const Model& m = f.base();
  Outcome o;
  o.result = {{"status", "valid"},
              {"dimension", m.dimension()},
              {"domain", m.domain() == Domain::Z ? "Z" : "N"},
              {"states", m.num_states()},
              {"transitions", m.num_transitions()},
              {"probabilistic", f.probabilistic()},
              {"has_query", f.query.has_value()}};
  return o;
}

Outcome cmd_decide_z(const ModelFile& f, const Options& o) {
  const Model& m = f.base();
  require_z(m);
  const AvgQuery q = query_of(f, o, true);
  DecideOptions d;
  d.budget = budget_of(o);
  return zverdict(m, decide_avg_z(m, q, d));
}

Outcome cmd_decide_n1(const ModelFile& f, const Options& o) {
  const Model& m = f.base();
  require_n1(m);
  const AvgQuery q = query_of(f, o, true);
  N1Options n;
  if (o.n1_cap >= 0) n.cap = o.n1_cap;
  return n1verdict(m, decide_avg_n1(m, q.selecting[0], q.thresholds[0], n));
}

Outcome cmd_oracle(const ModelFile& f, const Options& o, bool n1) {
  const Model& m = f.base();
  n1 ? require_n1(m) : require_z(m);
  const AvgQuery q = query_of(f, o, true);
  std::string why;
  if (!n1 && !oracle_guard(m, &why)) {
    Outcome out;
    out.code = kExitUnknown;
    out.result = {{"verdict", "unknown"}};
    out.diagnostics["reason"] = "instance exceeds the oracle guard: " + why;
    return out;
  }
  if (n1) return n1verdict(m, brute_force_n1(m, q.selecting[0], q.thresholds[0]));
  return zverdict(m, brute_force_avg_z(m, q));
}

SimConfig sim_config(const Options& o, SimSemantics sem) {
  SimConfig c;
  c.semantics = sem;
  c.horizon = o.horizon;
  c.episodes = o.episodes;
  c.seed = o.seed;
  c.burn_in = o.burn_in;
  c.threads = o.threads;
  return c;
}

Outcome cmd_expected(const ModelFile& f, const Options& o) {
  const ProbModel& pm = prob_of(f);
  const Model& m = pm.base();
  const AvgQuery q = query_of(f, o, false);
  Outcome out;
  if (o.semantics == "z") {
    if (m.domain() != Domain::Z) throw input_error("semantics z needs a model over Z");
    out.result = expected_json(m, expected_average_z(pm, q.selecting));
    out.result["semantics"] = "z";
    return out;
  }
  if (m.domain() != Domain::N) throw input_error("semantics " + o.semantics + " needs a model over N");
  if (o.semantics == "n-strict") {
    auto r = expected_average_n_strict(pm, q.selecting);
    if (auto* bad = std::get_if<AllPathsNotValid>(&r)) {
      out.result = {{"semantics", "n-strict"},
                    {"status", "all-paths-not-valid"},
                    {"values", ordered_json::array()},
                    {"counter", bad->counter + 1}};
      for (int i = 0; i < m.dimension(); ++i) out.result["values"].push_back("undefined");
      out.witness = path_json(m, bad->witness);
    } else {
      out.result = expected_json(m, std::get<ExpectedReport>(r));
      out.result["semantics"] = "n-strict";
      out.result["status"] = "valid";
    }
    return out;
  }
  // n-relaxed-scc
  if (!strongly_connected(m)) {
    std::string msg =
        "relaxed semantics on a model that is not strongly connected: decidability is open "
        "(at least as hard as coverability)";
    if (!o.estimate) throw unsupported(msg);
    auto sim = simulate(pm, q.selecting, sim_config(o, SimSemantics::NRelaxed));
    out.code = kExitUnsupported;
    out.result = {{"semantics", "n-relaxed-scc"}, {"status", "unsupported"}, {"message", msg}};
    out.diagnostics["estimate"] = sim.estimate;
    out.diagnostics["std_error"] = sim.std_error;
    out.diagnostics["rejection_rate"] = sim.rejection_rate;
    out.diagnostics["note"] = "finite-horizon proxy";
    return out;
  }
  auto r = expected_average_n_relaxed_scc(pm, q.selecting);
  out.result["semantics"] = "n-relaxed-scc";
  out.result["status"] = r.finite ? "finite" : "not-finite-or-undefined";
  if (r.finite) out.result["values"] = ext_values(r.values);
  ordered_json fails = ordered_json::array();
  for (const auto& fl : r.failures) fails.push_back(fl ? ordered_json(to_string(*fl)) : ordered_json(nullptr));
  out.result["failures"] = fails;
  if (r.validity) out.diagnostics["validity"] = validity_json(*r.validity);
  if (r.detail) out.diagnostics["detail"] = expected_json(m, *r.detail);
  return out;
}

Outcome cmd_simulate(const ModelFile& f, const Options& o) {
  const ProbModel& pm = prob_of(f);
  const AvgQuery q = query_of(f, o, false);
  SimSemantics sem;
  if (o.semantics == "z" || o.semantics.empty()) {
    sem = SimSemantics::Z;
  } else if (o.semantics == "n-strict") {
    sem = SimSemantics::NStrict;
  } else if (o.semantics == "n-relaxed") {
    sem = SimSemantics::NRelaxed;
  } else {
    throw input_error("unknown semantics " + o.semantics);
  }
  const SimConfig cfg = sim_config(o, sem);
  SimReport r;
  try {
    r = simulate(pm, q.selecting, cfg);
    if (!o.trace_out.empty()) {
      std::ofstream os(o.trace_out);
      if (!os) throw input_error("cannot write " + o.trace_out);
      write_trace_csv(pm, q.selecting, cfg, os);
    }
  } catch (const ModelError& e) {
    throw CliError(kExitInput, "model-contract", e.what());
  }
  Outcome out;
  out.result = {{"semantics", o.semantics.empty() ? "z" : o.semantics},
                {"horizon", o.horizon},
                {"episodes", o.episodes},
                {"seed", o.seed},
                {"estimate", r.estimate},
                {"std_error", r.std_error},
                {"defined", r.defined},
                {"minimum", r.minimum},
                {"rejection_rate", r.rejection_rate},
                {"attempts", r.attempts},
                {"accepted", r.accepted}};
  if (sem == SimSemantics::NRelaxed) out.diagnostics["note"] = "finite-horizon proxy";
  return out;
}

StateId state_arg(const Model& m, const std::string& name, const char* flag) {
  if (name.empty()) throw input_error(std::string("missing ") + flag);
  try {
    return m.state_id(name);
  } catch (const ModelError& e) {
    throw input_error(e.what());
  }
}

Outcome cmd_reduce(const ModelFile& f, const Options& o, bool dual) {
  const Model& m = f.base();
  const StateId s = state_arg(m, o.from, "--from"), t = state_arg(m, o.to, "--to");
  ModelFile red;
  Outcome out;
  try {
    if (dual) {
      if (m.domain() != Domain::Z) throw input_error("dual-cover reduction needs a model over Z");
      IntVec target(m.dimension(), 0);
      if (!o.target.empty()) {
        target.clear();
        std::stringstream ss(o.target);
        std::string item;
        while (std::getline(ss, item, ',')) target.push_back(std::stoll(item));
      }
      if (static_cast<int>(target.size()) != m.dimension())
        throw input_error("--target needs " + std::to_string(m.dimension()) + " entries");
      auto r = reduce_dual_coverability(m, s, t, target);
      red = ModelFile{r.model, r.query};
      out.result["fresh_state"] = r.model.state_name(r.fresh);
    } else {
      auto r = reduce_coverability(m, s, t);
      red = ModelFile{r.model, r.query};
      out.result["sink_state"] = r.model.base().state_name(r.sink);
    }
  } catch (const ModelError& e) {
    throw input_error(e.what());
  } catch (const std::logic_error& e) {
    throw input_error(std::string("bad --target: ") + e.what());
  }
  const std::string text = serialize_model(red);
  out.result["reduction"] = dual ? "dual-cover" : "cover";
  out.result["model_digest"] = fnv1a_hex(text);
  out.result["model"] = ordered_json::parse(text);
  if (!o.out_path.empty()) {
    std::ofstream os(o.out_path);
    if (!os) throw input_error("cannot write " + o.out_path);
    os << text;
  }
  return out;
}

void emit(const ordered_json& report, const Options& o, std::ostream& out) {
  if (o.format == "human")
    render_human(report, out, 0);
  else
    out << report.dump(2) << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Average and expected-average analysis of vector addition systems with states"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "human"}));
  app.add_option("--threads", o.threads, "Worker threads for simulation (0: default)");
  app.add_flag("--timing", o.timing, "Add wall-clock timing to the report");
  app.add_option("--max-cycle-len", o.max_cycle_len, "Cycle length bound (-1: number of states)");
  app.add_option("--max-compose", o.max_compose, "Accepted for compatibility; cycle composition is unbounded");
  app.add_option("--max-mult", o.max_mult, "Multiplicity bound in cycle searches");
  app.add_option("--ilp-nodes", o.ilp_nodes, "Branch-and-bound node budget");
  app.add_option("--n1-cap", o.n1_cap, "Counter cap for the one-counter search");
  app.add_option("--thresholds", o.thresholds, "Comma-separated thresholds overriding the model file");

  auto model_arg = [&](CLI::App* sub) { sub->add_option("MODEL", o.model_path, "Model JSON file")->required(); };
  auto sim_args = [&](CLI::App* sub) {
    sub->add_option("--horizon", o.horizon, "Steps per episode");
    sub->add_option("--episodes", o.episodes, "Number of episodes");
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--burn-in", o.burn_in, "Fraction of the horizon skipped");
  };

  auto* check = app.add_subcommand("check", "Parse and validate a model");
  model_arg(check);
  auto* dz = app.add_subcommand("decide-z", "Multi-dimensional average problem over Z");
  model_arg(dz);
  auto* dn = app.add_subcommand("decide-n1", "One-counter average problem over N");
  model_arg(dn);
  auto* ex = app.add_subcommand("expected", "Expected limit-average of a probabilistic model");
  model_arg(ex);
  ex->add_option("--semantics", o.semantics, "z, n-strict or n-relaxed-scc")
      ->required()
      ->check(CLI::IsMember({"z", "n-strict", "n-relaxed-scc"}));
  ex->add_flag("--estimate", o.estimate, "Attach a Monte Carlo estimate when no exact answer exists");
  sim_args(ex);
  auto* sm = app.add_subcommand("simulate", "Monte Carlo simulation");
  model_arg(sm);
  sm->add_option("--semantics", o.semantics, "z, n-strict or n-relaxed")
      ->check(CLI::IsMember({"z", "n-strict", "n-relaxed"}));
  sm->add_option("--trace-out", o.trace_out, "CSV trace file");
  sim_args(sm);
  auto* rd = app.add_subcommand("reduce", "Hardness reductions");
  rd->require_subcommand(1);
  auto reduce_args = [&](CLI::App* sub) {
    model_arg(sub);
    sub->add_option("--from", o.from, "Source state")->required();
    sub->add_option("--to", o.to, "Target state")->required();
    sub->add_option("--out", o.out_path, "Write the reduced model here");
  };
  auto* rdd = rd->add_subcommand("dual-cover", "Dual coverability to the average problem over Z");
  reduce_args(rdd);
  rdd->add_option("--target", o.target, "Comma-separated target vector (default 0)");
  auto* rdc = rd->add_subcommand("cover", "Coverability to the expected average problem");
  reduce_args(rdc);
  auto* orc = app.add_subcommand("oracle", "Brute-force oracles for small instances");
  orc->require_subcommand(1);
  auto* oz = orc->add_subcommand("decide-z", "Explicit-state search for average witnesses over Z");
  model_arg(oz);
  auto* on = orc->add_subcommand("decide-n1", "Configuration-graph search for one-counter lassos");
  model_arg(on);

  ordered_json command;
  command["args"] = args;

  std::vector<std::string> argv_store{"vass"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  auto fail = [&](int code, const std::string& kind, const std::string& msg) {
    ordered_json rep;
    rep["report_version"] = 1;
    rep["command"] = command;
    rep["error"] = {{"code", code}, {"kind", kind}, {"message", msg}};
    emit(rep, o, out);
    err << "error: " << msg << '\n';
    return code;
  };

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitYes;
  } catch (const CLI::ParseError& e) {
    return fail(kExitInput, "usage", e.what());
  }

  std::string name;
  for (auto* sub : app.get_subcommands()) {
    name = sub->get_name();
    for (auto* leaf : sub->get_subcommands()) name += " " + leaf->get_name();
  }
  command["subcommand"] = name;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (o.threads < 0) throw input_error("--threads must be non-negative");
    const ModelFile f = load(o);
    Outcome res;
    if (check->parsed()) res = cmd_check(f);
    else if (dz->parsed()) res = cmd_decide_z(f, o);
    else if (dn->parsed()) res = cmd_decide_n1(f, o);
    else if (ex->parsed()) res = cmd_expected(f, o);
    else if (sm->parsed()) res = cmd_simulate(f, o);
    else if (rdd->parsed()) res = cmd_reduce(f, o, true);
    else if (rdc->parsed()) res = cmd_reduce(f, o, false);
    else if (oz->parsed()) res = cmd_oracle(f, o, false);
    else res = cmd_oracle(f, o, true);

    ordered_json rep;
    rep["report_version"] = 1;
    rep["command"] = command;
    rep["model_digest"] = fnv1a_hex(serialize_model(f));
    rep["result"] = res.result;
    if (!res.witness.is_null()) rep["witness"] = res.witness;
    rep["diagnostics"] = res.diagnostics;
    if (o.timing)
      rep["timing"] = {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
    emit(rep, o, out);
    return res.code;
  } catch (const CliError& e) {
    return fail(e.code, e.kind, e.what());
  } catch (const ModelError& e) {
    return fail(kExitInput, "input-error", e.what());
  }
}

}  // namespace vass
