#include "vass/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace vass {

using json = nlohmann::ordered_json;

Model::Model(int dimension, Domain domain, std::vector<std::string> states, std::vector<StateId> initial,
             std::vector<Transition> transitions)
    : dimension_(dimension),
      domain_(domain),
      states_(std::move(states)),
      initial_(std::move(initial)),
      transitions_(std::move(transitions)) {
  if (dimension_ < 1) throw ModelError("dimension must be positive");
  if (states_.empty()) throw ModelError("model has no states");
  if (initial_.empty()) throw ModelError("model has no initial state");
  const int n = num_states();
  for (StateId q : initial_)
    if (q < 0 || q >= n) throw ModelError("initial state index out of range");
  std::sort(initial_.begin(), initial_.end());
  if (std::adjacent_find(initial_.begin(), initial_.end()) != initial_.end())
    throw ModelError("duplicate initial state");
  out_.assign(n, {});
  in_.assign(n, {});
  for (TransId t = 0; t < num_transitions(); ++t) {
    const Transition& tr = transitions_[t];
    if (tr.from < 0 || tr.from >= n || tr.to < 0 || tr.to >= n)
      throw ModelError("transition endpoint out of range");
    if (static_cast<int>(tr.update.size()) != dimension_)
      throw ModelError("transition " + std::to_string(t) + ": update length " +
                       std::to_string(tr.update.size()) + " != dimension " + std::to_string(dimension_));
    out_[tr.from].push_back(t);
    in_[tr.to].push_back(t);
  }
}

StateId Model::state_id(std::string_view name) const {
  for (StateId s = 0; s < num_states(); ++s)
    if (states_[s] == name) return s;
  throw ModelError("unknown state '" + std::string(name) + "'");
}

long long Model::max_abs_update() const {
  long long m = 0;
  for (const auto& t : transitions_)
    for (long long u : t.update) m = std::max(m, u < 0 ? -u : u);
  return m;
}

long long Model::encoding_size() const {
  long long size = num_states();
  for (const auto& t : transitions_)
    for (long long u : t.update) {
      unsigned long long a = u < 0 ? static_cast<unsigned long long>(-u) : static_cast<unsigned long long>(u);
      long long bits = 1;  // sign
      do {
        ++bits;
        a >>= 1;
      } while (a != 0);
      size += bits;
    }
  return size;
}

Model Model::with_domain(Domain d) const {
  Model m = *this;
  m.domain_ = d;
  return m;
}

ProbModel::ProbModel(Model base, std::vector<Rational> prob, std::vector<Rational> init_dist)
    : base_(std::move(base)), prob_(std::move(prob)), init_(std::move(init_dist)) {
  if (static_cast<int>(prob_.size()) != base_.num_transitions())
    throw ModelError("probability vector length differs from transition count");
  if (init_.size() != base_.initial().size())
    throw ModelError("initial distribution length differs from initial state count");
  for (TransId t = 0; t < base_.num_transitions(); ++t) {
    if (prob_[t].sign() <= 0 || prob_[t] > Rational(1))
      throw ModelError("transition " + std::to_string(t) + ": probability " + prob_[t].str() + " not in (0,1]");
  }
  for (StateId q = 0; q < base_.num_states(); ++q) {
    auto out = base_.outgoing(q);
    if (out.empty())
      throw ModelError("state '" + base_.state_name(q) + "' has no outgoing transition in a probabilistic model");
    Rational sum(0);
    for (TransId t : out) sum += prob_[t];
    if (sum != Rational(1))
      throw ModelError("state '" + base_.state_name(q) + "': probabilities sum to " + sum.str() + " ≠ 1");
  }
  Rational mu(0);
  for (const auto& p : init_) {
    if (p.sign() < 0 || p > Rational(1)) throw ModelError("initial probability " + p.str() + " not in [0,1]");
    mu += p;
  }
  if (mu != Rational(1)) throw ModelError("initial distribution sums to " + mu.str() + " ≠ 1");
}

Rational ProbModel::initial_mass(StateId s) const {
  const auto& init = base_.initial();
  for (std::size_t j = 0; j < init.size(); ++j)
    if (init[j] == s) return init_[j];
  return Rational(0);
}

const Model& ModelFile::base() const {
  if (const auto* m = std::get_if<Model>(&model)) return *m;
  return std::get<ProbModel>(model).base();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

Rational json_rational(const json& v, const std::string& what) {
  try {
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
  } catch (const std::exception& e) {
    throw ModelError(what + ": " + e.what());
  }
  throw ModelError(what + ": expected a rational string \"a/b\"");
}

StateId lookup(const std::map<std::string, StateId>& ids, const json& v, const std::string& what) {
  if (!v.is_string()) throw ModelError(what + ": state reference must be a string");
  auto it = ids.find(v.get<std::string>());
  if (it == ids.end()) throw ModelError(what + ": unknown state '" + v.get<std::string>() + "'");
  return it->second;
}

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ModelError(std::string("missing key '") + key + "'");
  return *it;
}

}  // namespace

ModelFile parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ModelError("model must be a JSON object");

  const json& jdim = require(doc, "dimension");
  if (!jdim.is_number_integer() || jdim.get<long long>() < 1) throw ModelError("dimension must be a positive integer");
  const int k = jdim.get<int>();

  const json& jdom = require(doc, "domain");
  if (!jdom.is_string() || (jdom != "Z" && jdom != "N")) throw ModelError("domain must be \"Z\" or \"N\"");
  const Domain domain = jdom == "Z" ? Domain::Z : Domain::N;

  const json& jstates = require(doc, "states");
  if (!jstates.is_array() || jstates.empty()) throw ModelError("states must be a nonempty array");
  std::vector<std::string> names;
  std::map<std::string, StateId> ids;
  for (const auto& s : jstates) {
    if (!s.is_string()) throw ModelError("state names must be strings");
    auto name = s.get<std::string>();
    if (!ids.emplace(name, static_cast<StateId>(names.size())).second)
      throw ModelError("duplicate state '" + name + "'");
    names.push_back(name);
  }

  bool probabilistic = false;
  std::vector<StateId> initial;
  std::vector<Rational> mu;
  const json& jinit = require(doc, "initial");
  if (jinit.is_array()) {
    for (const auto& s : jinit) initial.push_back(lookup(ids, s, "initial"));
  } else if (jinit.is_object()) {
    probabilistic = true;
    for (auto it = jinit.begin(); it != jinit.end(); ++it) {
      auto id = ids.find(it.key());
      if (id == ids.end()) throw ModelError("initial: unknown state '" + it.key() + "'");
      initial.push_back(id->second);
      mu.push_back(json_rational(it.value(), "initial probability of '" + it.key() + "'"));
    }
  } else {
    throw ModelError("initial must be an array or an object");
  }
  if (initial.empty()) throw ModelError("initial must name at least one state");

  const json& jtrans = require(doc, "transitions");
  if (!jtrans.is_array()) throw ModelError("transitions must be an array");

  // Merge identical (from, to, update) transitions, keeping first-occurrence order.
  std::vector<Transition> transitions;
  std::vector<std::optional<Rational>> probs;
  std::map<std::tuple<StateId, StateId, IntVec>, std::size_t> seen;
  int with_prob = 0;
  for (std::size_t idx = 0; idx < jtrans.size(); ++idx) {
    const json& jt = jtrans[idx];
    const std::string what = "transition " + std::to_string(idx);
    if (!jt.is_object()) throw ModelError(what + ": must be an object");
    Transition t;
    t.from = lookup(ids, require(jt, "from"), what);
    t.to = lookup(ids, require(jt, "to"), what);
    const json& ju = require(jt, "update");
    if (!ju.is_array()) throw ModelError(what + ": update must be an array");
    for (const auto& u : ju) {
      if (!u.is_number_integer()) throw ModelError(what + ": update entries must be integers");
      t.update.push_back(u.get<long long>());
    }
    if (static_cast<int>(t.update.size()) != k)
      throw ModelError(what + ": update length " + std::to_string(t.update.size()) + " ≠ dimension " +
                       std::to_string(k));
    std::optional<Rational> p;
    if (auto jp = jt.find("prob"); jp != jt.end()) {
      p = json_rational(*jp, what + " prob");
      if (p->sign() <= 0) throw ModelError(what + ": nonpositive probability " + p->str());
      ++with_prob;
    }
    auto key = std::make_tuple(t.from, t.to, t.update);
    if (auto it = seen.find(key); it != seen.end()) {
      auto& existing = probs[it->second];
      if (existing && p) *existing += *p;
      continue;
    }
    seen.emplace(key, transitions.size());
    transitions.push_back(std::move(t));
    probs.push_back(p);
  }
  if (with_prob > 0 && with_prob != static_cast<int>(jtrans.size()))
    throw ModelError("either every transition carries \"prob\" or none does");
  if (with_prob > 0) probabilistic = true;
  if (probabilistic && with_prob == 0 && !transitions.empty())
    throw ModelError("initial distribution given but transitions carry no probabilities");

  ModelFile file;
  if (probabilistic) {
    if (mu.empty()) {
      // Uniform over the listed initial states.
      Rational share(1, static_cast<long long>(initial.size()));
      mu.assign(initial.size(), share);
    }
    // Keep μ aligned with the sorted initial vector built by Model.
    std::vector<std::pair<StateId, Rational>> pairs;
    for (std::size_t j = 0; j < initial.size(); ++j) pairs.emplace_back(initial[j], mu[j]);
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Rational> sorted_mu;
    for (auto& pr : pairs) sorted_mu.push_back(pr.second);
    std::vector<Rational> p;
    for (auto& o : probs) p.push_back(*o);
    Model base(k, domain, names, initial, transitions);
    file.model = ProbModel(std::move(base), std::move(p), std::move(sorted_mu));
  } else {
    file.model = Model(k, domain, names, initial, transitions);
  }

  if (auto js = doc.find("selecting"); js != doc.end()) {
    if (!js->is_array() || static_cast<int>(js->size()) != k)
      throw ModelError("selecting must be an array of " + std::to_string(k) + " state lists");
    AvgQuery q;
    for (const auto& set : *js) {
      if (!set.is_array()) throw ModelError("selecting entries must be arrays of state names");
      std::vector<StateId> members;
      for (const auto& s : set) members.push_back(lookup(ids, s, "selecting"));
      q.selecting.push_back(make_state_set(std::move(members)));
    }
    if (auto jl = doc.find("thresholds"); jl != doc.end()) {
      if (!jl->is_array() || static_cast<int>(jl->size()) != k)
        throw ModelError("thresholds must be an array of " + std::to_string(k) + " rationals");
      for (const auto& v : *jl) q.thresholds.push_back(json_rational(v, "threshold"));
    }
    file.query = std::move(q);
  } else if (doc.contains("thresholds")) {
    throw ModelError("thresholds given without selecting");
  }
  return file;
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string serialize_model(const ModelFile& file) {
  const Model& m = file.base();
  const ProbModel* pm = std::get_if<ProbModel>(&file.model);
  json doc;
  doc["dimension"] = m.dimension();
  doc["domain"] = m.domain() == Domain::Z ? "Z" : "N";
  json states = json::array();
  for (const auto& s : m.state_names()) states.push_back(s);
  doc["states"] = states;
  if (pm) {
    json init = json::object();
    for (std::size_t j = 0; j < m.initial().size(); ++j) init[m.state_name(m.initial()[j])] = pm->init_dist()[j].str();
    doc["initial"] = init;
  } else {
    json init = json::array();
    for (StateId q : m.initial()) init.push_back(m.state_name(q));
    doc["initial"] = init;
  }
  json trans = json::array();
  for (TransId t = 0; t < m.num_transitions(); ++t) {
    const auto& tr = m.transition(t);
    json jt;
    jt["from"] = m.state_name(tr.from);
    jt["to"] = m.state_name(tr.to);
    jt["update"] = tr.update;
    if (pm) jt["prob"] = pm->prob(t).str();
    trans.push_back(jt);
  }
  doc["transitions"] = trans;
  if (file.query) {
    json sel = json::array();
    for (const auto& set : file.query->selecting) {
      json js = json::array();
      for (StateId q : set) js.push_back(m.state_name(q));
      sel.push_back(js);
    }
    doc["selecting"] = sel;
    if (!file.query->thresholds.empty()) {
      json th = json::array();
      for (const auto& r : file.query->thresholds) th.push_back(r.str());
      doc["thresholds"] = th;
    }
  }
  return doc.dump() + "\n";
}

// ---------------------------------------------------------------------------
// Semantics

std::optional<Config> step(const Model& m, const Config& c, TransId t) {
  const Transition& tr = m.transition(t);
  if (tr.from != c.state)
    throw ModelError("transition " + std::to_string(t) + " does not depart from state '" + m.state_name(c.state) + "'");
  Config next{tr.to, add(c.counters, tr.update)};
  if (m.domain() == Domain::N)
    for (long long v : next.counters)
      if (v < 0) return std::nullopt;
  return next;
}

Config initial_config(const Model& m, StateId s) { return Config{s, IntVec(m.dimension(), 0)}; }

IntVec gain(const Model& m, std::span<const TransId> path) {
  IntVec g(m.dimension(), 0);
  for (TransId t : path) {
    const auto& u = m.transition(t).update;
    for (int i = 0; i < m.dimension(); ++i) g[i] += u[i];
  }
  return g;
}

IntVec gain(const Model& m, const PathSummary& p) { return gain(m, std::span<const TransId>(p.transitions)); }

PathSummary PathSummary::make(const Model& m, StateId start, std::vector<TransId> transitions) {
  StateId cur = start;
  for (TransId t : transitions) {
    if (t < 0 || t >= m.num_transitions()) throw ModelError("transition index out of range");
    if (m.transition(t).from != cur) throw ModelError("path transitions are not consecutive");
    cur = m.transition(t).to;
  }
  PathSummary p;
  p.start = start;
  p.gain = vass::gain(m, std::span<const TransId>(transitions));
  p.transitions = std::move(transitions);
  return p;
}

StateId PathSummary::end(const Model& m) const {
  return transitions.empty() ? start : m.transition(transitions.back()).to;
}

std::vector<StateId> PathSummary::visited_states(const Model& m) const {
  std::vector<StateId> v{start};
  for (TransId t : transitions) v.push_back(m.transition(t).to);
  return v;
}

PathSummary PathSummary::then(const Model& m, const PathSummary& next) const {
  if (end(m) != next.start) throw ModelError("paths are not composable");
  std::vector<TransId> all = transitions;
  all.insert(all.end(), next.transitions.begin(), next.transitions.end());
  return make(m, start, std::move(all));
}

std::vector<Config> run_path(const Model& m, const Config& from, const PathSummary& p) {
  if (from.state != p.start) throw ModelError("path does not start at the configuration's state");
  std::vector<Config> out{from};
  for (TransId t : p.transitions) {
    const auto& tr = m.transition(t);
    out.push_back(Config{tr.to, add(out.back().counters, tr.update)});
  }
  return out;
}

std::optional<Rational> avg_over_selecting(std::span<const Config> rho, const StateSet& S, int i) {
  mpz_class sum = 0;
  long long count = 0;
  for (const auto& c : rho) {
    if (!contains(S, c.state)) continue;
    sum += mpz_class(static_cast<signed long>(c.counters.at(i)));
    ++count;
  }
  if (count == 0) return std::nullopt;
  return Rational(mpq_class(sum, mpz_class(static_cast<signed long>(count))));
}

StateSet make_state_set(std::vector<StateId> states) {
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  return states;
}

bool contains(const StateSet& s, StateId q) { return std::binary_search(s.begin(), s.end(), q); }

IntVec add(const IntVec& a, const IntVec& b) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

}  // namespace vass
