#include "vass/expected.hpp"

#include <algorithm>
#include <stdexcept>

namespace vass {

std::string to_string(SccClass::Tag t) {
  switch (t) {
    case SccClass::Tag::PositiveGain: return "PositiveGain";
    case SccClass::Tag::NegativeGain: return "NegativeGain";
    case SccClass::Tag::TotallyBounded: return "TotallyBounded";
    case SccClass::Tag::ZeroGainUnbounded: return "ZeroGainUnbounded";
  }
  return "?";
}

std::string to_string(RelaxedFailure f) {
  switch (f) {
    case RelaxedFailure::NegGain: return "NegGain";
    case RelaxedFailure::ZeroGainUnbounded: return "ZeroGainUnbounded";
    case RelaxedFailure::PosGain: return "PosGain";
    case RelaxedFailure::NegativeStateValue: return "NegativeStateValue";
    case RelaxedFailure::Undefined: return "Undefined";
  }
  return "?";
}

namespace {

SccClass classify_with(const ProbModel& pm, const StateSet& component, const FrequencyMap& x, int i,
                       const StateSet& S_i, StateId entry) {
  SccClass c;
  const ChainView chain = ChainView::restrict(pm, component);
  c.expected_gain = expected_gain(chain, x, i);
  if (c.expected_gain.sign() > 0) {
    c.tag = SccClass::Tag::PositiveGain;
    return c;
  }
  if (c.expected_gain.sign() < 0) {
    c.tag = SccClass::Tag::NegativeGain;
    return c;
  }
  auto h = potentials(pm.base(), component, i, entry);
  if (std::holds_alternative<NotTotallyBounded>(h)) {
    c.tag = SccClass::Tag::ZeroGainUnbounded;
    return c;
  }
  c.tag = SccClass::Tag::TotallyBounded;
  c.potential = std::get<Potential>(std::move(h));
  c.value = silent_longrun(x, c.potential, S_i);
  return c;
}

Distribution initial_distribution(const ProbModel& pm) {
  Distribution d;
  for (std::size_t j = 0; j < pm.base().initial().size(); ++j)
    if (!pm.init_dist()[j].is_zero()) d[pm.base().initial()[j]] += pm.init_dist()[j];
  return d;
}

StateSet support(const Distribution& d) {
  StateSet s;
  for (const auto& [q, p] : d) s.push_back(q);
  return s;
}

ExpectedReport expected_average_any(const ProbModel& pm, const std::vector<StateSet>& selecting) {
  const Model& m = pm.base();
  const int k = m.dimension();
  if (static_cast<int>(selecting.size()) != k) throw ModelError("expected average needs one selecting set per counter");
  const Distribution mu = initial_distribution(pm);
  const auto reach = reachable_states(m, support(mu));
  const SccInfo info = sccs(m);

  ExpectedReport rep;
  rep.values.assign(k, ExtRational::undefined());
  rep.notes.assign(k, {});
  StateSet entries;
  for (int c = 0; c < static_cast<int>(info.components.size()); ++c) {
    if (!info.is_bottom[c] || !reach[info.components[c].front()]) continue;
    BsccDiagnostic d;
    d.states = info.components[c];
    d.entry = d.states.front();
    d.frequencies = stationary(ChainView::restrict(pm, d.states));
    entries.push_back(d.entry);
    rep.bsccs.push_back(std::move(d));
  }
  const ChainView whole = ChainView::of(pm);
  const auto absorbed = absorption(whole, entries, mu);
  for (auto& d : rep.bsccs) d.reach_probability = absorbed.mass.at(d.entry);
  if (!absorbed.residual.is_zero()) throw ModelError("probability mass escapes every bottom component");

  for (int i = 0; i < k; ++i) {
    const auto y = conditional_entry_gain(whole, entries, i, mu);
    bool missing = false, pos = false, neg = false, zgu = false;
    for (auto& d : rep.bsccs) {
      d.classes.push_back(classify_with(pm, d.states, d.frequencies, i, selecting[i], d.entry));
      d.entry_gain.push_back(y.at(d.entry));
      bool hits = std::any_of(d.states.begin(), d.states.end(), [&](StateId q) { return contains(selecting[i], q); });
      missing = missing || !hits;
      switch (d.classes.back().tag) {
        case SccClass::Tag::PositiveGain: pos = true; break;
        case SccClass::Tag::NegativeGain: neg = true; break;
        case SccClass::Tag::ZeroGainUnbounded: zgu = true; break;
        case SccClass::Tag::TotallyBounded: break;
      }
    }
    if (missing) {
      rep.values[i] = ExtRational::undefined();
      rep.notes[i].push_back("a reachable bottom component has no selecting state");
      continue;
    }
    if (pos && (neg || zgu)) {
      rep.values[i] = ExtRational::undefined();
      if (zgu) rep.notes[i].push_back("combination rule extrapolated");
      continue;
    }
    if (pos) {
      rep.values[i] = ExtRational::plus_infinity();
      continue;
    }
    if (neg || zgu) {
      rep.values[i] = ExtRational::minus_infinity();
      continue;
    }
    ExtRational total(Rational(0));
    for (const auto& d : rep.bsccs) total = total + d.reach_probability * (d.entry_gain.back() + d.classes.back().value);
    rep.values[i] = total;
  }
  return rep;
}

}  // namespace

SccClass classify_scc(const ProbModel& pm, const StateSet& component, int i, const StateSet& S_i,
                      std::optional<StateId> entry) {
  if (component.empty()) throw ModelError("classify_scc: empty component");
  const auto x = stationary(ChainView::restrict(pm, component));
  return classify_with(pm, component, x, i, S_i, entry.value_or(component.front()));
}

ExpectedReport expected_average_z(const ProbModel& pm, const std::vector<StateSet>& selecting) {
  if (pm.base().domain() != Domain::Z) throw ModelError("expected_average_z needs a VASS over Z");
  return expected_average_any(pm, selecting);
}

std::variant<ExpectedReport, AllPathsNotValid> expected_average_n_strict(const ProbModel& pm,
                                                                         const std::vector<StateSet>& selecting) {
  const Model& base = pm.base();
  // Initial states carrying no mass cannot start a computation.
  StateSet live = support(initial_distribution(pm));
  Model m(base.dimension(), base.domain(), base.state_names(), live, base.transitions());
  for (int i = 0; i < base.dimension(); ++i) {
    auto neg = negative_prefix_reachable(m, i);
    if (neg.reachable) return AllPathsNotValid{i, std::move(neg.witness)};
  }
  return expected_average_any(pm, selecting);
}

RelaxedReport expected_average_n_relaxed_scc(const ProbModel& pm, const std::vector<StateSet>& selecting) {
  const Model& m = pm.base();
  if (!strongly_connected(m)) throw ModelError("relaxed semantics is only supported for strongly connected models");
  const int k = m.dimension();
  if (static_cast<int>(selecting.size()) != k) throw ModelError("expected average needs one selecting set per counter");
  StateSet all;
  for (StateId s = 0; s < m.num_states(); ++s) all.push_back(s);
  const auto x = stationary(ChainView::of(pm));
  const StateSet live = support(initial_distribution(pm));

  RelaxedReport rep;
  rep.failures.assign(k, std::nullopt);
  bool any_pos = false;
  for (int i = 0; i < k; ++i) {
    if (selecting[i].empty()) {
      rep.failures[i] = RelaxedFailure::Undefined;
      continue;
    }
    SccClass c = classify_with(pm, all, x, i, selecting[i], all.front());
    switch (c.tag) {
      case SccClass::Tag::PositiveGain:
        rep.failures[i] = RelaxedFailure::PosGain;
        any_pos = true;
        break;
      case SccClass::Tag::NegativeGain: rep.failures[i] = RelaxedFailure::NegGain; break;
      case SccClass::Tag::ZeroGainUnbounded: rep.failures[i] = RelaxedFailure::ZeroGainUnbounded; break;
      case SccClass::Tag::TotallyBounded:
        // The counter at q equals h(q) - h(q0) on every computation started at q0.
        for (StateId q0 : live)
          for (const auto& [q, hq] : c.potential)
            if (hq - c.potential.at(q0) < 0) rep.failures[i] = RelaxedFailure::NegativeStateValue;
        break;
    }
  }
  if (any_pos) rep.validity = estimate_validity_probability(pm, 1000, 1000, 1);
  rep.finite = std::none_of(rep.failures.begin(), rep.failures.end(), [](const auto& f) { return f.has_value(); });
  if (!rep.finite) return rep;
  auto strict = expected_average_n_strict(pm, selecting);
  if (!std::holds_alternative<ExpectedReport>(strict))
    throw std::logic_error("relaxed check passed but a negative value is reachable");
  rep.detail = std::get<ExpectedReport>(std::move(strict));
  rep.values = rep.detail->values;
  return rep;
}

CoverabilityReduction reduce_coverability(const Model& m, StateId s, StateId t) {
  if (m.domain() != Domain::N) throw ModelError("coverability reduction needs a VASS over N");
  if (s < 0 || s >= m.num_states() || t < 0 || t >= m.num_states()) throw ModelError("unknown source or target state");
  for (const auto& tr : m.transitions())
    for (long long u : tr.update)
      if (u < -1 || u > 1) throw ModelError("coverability reduction needs updates in {-1,0,1}");
  const int k = m.dimension();
  std::vector<std::string> names = m.state_names();
  std::string sink = "r";
  while (std::find(names.begin(), names.end(), sink) != names.end()) sink += "_";
  names.push_back(sink);
  const StateId r = m.num_states();

  std::vector<Transition> trans;
  std::vector<Rational> prob;
  const IntVec zero(k + 1, 0), one(k + 1, 1);
  for (StateId q = 0; q < m.num_states(); ++q) {
    const auto out = m.outgoing(q);
    const long long shares = static_cast<long long>(out.size()) + (q == t ? 1 : 0);
    // Half the mass escapes to r; the rest is split evenly. A dead end escapes surely.
    const Rational escape = shares == 0 ? Rational(1) : Rational(1, 2);
    const Rational each = shares == 0 ? Rational(0) : Rational(1, 2) / Rational(shares);
    for (TransId e : out) {
      Transition tr = m.transition(e);
      tr.update.push_back(0);
      trans.push_back(std::move(tr));
      prob.push_back(each);
    }
    if (q == t) {
      trans.push_back({t, r, zero});
      prob.push_back(each);
    }
    trans.push_back({q, r, one});
    prob.push_back(escape);
  }
  trans.push_back({r, r, zero});
  prob.push_back(Rational(1));

  Model base(k + 1, Domain::N, names, {s}, trans);
  CoverabilityReduction red{ProbModel(std::move(base), std::move(prob), {Rational(1)}), {}, r};
  red.query.selecting.assign(k + 1, StateSet{r});
  red.query.thresholds.assign(k + 1, Rational(3));
  red.query.thresholds[k] = Rational(1);
  return red;
}

}  // namespace vass
