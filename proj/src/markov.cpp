#include "vass/markov.hpp"

#include "vass/ratmath.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace vass {

using ratmath::LinSystem;
using ratmath::RatVec;

ChainView ChainView::of(const ProbModel& pm) {
  StateSet all;
  for (StateId s = 0; s < pm.base().num_states(); ++s) all.push_back(s);
  return restrict(pm, all);
}

ChainView ChainView::restrict(const ProbModel& pm, const StateSet& states) {
  ChainView c;
  c.states = states;
  for (TransId t = 0; t < pm.base().num_transitions(); ++t) {
    const auto& tr = pm.base().transition(t);
    if (contains(states, tr.from) && contains(states, tr.to)) c.edges.push_back({tr.from, tr.to, pm.prob(t), tr.update});
  }
  return c;
}

void ChainView::validate() const {
  std::map<StateId, Rational> out;
  for (StateId s : states) out[s] = Rational(0);
  for (const auto& e : edges) {
    if (!contains(states, e.from) || !contains(states, e.to)) throw ModelError("chain edge leaves the chain");
    out[e.from] += e.prob;
  }
  for (const auto& [s, p] : out)
    if (p != Rational(1)) throw ModelError("chain state " + std::to_string(s) + " has outgoing mass " + p.str());
}

namespace {

int local_index(const StateSet& states, StateId s) {
  auto it = std::lower_bound(states.begin(), states.end(), s);
  return (it != states.end() && *it == s) ? static_cast<int>(it - states.begin()) : -1;
}

bool chain_strongly_connected(const ChainView& c) {
  const int n = static_cast<int>(c.states.size());
  if (n == 0) return false;
  std::vector<std::vector<int>> fwd(n), bwd(n);
  for (const auto& e : c.edges) {
    int a = local_index(c.states, e.from), b = local_index(c.states, e.to);
    fwd[a].push_back(b);
    bwd[b].push_back(a);
  }
  auto all_reached = [n](const std::vector<std::vector<int>>& g) {
    std::vector<bool> seen(n, false);
    std::deque<int> q{0};
    seen[0] = true;
    int count = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int w : g[v])
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          q.push_back(w);
        }
    }
    return count == n;
  };
  return all_reached(fwd) && all_reached(bwd);
}

RatVec solve_or_throw(const LinSystem& sys, const char* what) {
  auto r = ratmath::solve_linear(sys);
  if (std::holds_alternative<ratmath::Singular>(r)) throw ModelError(std::string(what) + ": singular system");
  return std::get<RatVec>(std::move(r));
}

}  // namespace

FrequencyMap stationary(const ChainView& c) {
  c.validate();
  if (!chain_strongly_connected(c)) throw ModelError("stationary: chain is not strongly connected");
  const int n = static_cast<int>(c.states.size());
  // Rows j < n-1: Σ_i x_i (P_ij - [i=j]) = 0; last row: Σ x_i = 1.
  LinSystem sys;
  sys.a.assign(n, RatVec(n, Rational(0)));
  sys.b.assign(n, Rational(0));
  for (int j = 0; j < n - 1; ++j) sys.a[j][j] -= Rational(1);
  for (const auto& e : c.edges) {
    int i = local_index(c.states, e.from), j = local_index(c.states, e.to);
    if (j < n - 1) sys.a[j][i] += e.prob;
  }
  for (int i = 0; i < n; ++i) sys.a[n - 1][i] = Rational(1);
  sys.b[n - 1] = Rational(1);
  RatVec x = solve_or_throw(sys, "stationary");
  FrequencyMap out;
  for (int i = 0; i < n; ++i) out[c.states[i]] = x[i];
  return out;
}

Rational expected_gain(const ChainView& c, const FrequencyMap& x, int i) {
  Rational g(0);
  for (const auto& e : c.edges) {
    if (i < 0 || i >= static_cast<int>(e.update.size())) throw ModelError("expected_gain: missing update entry");
    if (e.update[i] != 0) g += x.at(e.from) * e.prob * Rational(e.update[i]);
  }
  return g;
}

Rational expected_gain(const ChainView& c, int i) { return expected_gain(c, stationary(c), i); }

namespace {

/// Non-target chain states from which some target is reachable.
StateSet transient_states(const ChainView& c, const StateSet& targets) {
  std::map<StateId, std::vector<StateId>> pred;
  for (const auto& e : c.edges) pred[e.to].push_back(e.from);
  std::vector<StateId> seen;
  std::deque<StateId> q(targets.begin(), targets.end());
  std::set<StateId> mark(targets.begin(), targets.end());
  while (!q.empty()) {
    StateId v = q.front();
    q.pop_front();
    for (StateId u : pred[v]) {
      if (mark.count(u) || contains(targets, u)) continue;
      mark.insert(u);
      seen.push_back(u);
      q.push_back(u);
    }
  }
  return make_state_set(std::move(seen));
}

/// (I - P_TT) restricted to the transient states.
ratmath::RatMatrix transient_matrix(const ChainView& c, const StateSet& T) {
  const int n = static_cast<int>(T.size());
  ratmath::RatMatrix a(n, RatVec(n, Rational(0)));
  for (int r = 0; r < n; ++r) a[r][r] = Rational(1);
  for (const auto& e : c.edges) {
    int r = local_index(T, e.from), col = local_index(T, e.to);
    if (r >= 0 && col >= 0) a[r][col] -= e.prob;
  }
  return a;
}

struct AbsorptionSolve {
  StateSet T;
  std::map<StateId, RatVec> per_target;  // a_t on T
};

AbsorptionSolve solve_absorption(const ChainView& c, const StateSet& targets) {
  AbsorptionSolve s;
  s.T = transient_states(c, targets);
  const auto A = transient_matrix(c, s.T);
  for (StateId t : targets) {
    LinSystem sys{A, RatVec(s.T.size(), Rational(0))};
    for (const auto& e : c.edges) {
      int r = local_index(s.T, e.from);
      if (r >= 0 && e.to == t) sys.b[r] += e.prob;
    }
    s.per_target[t] = s.T.empty() ? RatVec{} : solve_or_throw(sys, "absorption");
  }
  return s;
}

}  // namespace

AbsorptionResult absorption(const ChainView& c, const StateSet& targets, const Distribution& init) {
  auto s = solve_absorption(c, targets);
  AbsorptionResult res;
  res.residual = Rational(0);
  for (StateId t : targets) res.mass[t] = Rational(0);
  for (const auto& [q, mu] : init) {
    if (mu.is_zero()) continue;
    if (contains(targets, q)) {
      res.mass[q] += mu;
      continue;
    }
    int r = local_index(s.T, q);
    if (r < 0) {
      res.residual += mu;
      continue;
    }
    Rational absorbed(0);
    for (StateId t : targets) {
      res.mass[t] += mu * s.per_target[t][r];
      absorbed += s.per_target[t][r];
    }
    res.residual += mu * (Rational(1) - absorbed);
  }
  return res;
}

std::map<StateId, ExtRational> conditional_entry_gain(const ChainView& c, const StateSet& targets, int i,
                                                      const Distribution& init) {
  auto s = solve_absorption(c, targets);
  const auto A = transient_matrix(c, s.T);
  std::map<StateId, ExtRational> out;
  for (StateId t : targets) {
    const RatVec& a = s.per_target[t];
    auto a_of = [&](StateId q) -> Rational {
      if (q == t) return Rational(1);
      int r = local_index(s.T, q);
      return r >= 0 ? a[r] : Rational(0);
    };
    // w(s) - Σ_{s'∈T} P w(s') = Σ P·y[i]·a(s').
    LinSystem sys{A, RatVec(s.T.size(), Rational(0))};
    for (const auto& e : c.edges) {
      int r = local_index(s.T, e.from);
      if (r < 0 || e.update.at(i) == 0) continue;
      Rational at = a_of(e.to);
      if (!at.is_zero()) sys.b[r] += e.prob * Rational(e.update[i]) * at;
    }
    RatVec w = s.T.empty() ? RatVec{} : solve_or_throw(sys, "conditional_entry_gain");
    Rational p(0), weighted(0);
    for (const auto& [q, mu] : init) {
      if (mu.is_zero()) continue;
      if (q == t) {
        p += mu;
        continue;
      }
      int r = local_index(s.T, q);
      if (r < 0) continue;
      p += mu * a[r];
      weighted += mu * w[r];
    }
    out[t] = p.is_zero() ? ExtRational::undefined() : ExtRational(weighted / p);
  }
  return out;
}

ExtRational silent_longrun(const FrequencyMap& x, const std::map<StateId, long long>& h, const StateSet& S) {
  Rational num(0), den(0);
  for (const auto& [q, xq] : x) {
    if (!contains(S, q)) continue;
    num += xq * Rational(h.at(q));
    den += xq;
  }
  if (den.is_zero()) return ExtRational::undefined();
  return ExtRational(num / den);
}

ExtRational silent_longrun(const ChainView& c, const std::map<StateId, long long>& h, const StateSet& S) {
  bool hit = false;
  for (StateId q : c.states) hit = hit || contains(S, q);
  if (!hit) return ExtRational::undefined();
  return silent_longrun(stationary(c), h, S);
}

}  // namespace vass
