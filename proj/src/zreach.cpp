#include "vass/zreach.hpp"

#include "parikh.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace vass {

bool TargetConstraint::admits(long long v) const {
  switch (kind) {
    case Kind::Exactly: return Rational(v) == value;
    case Kind::AtMost: return Rational(v) <= value;
    case Kind::Free: return true;
  }
  return false;
}

namespace {

void check_query_shape(const Model& m, const ReachQuery& q) {
  if (static_cast<int>(q.constraint.size()) != m.dimension())
    throw ModelError("reach query needs one target constraint per counter");
  if (static_cast<int>(q.source.counters.size()) != m.dimension())
    throw ModelError("reach query source has the wrong dimension");
  if (q.source.state < 0 || q.source.state >= m.num_states() || q.target < 0 || q.target >= m.num_states())
    throw ModelError("reach query refers to an unknown state");
}

}  // namespace

ReachResult z_reach(const Model& m, const ReachQuery& q, const ZReachOptions& opt) {
  if (m.domain() != Domain::Z) throw ModelError("z_reach needs a VASS over Z; use n1_reach or bounded BFS");
  if (!q.avoid.empty()) throw ModelError("z_reach does not support avoid sets");
  check_query_shape(m, q);

  detail::ParikhProblem p;
  p.model = &m;
  p.allowed = detail::allowed_within(m, opt.within);
  p.source = q.source.state;
  p.target = q.target;
  p.require = opt.require;
  p.node_budget = opt.ilp_nodes;
  p.gain.resize(m.dimension());
  for (int i = 0; i < m.dimension(); ++i) {
    const auto& c = q.constraint[i];
    const Rational start(q.source.counters[i]);
    switch (c.kind) {
      case TargetConstraint::Kind::Free: break;
      case TargetConstraint::Kind::Exactly:
        if (!c.value.is_integer()) return Unreachable{true, "non-integral exact target"};
        p.gain[i] = {detail::GainBound::Kind::Equal, c.value - start};
        break;
      case TargetConstraint::Kind::AtMost:
        // Counter values are integers, so x <= r is x <= floor(r).
        p.gain[i] = {detail::GainBound::Kind::AtMost, Rational(mpq_class(c.value.floor())) - start};
        break;
    }
  }
  auto out = detail::parikh_solve(p);
  switch (out.status) {
    case detail::ParikhOutcome::Status::Found:
      return Reachable{std::move(out.path), ParikhCertificate{std::move(out.multiplicity)}};
    case detail::ParikhOutcome::Status::Infeasible: return Unreachable{true, "Parikh system infeasible"};
    case detail::ParikhOutcome::Status::Budget: break;
  }
  return ReachUnknown{out.diagnostic};
}

bool check_parikh(const Model& m, const ReachQuery& q, const ParikhCertificate& cert) {
  if (static_cast<int>(cert.multiplicity.size()) != m.num_transitions()) return false;
  std::vector<long long> balance(m.num_states(), 0);
  IntVec g(m.dimension(), 0);
  for (TransId t = 0; t < m.num_transitions(); ++t) {
    long long x = cert.multiplicity[t];
    if (x < 0) return false;
    if (x == 0) continue;
    const auto& tr = m.transition(t);
    balance[tr.from] += x;
    balance[tr.to] -= x;
    for (int i = 0; i < m.dimension(); ++i) g[i] += x * tr.update[i];
  }
  for (StateId v = 0; v < m.num_states(); ++v) {
    long long want = (v == q.source.state ? 1 : 0) - (v == q.target ? 1 : 0);
    if (balance[v] != want) return false;
  }
  for (int i = 0; i < m.dimension(); ++i)
    if (!q.constraint[i].admits(q.source.counters[i] + g[i])) return false;
  return true;
}

long long n1_default_cap(const Model& m) {
  return 10LL * m.num_states() * std::max(1LL, m.max_abs_update());
}

ReachResult n1_reach_avoid(const Model& m, const ReachQuery& q) {
  if (m.dimension() != 1) throw ModelError("n1_reach_avoid needs a one-counter model");
  check_query_shape(m, q);
  if (q.constraint[0].kind != TargetConstraint::Kind::Exactly || !q.constraint[0].value.is_integer())
    throw ModelError("n1_reach_avoid needs an exact integral target value");
  const long long goal = to_int64(q.constraint[0].value.numerator());
  if (goal < 0) throw ModelError("n1_reach_avoid target value is negative");
  if (q.source.counters[0] < 0) throw ModelError("n1_reach_avoid source value is negative");
  const long long cap = q.cap.value_or(n1_default_cap(m));
  if (goal > cap || q.source.counters[0] > cap) return ReachUnknown{"target or source above cap " + std::to_string(cap)};

  const long long width = cap + 1;
  auto key = [&](StateId s, long long v) { return static_cast<long long>(s) * width + v; };
  std::vector<std::pair<long long, TransId>> parent(static_cast<std::size_t>(m.num_states()) * width, {-1, -1});
  std::vector<bool> seen(parent.size(), false);
  std::deque<std::pair<StateId, long long>> frontier;
  bool clipped = false;

  std::pair<long long, TransId> goal_parent{-1, -1};
  auto expand = [&](StateId s, long long v) -> bool {
    const long long from_key = key(s, v);
    for (TransId t : m.outgoing(s)) {
      const auto& tr = m.transition(t);
      long long nv = v + tr.update[0];
      if (nv < 0) continue;
      if (nv > cap) {
        clipped = true;
        continue;
      }
      if (tr.to == q.target && nv == goal) {
        goal_parent = {from_key, t};
        return true;
      }
      if (contains(q.avoid, tr.to)) continue;
      long long kk = key(tr.to, nv);
      if (seen[kk]) continue;
      seen[kk] = true;
      parent[kk] = {from_key, t};
      frontier.emplace_back(tr.to, nv);
    }
    return false;
  };

  const long long src_key = key(q.source.state, q.source.counters[0]);
  seen[src_key] = true;
  bool hit = expand(q.source.state, q.source.counters[0]);
  while (!hit && !frontier.empty()) {
    auto [s, v] = frontier.front();
    frontier.pop_front();
    hit = expand(s, v);
  }
  if (!hit) {
    Unreachable u;
    u.exhaustive = !clipped;
    u.note = clipped ? "unreachable up to cap " + std::to_string(cap) : "configuration space exhausted";
    return u;
  }
  std::vector<TransId> rev{goal_parent.second};
  for (long long pk = goal_parent.first; pk != src_key; pk = parent[pk].first) rev.push_back(parent[pk].second);
  std::reverse(rev.begin(), rev.end());
  PathSummary path = PathSummary::make(m, q.source.state, std::move(rev));
  std::vector<long long> mult(m.num_transitions(), 0);
  for (TransId t : path.transitions) ++mult[t];
  return Reachable{std::move(path), ParikhCertificate{std::move(mult)}};
}

}  // namespace vass
