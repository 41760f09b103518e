#include "parikh.hpp"

#include "vass/ratmath.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace vass::detail {

using ratmath::ConstraintSet;
using ratmath::CutDecision;
using ratmath::LinearConstraint;
using ratmath::RatVec;
using ratmath::Relation;

std::vector<bool> allowed_within(const Model& m, const std::optional<StateSet>& within) {
  std::vector<bool> ok(m.num_transitions(), true);
  if (!within) return ok;
  for (TransId t = 0; t < m.num_transitions(); ++t) {
    const auto& tr = m.transition(t);
    ok[t] = contains(*within, tr.from) && contains(*within, tr.to);
  }
  return ok;
}

PathSummary euler_walk(const Model& m, StateId source, const std::vector<long long>& mult) {
  std::vector<long long> left = mult;
  std::vector<std::size_t> cursor(m.num_states(), 0);
  // Hierholzer: stack of (state, transition used to arrive); the circuit is emitted in reverse.
  std::vector<std::pair<StateId, TransId>> stack{{source, -1}};
  std::vector<TransId> reversed;
  while (!stack.empty()) {
    StateId v = stack.back().first;
    auto out = m.outgoing(v);
    std::size_t& c = cursor[v];
    while (c < out.size() && left[out[c]] == 0) ++c;
    if (c < out.size()) {
      TransId t = out[c];
      --left[t];
      stack.emplace_back(m.transition(t).to, t);
    } else {
      if (stack.back().second >= 0) reversed.push_back(stack.back().second);
      stack.pop_back();
    }
  }
  for (long long l : left)
    if (l != 0) throw std::logic_error("euler_walk: multiplicities are not connected to the source");
  std::reverse(reversed.begin(), reversed.end());
  return PathSummary::make(m, source, std::move(reversed));
}

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

ParikhOutcome parikh_solve(const ParikhProblem& p) {
  const Model& m = *p.model;
  const int k = m.dimension();
  std::vector<TransId> vars;
  for (TransId t = 0; t < m.num_transitions(); ++t)
    if (p.allowed[t]) vars.push_back(t);
  const int n = static_cast<int>(vars.size());

  ParikhOutcome res;
  if (n == 0) {
    // Only the empty path is available.
    bool ok = p.source == p.target && !p.nonempty;
    for (int i = 0; ok && i < k; ++i) {
      const auto& g = p.gain[i];
      if (g.kind == GainBound::Kind::Equal && !g.value.is_zero()) ok = false;
      if (g.kind == GainBound::Kind::AtMost && g.value.sign() < 0) ok = false;
    }
    for (const auto& r : p.require)
      if (!contains(r, p.source)) ok = false;
    if (ok) {
      res.status = ParikhOutcome::Status::Found;
      res.multiplicity.assign(m.num_transitions(), 0);
      res.path = PathSummary::make(m, p.source, {});
    }
    return res;
  }

  ConstraintSet cs;
  for (TransId t : vars)
    cs.add_variable("x" + std::to_string(t), Rational(0),
                    p.max_mult ? std::optional<Rational>(Rational(*p.max_mult)) : std::nullopt, true);

  std::vector<bool> touched(m.num_states(), false);
  for (TransId t : vars) {
    touched[m.transition(t).from] = true;
    touched[m.transition(t).to] = true;
  }
  touched[p.source] = touched[p.target] = true;
  for (StateId v = 0; v < m.num_states(); ++v) {
    if (!touched[v]) continue;
    RatVec row(n, Rational(0));
    for (int j = 0; j < n; ++j) {
      const auto& tr = m.transition(vars[j]);
      if (tr.from == v) row[j] += Rational(1);
      if (tr.to == v) row[j] -= Rational(1);
    }
    long long rhs = (v == p.source ? 1 : 0) - (v == p.target ? 1 : 0);
    cs.add(std::move(row), Relation::Equal, Rational(rhs));
  }
  if (p.nonempty) cs.add(RatVec(n, Rational(1)), Relation::GreaterEq, Rational(1));
  for (int i = 0; i < k; ++i) {
    const auto& g = p.gain[i];
    if (g.kind == GainBound::Kind::Free) continue;
    RatVec row(n);
    for (int j = 0; j < n; ++j) row[j] = Rational(m.transition(vars[j]).update[i]);
    cs.add(std::move(row), g.kind == GainBound::Kind::Equal ? Relation::Equal : Relation::LessEq, g.value);
  }
  for (const auto& r : p.require) {
    if (contains(r, p.source)) continue;
    RatVec row(n, Rational(0));
    for (int j = 0; j < n; ++j)
      if (contains(r, m.transition(vars[j]).to)) row[j] = Rational(1);
    cs.add(std::move(row), Relation::GreaterEq, Rational(1));
  }

  // Integer lattice obstructions (parity and the like) make branch-and-bound diverge.
  ratmath::LinSystem eq;
  for (const auto& row : cs.constraints())
    if (row.rel == Relation::Equal) {
      eq.a.push_back(row.coeffs);
      eq.a.back().resize(n, Rational(0));
      eq.b.push_back(row.rhs);
    }
  if (!ratmath::integer_solvable(eq)) {
    res.diagnostic = "no integer solution to the flow and gain equations";
    return res;
  }

  auto connectivity = [&](const RatVec& x) -> CutDecision {
    UnionFind uf(m.num_states());
    bool any = false;
    for (int j = 0; j < n; ++j) {
      if (x[j].is_zero()) continue;
      any = true;
      uf.unite(m.transition(vars[j]).from, m.transition(vars[j]).to);
    }
    if (!any) return CutDecision::accept_point();
    const int root = uf.find(p.source);
    // Smallest-state component of the support that is detached from the source.
    int detached = -1;
    for (int j = 0; j < n && detached < 0; ++j) {
      if (x[j].is_zero()) continue;
      int c = uf.find(m.transition(vars[j]).from);
      if (c != root) detached = c;
    }
    if (detached < 0) return CutDecision::accept_point();
    StateId best = m.num_states();
    for (int j = 0; j < n; ++j) {
      if (x[j].is_zero()) continue;
      const auto& tr = m.transition(vars[j]);
      if (uf.find(tr.from) != root) best = std::min({best, tr.from, tr.to});
    }
    const int comp = uf.find(best);
    std::vector<bool> in_k(m.num_states(), false);
    for (int j = 0; j < n; ++j) {
      if (x[j].is_zero()) continue;
      const auto& tr = m.transition(vars[j]);
      if (uf.find(tr.from) == comp) in_k[tr.from] = in_k[tr.to] = true;
    }
    // Either some transition enters K from outside, or K carries no flow at all.
    RatVec enter(n, Rational(0)), inside(n, Rational(0));
    for (int j = 0; j < n; ++j) {
      const auto& tr = m.transition(vars[j]);
      if (!in_k[tr.from] && in_k[tr.to]) enter[j] = Rational(1);
      if (in_k[tr.from] && in_k[tr.to]) inside[j] = Rational(1);
    }
    return CutDecision::branch({{LinearConstraint{enter, Relation::GreaterEq, Rational(1)}},
                                {LinearConstraint{inside, Relation::LessEq, Rational(0)}}});
  };

  ratmath::IlpOptions opts;
  opts.node_budget = p.node_budget;
  auto r = ratmath::ilp_solve(cs, std::nullopt, connectivity, opts);
  if (auto* b = std::get_if<ratmath::BudgetExceeded>(&r)) {
    res.status = ParikhOutcome::Status::Budget;
    res.diagnostic = b->diagnostic;
    return res;
  }
  if (std::holds_alternative<ratmath::IlpInfeasible>(r)) return res;
  const auto& pt = std::get<ratmath::IntegerPoint>(r).point;
  if (!cs.satisfied_by(pt)) throw std::logic_error("parikh_solve: solver returned an infeasible point");
  res.status = ParikhOutcome::Status::Found;
  res.multiplicity.assign(m.num_transitions(), 0);
  for (int j = 0; j < n; ++j) res.multiplicity[vars[j]] = to_int64(pt[j].floor());
  res.path = euler_walk(m, p.source, res.multiplicity);
  return res;
}

}  // namespace vass::detail
