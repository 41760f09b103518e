#include "vass/graph.hpp"

#include "parikh.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace vass {

bool SccInfo::nontrivial(const Model& m, int c) const {
  for (StateId s : components.at(c))
    for (TransId t : m.outgoing(s))
      if (component_of[m.transition(t).to] == c) return true;
  return false;
}

SccInfo sccs(const Model& m) {
  const int n = m.num_states();
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<StateId> stack;
  std::vector<StateSet> found;
  int counter = 0;

  // Iterative Tarjan: frames hold (state, position in its outgoing list).
  for (StateId root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<std::pair<StateId, std::size_t>> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      auto out = m.outgoing(v);
      if (pos < out.size()) {
        StateId w = m.transition(out[pos++]).to;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        StateSet c;
        StateId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          c.push_back(w);
        } while (w != v);
        std::sort(c.begin(), c.end());
        found.push_back(std::move(c));
      }
      StateId done = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
    }
  }
  std::sort(found.begin(), found.end(), [](const StateSet& a, const StateSet& b) { return a.front() < b.front(); });

  SccInfo info;
  info.components = std::move(found);
  info.component_of.assign(n, -1);
  for (int c = 0; c < static_cast<int>(info.components.size()); ++c)
    for (StateId s : info.components[c]) info.component_of[s] = c;
  info.is_bottom.assign(info.components.size(), true);
  for (const auto& tr : m.transitions())
    if (info.component_of[tr.from] != info.component_of[tr.to]) info.is_bottom[info.component_of[tr.from]] = false;
  return info;
}

bool strongly_connected(const Model& m) { return m.num_states() > 0 && sccs(m).components.size() == 1; }

std::vector<bool> reachable_states(const Model& m, const StateSet& from) {
  std::vector<bool> seen(m.num_states(), false);
  std::deque<StateId> q;
  for (StateId s : from)
    if (!seen[s]) {
      seen[s] = true;
      q.push_back(s);
    }
  while (!q.empty()) {
    StateId v = q.front();
    q.pop_front();
    for (TransId t : m.outgoing(v)) {
      StateId w = m.transition(t).to;
      if (!seen[w]) {
        seen[w] = true;
        q.push_back(w);
      }
    }
  }
  return seen;
}

// ---------------------------------------------------------------------------

void for_each_simple_cycle(const Model& m, const StateSet& component, int max_len,
                           const std::function<bool(const PathSummary&)>& fn) {
  if (max_len < 0) max_len = m.num_states();
  std::vector<bool> in_comp(m.num_states(), false), on_path(m.num_states(), false);
  for (StateId s : component) in_comp[s] = true;
  std::vector<TransId> path;

  for (StateId root : component) {
    bool stop = false;
    // DFS over states > root so each cycle is produced once, from its minimal state.
    std::function<void(StateId)> dfs = [&](StateId v) {
      for (TransId t : m.outgoing(v)) {
        if (stop) return;
        StateId w = m.transition(t).to;
        if (!in_comp[w] || w < root) continue;
        if (w == root) {
          path.push_back(t);
          if (!fn(PathSummary::make(m, root, path))) stop = true;
          path.pop_back();
          continue;
        }
        if (on_path[w] || static_cast<int>(path.size()) + 1 >= max_len) continue;
        on_path[w] = true;
        path.push_back(t);
        dfs(w);
        path.pop_back();
        on_path[w] = false;
      }
    };
    if (max_len >= 1) dfs(root);
    if (stop) return;
  }
}

std::vector<PathSummary> simple_cycles(const Model& m, const StateSet& component, int max_len) {
  std::vector<PathSummary> out;
  for_each_simple_cycle(m, component, max_len, [&](const PathSummary& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------

namespace {

/// BFS tree paths inside the component: forward from root, and from every state back to root.
struct RootTrees {
  std::vector<TransId> fwd_parent, back_next;
};

RootTrees root_trees(const Model& m, const std::vector<bool>& in_comp, StateId root) {
  RootTrees t;
  t.fwd_parent.assign(m.num_states(), -1);
  t.back_next.assign(m.num_states(), -1);
  std::vector<bool> seen(m.num_states(), false);
  std::deque<StateId> q{root};
  seen[root] = true;
  while (!q.empty()) {
    StateId v = q.front();
    q.pop_front();
    for (TransId e : m.outgoing(v)) {
      StateId w = m.transition(e).to;
      if (!in_comp[w] || seen[w]) continue;
      seen[w] = true;
      t.fwd_parent[w] = e;
      q.push_back(w);
    }
  }
  std::fill(seen.begin(), seen.end(), false);
  q = {root};
  seen[root] = true;
  while (!q.empty()) {
    StateId v = q.front();
    q.pop_front();
    for (TransId e : m.incoming(v)) {
      StateId u = m.transition(e).from;
      if (!in_comp[u] || seen[u]) continue;
      seen[u] = true;
      t.back_next[u] = e;
      q.push_back(u);
    }
  }
  return t;
}

std::vector<TransId> path_from_root(const Model& m, const RootTrees& t, StateId root, StateId v) {
  std::vector<TransId> p;
  while (v != root) {
    TransId e = t.fwd_parent[v];
    p.push_back(e);
    v = m.transition(e).from;
  }
  std::reverse(p.begin(), p.end());
  return p;
}

std::vector<TransId> path_to_root(const Model& m, const RootTrees& t, StateId root, StateId v) {
  std::vector<TransId> p;
  while (v != root) {
    TransId e = t.back_next[v];
    p.push_back(e);
    v = m.transition(e).to;
  }
  return p;
}

}  // namespace

std::variant<Potential, NotTotallyBounded> potentials(const Model& m, const StateSet& component, int i,
                                                      std::optional<StateId> root_opt) {
  if (component.empty()) return Potential{};
  const StateId root = root_opt.value_or(component.front());
  std::vector<bool> in_comp(m.num_states(), false);
  for (StateId s : component) in_comp[s] = true;
  RootTrees trees = root_trees(m, in_comp, root);

  Potential h;
  h[root] = 0;
  std::deque<StateId> q{root};
  while (!q.empty()) {
    StateId v = q.front();
    q.pop_front();
    for (TransId e : m.outgoing(v)) {
      StateId w = m.transition(e).to;
      if (in_comp[w] && trees.fwd_parent[w] == e) {
        h[w] = h[v] + m.transition(e).update[i];
        q.push_back(w);
      }
    }
  }
  for (StateId v : component) {
    for (TransId e : m.outgoing(v)) {
      const auto& tr = m.transition(e);
      if (!in_comp[tr.to] || h.at(v) + tr.update[i] == h.at(tr.to)) continue;
      // One of the two closed walks through root differs in gain by the mismatch, so one is nonzero.
      std::vector<TransId> a = path_from_root(m, trees, root, v);
      a.push_back(e);
      auto back = path_to_root(m, trees, root, tr.to);
      a.insert(a.end(), back.begin(), back.end());
      PathSummary ca = PathSummary::make(m, root, a);
      if (ca.gain[i] != 0) return NotTotallyBounded{std::move(ca)};
      std::vector<TransId> b = path_from_root(m, trees, root, tr.to);
      b.insert(b.end(), back.begin(), back.end());
      return NotTotallyBounded{PathSummary::make(m, root, b)};
    }
  }
  return h;
}

// ---------------------------------------------------------------------------

NegativePrefix negative_prefix_reachable(const Model& m, int i) {
  const int n = m.num_states();
  constexpr long long kInf = std::numeric_limits<long long>::max();
  std::vector<long long> dist(n, kInf);
  std::vector<TransId> pred(n, -1);
  for (StateId s : m.initial()) dist[s] = 0;

  StateId relaxed = -1;
  for (int round = 0; round <= n; ++round) {
    relaxed = -1;
    for (TransId e = 0; e < m.num_transitions(); ++e) {
      const auto& tr = m.transition(e);
      if (dist[tr.from] == kInf) continue;
      long long nd = dist[tr.from] + tr.update[i];
      if (nd < dist[tr.to]) {
        dist[tr.to] = nd;
        pred[tr.to] = e;
        relaxed = tr.to;
      }
    }
    if (relaxed < 0) break;
  }

  NegativePrefix out;
  auto shortest_from_initial = [&](StateId target) {
    // BFS over the transition graph from the initial states; used to reach a negative cycle.
    std::vector<TransId> par(n, -1);
    std::vector<bool> seen(n, false);
    std::deque<StateId> q;
    for (StateId s : m.initial()) {
      seen[s] = true;
      q.push_back(s);
    }
    while (!q.empty()) {
      StateId v = q.front();
      q.pop_front();
      for (TransId e : m.outgoing(v)) {
        StateId w = m.transition(e).to;
        if (seen[w]) continue;
        seen[w] = true;
        par[w] = e;
        q.push_back(w);
      }
    }
    std::vector<TransId> p;
    StateId v = target;
    while (par[v] >= 0) {
      p.push_back(par[v]);
      v = m.transition(par[v]).from;
    }
    std::reverse(p.begin(), p.end());
    return std::make_pair(v, p);
  };

  std::vector<TransId> walk;
  StateId start = -1;
  if (relaxed >= 0) {
    // Negative cycle: step back n times to land on it, then collect it.
    StateId v = relaxed;
    for (int r = 0; r < n; ++r) v = m.transition(pred[v]).from;
    std::vector<TransId> cyc;
    StateId u = v;
    do {
      cyc.push_back(pred[u]);
      u = m.transition(pred[u]).from;
    } while (u != v);
    std::reverse(cyc.begin(), cyc.end());
    auto [s0, prefix] = shortest_from_initial(v);
    long long g = 0;
    for (TransId e : prefix) g += m.transition(e).update[i];
    long long cg = 0;
    for (TransId e : cyc) cg += m.transition(e).update[i];
    walk = prefix;
    while (g >= 0) {
      walk.insert(walk.end(), cyc.begin(), cyc.end());
      g += cg;
    }
    start = s0;
  } else {
    StateId best = -1;
    for (StateId v = 0; v < n; ++v)
      if (dist[v] != kInf && dist[v] < 0 && (best < 0 || dist[v] < dist[best])) best = v;
    if (best < 0) return out;
    // Without negative cycles the predecessor graph is a forest rooted at unrelaxed initial states.
    StateId v = best;
    while (pred[v] >= 0) {
      walk.push_back(pred[v]);
      v = m.transition(pred[v]).from;
    }
    std::reverse(walk.begin(), walk.end());
    start = v;
  }
  // Cut at the first negative prefix.
  long long g = 0;
  std::size_t cut = 0;
  for (; cut < walk.size(); ++cut) {
    g += m.transition(walk[cut]).update[i];
    if (g < 0) break;
  }
  walk.resize(cut + 1);
  out.reachable = true;
  out.witness = PathSummary::make(m, start, std::move(walk));
  return out;
}

// ---------------------------------------------------------------------------

CycleResult cycle_feasibility(const Model& m, const CycleQuery& q, const SearchBudget& budget) {
  std::vector<StateId> anchors;
  if (q.anchor) {
    anchors.push_back(*q.anchor);
  } else if (q.within) {
    anchors = *q.within;
  } else {
    for (StateId s = 0; s < m.num_states(); ++s) anchors.push_back(s);
  }
  detail::ParikhProblem p;
  p.model = &m;
  p.allowed = detail::allowed_within(m, q.within);
  p.nonempty = true;
  p.require = q.require;
  p.node_budget = budget.ilp_nodes;
  p.gain.resize(m.dimension());
  for (int j : q.zero_set) p.gain.at(j) = {detail::GainBound::Kind::Equal, Rational(0)};
  if (q.negative_index) {
    int i = *q.negative_index;
    if (std::find(q.zero_set.begin(), q.zero_set.end(), i) != q.zero_set.end())
      return CycleNotFound{true, "negative counter is also required to have zero gain"};
    p.gain.at(i) = {detail::GainBound::Kind::AtMost, Rational(-1)};
  }

  bool exhaustive = true;
  std::string note;
  for (StateId a : anchors) {
    if (q.within && !contains(*q.within, a)) continue;
    p.source = p.target = a;
    // Small multiplicities first; an infeasible capped system proves nothing on its own.
    for (int pass = 0; pass < 2; ++pass) {
      p.max_mult = pass == 0 && budget.max_mult > 0 ? std::optional<long long>(budget.max_mult) : std::nullopt;
      auto r = detail::parikh_solve(p);
      if (r.status == detail::ParikhOutcome::Status::Found) return CycleFound{std::move(r.path)};
      if (r.status == detail::ParikhOutcome::Status::Budget) {
        exhaustive = false;
        note = r.diagnostic;
        break;
      }
      if (!p.max_mult) break;
    }
    // A cycle through a later anchor that avoids this one is still found there.
  }
  return CycleNotFound{exhaustive, exhaustive ? "Parikh system infeasible for every anchor" : note};
}

std::variant<CounterPartition, PartitionUnknown> bounded_partition(const Model& m, const SearchBudget& budget,
                                                                   const std::optional<StateSet>& within) {
  const int k = m.dimension();
  std::vector<bool> bounded(k, false);
  for (;;) {
    std::vector<int> zero;
    for (int j = 0; j < k; ++j)
      if (bounded[j]) zero.push_back(j);
    std::vector<bool> next = bounded;
    for (int j = 0; j < k; ++j) {
      if (bounded[j]) continue;
      CycleQuery q;
      q.zero_set = zero;
      q.negative_index = j;
      q.within = within;
      auto r = cycle_feasibility(m, q, budget);
      if (auto* nf = std::get_if<CycleNotFound>(&r)) {
        if (!nf->exhaustive) return PartitionUnknown{"cycle query for counter " + std::to_string(j + 1) + ": " + nf->note};
        next[j] = true;
      }
    }
    if (next == bounded) break;
    bounded = std::move(next);
  }
  CounterPartition part;
  for (int j = 0; j < k; ++j) (bounded[j] ? part.bounded : part.unbounded).push_back(j);
  return part;
}

}  // namespace vass
