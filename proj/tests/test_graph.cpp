#include "doctest.h"
#include "helpers.hpp"
#include "vass/graph.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>

using namespace vass;
using testutil::Edge;
using testutil::make_model;

namespace {

Model random_model(std::mt19937_64& rng, int n, int k, int edges, int range, Domain d = Domain::Z) {
  std::vector<Edge> es;
  for (int e = 0; e < edges; ++e) {
    IntVec u(k);
    for (auto& x : u) x = static_cast<long long>(rng() % (2 * range + 1)) - range;
    es.push_back({static_cast<StateId>(rng() % n), static_cast<StateId>(rng() % n), u});
  }
  return make_model(k, d, n, es);
}

// Oracle: closed walks without repeated interior states, one per rotation class.
std::set<std::multiset<TransId>> brute_simple_cycles(const Model& m, const StateSet& comp, int max_len) {
  std::set<std::vector<TransId>> canon;
  std::vector<TransId> cur;
  std::function<void(StateId, StateId, std::set<StateId>&)> dfs = [&](StateId root, StateId at,
                                                                       std::set<StateId>& used) {
    for (TransId t : m.outgoing(at)) {
      StateId to = m.transition(t).to;
      if (!contains(comp, to)) continue;
      cur.push_back(t);
      if (to == root) {
        auto best = cur;
        for (std::size_t r = 1; r < cur.size(); ++r) {
          std::vector<TransId> rot(cur.begin() + static_cast<long>(r), cur.end());
          rot.insert(rot.end(), cur.begin(), cur.begin() + static_cast<long>(r));
          best = std::min(best, rot);
        }
        canon.insert(best);
      } else if (!used.count(to) && static_cast<int>(cur.size()) < max_len) {
        used.insert(to);
        dfs(root, to, used);
        used.erase(to);
      }
      cur.pop_back();
    }
  };
  for (StateId r : comp) {
    std::set<StateId> used{r};
    dfs(r, r, used);
  }
  std::set<std::multiset<TransId>> out;
  for (const auto& c : canon) out.insert(std::multiset<TransId>(c.begin(), c.end()));
  return out;
}

// Oracle: BFS over (state, value of counter i) up to the given depth.
bool bfs_negative(const Model& m, int i, int depth) {
  std::set<std::pair<StateId, long long>> seen;
  std::vector<std::pair<StateId, long long>> frontier;
  for (StateId q0 : m.initial()) frontier.push_back({q0, 0});
  for (int d = 0; d < depth && !frontier.empty(); ++d) {
    std::vector<std::pair<StateId, long long>> next;
    for (auto [s, v] : frontier)
      for (TransId t : m.outgoing(s)) {
        long long nv = v + m.transition(t).update[i];
        if (nv < 0) return true;
        if (seen.insert({m.transition(t).to, nv}).second) next.push_back({m.transition(t).to, nv});
      }
    frontier = std::move(next);
  }
  return false;
}

}  // namespace

TEST_CASE("scc examples") {
  auto both = make_model(1, Domain::Z, 2, {{0, 1, {0}}, {1, 0, {0}}});
  auto a = sccs(both);
  REQUIRE(a.components.size() == 1);
  CHECK(a.is_bottom[0]);
  CHECK(strongly_connected(both));

  auto chain = make_model(1, Domain::Z, 2, {{0, 1, {0}}});
  auto b = sccs(chain);
  REQUIRE(b.components.size() == 2);
  CHECK(b.components[0] == StateSet{0});
  CHECK_FALSE(b.is_bottom[0]);
  CHECK(b.is_bottom[1]);
  CHECK_FALSE(b.nontrivial(chain, 0));

  auto loops = make_model(1, Domain::Z, 2, {{0, 0, {0}}, {0, 1, {0}}, {1, 1, {0}}});
  auto c = sccs(loops);
  REQUIRE(c.components.size() == 2);
  CHECK_FALSE(c.is_bottom[c.component_of[0]]);
  CHECK(c.is_bottom[c.component_of[1]]);
  CHECK(c.nontrivial(loops, c.component_of[0]));
}

TEST_CASE("components partition the states and bottom means closed") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    auto m = random_model(rng, 1 + static_cast<int>(rng() % 6), 1, static_cast<int>(rng() % 10), 1);
    auto info = sccs(m);
    std::vector<int> seen(m.num_states(), 0);
    for (std::size_t c = 0; c < info.components.size(); ++c)
      for (StateId s : info.components[c]) {
        ++seen[s];
        CHECK(info.component_of[s] == static_cast<int>(c));
      }
    for (int v : seen) CHECK(v == 1);
    for (std::size_t c = 0; c < info.components.size(); ++c) {
      bool leaves = false;
      for (const auto& t : m.transitions())
        leaves = leaves || (info.component_of[t.from] == static_cast<int>(c) &&
                            info.component_of[t.to] != static_cast<int>(c));
      CHECK(info.is_bottom[c] == !leaves);
    }
    for (std::size_t c = 1; c < info.components.size(); ++c)
      CHECK(info.components[c - 1].front() < info.components[c].front());
  }
}

TEST_CASE("simple cycle examples") {
  auto loops = make_model(1, Domain::Z, 1, {{0, 0, {1}}, {0, 0, {2}}});
  auto c = simple_cycles(loops, {0}, 1);
  REQUIRE(c.size() == 2);
  CHECK(c[0].transitions == std::vector<TransId>{0});
  CHECK(c[1].transitions == std::vector<TransId>{1});

  auto pair = make_model(1, Domain::Z, 2, {{0, 1, {0}}, {1, 0, {0}}});
  auto p = simple_cycles(pair, {0, 1}, 2);
  REQUIRE(p.size() == 1);
  CHECK(p[0].start == 0);

  std::vector<Edge> k3;
  for (StateId a = 0; a < 3; ++a)
    for (StateId b = 0; b < 3; ++b)
      if (a != b) k3.push_back({a, b, {0}});
  auto m3 = make_model(1, Domain::Z, 3, k3);
  CHECK(simple_cycles(m3, {0, 1, 2}, 3).size() == 5);
  for (StateId a = 0; a < 3; ++a) k3.push_back({a, a, {0}});
  auto m3l = make_model(1, Domain::Z, 3, k3);
  CHECK(simple_cycles(m3l, {0, 1, 2}, 3).size() == 8);
}

TEST_CASE("simple cycles match brute-force enumeration") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 80; ++trial) {
    auto m = random_model(rng, 1 + static_cast<int>(rng() % 4), 1, static_cast<int>(rng() % 9), 1);
    auto info = sccs(m);
    for (const auto& comp : info.components) {
      const int max_len = 1 + static_cast<int>(rng() % 4);
      auto got = simple_cycles(m, comp, max_len);
      std::set<std::multiset<TransId>> mine;
      for (const auto& c : got) {
        CHECK(c.is_cycle(m));
        CHECK(static_cast<int>(c.length()) <= max_len);
        CHECK(mine.insert(std::multiset<TransId>(c.transitions.begin(), c.transitions.end())).second);
      }
      CHECK(mine == brute_simple_cycles(m, comp, max_len));
    }
  }
}

TEST_CASE("potential examples") {
  auto swap = make_model(1, Domain::Z, 2, {{0, 1, {1}}, {1, 0, {-1}}});
  auto h = potentials(swap, {0, 1}, 0);
  REQUIRE(std::holds_alternative<Potential>(h));
  CHECK(std::get<Potential>(h) == Potential{{0, 0}, {1, 1}});

  auto up = make_model(1, Domain::Z, 1, {{0, 0, {1}}});
  auto u = potentials(up, {0}, 0);
  REQUIRE(std::holds_alternative<NotTotallyBounded>(u));
  CHECK(std::get<NotTotallyBounded>(u).cycle.gain == IntVec{1});

  auto flat = make_model(1, Domain::Z, 1, {{0, 0, {0}}});
  CHECK(std::get<Potential>(potentials(flat, {0}, 0)) == Potential{{0, 0}});
}

TEST_CASE("potentials are consistent on every internal transition") {
  std::mt19937_64 rng(3);
  int defined = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto m = random_model(rng, 1 + static_cast<int>(rng() % 4), 1, 1 + static_cast<int>(rng() % 6), 1);
    for (const auto& comp : sccs(m).components) {
      auto h = potentials(m, comp, 0);
      if (auto* p = std::get_if<Potential>(&h)) {
        ++defined;
        CHECK(p->at(comp.front()) == 0);
        for (const auto& t : m.transitions())
          if (contains(comp, t.from) && contains(comp, t.to)) CHECK(p->at(t.to) - p->at(t.from) == t.update[0]);
      } else {
        const auto& c = std::get<NotTotallyBounded>(h).cycle;
        CHECK(c.is_cycle(m));
        CHECK(c.gain[0] != 0);
      }
    }
  }
  CHECK(defined > 50);
}

TEST_CASE("negative prefix examples") {
  auto swap = make_model(1, Domain::Z, 2, {{0, 1, {1}}, {1, 0, {-1}}});
  CHECK_FALSE(negative_prefix_reachable(swap, 0).reachable);
  auto down = make_model(1, Domain::Z, 1, {{0, 0, {-1}}});
  auto d = negative_prefix_reachable(down, 0);
  REQUIRE(d.reachable);
  CHECK(d.witness.length() == 1);
  auto twice = make_model(1, Domain::Z, 2, {{0, 1, {2}}, {1, 0, {-1}}});
  CHECK_FALSE(negative_prefix_reachable(twice, 0).reachable);
}

TEST_CASE("negative prefix matches the configuration BFS oracle") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    auto m = random_model(rng, 1 + static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 2),
                          1 + static_cast<int>(rng() % 8), 2);
    for (int i = 0; i < m.dimension(); ++i) {
      auto r = negative_prefix_reachable(m, i);
      CHECK(r.reachable == bfs_negative(m, i, 50));
      if (r.reachable) {
        CHECK(std::find(m.initial().begin(), m.initial().end(), r.witness.start) != m.initial().end());
        CHECK(r.witness.gain[i] < 0);
      }
    }
  }
}

TEST_CASE("bounded partition examples") {
  auto swap = make_model(2, Domain::Z, 1, {{0, 0, {1, -1}}, {0, 0, {-1, 1}}});
  auto a = std::get<CounterPartition>(bounded_partition(swap));
  CHECK(a.bounded.empty());
  CHECK(a.unbounded == std::vector<int>{0, 1});

  auto up = make_model(1, Domain::Z, 1, {{0, 0, {1}}});
  CHECK(std::get<CounterPartition>(bounded_partition(up)).bounded == std::vector<int>{0});

  // Counter 2 only increases, so cycles usable forever avoid every transition.
  auto mixed = make_model(2, Domain::Z, 2, {{0, 0, {1, 1}}, {0, 0, {-1, 1}}, {0, 1, {0, 1}}, {1, 0, {0, 1}}});
  auto c = std::get<CounterPartition>(bounded_partition(mixed));
  CHECK(c.bounded == std::vector<int>{0, 1});

  // A counter-1-decreasing cycle that avoids counter 2 keeps counter 1 unbounded.
  auto escape = make_model(2, Domain::Z, 2, {{0, 0, {0, 1}}, {0, 1, {0, 1}}, {1, 1, {-1, 0}}});
  auto e = std::get<CounterPartition>(bounded_partition(escape));
  CHECK(e.bounded == std::vector<int>{1});
  CHECK(e.unbounded == std::vector<int>{0});
}

TEST_CASE("bounded partition is monotone under adding transitions") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3), k = 1 + static_cast<int>(rng() % 2);
    std::vector<Edge> es;
    for (int e = 0; e < 3; ++e) {
      IntVec u(k);
      for (auto& x : u) x = static_cast<long long>(rng() % 3) - 1;
      es.push_back({static_cast<StateId>(rng() % n), static_cast<StateId>(rng() % n), u});
    }
    auto small = make_model(k, Domain::Z, n, es);
    IntVec u(k);
    for (auto& x : u) x = static_cast<long long>(rng() % 3) - 1;
    es.push_back({static_cast<StateId>(rng() % n), static_cast<StateId>(rng() % n), u});
    auto big = make_model(k, Domain::Z, n, es);
    auto a = bounded_partition(small), b = bounded_partition(big);
    if (!std::holds_alternative<CounterPartition>(a) || !std::holds_alternative<CounterPartition>(b)) continue;
    for (int j : std::get<CounterPartition>(a).unbounded) {
      const auto& ub = std::get<CounterPartition>(b).unbounded;
      CHECK(std::find(ub.begin(), ub.end(), j) != ub.end());
    }
  }
}

TEST_CASE("cycle feasibility examples") {
  auto swap = make_model(2, Domain::Z, 1, {{0, 0, {1, -1}}, {0, 0, {-1, 1}}});
  CycleQuery q;
  q.zero_set = {1};
  q.negative_index = 0;
  auto r = cycle_feasibility(swap, q);
  REQUIRE(std::holds_alternative<CycleNotFound>(r));
  CHECK(std::get<CycleNotFound>(r).exhaustive);
  // Independent check: no multiplicities up to 10 work.
  for (int a = 0; a <= 10; ++a)
    for (int b = 0; b <= 10; ++b)
      if (a + b > 0) CHECK_FALSE((a - b < 0 && -a + b == 0));

  auto dec = make_model(2, Domain::Z, 1, {{0, 0, {-1, 0}}, {0, 0, {0, 0}}});
  auto f = cycle_feasibility(dec, q);
  REQUIRE(std::holds_alternative<CycleFound>(f));
  const auto& c = std::get<CycleFound>(f).cycle;
  CHECK(c.gain[0] < 0);
  CHECK(c.gain[1] == 0);
  CHECK(gain(dec, c) == c.gain);

  auto away = make_model(1, Domain::Z, 2, {{0, 0, {-1}}, {0, 1, {0}}});
  CycleQuery rq;
  rq.negative_index = 0;
  rq.require = {{1}};
  auto n = cycle_feasibility(away, rq);
  REQUIRE(std::holds_alternative<CycleNotFound>(n));
  CHECK(std::get<CycleNotFound>(n).exhaustive);
}

TEST_CASE("found cycles satisfy their constraints exactly") {
  std::mt19937_64 rng(8);
  int found = 0;
  for (int trial = 0; trial < 150; ++trial) {
    auto m = random_model(rng, 1 + static_cast<int>(rng() % 3), 2, 1 + static_cast<int>(rng() % 5), 1);
    CycleQuery q;
    q.zero_set = {1};
    q.negative_index = 0;
    if (rng() % 2) q.require = {{static_cast<StateId>(rng() % m.num_states())}};
    auto r = cycle_feasibility(m, q);
    if (auto* f = std::get_if<CycleFound>(&r)) {
      ++found;
      const auto& c = f->cycle;
      CHECK(c.is_cycle(m));
      CHECK_FALSE(c.empty());
      const auto g = gain(m, PathSummary::make(m, c.start, c.transitions));
      CHECK(g[0] < 0);
      CHECK(g[1] == 0);
      for (const auto& set : q.require) {
        auto vis = c.visited_states(m);
        CHECK(std::any_of(vis.begin(), vis.end(), [&](StateId s) { return contains(set, s); }));
      }
    }
  }
  CHECK(found > 10);
}
