#include "doctest.h"
#include "helpers.hpp"
#include "vass/avg_decider.hpp"

#include <random>

using namespace vass;
using testutil::make_model;
using testutil::make_query;

namespace {

Witness single_cycle_witness(const Model& m, std::vector<int> bounded, std::vector<int> unbounded, IntVec x) {
  Witness w;
  w.recurring_state = 0;
  w.recurring_values = std::move(x);
  w.partition = {std::move(bounded), std::move(unbounded)};
  w.cycle = {PathSummary::make(m, 0, {0})};
  w.in = w.out = {PathSummary::make(m, 0, {})};
  return w;
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

}  // namespace

TEST_CASE("verify_witness accepts a decreasing loop") {
  auto m = make_model(1, Domain::Z, 1, {{0, 0, {-1}}});
  auto v = verify_witness(m, make_query({{0}}, {0}), single_cycle_witness(m, {}, {0}, {0}));
  CHECK(v.accepted);
  CHECK(v.reasons.empty());
}

TEST_CASE("verify_witness rejects an increasing loop for an unbounded counter") {
  auto m = make_model(1, Domain::Z, 1, {{0, 0, {1}}});
  auto v = verify_witness(m, make_query({{0}}, {0}), single_cycle_witness(m, {}, {0}, {0}));
  CHECK_FALSE(v.accepted);
  REQUIRE_FALSE(v.reasons.empty());
  CHECK(starts_with(v.reasons.front(), "U1"));
}

TEST_CASE("verify_witness rejects a recurring value above the threshold") {
  auto m = make_model(1, Domain::Z, 1, {{0, 0, {0}}});
  auto v = verify_witness(m, make_query({{0}}, {2}), single_cycle_witness(m, {0}, {}, {3}));
  CHECK_FALSE(v.accepted);
  bool b1 = false;
  for (const auto& r : v.reasons) b1 = b1 || (starts_with(r, "B1") && r.find("3 exceeds 2") != std::string::npos);
  CHECK(b1);
}

TEST_CASE("verify_witness lists every violated condition") {
  // Bounded counter whose cycle has non-zero gain and whose value is unreachable.
  auto m = make_model(1, Domain::Z, 1, {{0, 0, {1}}});
  auto v = verify_witness(m, make_query({{0}}, {0}), single_cycle_witness(m, {0}, {}, {5}));
  CHECK_FALSE(v.accepted);
  int b1 = 0, bu = 0, reach = 0;
  for (const auto& r : v.reasons) {
    b1 += starts_with(r, "B1");
    bu += starts_with(r, "BU");
    reach += starts_with(r, "reach");
  }
  CHECK(b1 == 1);
  CHECK(bu == 1);
  CHECK(reach == 0);  // (q0,5) is reachable by five steps
}

TEST_CASE("verify_witness throws on paths that do not compose") {
  auto m = make_model(1, Domain::Z, 2, {{0, 1, {0}}, {1, 0, {0}}});
  Witness w;
  w.recurring_state = 0;
  w.recurring_values = {0};
  w.partition = {{}, {0}};
  w.cycle = {PathSummary::make(m, 1, {1, 0})};
  w.in = w.out = {PathSummary::make(m, 0, {})};
  CHECK_THROWS_AS(verify_witness(m, make_query({{0}}, {0}), w), ModelError);
  w.cycle = {PathSummary{0, {1}, {0}}};
  CHECK_THROWS_AS(verify_witness(m, make_query({{0}}, {0}), w), ModelError);
}

TEST_CASE("decide_avg_z on two interleaved loops") {
  auto m = make_model(2, Domain::Z, 1, {{0, 0, {-1, 1}}, {0, 0, {1, -1}}});
  auto q = make_query({{0}, {0}}, {0, 0});
  auto v = decide_avg_z(m, q);
  REQUIRE(std::holds_alternative<ZYes>(v));
  const auto& w = std::get<ZYes>(v).witness;
  CHECK(w.partition.unbounded == std::vector<int>{0, 1});
  CHECK(verify_witness(m, q, w).accepted);
  CHECK(std::holds_alternative<ZYes>(brute_force_avg_z(m, q)));
}

TEST_CASE("decide_avg_z on a single increasing loop is an exhaustive No") {
  auto m = make_model(1, Domain::Z, 1, {{0, 0, {1}}});
  auto q = make_query({{0}}, {100});
  auto v = decide_avg_z(m, q);
  REQUIRE(std::holds_alternative<VerdictNo>(v));
  CHECK(std::get<VerdictNo>(v).exhaustive);
  auto o = brute_force_avg_z(m, q);
  REQUIRE(std::holds_alternative<VerdictNo>(o));
}

TEST_CASE("decide_avg_z iterates a decreasing loop for a very low threshold") {
  auto m = make_model(1, Domain::Z, 1, {{0, 0, {0}}, {0, 0, {-1}}});
  auto v = decide_avg_z(m, make_query({{0}}, {-7}));
  CHECK(std::holds_alternative<ZYes>(v));
}

TEST_CASE("empty selecting set gives No for every threshold") {
  auto m = make_model(1, Domain::Z, 1, {{0, 0, {-1}}});
  for (long long l : {-5, 0, 5}) {
    auto q = make_query({{}}, {l});
    CHECK(std::holds_alternative<VerdictNo>(decide_avg_z(m, q)));
    CHECK(std::holds_alternative<VerdictNo>(brute_force_avg_z(m, q)));
  }
}

TEST_CASE("bounded counter threshold is tight at the recurring value") {
  // Counter fixed at 1 after the first step; the average is exactly 1.
  auto m = make_model(1, Domain::Z, 2, {{0, 1, {1}}, {1, 1, {0}}});
  CHECK(std::holds_alternative<ZYes>(decide_avg_z(m, make_query({{1}}, {1}))));
  CHECK(std::holds_alternative<VerdictNo>(decide_avg_z(m, make_query({{1}}, {0}))));
  CHECK(std::holds_alternative<ZYes>(brute_force_avg_z(m, make_query({{1}}, {1}))));
  CHECK(std::holds_alternative<VerdictNo>(brute_force_avg_z(m, make_query({{1}}, {0}))));
}

TEST_CASE("bounded counter averaged over a two-state cycle") {
  // Values alternate 0,1 on the cycle; the average is 1/2 sampled at both states.
  auto m = make_model(1, Domain::Z, 2, {{0, 1, {1}}, {1, 0, {-1}}});
  Model mm = m;
  AvgQuery q;
  q.selecting = {{0, 1}};
  q.thresholds = {Rational(1, 2)};
  CHECK(std::holds_alternative<ZYes>(decide_avg_z(mm, q)));
  q.thresholds = {Rational(1, 3)};
  CHECK(std::holds_alternative<VerdictNo>(decide_avg_z(mm, q)));
  q.selecting = {{0}};
  q.thresholds = {Rational(0)};
  CHECK(std::holds_alternative<ZYes>(decide_avg_z(mm, q)));
}

TEST_CASE("decide_avg_z rejects models over N") {
  auto m = make_model(1, Domain::N, 1, {{0, 0, {-1}}});
  CHECK_THROWS_AS(decide_avg_z(m, make_query({{0}}, {0})), ModelError);
}

TEST_CASE("oracle guard refuses large instances") {
  auto m = make_model(1, Domain::Z, 5, {{0, 1, {0}}});
  std::string why;
  CHECK_FALSE(oracle_guard(m, &why));
  CHECK_FALSE(why.empty());
  CHECK_THROWS_AS(brute_force_avg_z(m, make_query({{0}}, {0})), ModelError);
}

// Hand-rolled generator: random small VASS(Z) with updates in {-1,0,1}.
TEST_CASE("random small models: decider agrees with the oracle and is monotone in lambda") {
  std::mt19937_64 rng(42);
  int compared = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 2), k = 1 + static_cast<int>(rng() % 2);
    const int edges = 1 + static_cast<int>(rng() % 3);
    std::vector<testutil::Edge> es;
    for (int e = 0; e < edges; ++e) {
      IntVec u(k);
      for (auto& x : u) x = static_cast<long long>(rng() % 3) - 1;
      es.push_back({static_cast<StateId>(rng() % n), static_cast<StateId>(rng() % n), u});
    }
    auto m = make_model(k, Domain::Z, n, es);
    ZDecider dec(m);
    BruteForceZ orc(m);
    std::vector<StateSet> S(k);
    for (auto& s : S) s = (rng() % 4 == 0) ? StateSet{0} : StateSet{static_cast<StateId>(rng() % n)};
    bool prev_yes = false;
    for (long long l = -1; l <= 1; ++l) {
      auto q = make_query(S, std::vector<long long>(k, l));
      auto a = dec.decide(q);
      auto b = orc.decide(q);
      if (auto* y = std::get_if<ZYes>(&a)) CHECK(verify_witness(m, q, y->witness).accepted);
      if (!std::holds_alternative<VerdictUnknown>(a)) {
        ++compared;
        CHECK(std::holds_alternative<ZYes>(a) == std::holds_alternative<ZYes>(b));
        if (prev_yes) CHECK(std::holds_alternative<ZYes>(a));
        prev_yes = std::holds_alternative<ZYes>(a);
      }
    }
  }
  CHECK(compared > 150);
}

TEST_CASE("decide_avg_n1 examples") {
  auto zero = make_model(1, Domain::N, 1, {{0, 0, {0}}});
  auto r = decide_avg_n1(zero, {0}, Rational(0));
  REQUIRE(std::holds_alternative<N1Yes>(r));
  const auto& w = std::get<N1Yes>(r).witness;
  REQUIRE(w.selecting.size() == 1);
  CHECK(w.selecting[0].counters[0] == 0);

  auto up = make_model(1, Domain::N, 1, {{0, 0, {1}}});
  for (long long l : {0, 1, 3}) {
    auto v = decide_avg_n1(up, {0}, Rational(l));
    REQUIRE(std::holds_alternative<VerdictNo>(v));
    CHECK(std::get<VerdictNo>(v).exhaustive);
  }

  auto swap = make_model(1, Domain::N, 2, {{0, 1, {1}}, {1, 0, {-1}}});
  auto s = decide_avg_n1(swap, {0}, Rational(0));
  REQUIRE(std::holds_alternative<N1Yes>(s));
  CHECK(verify_n1_witness(swap, {0}, Rational(0), std::get<N1Yes>(s).witness, true).accepted);
}

TEST_CASE("decide_avg_n1 edge cases") {
  auto m = make_model(1, Domain::N, 1, {{0, 0, {0}}});
  CHECK(std::holds_alternative<VerdictNo>(decide_avg_n1(m, {0}, Rational(-1))));
  CHECK(std::holds_alternative<VerdictNo>(decide_avg_n1(m, {}, Rational(2))));
  auto two = make_model(2, Domain::N, 1, {{0, 0, {0, 0}}});
  CHECK_THROWS_AS(decide_avg_n1(two, {0}, Rational(0)), ModelError);
}

TEST_CASE("brute_force_n1 examples") {
  auto swap = make_model(1, Domain::N, 2, {{0, 1, {1}}, {1, 0, {-1}}});
  CHECK(std::holds_alternative<N1Yes>(brute_force_n1(swap, {0, 1}, Rational(1, 2))));
  CHECK(std::holds_alternative<VerdictNo>(brute_force_n1(swap, {1}, Rational(0))));
  auto up = make_model(1, Domain::N, 1, {{0, 0, {1}}});
  CHECK(std::holds_alternative<VerdictNo>(brute_force_n1(up, {0}, Rational(2))));
  CHECK(std::holds_alternative<VerdictNo>(brute_force_n1(swap, {}, Rational(2))));
}

TEST_CASE("decide_avg_n1 needs a climb before the cheapest loop") {
  // The counter must reach 2 to take the -2 edge; the only recurring values are 0 at q1.
  auto m = make_model(1, Domain::N, 2, {{0, 0, {1}}, {0, 1, {-2}}, {1, 1, {0}}});
  auto r = decide_avg_n1(m, {1}, Rational(0));
  REQUIRE(std::holds_alternative<N1Yes>(r));
  CHECK(std::get<N1Yes>(r).witness.stem.length() == 3);
}

TEST_CASE("verify_n1_witness rejects bad lassos") {
  auto swap = make_model(1, Domain::N, 2, {{0, 1, {1}}, {1, 0, {-1}}});
  N1Witness w;
  w.selecting = {Config{0, {0}}};
  w.stem = PathSummary::make(swap, 0, {});
  w.segments = {PathSummary::make(swap, 0, {0, 1})};
  CHECK(verify_n1_witness(swap, {0}, Rational(0), w).accepted);
  CHECK_FALSE(verify_n1_witness(swap, {0, 1}, Rational(0), w).accepted);  // passes q1 in between
  w.selecting = {Config{0, {1}}};
  CHECK_FALSE(verify_n1_witness(swap, {0}, Rational(0), w).accepted);
}

TEST_CASE("random one-counter models: decider agrees with the oracle") {
  std::mt19937_64 rng(5);
  int compared = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    std::vector<testutil::Edge> es;
    const int edges = 1 + static_cast<int>(rng() % 5);
    for (int e = 0; e < edges; ++e)
      es.push_back({static_cast<StateId>(rng() % n), static_cast<StateId>(rng() % n),
                    {static_cast<long long>(rng() % 3) - 1}});
    auto m = make_model(1, Domain::N, n, es);
    StateSet S;
    for (StateId s = 0; s < n; ++s)
      if (rng() % 2) S.push_back(s);
    const Rational lam(static_cast<long long>(rng() % 4));
    auto a = decide_avg_n1(m, S, lam);
    auto b = brute_force_n1(m, S, lam);
    if (auto* y = std::get_if<N1Yes>(&a)) CHECK(verify_n1_witness(m, S, lam, y->witness, true).accepted);
    if (std::holds_alternative<VerdictUnknown>(a) || std::holds_alternative<VerdictUnknown>(b)) continue;
    ++compared;
    CHECK(std::holds_alternative<N1Yes>(a) == std::holds_alternative<N1Yes>(b));
  }
  CHECK(compared == 80);
}

TEST_CASE("dual coverability reduction") {
  auto m = make_model(1, Domain::Z, 2, {{0, 1, {-2}}});
  auto red = reduce_dual_coverability(m, 0, 1, {0});
  CHECK(red.model.num_states() == 3);
  CHECK(red.model.dimension() == 2);
  CHECK(red.model.num_transitions() == 3);
  CHECK(red.query.thresholds == std::vector<Rational>{Rational(0), Rational(-1)});
  CHECK(std::holds_alternative<ZYes>(decide_avg_z(red.model, red.query)));
  CHECK(std::holds_alternative<ZYes>(brute_force_avg_z(red.model, red.query)));

  auto far = make_model(1, Domain::Z, 2, {{1, 0, {-2}}});
  auto r2 = reduce_dual_coverability(far, 0, 1, {0});
  CHECK(std::holds_alternative<VerdictNo>(decide_avg_z(r2.model, r2.query)));
  CHECK(std::holds_alternative<VerdictNo>(brute_force_avg_z(r2.model, r2.query)));

  // Reached with +2, so not covered by 0 but covered by 2.
  auto high = make_model(1, Domain::Z, 2, {{0, 1, {2}}});
  CHECK(std::holds_alternative<VerdictNo>(decide_avg_z(reduce_dual_coverability(high, 0, 1, {0}).model,
                                                       reduce_dual_coverability(high, 0, 1, {0}).query)));
  auto ok = reduce_dual_coverability(high, 0, 1, {2});
  CHECK(std::holds_alternative<ZYes>(decide_avg_z(ok.model, ok.query)));
  CHECK_THROWS_AS(reduce_dual_coverability(m, 0, 7, {0}), ModelError);
}
