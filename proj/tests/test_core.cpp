#include "doctest.h"
#include "helpers.hpp"
#include "vass/model.hpp"

#include <random>

using namespace vass;
using testutil::make_model;

namespace {

const char* kPlusMinus = R"({"dimension":1,"domain":"Z","states":["q0"],"initial":["q0"],
  "transitions":[{"from":"q0","to":"q0","update":[1],"prob":"1/2"},{"from":"q0","to":"q0","update":[-1],"prob":"1/2"}],
  "selecting":[["q0"]]})";

}  // namespace

TEST_CASE("Rational is kept in lowest terms") {
  Rational r(6, -4);
  CHECK(r.str() == "-3/2");
  CHECK(r.denominator() == 2);
  CHECK(Rational::parse("10/4") == Rational(5, 2));
  CHECK(Rational::parse("1.25") == Rational(5, 4));
  CHECK(Rational::parse("-7").str() == "-7");
  CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
  CHECK(Rational(7, 2).floor() == 3);
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(Rational(-7, 2).ceil() == -3);
}

TEST_CASE("ExtRational arithmetic and ordering") {
  auto pinf = ExtRational::plus_infinity(), minf = ExtRational::minus_infinity(), und = ExtRational::undefined();
  CHECK((pinf + minf).is_undefined());
  CHECK((pinf + ExtRational(Rational(3))) == pinf);
  CHECK((ExtRational(Rational(1, 2)) + ExtRational(Rational(1, 3))) == ExtRational(Rational(5, 6)));
  CHECK(minf < ExtRational(Rational(-1000)));
  CHECK(ExtRational(Rational(5)) < pinf);
  CHECK((und <=> pinf) == std::partial_ordering::unordered);
  CHECK((Rational(0) * pinf).is_finite());
  for (auto e : {pinf, minf, und, ExtRational(Rational(-3, 7))}) CHECK(ExtRational::parse(e.str()) == e);
  CHECK(pinf.str() == "+inf");
  CHECK(minf.str() == "-inf");
  CHECK(und.str() == "undefined");
}

TEST_CASE("parse_model accepts the one-state plus-minus model") {
  auto f = parse_model(kPlusMinus);
  REQUIRE(f.probabilistic());
  const auto& pm = std::get<ProbModel>(f.model);
  CHECK(pm.base().num_states() == 1);
  CHECK(pm.base().num_transitions() == 2);
  CHECK(pm.prob(0) == Rational(1, 2));
  CHECK(pm.init_dist() == std::vector<Rational>{Rational(1)});
}

TEST_CASE("parse_model accepts a model without transitions") {
  auto f = parse_model(R"({"dimension":1,"domain":"N","states":["a"],"initial":["a"],"transitions":[]})");
  CHECK_FALSE(f.probabilistic());
  CHECK(f.base().num_transitions() == 0);
}

TEST_CASE("parse_model rejects probabilities that do not sum to one") {
  const char* bad = R"({"dimension":1,"domain":"Z","states":["q0"],"initial":["q0"],
    "transitions":[{"from":"q0","to":"q0","update":[1],"prob":"1/3"},{"from":"q0","to":"q0","update":[-1],"prob":"1/3"}]})";
  try {
    parse_model(bad);
    FAIL("expected ModelError");
  } catch (const ModelError& e) {
    CHECK(std::string(e.what()).find("2/3") != std::string::npos);
  }
}

TEST_CASE("parse_model validation errors") {
  auto rejects = [](const char* text) { CHECK_THROWS_AS(parse_model(text), ModelError); };
  rejects("{not json");
  rejects(R"({"dimension":1,"domain":"Z","states":["a"],"initial":["b"],"transitions":[]})");
  rejects(R"({"dimension":2,"domain":"Z","states":["a"],"initial":["a"],"transitions":[{"from":"a","to":"a","update":[1]}]})");
  rejects(R"({"dimension":1,"domain":"Q","states":["a"],"initial":["a"],"transitions":[]})");
  rejects(R"({"dimension":1,"domain":"Z","states":["a"],"initial":{"a":"1/2"},
    "transitions":[{"from":"a","to":"a","update":[1],"prob":"1"}]})");
  rejects(R"({"dimension":1,"domain":"Z","states":["a"],"initial":["a"],
    "transitions":[{"from":"a","to":"a","update":[1],"prob":"0"}]})");
  rejects(R"({"dimension":1,"domain":"Z","states":["a","b"],"initial":["a"],
    "transitions":[{"from":"a","to":"b","update":[1],"prob":"1"}]})");
}

TEST_CASE("duplicate transitions are merged") {
  auto f = parse_model(R"({"dimension":1,"domain":"Z","states":["a"],"initial":["a"],
    "transitions":[{"from":"a","to":"a","update":[1],"prob":"1/2"},{"from":"a","to":"a","update":[1],"prob":"1/2"}]})");
  const auto& pm = std::get<ProbModel>(f.model);
  CHECK(pm.base().num_transitions() == 1);
  CHECK(pm.prob(0) == Rational(1));
  auto g = parse_model(R"({"dimension":1,"domain":"Z","states":["a"],"initial":["a"],
    "transitions":[{"from":"a","to":"a","update":[1]},{"from":"a","to":"a","update":[1]}]})");
  CHECK(g.base().num_transitions() == 1);
}

TEST_CASE("serialize then parse is the identity on canonical text") {
  auto f = parse_model(kPlusMinus);
  const std::string once = serialize_model(f);
  const std::string twice = serialize_model(parse_model(once));
  CHECK(once == twice);
  CHECK(once.back() == '\n');
  CHECK(once.find("\"dimension\"") < once.find("\"domain\""));
}

TEST_CASE("step semantics over Z and N") {
  auto mn = make_model(1, Domain::N, 2, {{0, 1, {-1}}});
  CHECK_FALSE(step(mn, Config{0, {0}}, 0).has_value());
  auto mz = mn.with_domain(Domain::Z);
  auto r = step(mz, Config{0, {0}}, 0);
  REQUIRE(r.has_value());
  CHECK(*r == Config{1, {-1}});
  auto m2 = make_model(2, Domain::N, 2, {{0, 1, {-1, 3}}});
  CHECK(*step(m2, Config{0, {2, 0}}, 0) == Config{1, {1, 3}});
  CHECK_THROWS_AS(step(m2, Config{1, {2, 0}}, 0), ModelError);
}

TEST_CASE("gain examples") {
  auto m = make_model(1, Domain::Z, 1, {{0, 0, {1}}, {0, 0, {-1}}});
  CHECK(gain(m, PathSummary::make(m, 0, {})) == IntVec{0});
  CHECK(gain(m, PathSummary::make(m, 0, {0, 1})) == IntVec{0});
  auto m2 = make_model(2, Domain::Z, 2, {{0, 1, {2, -1}}, {1, 0, {-2, -1}}});
  auto c = PathSummary::make(m2, 0, {0, 1});
  CHECK(c.gain == IntVec{0, -2});
  CHECK(c.is_cycle(m2));
  // Independent per-step accumulation.
  IntVec acc{0, 0};
  for (const auto& cfg : run_path(m2, initial_config(m2, 0), c)) acc = cfg.counters;
  CHECK(acc == c.gain);
  CHECK_THROWS_AS(PathSummary::make(m2, 0, {1}), ModelError);
}

TEST_CASE("avg_over_selecting examples") {
  std::vector<Config> rho{{0, {0}}, {1, {2}}};
  CHECK(*avg_over_selecting(rho, {1}, 0) == Rational(2));
  CHECK(*avg_over_selecting(rho, {0, 1}, 0) == Rational(1));
  std::vector<Config> one{{0, {5}}};
  CHECK_FALSE(avg_over_selecting(one, {}, 0).has_value());
}

// Hand-rolled generator for random models and paths.
TEST_CASE("gain is additive and averages match an independent fold") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4), k = 1 + static_cast<int>(rng() % 3);
    std::vector<testutil::Edge> es;
    for (StateId s = 0; s < n; ++s)
      for (int e = 0; e < 2; ++e) {
        IntVec u(k);
        for (auto& x : u) x = static_cast<long long>(rng() % 7) - 3;
        es.push_back({s, static_cast<StateId>(rng() % n), u});
      }
    auto m = make_model(k, Domain::Z, n, es);
    auto walk = [&](StateId from, int len) {
      std::vector<TransId> ts;
      StateId cur = from;
      for (int j = 0; j < len; ++j) {
        auto out = m.outgoing(cur);
        TransId t = out[rng() % out.size()];
        ts.push_back(t);
        cur = m.transition(t).to;
      }
      return PathSummary::make(m, from, ts);
    };
    auto p = walk(0, static_cast<int>(rng() % 8));
    auto q = walk(p.end(m), static_cast<int>(rng() % 8));
    CHECK(p.then(m, q).gain == add(p.gain, q.gain));

    auto rho = run_path(m, initial_config(m, 0), p.then(m, q));
    StateSet S;
    for (StateId s = 0; s < n; ++s)
      if (rng() % 2) S.push_back(s);
    for (int i = 0; i < k; ++i)
      for (std::size_t len = 1; len <= rho.size(); ++len) {
        long long sum = 0, cnt = 0;
        for (std::size_t j = 0; j < len; ++j)
          if (std::find(S.begin(), S.end(), rho[j].state) != S.end()) {
            sum += rho[j].counters[i];
            ++cnt;
          }
        auto a = avg_over_selecting(std::span<const Config>(rho.data(), len), S, i);
        if (cnt == 0) {
          CHECK_FALSE(a.has_value());
        } else {
          REQUIRE(a.has_value());
          CHECK(*a == Rational(sum, cnt));
        }
      }
    // Over Z no step is ever disabled.
    for (TransId t = 0; t < m.num_transitions(); ++t)
      CHECK(step(m, Config{m.transition(t).from, IntVec(k, -5)}, t).has_value());
  }
}

TEST_CASE("random models survive a serialization round trip") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    std::vector<testutil::Edge> es;
    for (int e = 0; e < 5; ++e)
      es.push_back({static_cast<StateId>(rng() % n), static_cast<StateId>(rng() % n),
                    {static_cast<long long>(rng() % 5) - 2}});
    ModelFile f{make_model(1, rng() % 2 ? Domain::Z : Domain::N, n, es), std::nullopt};
    const std::string text = serialize_model(parse_model(serialize_model(f)));
    auto g = parse_model(text);
    CHECK(serialize_model(g) == text);
    CHECK(g.base().num_states() == n);
  }
}
