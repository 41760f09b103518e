#pragma once

#include "vass/model.hpp"

#include <string>
#include <vector>

namespace testutil {

struct Edge {
  vass::StateId from;
  vass::StateId to;
  vass::IntVec update;
};

inline vass::Model make_model(int k, vass::Domain d, int n, const std::vector<Edge>& edges,
                              std::vector<vass::StateId> initial = {0}) {
  std::vector<std::string> names;
  for (int s = 0; s < n; ++s) names.push_back("q" + std::to_string(s));
  std::vector<vass::Transition> ts;
  for (const auto& e : edges) ts.push_back({e.from, e.to, e.update});
  return vass::Model(k, d, names, std::move(initial), ts);
}

struct ProbEdge {
  vass::StateId from;
  vass::StateId to;
  vass::IntVec update;
  vass::Rational prob;
};

/// Probabilistic model with all initial mass on state 0 unless given.
inline vass::ProbModel make_prob(int k, vass::Domain d, int n, const std::vector<ProbEdge>& edges,
                                 std::vector<vass::StateId> initial = {0}, std::vector<vass::Rational> init = {}) {
  std::vector<Edge> es;
  std::vector<vass::Rational> p;
  for (const auto& e : edges) {
    es.push_back({e.from, e.to, e.update});
    p.push_back(e.prob);
  }
  if (init.empty()) init.assign(initial.size(), vass::Rational(1, static_cast<long long>(initial.size())));
  return vass::ProbModel(make_model(k, d, n, es, std::move(initial)), p, init);
}

inline vass::AvgQuery make_query(std::vector<vass::StateSet> S, std::vector<long long> lambda) {
  vass::AvgQuery q;
  q.selecting = std::move(S);
  for (long long l : lambda) q.thresholds.emplace_back(l);
  return q;
}

}  // namespace testutil
