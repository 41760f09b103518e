#pragma once

#include "vass/graph.hpp"
#include "vass/markov.hpp"
#include "vass/model.hpp"
#include "vass/sim.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace vass {

struct SccClass {
  enum class Tag { PositiveGain, NegativeGain, TotallyBounded, ZeroGainUnbounded };
  Tag tag = Tag::TotallyBounded;
  Rational expected_gain;
  ExtRational value;     // TotallyBounded: silent long-run value with potentials rooted at the entry state
  Potential potential;   // TotallyBounded only
};

std::string to_string(SccClass::Tag t);

/// Classifies one strongly connected component of pm for counter i.
SccClass classify_scc(const ProbModel& pm, const StateSet& component, int i, const StateSet& S_i,
                      std::optional<StateId> entry = std::nullopt);

struct BsccDiagnostic {
  StateSet states;
  StateId entry = 0;
  Rational reach_probability;
  FrequencyMap frequencies;
  std::vector<SccClass> classes;    // per dimension
  std::vector<ExtRational> entry_gain;  // y_i per dimension
};

struct ExpectedReport {
  std::vector<ExtRational> values;           // per dimension
  std::vector<std::vector<std::string>> notes;  // per dimension
  std::vector<BsccDiagnostic> bsccs;
};

/// Exact expected limit-average per dimension for a probabilistic VASS over Z.
ExpectedReport expected_average_z(const ProbModel& pm, const std::vector<StateSet>& selecting);

struct AllPathsNotValid {
  int counter = 0;
  PathSummary witness;
};

std::variant<ExpectedReport, AllPathsNotValid> expected_average_n_strict(const ProbModel& pm,
                                                                         const std::vector<StateSet>& selecting);

enum class RelaxedFailure { NegGain, ZeroGainUnbounded, PosGain, NegativeStateValue, Undefined };
std::string to_string(RelaxedFailure f);

struct RelaxedReport {
  bool finite = false;
  std::vector<ExtRational> values;                      // set when finite
  std::vector<std::optional<RelaxedFailure>> failures;  // per dimension
  std::optional<ValidityEstimate> validity;             // attached when some dimension has positive gain
  std::optional<ExpectedReport> detail;
};

/// Relaxed semantics over a strongly connected probabilistic VASS(N); throws ModelError otherwise.
RelaxedReport expected_average_n_relaxed_scc(const ProbModel& pm, const std::vector<StateSet>& selecting);

struct CoverabilityReduction {
  ProbModel model;
  AvgQuery query;  // selecting {r} in every dimension, thresholds (3,...,3,1)
  StateId sink = 0;
};

/// Coverability of t from s in a VASS(N) as a bound on an expected average.
CoverabilityReduction reduce_coverability(const Model& m, StateId s, StateId t);

}  // namespace vass
