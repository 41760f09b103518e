#pragma once

#include "vass/model.hpp"

#include <map>
#include <optional>

namespace vass {

struct ChainEdge {
  StateId from = 0;
  StateId to = 0;
  Rational prob;
  IntVec update;
};

/// A finite Markov chain over a subset of the states of a probabilistic VASS.
struct ChainView {
  StateSet states;
  std::vector<ChainEdge> edges;

  static ChainView of(const ProbModel& pm);
  /// Keeps the transitions with both endpoints in `states`.
  static ChainView restrict(const ProbModel& pm, const StateSet& states);

  /// Throws ModelError if some state's outgoing probabilities do not sum to 1.
  void validate() const;
};

using FrequencyMap = std::map<StateId, Rational>;
using Distribution = std::map<StateId, Rational>;

/// Unique x with x·P = x and Σx = 1; throws ModelError unless strongly connected.
FrequencyMap stationary(const ChainView& c);

/// Σ x_q · P(q,q',y) · y[i] under the stationary frequencies.
Rational expected_gain(const ChainView& c, int i);
Rational expected_gain(const ChainView& c, const FrequencyMap& x, int i);

struct AbsorptionResult {
  std::map<StateId, Rational> mass;  // per target
  Rational residual;                 // mass never absorbed
};

/// Probability of first reaching each target from `init`.
AbsorptionResult absorption(const ChainView& c, const StateSet& targets, const Distribution& init);

/// Expected counter i upon first entry into each target, conditioned on reaching it.
/// Undefined where the target is reached with probability 0.
std::map<StateId, ExtRational> conditional_entry_gain(const ChainView& c, const StateSet& targets, int i,
                                                      const Distribution& init);

/// Frequency-weighted mean of h over S; Undefined when S misses the chain.
ExtRational silent_longrun(const ChainView& c, const std::map<StateId, long long>& h, const StateSet& S);
ExtRational silent_longrun(const FrequencyMap& x, const std::map<StateId, long long>& h, const StateSet& S);

}  // namespace vass
