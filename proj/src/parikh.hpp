#pragma once

// Parikh-image search shared by z_reach and cycle_feasibility.

#include "vass/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vass::detail {

struct GainBound {
  enum class Kind { Free, Equal, AtMost };
  Kind kind = Kind::Free;
  Rational value;  // integral for Equal/AtMost
};

struct ParikhProblem {
  const Model* model = nullptr;
  std::vector<bool> allowed;  // per transition
  StateId source = 0;
  StateId target = 0;
  bool nonempty = false;
  std::vector<GainBound> gain;  // per counter, on the total gain of the path
  std::vector<StateSet> require;
  std::optional<long long> max_mult;
  long node_budget = 100000;
};

struct ParikhOutcome {
  enum class Status { Found, Infeasible, Budget };
  Status status = Status::Infeasible;
  std::vector<long long> multiplicity;
  PathSummary path;
  std::string diagnostic;
};

ParikhOutcome parikh_solve(const ParikhProblem& p);

/// Deterministic Euler walk realizing a balanced multiplicity vector from source.
PathSummary euler_walk(const Model& m, StateId source, const std::vector<long long>& mult);

std::vector<bool> allowed_within(const Model& m, const std::optional<StateSet>& within);

}  // namespace vass::detail
