#pragma once

#include "vass/model.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace vass {

struct SccInfo {
  std::vector<StateSet> components;  // ordered by minimal state index
  std::vector<bool> is_bottom;
  std::vector<int> component_of;     // indexed by state

  /// A component with at least one internal transition.
  bool nontrivial(const Model& m, int c) const;
};

SccInfo sccs(const Model& m);
bool strongly_connected(const Model& m);
/// States reachable from `from` in the transition graph (including `from`).
std::vector<bool> reachable_states(const Model& m, const StateSet& from);

/// Calls fn for every simple cycle of length <= max_len inside `component`, each cycle once,
/// rooted at its minimal state. Order: by root, then lexicographic in transition indices.
/// fn returns false to stop early.
void for_each_simple_cycle(const Model& m, const StateSet& component, int max_len,
                           const std::function<bool(const PathSummary&)>& fn);
std::vector<PathSummary> simple_cycles(const Model& m, const StateSet& component, int max_len);

using Potential = std::map<StateId, long long>;
struct NotTotallyBounded {
  PathSummary cycle;  // closed walk with nonzero gain on the counter
};

/// h(root) = 0 and h(to) = h(from) + update[i] on every internal transition, if such h exists.
/// root defaults to the minimal state of the component.
std::variant<Potential, NotTotallyBounded> potentials(const Model& m, const StateSet& component, int i,
                                                      std::optional<StateId> root = std::nullopt);

struct NegativePrefix {
  bool reachable = false;
  PathSummary witness;  // from an initial state; its full gain on counter i is negative
};
NegativePrefix negative_prefix_reachable(const Model& m, int i);

struct SearchBudget {
  int max_cycle_len = -1;  // -1: number of states
  int max_compose = 6;     // accepted for compatibility; the Parikh search composes freely
  long long max_mult = 64;
  long ilp_nodes = 100000;
};

struct CycleQuery {
  std::vector<int> zero_set;
  std::optional<int> negative_index;
  std::vector<StateSet> require;      // the cycle visits every listed set
  std::optional<StateId> anchor;      // cycle starts and ends here
  std::optional<StateSet> within;     // restrict to transitions inside this state set
};

struct CycleFound {
  PathSummary cycle;
};
struct CycleNotFound {
  bool exhaustive = false;
  std::string note;
};
using CycleResult = std::variant<CycleFound, CycleNotFound>;

CycleResult cycle_feasibility(const Model& m, const CycleQuery& q, const SearchBudget& budget = {});

struct CounterPartition {
  std::vector<int> bounded;
  std::vector<int> unbounded;
};
struct PartitionUnknown {
  std::string diagnostic;
};

/// Iterates B <- {j : no cycle has zero gain on B and negative gain on j} from B = {} until stable.
std::variant<CounterPartition, PartitionUnknown> bounded_partition(const Model& m, const SearchBudget& budget = {},
                                                                   const std::optional<StateSet>& within = std::nullopt);

}  // namespace vass
