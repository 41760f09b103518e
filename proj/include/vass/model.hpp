#pragma once

#include "vass/rational.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vass {

using StateId = int;
using TransId = int;
using IntVec = std::vector<long long>;
using StateSet = std::vector<StateId>;  // sorted, unique

enum class Domain { Z, N };

/// Thrown for malformed model files and violated model invariants.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Transition {
  StateId from = 0;
  StateId to = 0;
  IntVec update;
};

/// A k-dimensional VASS over Z or N.  Immutable after construction.
class Model {
 public:
  Model() = default;
  Model(int dimension, Domain domain, std::vector<std::string> states, std::vector<StateId> initial,
        std::vector<Transition> transitions);

  int dimension() const { return dimension_; }
  Domain domain() const { return domain_; }
  int num_states() const { return static_cast<int>(states_.size()); }
  int num_transitions() const { return static_cast<int>(transitions_.size()); }

  const std::vector<std::string>& state_names() const { return states_; }
  const std::string& state_name(StateId s) const { return states_.at(s); }
  /// Throws ModelError if no state has that name.
  StateId state_id(std::string_view name) const;

  const std::vector<StateId>& initial() const { return initial_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const Transition& transition(TransId t) const { return transitions_.at(t); }
  std::span<const TransId> outgoing(StateId s) const { return out_.at(s); }
  std::span<const TransId> incoming(StateId s) const { return in_.at(s); }

  long long max_abs_update() const;
  /// |Q| plus the binary length of every update entry.
  long long encoding_size() const;

  /// Copy with a different domain (same graph).
  Model with_domain(Domain d) const;

 private:
  int dimension_ = 1;
  Domain domain_ = Domain::Z;
  std::vector<std::string> states_;
  std::vector<StateId> initial_;
  std::vector<Transition> transitions_;
  std::vector<std::vector<TransId>> out_;
  std::vector<std::vector<TransId>> in_;
};

/// VASS with exact transition probabilities and an initial distribution.
class ProbModel {
 public:
  ProbModel() = default;
  /// prob is indexed by transition; init_dist is parallel to base.initial().
  ProbModel(Model base, std::vector<Rational> prob, std::vector<Rational> init_dist);

  const Model& base() const { return base_; }
  const Rational& prob(TransId t) const { return prob_.at(t); }
  const std::vector<Rational>& probs() const { return prob_; }
  const std::vector<Rational>& init_dist() const { return init_; }
  /// Initial mass of state s (0 for non-initial states).
  Rational initial_mass(StateId s) const;

 private:
  Model base_;
  std::vector<Rational> prob_;
  std::vector<Rational> init_;
};

struct Config {
  StateId state = 0;
  IntVec counters;
  friend bool operator==(const Config&, const Config&) = default;
};

/// Finite transition sequence with its accumulated gain.
struct PathSummary {
  StateId start = 0;
  std::vector<TransId> transitions;
  IntVec gain;

  /// Validates consecutiveness and computes the gain.
  static PathSummary make(const Model& m, StateId start, std::vector<TransId> transitions);
  StateId end(const Model& m) const;
  bool is_cycle(const Model& m) const { return end(m) == start; }
  bool empty() const { return transitions.empty(); }
  std::size_t length() const { return transitions.size(); }
  /// States of the configurations visited: start, then the target of every transition.
  std::vector<StateId> visited_states(const Model& m) const;
  /// Concatenation; throws ModelError if the endpoints do not match.
  PathSummary then(const Model& m, const PathSummary& next) const;
};

struct AvgQuery {
  std::vector<StateSet> selecting;
  std::vector<Rational> thresholds;  // empty when absent
};

/// A parsed model file.
struct ModelFile {
  std::variant<Model, ProbModel> model;
  std::optional<AvgQuery> query;

  const Model& base() const;
  bool probabilistic() const { return std::holds_alternative<ProbModel>(model); }
};

ModelFile parse_model(std::string_view text);
ModelFile load_model(const std::string& path);
/// Canonical JSON form (keys in schema order, one line, trailing newline).
std::string serialize_model(const ModelFile& file);

/// Result of a step: nullopt means the transition is disabled (domain N).
std::optional<Config> step(const Model& m, const Config& c, TransId t);
Config initial_config(const Model& m, StateId s);

IntVec gain(const Model& m, std::span<const TransId> path);
IntVec gain(const Model& m, const PathSummary& p);

/// Configurations along a path (|path| + 1 entries) from `from`, over Z semantics.
std::vector<Config> run_path(const Model& m, const Config& from, const PathSummary& p);

/// Mean of counter i over configurations whose state lies in S; nullopt if none.
std::optional<Rational> avg_over_selecting(std::span<const Config> rho, const StateSet& S, int i);

StateSet make_state_set(std::vector<StateId> states);
bool contains(const StateSet& s, StateId q);

IntVec add(const IntVec& a, const IntVec& b);

}  // namespace vass
