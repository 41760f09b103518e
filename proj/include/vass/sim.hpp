#pragma once

#include "vass/model.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace vass {

enum class SimSemantics { Z, NStrict, NRelaxed };

struct SimConfig {
  SimSemantics semantics = SimSemantics::Z;
  long long horizon = 1000;
  long long episodes = 100;
  std::uint64_t seed = 1;
  double burn_in = 0.0;            // fraction of the horizon skipped when averaging
  int threads = 0;                 // 0: OpenMP default
  long long max_attempts = 10000;  // relaxed semantics, per episode
};

struct EpisodeSummary {
  StateId final_state = 0;
  IntVec final_counters;
  std::vector<std::optional<double>> average;  // per dimension; empty when S was never visited
  long long attempts = 1;
  bool accepted = true;
};

struct SimReport {
  std::vector<double> estimate;       // mean over episodes of the running average at the horizon
  std::vector<double> std_error;
  std::vector<long long> defined;     // episodes in which S[i] was visited
  std::vector<double> minimum;        // smallest episode average
  double rejection_rate = 0.0;
  long long attempts = 0;
  long long accepted = 0;
  std::vector<EpisodeSummary> episodes;
};

/// splitmix64 finalizer used to derive per-episode seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Parallel over episodes; the result does not depend on the thread count.
SimReport simulate(const ProbModel& pm, const std::vector<StateSet>& selecting, const SimConfig& cfg);
/// Single-threaded reference producing the same report as simulate.
SimReport simulate_serial(const ProbModel& pm, const std::vector<StateSet>& selecting, const SimConfig& cfg);

/// CSV rows (episode, step, state, counters..., running averages...) for every step of every episode.
void write_trace_csv(const ProbModel& pm, const std::vector<StateSet>& selecting, const SimConfig& cfg,
                     std::ostream& out);

struct ValidityEstimate {
  double estimate = 0.0;
  double lower = 0.0;  // 95% Wilson interval
  double upper = 0.0;
  long long valid = 0;
  long long episodes = 0;
};

/// Fraction of sampled paths whose counters stay non-negative up to the horizon.
/// This over-approximates validity of the infinite computation.
ValidityEstimate estimate_validity_probability(const ProbModel& pm, long long horizon, long long episodes,
                                               std::uint64_t seed);

}  // namespace vass
