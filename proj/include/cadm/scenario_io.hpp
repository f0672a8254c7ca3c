// JSON serialization for scenarios, observation traces, belief traces, and
// debug dumps of belief polytopes.
//
// Scenario files look like:
//
//   {
//     "regimes": [{"mean": [...], "cov": [[...], ...]}, ...],
//     "gamma": 1.0,
//     "constraints": {"a_eq": [[...]], "b_eq": [...], "nonneg": true},
//     "transition": [[...], ...],
//     "obs_likelihood": [[...], ...],
//     "rng_seed": 42
//   }
//
// Matrices are row-major arrays of arrays. Observation symbols are 1-based
// in files (0-based in memory).

#ifndef CADM_SCENARIO_IO_HPP
#define CADM_SCENARIO_IO_HPP

#include "cadm/polytope.hpp"
#include "cadm/types.hpp"

#include <string>
#include <vector>

namespace cadm {

Scenario scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const Scenario& scenario);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

/// Observation traces are bare JSON arrays of 1-based symbols.
std::vector<Index> load_observation_trace(const std::string& path);
void save_observation_trace(const std::vector<Index>& observations,
                            const std::string& path);

/// Belief traces are JSON arrays of probability vectors.
std::vector<Belief> load_belief_trace(const std::string& path);

/// Debug dump of a polytope's constraint system (matrices + active set).
std::string polytope_to_json_text(const BeliefPolytope& p);

}  // namespace cadm

#endif  // CADM_SCENARIO_IO_HPP
