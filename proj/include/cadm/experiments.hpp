// Simulation harness: scenario generation, the multi-agent run loop, and
// budget sweeps. This is the layer the CLI drives.

#ifndef CADM_EXPERIMENTS_HPP
#define CADM_EXPERIMENTS_HPP

#include "cadm/decision_makers.hpp"
#include "cadm/filter.hpp"
#include "cadm/grid.hpp"
#include "cadm/privacy.hpp"
#include "cadm/types.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cadm {

struct RunConfig {
    // Scenario source: an explicit file wins; otherwise one is generated
    // from (generator_seed, dims).
    std::string scenario_path;
    std::uint64_t generator_seed = 0;
    Index dim_x = 3;
    Index dim_u = 3;
    Index dim_y = 3;

    Index horizon = 50;
    double budget = 0.1;
    PrivacyMeasure measure;  // defaults to maximal obfuscation, worst-empty
    Index grid_resolution = 20;
    bool run_odm = true;
    bool run_cdm = true;
    bool run_pdm = true;
    bool cdm_refine = false;

    std::vector<double> sweep_budgets;  // nonempty selects sweep mode
    Index repeats = 20;

    // Optional overrides: replayed observations and/or an exogenous belief
    // trace that bypasses the filter.
    std::optional<std::vector<Index>> observation_trace;
    std::optional<std::vector<Belief>> belief_trace;

    void validate() const {
        if (horizon < 1) throw InvalidInput("config: horizon must be >= 1");
        if (repeats < 1) throw InvalidInput("config: repeats must be >= 1");
        if (!(budget >= 0.0)) throw InvalidInput("config: budget must be >= 0");
        for (const double b : sweep_budgets)
            if (!(b >= 0.0)) throw InvalidInput("config: sweep budgets must be >= 0");
        if (grid_resolution < 1)
            throw InvalidInput("config: grid resolution must be >= 1");
        if (!run_odm && !run_cdm && !run_pdm)
            throw InvalidInput("config: no agents enabled");
        measure.validate();
        if (observation_trace && Index(observation_trace->size()) < horizon)
            throw InvalidInput("config: observation trace shorter than horizon");
        if (belief_trace && Index(belief_trace->size()) < horizon)
            throw InvalidInput("config: belief trace shorter than horizon");
    }
};

/// One agent's row of a timestep: what it played and what that cost it,
/// plus the adversary's distance-based privacy score for the played action.
struct AgentStep {
    Action action;
    double cost = 0.0;
    double cap = 0.0;
    double privacy = 0.0;        // dist(pi_k, Pi(action)); -inf on empty set
    double cost_increase = 0.0;  // (cost - c*) / |c*|
};

struct TimestepRecord {
    Index k = 0;        // 1-based
    Index regime = -1;  // hidden true regime; -1 when observations are replayed
    Belief belief;
    std::optional<AgentStep> odm;
    std::optional<AgentStep> cdm;
    std::optional<AgentStep> pdm;
    std::vector<std::pair<Index, double>> pdm_support;  // (grid index, mass)
};

struct SimulationResult {
    Scenario scenario;
    ActionGrid grid;
    std::vector<TimestepRecord> records;
    std::vector<Index> observations;  // the trace that drove the beliefs
};

/// One (budget, agent) cell of a sweep: means and standard errors over the
/// per-repeat run averages.
struct SweepRow {
    double budget = 0.0;
    std::string agent;
    double mean_privacy = 0.0;
    double se_privacy = 0.0;
    double mean_cost_increase = 0.0;
    double se_cost_increase = 0.0;
    Index repeats = 0;
};

struct SweepResult {
    Scenario scenario;
    std::vector<SweepRow> rows;
};

/**
 * Random scenario in the style of the experiments section: means uniform in
 * [-0.1, 0.5], covariances G G'/U + 0.01 I with standard-normal G, gamma 1,
 * sticky uniform transition 0.9 I + 0.1/X, Dirichlet-uniform observation
 * rows, full-investment budget constraint. Deterministic in `seed`.
 */
Scenario generate_scenario(std::uint64_t seed, Index dim_x, Index dim_u, Index dim_y);

/// Loads the configured scenario or generates one; used by both run modes.
Scenario resolve_scenario(const RunConfig& config);

/**
 * Runs the full loop: world step, filter, each enabled agent's decision
 * (the PDM samples from its policy), adversary evaluation. Deterministic
 * given the scenario seed. A PDM whose policy LP is infeasible (budget cap
 * under the cheapest grid cost) degrades to the ODM action for that step.
 * Other solver failures abort with the timestep identified.
 */
SimulationResult run_simulation(const RunConfig& config);

/// Repeats the simulation per budget on one fixed scenario with
/// per-repeat RNG streams and aggregates privacy / cost-increase stats.
SweepResult run_budget_sweep(const RunConfig& config);

}  // namespace cadm

#endif  // CADM_EXPERIMENTS_HPP
