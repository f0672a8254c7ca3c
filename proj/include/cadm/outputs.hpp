// Artifact emission: CSV tables (17-significant-digit round-trippable) and
// optional barycentric SVG plots of the action and belief simplexes.

#ifndef CADM_OUTPUTS_HPP
#define CADM_OUTPUTS_HPP

#include "cadm/experiments.hpp"

#include <string>
#include <vector>

namespace cadm {

/// `k,agent,cost,cap,privacy,cost_increase` — one row per (timestep, agent).
std::string render_timeseries_csv(const std::vector<TimestepRecord>& records);

/// `budget,agent,mean_privacy,se_privacy,mean_cost_increase,se_cost_increase,repeats`.
std::string render_sweep_csv(const std::vector<SweepRow>& rows);

/**
 * Two-panel ternary plot for one timestep: the action simplex with the grid,
 * chosen actions, and PDM mass bars; and the belief simplex with the true
 * belief and each agent's reconstructed belief set. Requires X = U = 3.
 */
std::string render_simplex_svg(const Scenario& scenario, const ActionGrid& grid,
                               const TimestepRecord& record);

void write_text_file(const std::string& path, const std::string& content);

/// timeseries.csv (+ simplex_<k>.svg per timestep when `svg`).
void emit_simulation_outputs(const SimulationResult& result, const std::string& out_dir,
                             bool svg);

/// sweep.csv.
void emit_sweep_outputs(const SweepResult& result, const std::string& out_dir);

}  // namespace cadm

#endif  // CADM_OUTPUTS_HPP
