#include "cadm/experiments.hpp"

#include "cadm/scenario_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace cadm {

namespace {

// Stream ids carve the Philox counter space so that scenario generation,
// per-repeat world simulation, and per-(repeat, budget) policy sampling
// never overlap: generation owns the top bit, repeat r owns streams
// (r << 32) | s with s = 0 for the world and s = 1 + budget_index for the
// PDM sampler.
constexpr std::uint64_t kGenerationStream = std::uint64_t(1) << 63;

std::uint64_t world_stream(std::uint64_t repeat) { return repeat << 32; }

std::uint64_t pdm_stream(std::uint64_t repeat, std::uint64_t budget_index) {
    return (repeat << 32) | (budget_index + 1);
}

// Regime path, observation trace, and filtered beliefs for one repeat.
// Budget- and agent-independent, so a sweep computes it once per repeat.
struct WorldTrace {
    std::vector<Index> regimes;  // -1 throughout when observations are replayed
    std::vector<Index> observations;
    std::vector<Belief> beliefs;
};

WorldTrace make_world_trace(const Scenario& scenario, const RunConfig& config,
                            std::uint64_t repeat) {
    const Index x_dim = scenario.num_regimes();
    const Index horizon = config.horizon;
    WorldTrace trace;
    trace.regimes.reserve(static_cast<std::size_t>(horizon));
    trace.observations.reserve(static_cast<std::size_t>(horizon));
    trace.beliefs.reserve(static_cast<std::size_t>(horizon));

    if (config.observation_trace) {
        Belief belief = Belief::uniform(x_dim);
        for (Index k = 0; k < horizon; ++k) {
            const Index y = (*config.observation_trace)[static_cast<std::size_t>(k)];
            if (y < 0 || y >= scenario.num_observations())
                throw InvalidInput("observation trace: symbol " +
                                   std::to_string(y + 1) + " at step " +
                                   std::to_string(k + 1) + " is out of range");
            belief = filter_update(scenario, belief, y);
            trace.regimes.push_back(-1);
            trace.observations.push_back(y);
            trace.beliefs.push_back(belief);
        }
    } else {
        RngStream rng(scenario.rng_seed, world_stream(repeat));
        WorldState state;
        state.regime =
            rng.categorical(VectorX<double>::Ones(x_dim));  // uniform start
        Belief belief = Belief::uniform(x_dim);
        for (Index k = 0; k < horizon; ++k) {
            const Index y = simulate_step(scenario, state, rng);
            belief = filter_update(scenario, belief, y);
            trace.regimes.push_back(state.regime);
            trace.observations.push_back(y);
            trace.beliefs.push_back(belief);
        }
    }

    if (config.belief_trace) {
        for (Index k = 0; k < horizon; ++k) {
            const Belief& b = (*config.belief_trace)[static_cast<std::size_t>(k)];
            if (b.size() != x_dim)
                throw InvalidInput("belief trace: entry " + std::to_string(k + 1) +
                                   " has dimension " + std::to_string(b.size()) +
                                   ", scenario has " + std::to_string(x_dim) +
                                   " regimes");
            trace.beliefs[static_cast<std::size_t>(k)] = b;
        }
    }
    return trace;
}

// Everything the agents and the adversary need at one timestep, computed
// once per (repeat, step) and shared across every budget in a sweep.
struct StepContext {
    OdmResult odm;
    double odm_privacy = 0.0;
    MeasureTables tables;  // empty when no grid agent runs
    // Distance scores for grid points, resolved lazily for the measures
    // whose objective is not already the adversary distance.
    std::map<Index, double> distance_memo;
};

PrivacyMeasure distance_measure(const RunConfig& config) {
    PrivacyMeasure dm;
    dm.kind = MeasureKind::MaximalObfuscation;
    dm.empty_set_policy = config.measure.empty_set_policy;
    return dm;
}

StepContext make_step_context(const Scenario& scenario, const RunConfig& config,
                              const GridEvaluation* eval, const Belief& pi) {
    StepContext ctx;
    ctx.odm = solve_odm_full(scenario, pi);
    const PrivacyMeasure dm = distance_measure(config);
    ctx.odm_privacy =
        evaluate(dm, make_polytope_facts(scenario, ctx.odm.decision.action), pi)
            .value;
    if (eval != nullptr) ctx.tables = evaluate_grid(config.measure, *eval, pi);
    return ctx;
}

// Adversary distance for grid point l. With the maximal-obfuscation
// measure the solve-time score already is that distance; otherwise one
// distance evaluation per chosen point, memoized per step.
double grid_privacy(const Scenario& scenario, const RunConfig& config,
                    const GridEvaluation& eval, const Belief& pi,
                    StepContext& ctx, Index l) {
    if (config.measure.kind == MeasureKind::MaximalObfuscation)
        return ctx.tables.psi[static_cast<std::size_t>(l)];
    const auto it = ctx.distance_memo.find(l);
    if (it != ctx.distance_memo.end()) return it->second;
    const double d =
        evaluate(distance_measure(config), eval.facts[static_cast<std::size_t>(l)],
                 pi)
            .value;
    ctx.distance_memo.emplace(l, d);
    return d;
}

double cost_increase_of(double cost, double odm_cost) {
    return (cost - odm_cost) / std::abs(odm_cost);
}

AgentStep make_agent_step(const Action& action, double cost, double cap,
                          double privacy, double cost_increase) {
    AgentStep step;
    step.action = action;
    step.cost = cost;
    step.cap = cap;
    step.privacy = privacy;
    step.cost_increase = cost_increase;
    return step;
}

// The per-step outcome of one agent under one budget, reduced to the two
// aggregated quantities.
struct AgentOutcome {
    double privacy = 0.0;
    double cost_increase = 0.0;
};

}  // namespace

Scenario generate_scenario(std::uint64_t seed, Index dim_x, Index dim_u,
                           Index dim_y) {
    if (dim_x < 1 || dim_u < 1 || dim_y < 1)
        throw InvalidInput("generate_scenario: dimensions must be >= 1");
    RngStream rng(seed, kGenerationStream);

    Scenario scenario;
    scenario.regimes.resize(static_cast<std::size_t>(dim_x));
    for (auto& regime : scenario.regimes) {
        regime.mean.resize(dim_u);
        for (Index j = 0; j < dim_u; ++j) regime.mean[j] = rng.uniform(-0.1, 0.5);
    }
    for (auto& regime : scenario.regimes) {
        MatrixX<double> g(dim_u, dim_u);
        for (Index r = 0; r < dim_u; ++r)
            for (Index c = 0; c < dim_u; ++c) g(r, c) = rng.gaussian();
        const MatrixX<double> gram = g * g.transpose();
        // Symmetrize bitwise; the blocked product is symmetric only up to
        // rounding, and validation requires exact symmetry of what we store.
        regime.cov = (gram + gram.transpose()) / 2.0 / double(dim_u) +
                     0.01 * MatrixX<double>::Identity(dim_u, dim_u);
    }
    scenario.obs_likelihood.resize(dim_x, dim_y);
    for (Index i = 0; i < dim_x; ++i) {
        const std::vector<double> row = rng.dirichlet_uniform(int(dim_y));
        for (Index j = 0; j < dim_y; ++j)
            scenario.obs_likelihood(i, j) = row[static_cast<std::size_t>(j)];
    }

    scenario.gamma = 1.0;
    scenario.constraints = ConstraintSet::budget_simplex(dim_u);
    scenario.transition =
        0.9 * MatrixX<double>::Identity(dim_x, dim_x) +
        MatrixX<double>::Constant(dim_x, dim_x, 0.1 / double(dim_x));
    scenario.rng_seed = seed;
    scenario.validate();
    return scenario;
}

Scenario resolve_scenario(const RunConfig& config) {
    if (!config.scenario_path.empty()) return load_scenario(config.scenario_path);
    return generate_scenario(config.generator_seed, config.dim_x, config.dim_u,
                             config.dim_y);
}

SimulationResult run_simulation(const RunConfig& config) {
    config.validate();
    SimulationResult result;
    result.scenario = resolve_scenario(config);
    const Scenario& scenario = result.scenario;

    const bool need_grid = config.run_cdm || config.run_pdm;
    GridEvaluation eval;
    if (need_grid) {
        result.grid = simplex_grid(scenario.num_assets(), config.grid_resolution);
        eval = build_grid_evaluation(
            scenario, result.grid,
            config.measure.kind == MeasureKind::NonUniqueness);
    }

    const WorldTrace trace = make_world_trace(scenario, config, 0);
    result.observations = trace.observations;

    Budget budget;
    budget.c_b = config.budget;
    budget.validate();
    CdmOptions cdm_options;
    cdm_options.refine = config.cdm_refine;
    RngStream pdm_rng(scenario.rng_seed, pdm_stream(0, 0));

    result.records.reserve(static_cast<std::size_t>(config.horizon));
    for (Index k = 0; k < config.horizon; ++k) {
        const Belief& pi = trace.beliefs[static_cast<std::size_t>(k)];
        try {
            StepContext ctx = make_step_context(
                scenario, config, need_grid ? &eval : nullptr, pi);
            const double odm_cost = ctx.odm.decision.cost;
            const double cap = budget.cap(odm_cost);

            TimestepRecord rec;
            rec.k = k + 1;
            rec.regime = trace.regimes[static_cast<std::size_t>(k)];
            rec.belief = pi;

            if (config.run_odm)
                rec.odm = make_agent_step(ctx.odm.decision.action, odm_cost, cap,
                                          ctx.odm_privacy, 0.0);

            if (config.run_cdm) {
                const auto [decision, index] =
                    solve_cdm_indexed(scenario, pi, config.measure, budget, eval,
                                      ctx.tables, ctx.odm.decision, cdm_options);
                const double privacy =
                    index >= 0
                        ? grid_privacy(scenario, config, eval, pi, ctx, index)
                        : evaluate(distance_measure(config),
                                   make_polytope_facts(scenario, decision.action),
                                   pi)
                              .value;
                rec.cdm = make_agent_step(decision.action, decision.cost, cap,
                                          privacy,
                                          cost_increase_of(decision.cost, odm_cost));
            }

            if (config.run_pdm) {
                try {
                    const ObfuscationPolicy policy =
                        solve_pdm(scenario, pi, config.measure, budget, eval,
                                  ctx.tables, ctx.odm.decision);
                    const Index l = sample_index(policy, pdm_rng);
                    const Action& action =
                        policy.grid.points[static_cast<std::size_t>(l)];
                    const double cost = policy.costs[l];
                    rec.pdm = make_agent_step(
                        action, cost, cap,
                        grid_privacy(scenario, config, eval, pi, ctx, l),
                        cost_increase_of(cost, odm_cost));
                    for (Index j = 0; j < policy.mass.size(); ++j)
                        if (policy.mass[j] > 1e-9)
                            rec.pdm_support.emplace_back(j, policy.mass[j]);
                } catch (const PdmInfeasible&) {
                    // The cap excludes every sample; fall back to playing the
                    // plain optimizer's action this step.
                    rec.pdm = make_agent_step(ctx.odm.decision.action, odm_cost,
                                              cap, ctx.odm_privacy, 0.0);
                }
            }

            result.records.push_back(std::move(rec));
        } catch (const SolverError& err) {
            throw SolverError("timestep " + std::to_string(k + 1) + ": " +
                              err.what());
        }
    }
    return result;
}

SweepResult run_budget_sweep(const RunConfig& config) {
    config.validate();
    if (config.sweep_budgets.empty())
        throw InvalidInput("sweep: budget list is empty");

    SweepResult result;
    result.scenario = resolve_scenario(config);
    const Scenario& scenario = result.scenario;

    const bool need_grid = config.run_cdm || config.run_pdm;
    GridEvaluation eval;
    if (need_grid) {
        const ActionGrid grid =
            simplex_grid(scenario.num_assets(), config.grid_resolution);
        eval = build_grid_evaluation(
            scenario, grid, config.measure.kind == MeasureKind::NonUniqueness);
    }

    std::vector<Budget> budgets;
    for (const double c_b : config.sweep_budgets) {
        Budget b;
        b.c_b = c_b;
        b.validate();
        budgets.push_back(b);
    }
    const std::size_t n_budgets = budgets.size();

    std::vector<std::string> agents;
    if (config.run_odm) agents.emplace_back("odm");
    if (config.run_cdm) agents.emplace_back("cdm");
    if (config.run_pdm) agents.emplace_back("pdm");
    const std::size_t n_agents = agents.size();

    CdmOptions cdm_options;
    cdm_options.refine = config.cdm_refine;

    // Per (budget, agent, repeat): that run's mean. Repeats fill disjoint
    // slots, so they can execute concurrently with a deterministic merge.
    const std::size_t n_cells = n_budgets * n_agents;
    const std::size_t n_repeats = static_cast<std::size_t>(config.repeats);
    std::vector<std::vector<double>> privacy_means(
        n_cells, std::vector<double>(n_repeats, 0.0));
    std::vector<std::vector<double>> increase_means(
        n_cells, std::vector<double>(n_repeats, 0.0));
    const auto cell = [&](std::size_t b, std::size_t a) {
        return b * n_agents + a;
    };

    const auto run_repeat = [&](Index r) {
        const WorldTrace trace = make_world_trace(scenario, config,
                                                  std::uint64_t(r));
        std::vector<RngStream> pdm_rngs;
        pdm_rngs.reserve(n_budgets);
        for (std::size_t b = 0; b < n_budgets; ++b)
            pdm_rngs.emplace_back(scenario.rng_seed,
                                  pdm_stream(std::uint64_t(r), b));

        std::vector<AgentOutcome> sums(n_cells);
        for (Index k = 0; k < config.horizon; ++k) {
            const Belief& pi = trace.beliefs[static_cast<std::size_t>(k)];
            try {
                StepContext ctx = make_step_context(
                    scenario, config, need_grid ? &eval : nullptr, pi);
                const double odm_cost = ctx.odm.decision.cost;

                for (std::size_t b = 0; b < n_budgets; ++b) {
                    std::size_t a = 0;
                    if (config.run_odm) {
                        sums[cell(b, a)].privacy += ctx.odm_privacy;
                        ++a;  // cost increase stays zero
                    }
                    if (config.run_cdm) {
                        const auto [decision, index] = solve_cdm_indexed(
                            scenario, pi, config.measure, budgets[b], eval,
                            ctx.tables, ctx.odm.decision, cdm_options);
                        const double privacy =
                            index >= 0
                                ? grid_privacy(scenario, config, eval, pi, ctx,
                                               index)
                                : evaluate(distance_measure(config),
                                           make_polytope_facts(scenario,
                                                               decision.action),
                                           pi)
                                      .value;
                        sums[cell(b, a)].privacy += privacy;
                        sums[cell(b, a)].cost_increase +=
                            cost_increase_of(decision.cost, odm_cost);
                        ++a;
                    }
                    if (config.run_pdm) {
                        try {
                            const ObfuscationPolicy policy = solve_pdm(
                                scenario, pi, config.measure, budgets[b], eval,
                                ctx.tables, ctx.odm.decision);
                            const Index l = sample_index(policy, pdm_rngs[b]);
                            sums[cell(b, a)].privacy +=
                                grid_privacy(scenario, config, eval, pi, ctx, l);
                            sums[cell(b, a)].cost_increase +=
                                cost_increase_of(policy.costs[l], odm_cost);
                        } catch (const PdmInfeasible&) {
                            sums[cell(b, a)].privacy += ctx.odm_privacy;
                        }
                        ++a;
                    }
                }
            } catch (const SolverError& err) {
                throw SolverError("repeat " + std::to_string(r + 1) +
                                  ", timestep " + std::to_string(k + 1) + ": " +
                                  err.what());
            }
        }

        const double inv_k = 1.0 / double(config.horizon);
        for (std::size_t c = 0; c < n_cells; ++c) {
            privacy_means[c][static_cast<std::size_t>(r)] = sums[c].privacy * inv_k;
            increase_means[c][static_cast<std::size_t>(r)] =
                sums[c].cost_increase * inv_k;
        }
    };

    const std::size_t n_workers = std::min<std::size_t>(
        n_repeats, std::max(1u, std::thread::hardware_concurrency()));
    if (n_workers <= 1) {
        for (Index r = 0; r < config.repeats; ++r) run_repeat(r);
    } else {
        std::atomic<Index> next{0};
        std::vector<std::exception_ptr> failures(n_repeats);
        std::vector<std::thread> workers;
        workers.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w)
            workers.emplace_back([&] {
                for (;;) {
                    const Index r = next.fetch_add(1);
                    if (r >= config.repeats) return;
                    try {
                        run_repeat(r);
                    } catch (...) {
                        failures[static_cast<std::size_t>(r)] =
                            std::current_exception();
                    }
                }
            });
        for (std::thread& w : workers) w.join();
        for (const std::exception_ptr& failure : failures)
            if (failure) std::rethrow_exception(failure);
    }

    const auto mean_se = [&](const std::vector<double>& xs) {
        const double n = double(xs.size());
        double mean = 0.0;
        for (const double x : xs) mean += x;
        mean /= n;
        double se = 0.0;
        if (xs.size() > 1) {
            double ss = 0.0;
            for (const double x : xs) ss += (x - mean) * (x - mean);
            se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        }
        return std::make_pair(mean, se);
    };

    for (std::size_t b = 0; b < n_budgets; ++b)
        for (std::size_t a = 0; a < n_agents; ++a) {
            SweepRow row;
            row.budget = budgets[b].c_b;
            row.agent = agents[a];
            const auto [mp, sp] = mean_se(privacy_means[cell(b, a)]);
            const auto [mc, sc] = mean_se(increase_means[cell(b, a)]);
            row.mean_privacy = mp;
            row.se_privacy = sp;
            row.mean_cost_increase = mc;
            row.se_cost_increase = sc;
            row.repeats = config.repeats;
            result.rows.push_back(std::move(row));
        }
    return result;
}

}  // namespace cadm
