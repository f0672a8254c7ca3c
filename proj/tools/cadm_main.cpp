// cadm: regime-filtering portfolio agents with belief obfuscation.
//
//   cadm simulate --seed 1 --dims 3,3,3 --horizon 50 --budget 0.1 --out out/
//   cadm simulate --scenario scenario.json --svg --out out/
//   cadm sweep --seed 1 --budgets 0:0.02:0.3 --repeats 20 --out out/
//
// Exit codes: 0 success, 1 solver failure, 2 configuration error.

#include "cadm/experiments.hpp"
#include "cadm/outputs.hpp"
#include "cadm/scenario_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct CliArgs {
    std::string scenario_path;
    std::uint64_t seed = 0;
    std::vector<cadm::Index> dims;
    cadm::Index horizon = 50;
    double budget = 0.1;
    std::string measure = "maximal";
    std::vector<double> desired;
    std::string empty_set_policy = "worst";
    cadm::Index grid = 20;
    std::vector<std::string> agents = {"odm", "cdm", "pdm"};
    bool refine = false;
    std::string out_dir = "out";
    bool svg = false;
    std::string beliefs_path;
    std::string trace_in;
    std::string trace_out;
    std::string budgets_expr;
    cadm::Index repeats = 20;
};

void add_common_options(CLI::App* cmd, CliArgs& args) {
    cmd->add_option("--scenario", args.scenario_path,
                    "scenario JSON file (overrides --seed/--dims)");
    cmd->add_option("--seed", args.seed, "generator seed for a random scenario");
    cmd->add_option("--dims", args.dims,
                    "generated scenario dimensions X,U,Y (regimes, assets, "
                    "observation symbols)")
        ->delimiter(',')
        ->expected(3);
    cmd->add_option("--horizon", args.horizon, "number of timesteps")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--measure", args.measure,
                    "privacy measure: infeasible|nonunique|nonexist|desired|maximal");
    cmd->add_option("--desired", args.desired,
                    "target belief for the 'desired' measure, comma-separated")
        ->delimiter(',');
    cmd->add_option("--empty-set-policy", args.empty_set_policy,
                    "score for an empty belief set: worst|best");
    cmd->add_option("--grid", args.grid, "simplex grid resolution")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--agents", args.agents,
                    "agents to run, comma-separated subset of odm,cdm,pdm")
        ->delimiter(',');
    cmd->add_flag("--refine", args.refine,
                  "polish the CDM choice with a local constrained search");
    cmd->add_option("--beliefs", args.beliefs_path,
                    "JSON belief trace replacing the filter");
    cmd->add_option("--trace-in", args.trace_in,
                    "JSON observation trace to replay (1-based symbols)");
    cmd->add_option("--out", args.out_dir, "output directory");
}

cadm::RunConfig build_config(const CliArgs& args) {
    cadm::RunConfig config;
    config.scenario_path = args.scenario_path;
    config.generator_seed = args.seed;
    if (!args.dims.empty()) {
        config.dim_x = args.dims[0];
        config.dim_u = args.dims[1];
        config.dim_y = args.dims[2];
    }
    config.horizon = args.horizon;
    config.budget = args.budget;
    config.grid_resolution = args.grid;
    config.repeats = args.repeats;
    config.cdm_refine = args.refine;

    config.measure.kind = cadm::parse_measure_kind(args.measure);
    if (!args.desired.empty()) {
        Eigen::Map<const cadm::VectorX<double>> v(args.desired.data(),
                                                  cadm::Index(args.desired.size()));
        config.measure.desired = cadm::Belief{cadm::VectorX<double>(v)};
    }
    if (args.empty_set_policy == "worst")
        config.measure.empty_set_policy = cadm::EmptySetPolicy::Worst;
    else if (args.empty_set_policy == "best")
        config.measure.empty_set_policy = cadm::EmptySetPolicy::Best;
    else
        throw cadm::InvalidInput("unknown empty-set policy '" +
                                 args.empty_set_policy +
                                 "' (expected worst|best)");

    config.run_odm = config.run_cdm = config.run_pdm = false;
    for (const std::string& agent : args.agents) {
        if (agent == "odm")
            config.run_odm = true;
        else if (agent == "cdm")
            config.run_cdm = true;
        else if (agent == "pdm")
            config.run_pdm = true;
        else
            throw cadm::InvalidInput("unknown agent '" + agent +
                                     "' (expected odm, cdm, or pdm)");
    }

    if (!args.trace_in.empty())
        config.observation_trace = cadm::load_observation_trace(args.trace_in);
    if (!args.beliefs_path.empty())
        config.belief_trace = cadm::load_belief_trace(args.beliefs_path);
    return config;
}

// "start:step:stop" (inclusive) or a plain comma-separated list.
std::vector<double> parse_budgets(const std::string& expr) {
    if (expr.empty()) throw cadm::InvalidInput("sweep: --budgets is required");
    std::vector<double> out;
    const auto parse_number = [&](const std::string& tok) {
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw cadm::InvalidInput("sweep: cannot parse budget '" + tok + "'");
        }
    };
    if (expr.find(':') != std::string::npos) {
        const std::size_t c1 = expr.find(':');
        const std::size_t c2 = expr.find(':', c1 + 1);
        if (c2 == std::string::npos || expr.find(':', c2 + 1) != std::string::npos)
            throw cadm::InvalidInput(
                "sweep: range budgets must look like start:step:stop");
        const double start = parse_number(expr.substr(0, c1));
        const double step = parse_number(expr.substr(c1 + 1, c2 - c1 - 1));
        const double stop = parse_number(expr.substr(c2 + 1));
        if (!(step > 0.0))
            throw cadm::InvalidInput("sweep: budget step must be positive");
        const long n = std::lround(std::floor((stop - start) / step + 1e-9)) + 1;
        if (n < 1 || n > 10000)
            throw cadm::InvalidInput("sweep: budget range is empty or too large");
        for (long i = 0; i < n; ++i) out.push_back(start + double(i) * step);
        return out;
    }
    std::size_t pos = 0;
    while (pos <= expr.size()) {
        const std::size_t comma = std::min(expr.find(',', pos), expr.size());
        out.push_back(parse_number(expr.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

int run(const CLI::App& app, const CliArgs& args, bool is_sweep) {
    cadm::RunConfig config = build_config(args);
    (void)app;
    if (is_sweep) {
        config.sweep_budgets = parse_budgets(args.budgets_expr);
        const cadm::SweepResult result = cadm::run_budget_sweep(config);
        cadm::emit_sweep_outputs(result, args.out_dir);
        std::cout << "wrote " << args.out_dir << "/sweep.csv ("
                  << result.rows.size() << " rows)\n";
        return 0;
    }
    const cadm::SimulationResult result = cadm::run_simulation(config);
    cadm::emit_simulation_outputs(result, args.out_dir, args.svg);
    if (!args.trace_out.empty())
        cadm::save_observation_trace(result.observations, args.trace_out);
    std::cout << "wrote " << args.out_dir << "/timeseries.csv ("
              << result.records.size() << " timesteps)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"counter-adversarial market decision making"};
    app.require_subcommand(1);
    CliArgs args;

    CLI::App* simulate =
        app.add_subcommand("simulate", "run one simulation and write timeseries.csv");
    add_common_options(simulate, args);
    simulate->add_option("--budget", args.budget, "cost budget fraction c_b")
        ->check(CLI::NonNegativeNumber);
    simulate->add_flag("--svg", args.svg,
                       "also write simplex_<k>.svg ternary plots (X=U=3 only)");
    simulate->add_option("--trace-out", args.trace_out,
                         "save the simulated observation trace as JSON");

    CLI::App* sweep =
        app.add_subcommand("sweep", "run a budget sweep and write sweep.csv");
    add_common_options(sweep, args);
    sweep->add_option("--budgets", args.budgets_expr,
                      "budget list: start:step:stop or b1,b2,...")
        ->required();
    sweep->add_option("--repeats", args.repeats, "simulations per budget")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return run(app, args, sweep->parsed());
    } catch (const cadm::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cadm::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
