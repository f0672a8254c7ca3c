#include "cadm/scenario_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace cadm {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& context, const std::string& what) {
    throw InvalidInput(context + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& context) {
    if (!j.is_object() || !j.contains(key))
        fail(context, std::string("missing field '") + key + "'");
    return j.at(key);
}

VectorX<double> parse_vector(const json& j, const std::string& context) {
    if (!j.is_array() || j.empty()) fail(context, "expected a nonempty array");
    VectorX<double> v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) fail(context, "expected numeric entries");
        v[static_cast<Index>(i)] = j[i].get<double>();
    }
    return v;
}

MatrixX<double> parse_matrix(const json& j, const std::string& context) {
    if (!j.is_array() || j.empty()) fail(context, "expected a nonempty array of rows");
    MatrixX<double> m;
    for (std::size_t r = 0; r < j.size(); ++r) {
        const VectorX<double> row = parse_vector(j[r], context + " row " + std::to_string(r));
        if (r == 0)
            m.resize(static_cast<Index>(j.size()), row.size());
        else if (row.size() != m.cols())
            fail(context, "rows have inconsistent lengths");
        m.row(static_cast<Index>(r)) = row.transpose();
    }
    return m;
}

json vector_to_json(const VectorX<double>& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

json matrix_to_json(const MatrixX<double>& m) {
    json out = json::array();
    for (Index r = 0; r < m.rows(); ++r)
        out.push_back(vector_to_json(m.row(r).transpose()));
    return out;
}

json parse_text(const std::string& text, const std::string& context) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) fail(context, "malformed JSON");
    return j;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

Scenario scenario_from_json_text(const std::string& text) {
    const std::string ctx = "scenario";
    const json j = parse_text(text, ctx);

    Scenario s;
    const json& regimes = require(j, "regimes", ctx);
    if (!regimes.is_array() || regimes.empty())
        fail(ctx, "'regimes' must be a nonempty array");
    for (std::size_t i = 0; i < regimes.size(); ++i) {
        const std::string rctx = ctx + ".regimes[" + std::to_string(i) + "]";
        Regime r;
        r.mean = parse_vector(require(regimes[i], "mean", rctx), rctx + ".mean");
        r.cov = parse_matrix(require(regimes[i], "cov", rctx), rctx + ".cov");
        s.regimes.push_back(std::move(r));
    }

    const json& gamma = require(j, "gamma", ctx);
    if (!gamma.is_number()) fail(ctx, "'gamma' must be a number");
    s.gamma = gamma.get<double>();

    const json& constraints = require(j, "constraints", ctx);
    s.constraints.a_eq =
        parse_matrix(require(constraints, "a_eq", ctx), ctx + ".constraints.a_eq");
    s.constraints.b_eq =
        parse_vector(require(constraints, "b_eq", ctx), ctx + ".constraints.b_eq");
    const json& nonneg = require(constraints, "nonneg", ctx);
    if (!nonneg.is_boolean()) fail(ctx, "'constraints.nonneg' must be a boolean");
    s.constraints.nonneg = nonneg.get<bool>();

    s.transition = parse_matrix(require(j, "transition", ctx), ctx + ".transition");
    s.obs_likelihood =
        parse_matrix(require(j, "obs_likelihood", ctx), ctx + ".obs_likelihood");

    const json& seed = require(j, "rng_seed", ctx);
    if (!seed.is_number_unsigned() && !seed.is_number_integer())
        fail(ctx, "'rng_seed' must be an integer");
    s.rng_seed = seed.get<std::uint64_t>();

    s.validate();
    return s;
}

std::string scenario_to_json_text(const Scenario& scenario) {
    scenario.validate();
    json j;
    j["regimes"] = json::array();
    for (const Regime& r : scenario.regimes) {
        json jr;
        jr["mean"] = vector_to_json(r.mean);
        jr["cov"] = matrix_to_json(r.cov);
        j["regimes"].push_back(std::move(jr));
    }
    j["gamma"] = scenario.gamma;
    j["constraints"]["a_eq"] = matrix_to_json(scenario.constraints.a_eq);
    j["constraints"]["b_eq"] = vector_to_json(scenario.constraints.b_eq);
    j["constraints"]["nonneg"] = scenario.constraints.nonneg;
    j["transition"] = matrix_to_json(scenario.transition);
    j["obs_likelihood"] = matrix_to_json(scenario.obs_likelihood);
    j["rng_seed"] = scenario.rng_seed;
    return j.dump(2) + "\n";
}

Scenario load_scenario(const std::string& path) {
    try {
        return scenario_from_json_text(read_file(path));
    } catch (const InvalidInput& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
    out << scenario_to_json_text(scenario);
    if (!out) throw InvalidInput("failed writing '" + path + "'");
}

std::vector<Index> load_observation_trace(const std::string& path) {
    const json j = parse_text(read_file(path), "observation trace " + path);
    if (!j.is_array())
        throw InvalidInput(path + ": observation trace must be a JSON array");
    std::vector<Index> trace;
    trace.reserve(j.size());
    for (const json& e : j) {
        if (!e.is_number_integer() && !e.is_number_unsigned())
            throw InvalidInput(path + ": observation symbols must be integers");
        const long long y = e.get<long long>();
        if (y < 1) throw InvalidInput(path + ": observation symbols are 1-based");
        trace.push_back(static_cast<Index>(y - 1));
    }
    return trace;
}

void save_observation_trace(const std::vector<Index>& observations,
                            const std::string& path) {
    json j = json::array();
    for (const Index y : observations) j.push_back(y + 1);
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
    out << j.dump() << "\n";
    if (!out) throw InvalidInput("failed writing '" + path + "'");
}

std::vector<Belief> load_belief_trace(const std::string& path) {
    const json j = parse_text(read_file(path), "belief trace " + path);
    if (!j.is_array())
        throw InvalidInput(path + ": belief trace must be a JSON array of vectors");
    std::vector<Belief> trace;
    trace.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        try {
            trace.emplace_back(parse_vector(j[i], "belief " + std::to_string(i)));
        } catch (const InvalidInput& e) {
            throw InvalidInput(path + ": " + e.what());
        }
    }
    return trace;
}

std::string polytope_to_json_text(const BeliefPolytope& p) {
    json j;
    j["x_dim"] = p.x_dim;
    j["lambda_dim"] = p.lambda_dim;
    j["nu_dim"] = p.nu_dim;
    j["active_set"] = json::array();
    for (const bool a : p.active_set) j["active_set"].push_back(a);
    j["stationarity"] = matrix_to_json(p.stationarity);
    j["equality_matrix"] = matrix_to_json(p.equality_matrix());
    j["equality_rhs"] = vector_to_json(p.equality_rhs());
    return j.dump(2) + "\n";
}

}  // namespace cadm
