// The three agents:
//
//   ODM — plays the forward-optimal portfolio for its belief (a QP), no
//         privacy protection; its KKT multipliers double as the optimality
//         certificate used by tests.
//   CDM — scans a simplex grid of candidate actions and plays the feasible
//         one maximizing a privacy measure under a hard cost budget.
//   PDM — optimizes a probability mass vector over the same grid by LP,
//         maximizing expected privacy under an expected-cost budget, then
//         samples its action from that policy.
//
// The budget cap is c* + c_b*|c*| rather than c*(1+c_b): Markowitz costs can
// be negative, and the multiplicative form would then tighten instead of
// relax the constraint. The two agree whenever c* > 0.
//
// Grid scans share per-point work (polytope facts, per-regime costs) through
// GridEvaluation, which depends only on (scenario, grid) — not on the
// current belief or budget — so one build serves a whole simulation.

#ifndef CADM_DECISION_MAKERS_HPP
#define CADM_DECISION_MAKERS_HPP

#include "cadm/cost.hpp"
#include "cadm/grid.hpp"
#include "cadm/privacy.hpp"
#include "cadm/quadprog.hpp"
#include "cadm/rng.hpp"
#include "cadm/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace cadm {

/// Absolute slack when admitting candidates against the hard cap; keeps
/// exact-boundary candidates (e.g. the optimum itself at c_b = 0) from
/// flapping on the last bit.
inline constexpr double kBudgetSlack = 1e-9;

/// The PDM policy LP has no feasible mass vector (every sample excluded, or
/// the cap sits below the cheapest admissible sample). Kept distinct from
/// other SolverErrors so harnesses can degrade gracefully at tight budgets.
class PdmInfeasible : public SolverError {
public:
    using SolverError::SolverError;
};

template <typename Scalar>
struct BudgetT {
    Scalar c_b = Scalar(0);

    void validate() const {
        if (!(c_b >= Scalar(0)) || !std::isfinite(double(c_b)))
            throw InvalidInput("budget: c_b must be a finite nonnegative fraction");
    }

    /// Hard cost cap relative to the optimal cost c*.
    Scalar cap(Scalar c_star) const { return c_star + c_b * std::abs(double(c_star)); }
};

using Budget = BudgetT<double>;

template <typename Scalar>
struct DecisionT {
    ActionT<Scalar> action;
    Scalar cost = Scalar(0);  // expected cost under the deciding belief
    PrivacyValueT<Scalar> privacy;
};

using Decision = DecisionT<double>;

/// ODM solve plus the KKT multipliers certifying optimality; the adversary's
/// belief polytope is built from exactly these quantities.
template <typename Scalar>
struct OdmResultT {
    DecisionT<Scalar> decision;
    VectorX<Scalar> lambda;  // bound multipliers, >= 0
    VectorX<Scalar> nu;      // equality multipliers, free
    Scalar kkt_residual = Scalar(0);
};

using OdmResult = OdmResultT<double>;

/**
 * Forward Markowitz solve for belief `pi`:
 *   min_u  gamma u' Sigma(pi) u - mu(pi) . u   s.t.  a_eq u = b_eq, u >= 0.
 * Throws SolverError when the QP does not reach an optimum.
 */
template <typename Scalar>
OdmResultT<Scalar> solve_odm_full(const ScenarioT<Scalar>& scenario,
                                  const BeliefT<Scalar>& pi) {
    pi.validate();
    if (pi.size() != scenario.num_regimes())
        throw InvalidInput("solve_odm: belief dimension mismatch");

    const Index u_dim = scenario.num_assets();
    QuadraticProgramT<Scalar> qp = QuadraticProgramT<Scalar>::zeros(u_dim);
    qp.p = Scalar(2) * scenario.gamma * mixed_covariance(scenario, pi);
    qp.q = -mixed_mean(scenario, pi);
    qp.a_eq = scenario.constraints.a_eq;
    qp.b_eq = scenario.constraints.b_eq;
    if (!scenario.constraints.nonneg)
        qp.lower_bounds.setConstant(-std::numeric_limits<Scalar>::infinity());

    const SolveStatusT<Scalar> st = solve_qp(qp);
    if (st.kind != SolveStatusKind::Optimal)
        throw SolverError(std::string("odm: forward QP ended with status ") +
                          to_string(st.kind));

    OdmResultT<Scalar> out;
    out.decision.action = ActionT<Scalar>(st.x);
    out.decision.cost = expected_cost(scenario, pi, out.decision.action);
    out.lambda = -st.dual_bounds;
    out.nu = st.dual_eq;

    // Stationarity / feasibility / complementarity, reported as one number.
    VectorX<Scalar> stat = qp.p * st.x + qp.q - out.lambda;
    if (qp.a_eq.rows() > 0) stat += qp.a_eq.transpose() * out.nu;
    Scalar res = stat.template lpNorm<Eigen::Infinity>();
    if (qp.a_eq.rows() > 0)
        res = std::max(res, (qp.a_eq * st.x - qp.b_eq)
                                .template lpNorm<Eigen::Infinity>());
    if (scenario.constraints.nonneg) {
        res = std::max(res, std::max(Scalar(0), -st.x.minCoeff()));
        res = std::max(res,
                       st.x.cwiseProduct(out.lambda).cwiseAbs().maxCoeff());
    }
    out.kkt_residual = res;
    return out;
}

template <typename Scalar>
DecisionT<Scalar> solve_odm(const ScenarioT<Scalar>& scenario,
                            const BeliefT<Scalar>& pi) {
    return solve_odm_full(scenario, pi).decision;
}

/**
 * Belief- and budget-independent per-point data for one (scenario, grid)
 * pair: constraint feasibility, polytope facts, and the matrix of
 * per-regime costs (state_costs(i, l) = c(i, u_l), so a belief's cost
 * vector is state_costs' pi). Polytope facts are only built for feasible
 * points.
 */
template <typename Scalar>
struct GridEvaluationT {
    ActionGridT<Scalar> grid;
    std::vector<bool> feasible;
    std::vector<PolytopeFactsT<Scalar>> facts;
    MatrixX<Scalar> state_costs;  // X x M

    Index size() const { return grid.size(); }
};

using GridEvaluation = GridEvaluationT<double>;

template <typename Scalar>
GridEvaluationT<Scalar> build_grid_evaluation(const ScenarioT<Scalar>& scenario,
                                              const ActionGridT<Scalar>& grid,
                                              bool need_singleton = false) {
    if (grid.size() < 1) throw InvalidInput("grid evaluation: empty grid");
    GridEvaluationT<Scalar> eval;
    eval.grid = grid;
    const Index m = grid.size();
    const Index x_dim = scenario.num_regimes();
    eval.feasible.resize(static_cast<std::size_t>(m));
    eval.facts.resize(static_cast<std::size_t>(m));
    eval.state_costs.resize(x_dim, m);
    for (Index l = 0; l < m; ++l) {
        const ActionT<Scalar>& u = grid.points[static_cast<std::size_t>(l)];
        const bool ok = scenario.constraints.contains(u.alloc);
        eval.feasible[static_cast<std::size_t>(l)] = ok;
        if (ok)
            eval.facts[static_cast<std::size_t>(l)] =
                make_polytope_facts(scenario, u, need_singleton);
        for (Index i = 0; i < x_dim; ++i)
            eval.state_costs(i, l) = state_cost(scenario, i, u);
    }
    return eval;
}

namespace detail {

template <typename Scalar>
bool lex_less(const VectorX<Scalar>& a, const VectorX<Scalar>& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                        b.data() + b.size());
}

/// Euclidean projection of v onto the scenario's constraint set.
template <typename Scalar, typename Derived>
ActionT<Scalar> project_onto_constraints(const ScenarioT<Scalar>& scenario,
                                         const Eigen::MatrixBase<Derived>& point) {
    const VectorX<Scalar> v = point;
    QuadraticProgramT<Scalar> qp =
        QuadraticProgramT<Scalar>::zeros(scenario.num_assets());
    qp.p = Scalar(2) * MatrixX<Scalar>::Identity(v.size(), v.size());
    qp.q = Scalar(-2) * v;
    qp.a_eq = scenario.constraints.a_eq;
    qp.b_eq = scenario.constraints.b_eq;
    if (!scenario.constraints.nonneg)
        qp.lower_bounds.setConstant(-std::numeric_limits<Scalar>::infinity());
    const SolveStatusT<Scalar> st = solve_qp(qp);
    if (st.kind != SolveStatusKind::Optimal)
        throw SolverError("cdm refinement: projection QP failed");
    return ActionT<Scalar>(st.x);
}

}  // namespace detail

template <typename Scalar>
struct CdmOptionsT {
    bool refine = false;          // local continuous search around the grid best
    Index refine_iterations = 60;
};

using CdmOptions = CdmOptionsT<double>;

namespace detail {

/// Nelder-Mead on the constraint set, maximizing the measure under the hard
/// cap. Vertices stay on the equality constraints by construction (affine
/// combinations), and are projected back when a bound is violated. Returns
/// the best feasible point seen; the caller accepts it only on improvement.
template <typename Scalar>
DecisionT<Scalar> refine_cdm(const ScenarioT<Scalar>& scenario,
                             const BeliefT<Scalar>& pi,
                             const PrivacyMeasureT<Scalar>& measure,
                             Scalar cap, const DecisionT<Scalar>& seed,
                             Index grid_resolution, Index iterations) {
    const Index u_dim = scenario.num_assets();
    const Index e_dim = scenario.constraints.a_eq.rows();
    const Index n_vertices = std::max(Index(2), u_dim - e_dim + 1);
    const bool need_singleton = measure.kind == MeasureKind::NonUniqueness;

    struct Vertex {
        ActionT<Scalar> u;
        Scalar psi;
        Scalar cost;
    };
    const auto evaluate_point = [&](const ActionT<Scalar>& u) -> Vertex {
        Vertex v{u, -std::numeric_limits<Scalar>::infinity(),
                 expected_cost(scenario, pi, u)};
        if (v.cost <= cap + Scalar(kBudgetSlack))
            v.psi = evaluate(measure,
                             make_polytope_facts(scenario, u, need_singleton), pi)
                        .value;
        return v;
    };
    const auto better = [](const Vertex& a, const Vertex& b) {
        if (a.psi != b.psi) return a.psi > b.psi;
        if (a.cost != b.cost) return a.cost < b.cost;
        return lex_less(a.u.alloc, b.u.alloc);
    };

    // Tangent directions from the equality null space.
    MatrixX<Scalar> tangent;
    if (e_dim > 0) {
        Eigen::FullPivLU<MatrixX<Scalar>> lu(scenario.constraints.a_eq);
        tangent = lu.kernel();
    } else {
        tangent = MatrixX<Scalar>::Identity(u_dim, u_dim);
    }
    if (tangent.cols() < n_vertices - 1) return seed;  // fully pinned set

    const Scalar h = Scalar(0.5) / Scalar(std::max<Index>(grid_resolution, 1));
    std::vector<Vertex> simplex;
    simplex.push_back(evaluate_point(seed.action));
    for (Index j = 0; j < n_vertices - 1; ++j) {
        const VectorX<Scalar> dir = tangent.col(j).normalized();
        simplex.push_back(evaluate_point(
            project_onto_constraints(scenario, seed.action.alloc + h * dir)));
    }
    Vertex best = *std::min_element(
        simplex.begin(), simplex.end(),
        [&](const Vertex& a, const Vertex& b) { return better(a, b); });

    for (Index it = 0; it < iterations; ++it) {
        std::stable_sort(simplex.begin(), simplex.end(), better);
        if (better(simplex.front(), best)) best = simplex.front();
        Vertex& worst = simplex.back();

        VectorX<Scalar> centroid = VectorX<Scalar>::Zero(u_dim);
        for (std::size_t i = 0; i + 1 < simplex.size(); ++i)
            centroid += simplex[i].u.alloc;
        centroid /= Scalar(simplex.size() - 1);

        const auto propose = [&](Scalar t) {
            return evaluate_point(project_onto_constraints(
                scenario, centroid + t * (centroid - worst.u.alloc)));
        };
        const Vertex reflected = propose(Scalar(1));
        if (better(reflected, simplex.front())) {
            const Vertex expanded = propose(Scalar(2));
            worst = better(expanded, reflected) ? expanded : reflected;
        } else if (better(reflected, simplex[simplex.size() - 2])) {
            worst = reflected;
        } else {
            const Vertex contracted = propose(Scalar(-0.5));
            if (better(contracted, worst)) {
                worst = contracted;
            } else {
                for (std::size_t i = 1; i < simplex.size(); ++i)
                    simplex[i] = evaluate_point(ActionT<Scalar>(
                        (simplex[0].u.alloc + simplex[i].u.alloc) / Scalar(2)));
            }
        }
    }
    for (const Vertex& v : simplex)
        if (better(v, best)) best = v;

    if (best.psi > seed.privacy.value &&
        best.cost <= cap + Scalar(kBudgetSlack)) {
        DecisionT<Scalar> refined;
        refined.action = best.u;
        refined.cost = expected_cost(scenario, pi, best.u);
        refined.privacy.value = best.psi;
        return refined;
    }
    return seed;
}

}  // namespace detail

/**
 * The belief-dependent half of a grid scan: per-point expected costs and
 * measure values. psi[l] is -inf for points violating the scenario
 * constraints. Building this once per belief and reusing it across budgets
 * is what makes budget sweeps cheap (the tables do not depend on c_b).
 */
template <typename Scalar>
struct MeasureTablesT {
    VectorX<Scalar> costs;
    std::vector<Scalar> psi;
};

using MeasureTables = MeasureTablesT<double>;

template <typename Scalar>
MeasureTablesT<Scalar> evaluate_grid(const PrivacyMeasureT<Scalar>& measure,
                                     const GridEvaluationT<Scalar>& eval,
                                     const BeliefT<Scalar>& pi) {
    measure.validate();
    MeasureTablesT<Scalar> tables;
    tables.costs = eval.state_costs.transpose() * pi.probs;
    tables.psi.assign(static_cast<std::size_t>(eval.size()),
                      -std::numeric_limits<Scalar>::infinity());
    for (Index l = 0; l < eval.size(); ++l)
        if (eval.feasible[static_cast<std::size_t>(l)])
            tables.psi[static_cast<std::size_t>(l)] =
                evaluate(measure, eval.facts[static_cast<std::size_t>(l)], pi).value;
    return tables;
}

/**
 * Deterministic obfuscator: exhaustively scans the evaluated grid, keeping
 * points within the hard cap cost <= c* + c_b|c*|, and returns the one with
 * the best measure value. Ties break toward lower cost, then
 * lexicographically smaller action. When no candidate has a finite (or
 * +inf) score, falls back to the ODM decision with privacy -inf.
 * The returned index is the chosen grid point, or -1 for the fallback and
 * for refined off-grid actions.
 */
template <typename Scalar>
std::pair<DecisionT<Scalar>, Index> solve_cdm_indexed(
    const ScenarioT<Scalar>& scenario, const BeliefT<Scalar>& pi,
    const PrivacyMeasureT<Scalar>& measure, const BudgetT<Scalar>& budget,
    const GridEvaluationT<Scalar>& eval, const MeasureTablesT<Scalar>& tables,
    const DecisionT<Scalar>& odm, const CdmOptionsT<Scalar>& options = {}) {
    measure.validate();
    budget.validate();
    const Scalar cap = budget.cap(odm.cost);

    Index best = -1;
    Scalar best_psi = -std::numeric_limits<Scalar>::infinity();
    Scalar best_cost = std::numeric_limits<Scalar>::infinity();
    for (Index l = 0; l < eval.size(); ++l) {
        const Scalar psi = tables.psi[static_cast<std::size_t>(l)];
        if (psi == -std::numeric_limits<Scalar>::infinity()) continue;
        if (tables.costs[l] > cap + Scalar(kBudgetSlack)) continue;
        const bool take =
            best < 0 || psi > best_psi ||
            (psi == best_psi &&
             (tables.costs[l] < best_cost ||
              (tables.costs[l] == best_cost &&
               detail::lex_less(eval.grid.points[static_cast<std::size_t>(l)].alloc,
                                eval.grid.points[static_cast<std::size_t>(best)]
                                    .alloc))));
        if (take) {
            best = l;
            best_psi = psi;
            best_cost = tables.costs[l];
        }
    }

    if (best < 0) {
        DecisionT<Scalar> fallback = odm;
        fallback.privacy = PrivacyValueT<Scalar>::neg_inf();
        return {fallback, Index(-1)};
    }

    DecisionT<Scalar> decision;
    decision.action = eval.grid.points[static_cast<std::size_t>(best)];
    decision.cost = expected_cost(scenario, pi, decision.action);
    decision.privacy.value = best_psi;
    Index chosen = best;
    if (options.refine) {
        const DecisionT<Scalar> refined =
            detail::refine_cdm(scenario, pi, measure, cap, decision,
                               eval.grid.resolution, options.refine_iterations);
        if (refined.privacy.value > decision.privacy.value) chosen = -1;
        decision = refined;
    }
    return {decision, chosen};
}

template <typename Scalar>
DecisionT<Scalar> solve_cdm(const ScenarioT<Scalar>& scenario,
                            const BeliefT<Scalar>& pi,
                            const PrivacyMeasureT<Scalar>& measure,
                            const BudgetT<Scalar>& budget,
                            const GridEvaluationT<Scalar>& eval,
                            const DecisionT<Scalar>& odm,
                            const CdmOptionsT<Scalar>& options = {}) {
    return solve_cdm_indexed(scenario, pi, measure, budget, eval,
                             evaluate_grid(measure, eval, pi), odm, options)
        .first;
}

/// Convenience overloads: forward solve and/or grid evaluation on the spot.
template <typename Scalar>
DecisionT<Scalar> solve_cdm(const ScenarioT<Scalar>& scenario,
                            const BeliefT<Scalar>& pi,
                            const PrivacyMeasureT<Scalar>& measure,
                            const BudgetT<Scalar>& budget,
                            const GridEvaluationT<Scalar>& eval,
                            const CdmOptionsT<Scalar>& options = {}) {
    return solve_cdm(scenario, pi, measure, budget, eval, solve_odm(scenario, pi),
                     options);
}

template <typename Scalar>
DecisionT<Scalar> solve_cdm(const ScenarioT<Scalar>& scenario,
                            const BeliefT<Scalar>& pi,
                            const PrivacyMeasureT<Scalar>& measure,
                            const BudgetT<Scalar>& budget,
                            const ActionGridT<Scalar>& grid,
                            const CdmOptionsT<Scalar>& options = {}) {
    return solve_cdm(scenario, pi, measure, budget,
                     build_grid_evaluation(
                         scenario, grid,
                         measure.kind == MeasureKind::NonUniqueness),
                     options);
}

/**
 * A randomized policy over the grid, with the per-point costs and measure
 * values it was optimized against (so a sampled Decision can report them).
 * `objective` is the achieved expected measure value; +inf point scores
 * enter the LP through a finite surrogate, see solve_pdm.
 */
template <typename Scalar>
struct ObfuscationPolicyT {
    ActionGridT<Scalar> grid;
    VectorX<Scalar> mass;
    VectorX<Scalar> costs;                        // under the solve-time belief
    std::vector<PrivacyValueT<Scalar>> privacy;   // per grid point
    Scalar cap = Scalar(0);
    Scalar objective = Scalar(0);

    Scalar expected_cost() const { return mass.dot(costs); }

    Index support_size(Scalar threshold = Scalar(1e-9)) const {
        Index n = 0;
        for (Index l = 0; l < mass.size(); ++l)
            if (mass[l] > threshold) ++n;
        return n;
    }

    void validate(const ScenarioT<Scalar>& scenario) const {
        if (mass.size() != grid.size() || costs.size() != grid.size() ||
            Index(privacy.size()) != grid.size())
            throw InvalidInput("policy: per-point vectors must match the grid");
        if (mass.minCoeff() < Scalar(0)) throw InvalidInput("policy: negative mass");
        if (std::abs(double(mass.sum() - Scalar(1))) > 1e-9)
            throw InvalidInput("policy: mass must sum to 1");
        for (Index l = 0; l < mass.size(); ++l)
            if (mass[l] > Scalar(0) &&
                !scenario.constraints.contains(
                    grid.points[static_cast<std::size_t>(l)].alloc))
                throw InvalidInput("policy: positive mass on an infeasible action");
    }
};

using ObfuscationPolicy = ObfuscationPolicyT<double>;

/**
 * Randomized obfuscator: maximizes sum_l p_l Psi_l over probability vectors
 * p subject to the expected-cost constraint sum_l p_l cost_l <= cap.
 * Samples violating the scenario constraints or scoring -inf are excluded
 * (their mass is pinned to zero by dropping them from the LP); +inf scores
 * are replaced by (largest finite score + 1) so the LP data stays finite —
 * any such point wins the objective outright, matching the CDM's treatment.
 * Throws SolverError naming the binding cause when the LP is infeasible.
 */
template <typename Scalar>
ObfuscationPolicyT<Scalar> solve_pdm(const ScenarioT<Scalar>& scenario,
                                     const BeliefT<Scalar>& pi,
                                     const PrivacyMeasureT<Scalar>& measure,
                                     const BudgetT<Scalar>& budget,
                                     const GridEvaluationT<Scalar>& eval,
                                     const MeasureTablesT<Scalar>& tables,
                                     const DecisionT<Scalar>& odm) {
    (void)scenario;
    (void)pi;
    measure.validate();
    budget.validate();
    const Scalar cap = budget.cap(odm.cost);
    const Scalar inf = std::numeric_limits<Scalar>::infinity();
    const Index m = eval.size();

    ObfuscationPolicyT<Scalar> policy;
    policy.grid = eval.grid;
    policy.cap = cap;
    policy.mass = VectorX<Scalar>::Zero(m);
    policy.costs = tables.costs;
    policy.privacy.resize(static_cast<std::size_t>(m));

    std::vector<Index> included;
    Scalar finite_max = -inf;
    for (Index l = 0; l < m; ++l) {
        auto& pv = policy.privacy[static_cast<std::size_t>(l)];
        pv.value = tables.psi[static_cast<std::size_t>(l)];
        if (pv.value == -inf) continue;
        included.push_back(l);
        if (pv.value < inf) finite_max = std::max(finite_max, pv.value);
    }
    if (included.empty())
        throw PdmInfeasible(
            "pdm: every grid sample is excluded (constraint-violating or -inf "
            "measure value)");
    const Scalar surrogate = finite_max == -inf ? Scalar(1) : finite_max + Scalar(1);

    const Index n = Index(included.size());
    LinearProgramT<Scalar> lp = LinearProgramT<Scalar>::zeros(n);
    lp.a_eq = MatrixX<Scalar>::Ones(1, n);
    lp.b_eq = VectorX<Scalar>::Ones(1);
    lp.a_ineq.resize(1, n);
    lp.b_ineq.resize(1);
    lp.b_ineq[0] = cap;
    for (Index j = 0; j < n; ++j) {
        const Index l = included[static_cast<std::size_t>(j)];
        const Scalar psi = policy.privacy[static_cast<std::size_t>(l)].value;
        lp.objective[j] = -(psi == inf ? surrogate : psi);  // maximize
        lp.a_ineq(0, j) = policy.costs[l];
    }

    const SolveStatusT<Scalar> st = solve_lp(lp);
    if (st.kind == SolveStatusKind::Infeasible) {
        Scalar cheapest = inf;
        for (Index j = 0; j < n; ++j) cheapest = std::min(cheapest, lp.a_ineq(0, j));
        throw PdmInfeasible(
            "pdm: expected-cost cap " + std::to_string(double(cap)) +
            " is below the cheapest admissible sample's cost " +
            std::to_string(double(cheapest)));
    }
    if (st.kind != SolveStatusKind::Optimal)
        throw SolverError(std::string("pdm: policy LP ended with status ") +
                          to_string(st.kind));

    for (Index j = 0; j < n; ++j)
        policy.mass[included[static_cast<std::size_t>(j)]] =
            std::max(Scalar(0), st.x[j]);
    policy.objective = -st.objective;
    return policy;
}

template <typename Scalar>
ObfuscationPolicyT<Scalar> solve_pdm(const ScenarioT<Scalar>& scenario,
                                     const BeliefT<Scalar>& pi,
                                     const PrivacyMeasureT<Scalar>& measure,
                                     const BudgetT<Scalar>& budget,
                                     const GridEvaluationT<Scalar>& eval,
                                     const DecisionT<Scalar>& odm) {
    return solve_pdm(scenario, pi, measure, budget, eval,
                     evaluate_grid(measure, eval, pi), odm);
}

template <typename Scalar>
ObfuscationPolicyT<Scalar> solve_pdm(const ScenarioT<Scalar>& scenario,
                                     const BeliefT<Scalar>& pi,
                                     const PrivacyMeasureT<Scalar>& measure,
                                     const BudgetT<Scalar>& budget,
                                     const GridEvaluationT<Scalar>& eval) {
    return solve_pdm(scenario, pi, measure, budget, eval, solve_odm(scenario, pi));
}

template <typename Scalar>
ObfuscationPolicyT<Scalar> solve_pdm(const ScenarioT<Scalar>& scenario,
                                     const BeliefT<Scalar>& pi,
                                     const PrivacyMeasureT<Scalar>& measure,
                                     const BudgetT<Scalar>& budget,
                                     const ActionGridT<Scalar>& grid) {
    return solve_pdm(scenario, pi, measure, budget,
                     build_grid_evaluation(
                         scenario, grid,
                         measure.kind == MeasureKind::NonUniqueness));
}

/// Draws a grid index from the policy's mass vector.
template <typename Scalar>
Index sample_index(const ObfuscationPolicyT<Scalar>& policy, RngStream& rng) {
    return rng.categorical(policy.mass);
}

/// Draws one action from the policy; the returned Decision carries the cost
/// and measure value recorded at solve time for the drawn grid point.
template <typename Scalar>
DecisionT<Scalar> sample_action(const ObfuscationPolicyT<Scalar>& policy,
                                RngStream& rng) {
    const Index l = sample_index(policy, rng);
    DecisionT<Scalar> d;
    d.action = policy.grid.points[static_cast<std::size_t>(l)];
    d.cost = policy.costs[l];
    d.privacy = policy.privacy[static_cast<std::size_t>(l)];
    return d;
}

}  // namespace cadm

#endif  // CADM_DECISION_MAKERS_HPP
