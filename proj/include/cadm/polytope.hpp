// The adversary's reconstruction target: the set of beliefs under which an
// observed action is optimal for the forward portfolio problem.
//
// A belief pi rationalizes an action u exactly when there are KKT
// multipliers (lambda for the nonnegativity bounds, nu for the equality
// constraints) with
//
//     sum_i pi_i grad_u c(i, u) - lambda + a_eq' nu = 0,
//     lambda >= 0, and lambda_j = 0 wherever u_j != 0,
//
// together with pi on the probability simplex. The polytope is stored over
// the joint variable z = (pi, lambda, nu); every query below is a small LP
// or QP over z.

#ifndef CADM_POLYTOPE_HPP
#define CADM_POLYTOPE_HPP

#include "cadm/cost.hpp"
#include "cadm/linprog.hpp"
#include "cadm/quadprog.hpp"
#include "cadm/types.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace cadm {

inline constexpr double kActiveBoundTol = 1e-7;   // |u_j| below this counts as zero
inline constexpr double kContainsTol = 1e-8;      // phase-1 slack for membership
inline constexpr double kSingletonTol = 1e-6;     // coordinate spread of a "point"

template <typename Scalar>
struct BeliefPolytopeT {
    Index x_dim = 0;       // belief coordinates
    Index lambda_dim = 0;  // bound multipliers (always the action dimension)
    Index nu_dim = 0;      // equality multipliers
    std::vector<bool> active_set;     // true where the action component is ~0
    MatrixX<Scalar> stationarity;     // lambda_dim x (x_dim+lambda_dim+nu_dim)

    Index dim() const { return x_dim + lambda_dim + nu_dim; }

    /// Full equality system over z: stationarity rows, the simplex row
    /// 1'pi = 1, and a pin row lambda_j = 0 for every inactive component.
    MatrixX<Scalar> equality_matrix() const {
        Index pins = 0;
        for (const bool a : active_set)
            if (!a) ++pins;
        MatrixX<Scalar> eq = MatrixX<Scalar>::Zero(lambda_dim + 1 + pins, dim());
        eq.topRows(lambda_dim) = stationarity;
        eq.block(lambda_dim, 0, 1, x_dim).setOnes();
        Index r = lambda_dim + 1;
        for (Index j = 0; j < lambda_dim; ++j)
            if (!active_set[static_cast<std::size_t>(j)])
                eq(r++, x_dim + j) = Scalar(1);
        return eq;
    }

    VectorX<Scalar> equality_rhs() const {
        Index pins = 0;
        for (const bool a : active_set)
            if (!a) ++pins;
        VectorX<Scalar> rhs = VectorX<Scalar>::Zero(lambda_dim + 1 + pins);
        rhs[lambda_dim] = Scalar(1);
        return rhs;
    }

    /// z >= lower: pi and lambda nonnegative, nu free.
    VectorX<Scalar> lower_bounds() const {
        VectorX<Scalar> lb = VectorX<Scalar>::Zero(dim());
        lb.tail(nu_dim).setConstant(-std::numeric_limits<Scalar>::infinity());
        return lb;
    }
};

using BeliefPolytope = BeliefPolytopeT<double>;

/**
 * Assembles the polytope for an observed action. The active set marks the
 * components |u_j| <= 1e-7; the remaining multipliers are pinned to zero by
 * complementary slackness. When the scenario has no nonnegativity constraint
 * every lambda is pinned.
 */
template <typename Scalar>
BeliefPolytopeT<Scalar> build_polytope(const ScenarioT<Scalar>& scenario,
                                       const ActionT<Scalar>& u) {
    if (u.size() != scenario.num_assets())
        throw InvalidInput("build_polytope: action dimension mismatch");
    if (!detail::all_finite(u.alloc))
        throw InvalidInput("build_polytope: action has non-finite entries");
    BeliefPolytopeT<Scalar> p;
    p.x_dim = scenario.num_regimes();
    p.lambda_dim = scenario.num_assets();
    p.nu_dim = scenario.constraints.a_eq.rows();
    p.active_set.assign(static_cast<std::size_t>(p.lambda_dim), false);
    if (scenario.constraints.nonneg)
        for (Index j = 0; j < p.lambda_dim; ++j)
            p.active_set[static_cast<std::size_t>(j)] =
                std::abs(double(u.alloc[j])) <= kActiveBoundTol;

    p.stationarity = MatrixX<Scalar>::Zero(p.lambda_dim, p.dim());
    p.stationarity.leftCols(p.x_dim) = gradient_matrix(scenario, u);
    p.stationarity.middleCols(p.x_dim, p.lambda_dim) =
        -MatrixX<Scalar>::Identity(p.lambda_dim, p.lambda_dim);
    if (p.nu_dim > 0)
        p.stationarity.rightCols(p.nu_dim) = scenario.constraints.a_eq.transpose();
    return p;
}

/// True iff no belief rationalizes the action (the joint system over
/// (pi, lambda, nu) is infeasible).
template <typename Scalar>
bool is_empty(const BeliefPolytopeT<Scalar>& p) {
    const MatrixX<Scalar> no_ineq(0, p.dim());
    const VectorX<Scalar> no_rhs(0);
    return !check_feasible(p.equality_matrix(), p.equality_rhs(), no_ineq, no_rhs,
                           p.lower_bounds());
}

/// True iff `pi` belongs to the polytope's belief projection: with pi fixed,
/// multipliers (lambda, nu) completing the KKT system exist (phase-1 LP at
/// tolerance 1e-8).
template <typename Scalar>
bool contains(const BeliefPolytopeT<Scalar>& p, const BeliefT<Scalar>& pi) {
    if (pi.size() != p.x_dim) throw InvalidInput("contains: belief dimension mismatch");
    const Index nvars = p.lambda_dim + p.nu_dim;
    // Remaining system: -lambda + a_eq' nu = -G pi, plus the inactive pins.
    LinearProgramT<Scalar> lp = LinearProgramT<Scalar>::zeros(nvars);
    Index pins = 0;
    for (const bool a : p.active_set)
        if (!a) ++pins;
    lp.a_eq = MatrixX<Scalar>::Zero(p.lambda_dim + pins, nvars);
    lp.a_eq.topRows(p.lambda_dim) = p.stationarity.rightCols(nvars);
    lp.b_eq = VectorX<Scalar>::Zero(p.lambda_dim + pins);
    lp.b_eq.head(p.lambda_dim) = -p.stationarity.leftCols(p.x_dim) * pi.probs;
    Index r = p.lambda_dim;
    for (Index j = 0; j < p.lambda_dim; ++j)
        if (!p.active_set[static_cast<std::size_t>(j)]) lp.a_eq(r++, j) = Scalar(1);
    lp.lower_bounds.tail(p.nu_dim)
        .setConstant(-std::numeric_limits<Scalar>::infinity());
    return phase1_infeasibility(lp) <= Scalar(kContainsTol);
}

/// Extremes of belief coordinate i over the polytope, via a pair of LPs.
/// Throws SolverError when the polytope is empty.
template <typename Scalar>
std::pair<Scalar, Scalar> coordinate_range(const BeliefPolytopeT<Scalar>& p,
                                           Index i) {
    if (i < 0 || i >= p.x_dim)
        throw InvalidInput("coordinate_range: coordinate out of range");
    LinearProgramT<Scalar> lp = LinearProgramT<Scalar>::zeros(p.dim());
    lp.a_eq = p.equality_matrix();
    lp.b_eq = p.equality_rhs();
    lp.lower_bounds = p.lower_bounds();

    std::pair<Scalar, Scalar> range;
    for (const int sign : {+1, -1}) {
        lp.objective.setZero();
        lp.objective[i] = Scalar(sign);
        const SolveStatusT<Scalar> st = solve_lp(lp);
        if (st.kind == SolveStatusKind::Infeasible)
            throw SolverError("coordinate_range: polytope is empty");
        if (st.kind != SolveStatusKind::Optimal)
            throw SolverError(std::string("coordinate_range: LP ended with status ") +
                              to_string(st.kind));
        if (sign > 0)
            range.first = st.objective;
        else
            range.second = -st.objective;
    }
    return range;
}

/// True iff every belief coordinate is pinned within 1e-6, i.e. the
/// adversary's reconstruction is a single point. Expects a nonempty polytope.
template <typename Scalar>
bool is_singleton(const BeliefPolytopeT<Scalar>& p) {
    for (Index i = 0; i < p.x_dim; ++i) {
        const auto [lo, hi] = coordinate_range(p, i);
        if (hi - lo > Scalar(kSingletonTol)) return false;
    }
    return true;
}

/**
 * Euclidean distance from `ref` to the polytope's belief projection,
 * computed as a QP over the joint variable z (the projection onto the
 * pi-block is implicit). Zero within 1e-6 exactly when contains(ref).
 * Throws SolverError when the polytope is empty; the caller decides what
 * emptiness means for its privacy measure.
 */
template <typename Scalar>
Scalar distance(const BeliefPolytopeT<Scalar>& p, const BeliefT<Scalar>& ref) {
    if (ref.size() != p.x_dim) throw InvalidInput("distance: belief dimension mismatch");
    QuadraticProgramT<Scalar> qp = QuadraticProgramT<Scalar>::zeros(p.dim());
    qp.p.topLeftCorner(p.x_dim, p.x_dim) =
        Scalar(2) * MatrixX<Scalar>::Identity(p.x_dim, p.x_dim);
    qp.q.head(p.x_dim) = Scalar(-2) * ref.probs;
    qp.a_eq = p.equality_matrix();
    qp.b_eq = p.equality_rhs();
    qp.lower_bounds = p.lower_bounds();

    const SolveStatusT<Scalar> st = solve_qp(qp);
    if (st.kind == SolveStatusKind::Infeasible)
        throw SolverError("distance: polytope is empty");
    if (st.kind != SolveStatusKind::Optimal)
        throw SolverError(std::string("distance: QP ended with status ") +
                          to_string(st.kind));
    // objective = |pi|^2 - 2 ref.pi; complete the square with |ref|^2.
    const Scalar sq = st.objective + ref.probs.squaredNorm();
    return std::sqrt(std::max(Scalar(0), sq));
}

}  // namespace cadm

#endif  // CADM_POLYTOPE_HPP
