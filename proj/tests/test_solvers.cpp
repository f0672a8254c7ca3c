#include "cadm/linprog.hpp"
#include "cadm/quadprog.hpp"

#include "oracles.hpp"
#include "scenarios.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <limits>

using namespace cadm;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Feasible-and-bounded random instance: constraints are anchored at a known
// nonnegative point and a simplex-style row caps the feasible region.
LinearProgram random_bounded_lp(RngStream& rng, Index n, bool with_equality) {
    LinearProgram lp = LinearProgram::zeros(n);
    lp.objective = testbed::random_vector(rng, n, -2.0, 2.0);
    VectorX<double> anchor(n);
    for (Index i = 0; i < n; ++i) anchor[i] = rng.uniform(0.0, 2.0);

    const Index n_ineq = 2 + Index(rng.uniform(0.0, 5.0));
    lp.a_ineq.resize(n_ineq + 1, n);
    lp.b_ineq.resize(n_ineq + 1);
    for (Index r = 0; r < n_ineq; ++r) {
        const VectorX<double> a = testbed::random_vector(rng, n, -1.0, 1.0);
        lp.a_ineq.row(r) = a.transpose();
        lp.b_ineq[r] = a.dot(anchor) + rng.uniform(0.0, 1.0);
    }
    lp.a_ineq.row(n_ineq).setOnes();
    lp.b_ineq[n_ineq] = anchor.sum() + 1.0;

    if (with_equality) {
        const VectorX<double> a = testbed::random_vector(rng, n, -1.0, 1.0);
        lp.a_eq.resize(1, n);
        lp.a_eq.row(0) = a.transpose();
        lp.b_eq.resize(1);
        lp.b_eq[0] = a.dot(anchor);
    }
    return lp;
}

}  // namespace

TEST_SUITE("linear programming") {

TEST_CASE("two-variable textbook instance") {
    LinearProgram lp = LinearProgram::zeros(2);
    lp.objective << -2.0, -1.0;
    lp.a_ineq.resize(1, 2);
    lp.a_ineq << 1.0, 1.0;
    lp.b_ineq.resize(1);
    lp.b_ineq << 1.0;
    const SolveStatus st = solve_lp(lp);
    REQUIRE(st.kind == SolveStatusKind::Optimal);
    CHECK(st.objective == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(st.x[0] == doctest::Approx(1.0));
    CHECK(st.x[1] == doctest::Approx(0.0));
}

TEST_CASE("equality-constrained instance") {
    LinearProgram lp = LinearProgram::zeros(2);
    lp.objective << 1.0, 0.0;
    lp.a_eq.resize(1, 2);
    lp.a_eq << 1.0, 1.0;
    lp.b_eq.resize(1);
    lp.b_eq << 1.0;
    const SolveStatus st = solve_lp(lp);
    REQUIRE(st.kind == SolveStatusKind::Optimal);
    CHECK(st.objective == doctest::Approx(0.0));
    CHECK(st.x[1] == doctest::Approx(1.0));
}

TEST_CASE("free variables pass through the split correctly") {
    LinearProgram lp = LinearProgram::zeros(2);
    lp.objective << 1.0, 0.0;
    lp.lower_bounds << -kInf, -kInf;
    lp.a_eq.resize(1, 2);
    lp.a_eq << 1.0, 1.0;  // x = -y
    lp.b_eq.resize(1);
    lp.b_eq << 0.0;
    lp.a_ineq.resize(1, 2);
    lp.a_ineq << 0.0, 1.0;  // y <= 3
    lp.b_ineq.resize(1);
    lp.b_ineq << 3.0;
    const SolveStatus st = solve_lp(lp);
    REQUIRE(st.kind == SolveStatusKind::Optimal);
    CHECK(st.objective == doctest::Approx(-3.0));
    CHECK(st.x[0] == doctest::Approx(-3.0));
    CHECK(st.x[1] == doctest::Approx(3.0));
}

TEST_CASE("shifted finite lower bounds are honored") {
    LinearProgram lp = LinearProgram::zeros(2);
    lp.objective << 1.0, 1.0;
    lp.lower_bounds << -2.0, 0.5;
    const SolveStatus st = solve_lp(lp);
    REQUIRE(st.kind == SolveStatusKind::Optimal);
    CHECK(st.x[0] == doctest::Approx(-2.0));
    CHECK(st.x[1] == doctest::Approx(0.5));
    CHECK(st.objective == doctest::Approx(-1.5));
}

TEST_CASE("unbounded problems are reported as unbounded") {
    LinearProgram lp = LinearProgram::zeros(1);
    lp.objective << -1.0;
    CHECK(solve_lp(lp).kind == SolveStatusKind::Unbounded);
}

TEST_CASE("contradictory constraints are reported as infeasible") {
    LinearProgram lp = LinearProgram::zeros(1);
    lp.a_ineq.resize(1, 1);
    lp.a_ineq << 1.0;
    lp.b_ineq.resize(1);
    lp.b_ineq << -1.0;  // x <= -1 with x >= 0
    CHECK(solve_lp(lp).kind == SolveStatusKind::Infeasible);
}

TEST_CASE("redundant duplicate rows do not break the basis bookkeeping") {
    LinearProgram lp = LinearProgram::zeros(2);
    lp.objective << -1.0, -1.0;
    lp.a_eq.resize(2, 2);
    lp.a_eq << 1.0, 1.0, 1.0, 1.0;  // same row twice
    lp.b_eq.resize(2);
    lp.b_eq << 1.0, 1.0;
    const SolveStatus st = solve_lp(lp);
    REQUIRE(st.kind == SolveStatusKind::Optimal);
    CHECK(st.objective == doctest::Approx(-1.0));
}

TEST_CASE("cycling-prone degenerate instance terminates at the optimum") {
    // Beale's example: Dantzig pricing cycles on it without an anti-cycling
    // rule, so finishing at all exercises the Bland switch.
    LinearProgram lp = LinearProgram::zeros(4);
    lp.objective << -0.75, 150.0, -0.02, 6.0;
    lp.a_ineq.resize(3, 4);
    lp.a_ineq << 0.25, -60.0, -0.04, 9.0,
                 0.5, -90.0, -0.02, 3.0,
                 0.0, 0.0, 1.0, 0.0;
    lp.b_ineq.resize(3);
    lp.b_ineq << 0.0, 0.0, 1.0;
    const SolveStatus st = solve_lp(lp);
    REQUIRE(st.kind == SolveStatusKind::Optimal);
    const oracles::VertexOptimum ref = oracles::lp_by_vertex_enumeration(lp);
    REQUIRE(ref.feasible);
    CHECK(st.objective == doctest::Approx(ref.objective).epsilon(1e-9));
    CHECK(st.objective == doctest::Approx(-0.05).epsilon(1e-9));
}

TEST_CASE("optimum matches exhaustive vertex enumeration on random instances") {
    RngStream rng(2024, 1);
    int solved = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const Index n = 2 + Index(trial % 4);
        const LinearProgram lp = random_bounded_lp(rng, n, trial % 3 == 0);
        const oracles::VertexOptimum ref = oracles::lp_by_vertex_enumeration(lp);
        REQUIRE(ref.feasible);
        const SolveStatus st = solve_lp(lp);
        REQUIRE(st.kind == SolveStatusKind::Optimal);
        CHECK(std::abs(st.objective - ref.objective) < 1e-7);
        ++solved;
    }
    CHECK(solved == 50);
}

TEST_CASE("feasibility probe agrees with full solves") {
    MatrixX<double> a_eq(1, 3);
    a_eq << 1.0, 1.0, 1.0;
    VectorX<double> b_eq(1);
    b_eq << 1.0;
    const MatrixX<double> no_ineq(0, 3);
    const VectorX<double> no_rhs(0);
    const VectorX<double> zero_lb = VectorX<double>::Zero(3);
    CHECK(check_feasible(a_eq, b_eq, no_ineq, no_rhs, zero_lb));
    b_eq << -0.5;  // nonnegative entries cannot sum to a negative number
    CHECK(!check_feasible(a_eq, b_eq, no_ineq, no_rhs, zero_lb));
}

}  // TEST_SUITE

TEST_SUITE("quadratic programming") {

TEST_CASE("projection onto the simplex matches the sort-threshold oracle") {
    RngStream rng(3030, 1);
    for (int trial = 0; trial < 50; ++trial) {
        const Index n = 2 + Index(trial % 5);
        const VectorX<double> v = testbed::random_vector(rng, n, -1.5, 1.5);
        QuadraticProgram qp = QuadraticProgram::zeros(n);
        qp.p = 2.0 * MatrixX<double>::Identity(n, n);
        qp.q = -2.0 * v;
        qp.a_eq = MatrixX<double>::Ones(1, n);
        qp.b_eq = VectorX<double>::Ones(1);
        const SolveStatus st = solve_qp(qp);
        REQUIRE(st.kind == SolveStatusKind::Optimal);
        CHECK((st.x - oracles::project_simplex(v)).norm() < 1e-6);
    }
}

TEST_CASE("equality-only problems match the closed-form KKT solve") {
    RngStream rng(3031, 1);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = 3 + Index(trial % 3);
        QuadraticProgram qp = QuadraticProgram::zeros(n);
        qp.p = 2.0 * testbed::random_spd(rng, n);
        qp.q = testbed::random_vector(rng, n);
        qp.a_eq.resize(1, n);
        qp.a_eq.row(0) = testbed::random_vector(rng, n, 0.5, 1.5).transpose();
        qp.b_eq.resize(1);
        qp.b_eq << rng.uniform(0.5, 1.5);
        qp.lower_bounds.setConstant(-kInf);

        MatrixX<double> kkt = MatrixX<double>::Zero(n + 1, n + 1);
        kkt.topLeftCorner(n, n) = qp.p;
        kkt.topRightCorner(n, 1) = qp.a_eq.transpose();
        kkt.bottomLeftCorner(1, n) = qp.a_eq;
        VectorX<double> rhs(n + 1);
        rhs.head(n) = -qp.q;
        rhs.tail(1) = qp.b_eq;
        const VectorX<double> exact =
            kkt.fullPivLu().solve(rhs).head(n).eval();

        const SolveStatus st = solve_qp(qp);
        REQUIRE(st.kind == SolveStatusKind::Optimal);
        CHECK((st.x - exact).norm() < 1e-6);
    }
}

TEST_CASE("reported multipliers satisfy the first-order conditions") {
    RngStream rng(3032, 1);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = 3;
        QuadraticProgram qp = QuadraticProgram::zeros(n);
        qp.p = 2.0 * testbed::random_spd(rng, n);
        qp.q = testbed::random_vector(rng, n);
        qp.a_eq = MatrixX<double>::Ones(1, n);
        qp.b_eq = VectorX<double>::Ones(1);
        qp.a_ineq.resize(1, n);
        qp.a_ineq.row(0) = testbed::random_vector(rng, n, -1.0, 1.0).transpose();
        qp.b_ineq.resize(1);
        qp.b_ineq << rng.uniform(0.2, 1.0);
        if (!check_feasible(qp.a_eq, qp.b_eq, qp.a_ineq, qp.b_ineq,
                            qp.lower_bounds))
            continue;

        const SolveStatus st = solve_qp(qp);
        REQUIRE(st.kind == SolveStatusKind::Optimal);
        const VectorX<double> stationarity =
            qp.p * st.x + qp.q + qp.a_eq.transpose() * st.dual_eq +
            qp.a_ineq.transpose() * st.dual_ineq + st.dual_bounds;
        CHECK(stationarity.cwiseAbs().maxCoeff() < 1e-6);
        CHECK(st.dual_ineq.minCoeff() >= -1e-9);
        CHECK(st.dual_bounds.maxCoeff() <= 1e-9);
        // Complementary slackness for the inequality row.
        const double slack = qp.b_ineq[0] - qp.a_ineq.row(0).dot(st.x);
        CHECK(std::abs(st.dual_ineq[0] * slack) < 1e-6);
    }
}

TEST_CASE("objective value is the quadratic form at the solution") {
    QuadraticProgram qp = QuadraticProgram::zeros(2);
    qp.p = 2.0 * MatrixX<double>::Identity(2, 2);
    qp.q << -2.0, -4.0;  // minimize |x - (1, 2)|^2 - 5 over x >= 0
    const SolveStatus st = solve_qp(qp);
    REQUIRE(st.kind == SolveStatusKind::Optimal);
    CHECK(st.x[0] == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(st.x[1] == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(st.objective == doctest::Approx(-5.0).epsilon(1e-7));
}

TEST_CASE("infeasible constraint systems are detected before iterating") {
    QuadraticProgram qp = QuadraticProgram::zeros(2);
    qp.p = MatrixX<double>::Identity(2, 2);
    qp.a_eq.resize(1, 2);
    qp.a_eq << 1.0, 1.0;
    qp.b_eq.resize(1);
    qp.b_eq << -3.0;  // impossible with x >= 0
    CHECK(solve_qp(qp).kind == SolveStatusKind::Infeasible);
}

TEST_CASE("asymmetric quadratic terms are rejected") {
    QuadraticProgram qp = QuadraticProgram::zeros(2);
    qp.p << 1.0, 0.5, 0.1, 1.0;
    CHECK_THROWS_AS(solve_qp(qp), InvalidInput);
}

}  // TEST_SUITE
