#include "cadm/polytope.hpp"

#include "cadm/decision_makers.hpp"
#include "cadm/experiments.hpp"
#include "cadm/scenario_io.hpp"

#include "oracles.hpp"
#include "scenarios.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cmath>

using namespace cadm;

TEST_SUITE("belief polytope") {

TEST_CASE("dimensions and active set follow the action's zero pattern") {
    const Scenario s = testbed::identity_scenario(3);
    const Action u((VectorX<double>(3) << 0.0, 0.4, 0.6).finished());
    const BeliefPolytope poly = build_polytope(s, u);
    CHECK(poly.x_dim == 3);
    CHECK(poly.lambda_dim == 3);
    CHECK(poly.nu_dim == 1);
    CHECK(poly.dim() == 7);
    CHECK(poly.active_set == std::vector<bool>{true, false, false});
    // Stationarity rows + the simplex row + one pin per inactive multiplier.
    CHECK(poly.equality_matrix().rows() == 3 + 1 + 2);
    CHECK(poly.equality_rhs()[3] == 1.0);
}

TEST_CASE("interior actions of the identity market have singleton belief sets") {
    const Scenario s = testbed::identity_scenario(3);
    RngStream rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        const Belief q = testbed::random_belief(rng, 3);
        const BeliefPolytope poly = build_polytope(s, Action(q.probs));
        CHECK(!is_empty(poly));
        CHECK(contains(poly, q));
        CHECK(is_singleton(poly));
        for (Index i = 0; i < 3; ++i) {
            const auto [lo, hi] = coordinate_range(poly, i);
            CHECK(std::abs(lo - q.probs[i]) < 1e-7);
            CHECK(std::abs(hi - q.probs[i]) < 1e-7);
        }
        const Belief ref = testbed::random_belief(rng, 3);
        CHECK(std::abs(distance(poly, ref) - (q.probs - ref.probs).norm()) <
              1e-6);
    }
}

TEST_CASE("an action no belief rationalizes yields the empty set") {
    const Scenario s = testbed::identity_scenario(3);
    const Action u((VectorX<double>(3) << 2.0, -1.0, 0.0).finished());
    const BeliefPolytope poly = build_polytope(s, u);
    CHECK(is_empty(poly));
    CHECK(!contains(poly, Belief::uniform(3)));
    CHECK_THROWS_AS(distance(poly, Belief::uniform(3)), SolverError);
    CHECK_THROWS_AS(coordinate_range(poly, 0), SolverError);
}

TEST_CASE("indistinguishable regimes widen the set to a segment") {
    const Scenario s = testbed::duplicated_regime_scenario();
    const double a = 0.4;
    const Action u((VectorX<double>(3) << a, 0.0, 1.0 - a).finished());
    const BeliefPolytope poly = build_polytope(s, u);
    REQUIRE(!is_empty(poly));
    CHECK(!is_singleton(poly));

    // All beliefs with pi_0 + pi_1 = a and pi_2 = 1 - a are members.
    for (double x : {0.0, 0.1, 0.25, a}) {
        const Belief member{
            (VectorX<double>(3) << x, a - x, 1.0 - a).finished()};
        CHECK(contains(poly, member));
    }
    const Belief outside{
        (VectorX<double>(3) << a + 0.05, 0.0, 0.95 - a).finished()};
    CHECK(!contains(poly, outside));

    const auto [lo0, hi0] = coordinate_range(poly, 0);
    CHECK(std::abs(lo0 - 0.0) < 1e-7);
    CHECK(std::abs(hi0 - a) < 1e-7);
    const auto [lo2, hi2] = coordinate_range(poly, 2);
    CHECK(std::abs(lo2 - (1.0 - a)) < 1e-7);
    CHECK(std::abs(hi2 - (1.0 - a)) < 1e-7);

    // Distance to the segment has a closed form: project, clamp, measure.
    RngStream rng(62);
    for (int trial = 0; trial < 5; ++trial) {
        const Belief ref = testbed::random_belief(rng, 3);
        const double t =
            std::min(a, std::max(0.0, (ref.probs[0] - ref.probs[1] + a) / 2.0));
        const VectorX<double> closest =
            (VectorX<double>(3) << t, a - t, 1.0 - a).finished();
        CHECK(std::abs(distance(poly, ref) - (closest - ref.probs).norm()) <
              1e-6);
    }
}

TEST_CASE("a dominant corner action is rationalized by every belief") {
    const Scenario s = testbed::linear_cost_scenario();
    const Action all_in((VectorX<double>(2) << 1.0, 0.0).finished());
    const BeliefPolytope poly = build_polytope(s, all_in);
    REQUIRE(!is_empty(poly));
    RngStream rng(63);
    for (int trial = 0; trial < 10; ++trial)
        CHECK(contains(poly, testbed::random_belief(rng, 2)));
    const auto [lo, hi] = coordinate_range(poly, 0);
    CHECK(std::abs(lo - 0.0) < 1e-7);
    CHECK(std::abs(hi - 1.0) < 1e-7);

    const Action dominated((VectorX<double>(2) << 0.0, 1.0).finished());
    CHECK(is_empty(build_polytope(s, dominated)));
    const Action split((VectorX<double>(2) << 0.5, 0.5).finished());
    CHECK(is_empty(build_polytope(s, split)));
}

TEST_CASE("forward-optimal actions always certify the acting belief") {
    RngStream rng(64);
    for (int trial = 0; trial < 20; ++trial) {
        const Index x_dim = 2 + Index(trial % 3);
        const Index u_dim = 2 + Index((trial / 3) % 3);
        const Scenario s =
            generate_scenario(900 + std::uint64_t(trial), x_dim, u_dim, 3);
        const Belief pi = testbed::random_belief(rng, x_dim);
        const Action u_star = solve_odm(s, pi).action;
        const BeliefPolytope poly = build_polytope(s, u_star);
        CHECK(contains(poly, pi));
        CHECK(distance(poly, pi) <= 1e-6);
    }
}

TEST_CASE("membership and distance certify each other") {
    const Scenario s = testbed::duplicated_regime_scenario();
    const Action u((VectorX<double>(3) << 0.3, 0.0, 0.7).finished());
    const BeliefPolytope poly = build_polytope(s, u);
    RngStream rng(65);
    for (int trial = 0; trial < 20; ++trial) {
        const Belief p = testbed::random_belief(rng, 3);
        const double d = distance(poly, p);
        if (contains(poly, p))
            CHECK(d <= 1e-6);
        else
            CHECK(d > 1e-6);
    }
}

TEST_CASE("distance matches a dense belief-grid search") {
    RngStream rng(66);
    int compared = 0;

    // Segments {pi0 + pi1 = a, pi2 = 1 - a} aligned with the hundredths grid.
    const Scenario seg = testbed::duplicated_regime_scenario();
    for (const double a : {0.20, 0.35, 0.50, 0.65, 0.80, 0.95}) {
        const BeliefPolytope poly = build_polytope(
            seg, Action((VectorX<double>(3) << a, 0.0, 1.0 - a).finished()));
        REQUIRE(!is_empty(poly));
        const Belief ref = testbed::random_belief(rng, 3);
        const double brute = oracles::belief_grid_distance(poly, ref);
        REQUIRE(std::isfinite(brute));
        CHECK(std::abs(distance(poly, ref) - brute) <= 0.01);
        ++compared;
    }

    // Singletons sitting exactly on grid nodes of the identity market.
    const Scenario idn = testbed::identity_scenario(3);
    for (const double a : {0.17, 0.37}) {
        const Belief q{(VectorX<double>(3) << a, 0.25, 0.75 - a).finished()};
        const BeliefPolytope poly = build_polytope(idn, Action(q.probs));
        REQUIRE(!is_empty(poly));
        const Belief ref = testbed::random_belief(rng, 3);
        const double brute = oracles::belief_grid_distance(poly, ref);
        REQUIRE(std::isfinite(brute));
        CHECK(std::abs(distance(poly, ref) - brute) <= 0.01);
        ++compared;
    }
    CHECK(compared == 8);
}

TEST_CASE("without a nonnegativity constraint every multiplier is pinned") {
    Scenario s = testbed::identity_scenario(3);
    s.constraints = ConstraintSet(s.constraints.a_eq, s.constraints.b_eq, false);
    const Belief pi{(VectorX<double>(3) << 0.2, 0.3, 0.5).finished()};
    const Action u_star = solve_odm(s, pi).action;
    const BeliefPolytope poly = build_polytope(s, u_star);
    CHECK(poly.lambda_dim == 3);
    CHECK(poly.active_set == std::vector<bool>{false, false, false});
    // Pins for all three multipliers join the stationarity and simplex rows.
    CHECK(poly.equality_matrix().rows() == 3 + 1 + 3);
    CHECK(contains(poly, pi));
}

TEST_CASE("serialized polytopes carry the full KKT description") {
    const Scenario s = testbed::identity_scenario(3);
    const BeliefPolytope poly =
        build_polytope(s, Action((VectorX<double>(3) << 0.0, 0.4, 0.6).finished()));
    const nlohmann::json j = nlohmann::json::parse(polytope_to_json_text(poly));
    CHECK(j.at("x_dim").get<Index>() == 3);
    CHECK(j.at("lambda_dim").get<Index>() == 3);
    CHECK(j.at("nu_dim").get<Index>() == 1);
    CHECK(j.at("active_set").size() == 3);
    CHECK(j.at("stationarity").size() == 3);
    CHECK(j.at("equality_matrix").size() == 6);
    CHECK(j.at("equality_rhs").size() == 6);
}

}  // TEST_SUITE
