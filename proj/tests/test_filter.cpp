#include "cadm/filter.hpp"

#include "oracles.hpp"
#include "scenarios.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace cadm;

namespace {

// Three hidden regimes, two observation symbols, strictly positive
// likelihoods so no trace is impossible.
Scenario three_state_hmm() {
    Scenario s = testbed::identity_scenario(3);
    s.transition << 0.7, 0.2, 0.1,
                    0.1, 0.6, 0.3,
                    0.25, 0.25, 0.5;
    s.obs_likelihood.resize(3, 2);
    s.obs_likelihood << 0.9, 0.1,
                        0.4, 0.6,
                        0.2, 0.8;
    s.validate();
    return s;
}

}  // namespace

TEST_SUITE("belief filter") {

TEST_CASE("prediction applies the transition transpose") {
    const Scenario s = three_state_hmm();
    RngStream rng(51);
    for (int trial = 0; trial < 10; ++trial) {
        const Belief pi = testbed::random_belief(rng, 3);
        const VectorX<double> predicted = predict_belief(s, pi);
        CHECK((predicted - s.transition.transpose() * pi.probs).norm() < 1e-15);
        CHECK(predicted.sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("one update matches a hand computation") {
    Scenario s = testbed::identity_scenario(2);
    s.transition << 0.9, 0.1,
                    0.2, 0.8;
    s.obs_likelihood.resize(2, 2);
    s.obs_likelihood << 0.8, 0.2,
                        0.3, 0.7;
    s.validate();
    const Belief prior = Belief::uniform(2);
    // predicted = (0.55, 0.45); observing symbol 0 weights by (0.8, 0.3).
    const Belief post = filter_update(s, prior, 0);
    CHECK(post.probs[0] == doctest::Approx(0.44 / 0.575).epsilon(1e-12));
    CHECK(post.probs[1] == doctest::Approx(0.135 / 0.575).epsilon(1e-12));
}

TEST_CASE("recursive filter equals the exhaustive path sum on every short trace") {
    const Scenario s = three_state_hmm();
    double worst = 0.0;
    int checked = 0;
    for (int len = 1; len <= 8; ++len)
        for (int code = 0; code < (1 << len); ++code) {
            std::vector<Index> obs(static_cast<std::size_t>(len));
            for (int t = 0; t < len; ++t)
                obs[static_cast<std::size_t>(t)] = (code >> t) & 1;
            const std::vector<Belief> trace =
                filter_trace(s, Belief::uniform(3), obs);
            const VectorX<double> reference = oracles::path_sum_posterior(s, obs);
            worst = std::max(worst,
                             (trace.back().probs - reference).cwiseAbs().maxCoeff());
            ++checked;
        }
    CHECK(checked == 510);
    CHECK(worst <= 1e-10);
}

TEST_CASE("impossible observations raise a solver error") {
    Scenario s = testbed::identity_scenario(2);
    s.obs_likelihood.resize(2, 2);
    s.obs_likelihood << 1.0, 0.0,
                        1.0, 0.0;  // symbol 1 can never be emitted
    s.validate();
    CHECK_THROWS_AS(filter_update(s, Belief::uniform(2), 1), SolverError);
    CHECK_THROWS_AS(filter_update(s, Belief::uniform(2), 5), InvalidInput);
    CHECK_THROWS_AS(filter_update(s, Belief::uniform(2), -1), InvalidInput);
}

TEST_CASE("world steps draw regime then observation with matching statistics") {
    const Scenario s = three_state_hmm();
    RngStream rng(777, 3);
    const int n = 40000;
    MatrixX<double> joint = MatrixX<double>::Zero(3, 2);
    for (int i = 0; i < n; ++i) {
        WorldState state;
        state.regime = 0;
        const Index y = simulate_step(s, state, rng);
        REQUIRE(state.regime >= 0);
        REQUIRE(state.regime < 3);
        REQUIRE(y >= 0);
        REQUIRE(y < 2);
        REQUIRE(state.time == 1);
        joint(state.regime, y) += 1.0;
    }
    joint /= double(n);
    for (Index i = 0; i < 3; ++i)
        for (Index y = 0; y < 2; ++y) {
            const double p = s.transition(0, i) * s.obs_likelihood(i, y);
            CHECK(std::abs(joint(i, y) - p) <
                  4.0 * std::sqrt(p * (1.0 - p) / n) + 1e-9);
        }
}

TEST_CASE("identical streams reproduce identical trajectories") {
    const Scenario s = three_state_hmm();
    RngStream a(13, 2);
    RngStream b(13, 2);
    WorldState sa, sb;
    for (int t = 0; t < 200; ++t) {
        CHECK(simulate_step(s, sa, a) == simulate_step(s, sb, b));
        CHECK(sa.regime == sb.regime);
    }
}

TEST_CASE("observation traces validate their symbol range") {
    ObservationTrace trace;
    trace.observations = {0, 1, 1, 0};
    CHECK_NOTHROW(trace.validate(2));
    trace.observations.push_back(2);
    CHECK_THROWS_AS(trace.validate(2), InvalidInput);
}

}  // TEST_SUITE
