// Hand-built scenarios with known closed-form behavior, shared by the
// test suites.

#ifndef CADM_TESTS_SCENARIOS_HPP
#define CADM_TESTS_SCENARIOS_HPP

#include "cadm/rng.hpp"
#include "cadm/types.hpp"

#include <vector>

namespace testbed {

/**
 * gamma = 1/2, unit covariances, mean_i = e_i. The forward cost is
 * 0.5|u|^2 - pi'u, so the optimum over the simplex is u* = pi with cost
 * -0.5|pi|^2, and the belief set of any interior feasible action u is the
 * single point {u}.
 */
inline cadm::Scenario identity_scenario(cadm::Index n) {
    cadm::Scenario s;
    s.gamma = 0.5;
    s.regimes.resize(static_cast<std::size_t>(n));
    for (cadm::Index i = 0; i < n; ++i) {
        s.regimes[static_cast<std::size_t>(i)].mean =
            cadm::VectorX<double>::Unit(n, i);
        s.regimes[static_cast<std::size_t>(i)].cov =
            cadm::MatrixX<double>::Identity(n, n);
    }
    s.constraints = cadm::ConstraintSet::budget_simplex(n);
    s.transition = 0.8 * cadm::MatrixX<double>::Identity(n, n) +
                   cadm::MatrixX<double>::Constant(n, n, 0.2 / double(n));
    s.obs_likelihood = 0.7 * cadm::MatrixX<double>::Identity(n, n) +
                       cadm::MatrixX<double>::Constant(n, n, 0.3 / double(n));
    s.rng_seed = 7;
    s.validate();
    return s;
}

/**
 * Identity scenario with regimes 0 and 1 made indistinguishable (same mean
 * and covariance). Belief sets become segments along pi_0 + pi_1 = const,
 * which the 0.01 belief grid samples exactly.
 */
inline cadm::Scenario duplicated_regime_scenario() {
    cadm::Scenario s = identity_scenario(3);
    s.regimes[1].mean = s.regimes[0].mean;
    s.regimes[1].cov = s.regimes[0].cov;
    s.validate();
    return s;
}

/**
 * A linear-cost market (gamma = 0) over two assets where asset 1 never has
 * the higher mean: interior actions are rationalizable by no belief (their
 * belief set is empty), while the all-in asset-0 action is rationalized by
 * every belief.
 */
inline cadm::Scenario linear_cost_scenario() {
    cadm::Scenario s;
    s.gamma = 0.0;
    s.regimes.resize(2);
    s.regimes[0].mean = (cadm::VectorX<double>(2) << 1.0, 0.0).finished();
    s.regimes[1].mean = (cadm::VectorX<double>(2) << 2.0, 0.0).finished();
    s.regimes[0].cov = cadm::MatrixX<double>::Identity(2, 2);
    s.regimes[1].cov = cadm::MatrixX<double>::Identity(2, 2);
    s.constraints = cadm::ConstraintSet::budget_simplex(2);
    s.transition = cadm::MatrixX<double>::Constant(2, 2, 0.5);
    s.obs_likelihood = (cadm::MatrixX<double>(2, 2) << 0.8, 0.2, 0.3, 0.7)
                           .finished();
    s.rng_seed = 11;
    s.validate();
    return s;
}

inline cadm::Belief random_belief(cadm::RngStream& rng, cadm::Index n) {
    const std::vector<double> w = rng.dirichlet_uniform(int(n));
    cadm::VectorX<double> p(n);
    for (cadm::Index i = 0; i < n; ++i) p[i] = w[static_cast<std::size_t>(i)];
    return cadm::Belief{p};
}

inline cadm::MatrixX<double> random_spd(cadm::RngStream& rng, cadm::Index n,
                                        double ridge = 0.3) {
    cadm::MatrixX<double> g(n, n);
    for (cadm::Index r = 0; r < n; ++r)
        for (cadm::Index c = 0; c < n; ++c) g(r, c) = rng.gaussian();
    const cadm::MatrixX<double> gram = g * g.transpose();
    return (gram + gram.transpose()) / 2.0 / double(n) +
           ridge * cadm::MatrixX<double>::Identity(n, n);
}

inline cadm::VectorX<double> random_vector(cadm::RngStream& rng, cadm::Index n,
                                           double lo = -1.0, double hi = 1.0) {
    cadm::VectorX<double> v(n);
    for (cadm::Index i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
    return v;
}

}  // namespace testbed

#endif  // CADM_TESTS_SCENARIOS_HPP
