// Markowitz cost arithmetic: per-regime cost, belief-weighted expectation,
// and the action gradient used by the inverse-optimization adversary.

#ifndef CADM_COST_HPP
#define CADM_COST_HPP

#include "cadm/types.hpp"

namespace cadm {

/// gamma * u^T Sigma_i u - mu_i^T u for regime `i` (0-based).
template <typename Scalar>
Scalar state_cost(const ScenarioT<Scalar>& scenario, Index i, const ActionT<Scalar>& u) {
    if (i < 0 || i >= scenario.num_regimes())
        throw InvalidInput("state_cost: regime index out of range");
    const RegimeT<Scalar>& r = scenario.regimes[static_cast<std::size_t>(i)];
    if (u.alloc.size() != r.mean.size())
        throw InvalidInput("state_cost: action has wrong asset count");
    return scenario.gamma * u.alloc.dot(r.cov * u.alloc) - r.mean.dot(u.alloc);
}

/// Expected cost under belief `pi`: sum_i pi_i * state_cost(i, u).
template <typename Scalar>
Scalar expected_cost(const ScenarioT<Scalar>& scenario, const BeliefT<Scalar>& pi,
                     const ActionT<Scalar>& u) {
    if (pi.size() != scenario.num_regimes())
        throw InvalidInput("expected_cost: belief has wrong regime count");
    Scalar total = Scalar(0);
    for (Index i = 0; i < pi.size(); ++i) total += pi.probs[i] * state_cost(scenario, i, u);
    return total;
}

/// Gradient of state_cost in u: 2 * gamma * Sigma_i u - mu_i.
template <typename Scalar>
VectorX<Scalar> cost_gradient(const ScenarioT<Scalar>& scenario, Index i,
                              const ActionT<Scalar>& u) {
    if (i < 0 || i >= scenario.num_regimes())
        throw InvalidInput("cost_gradient: regime index out of range");
    const RegimeT<Scalar>& r = scenario.regimes[static_cast<std::size_t>(i)];
    if (u.alloc.size() != r.mean.size())
        throw InvalidInput("cost_gradient: action has wrong asset count");
    return Scalar(2) * scenario.gamma * (r.cov * u.alloc) - r.mean;
}

/// Belief-mixed covariance sum_i pi_i Sigma_i.
template <typename Scalar>
MatrixX<Scalar> mixed_covariance(const ScenarioT<Scalar>& scenario, const BeliefT<Scalar>& pi) {
    const Index u = scenario.num_assets();
    MatrixX<Scalar> mix = MatrixX<Scalar>::Zero(u, u);
    for (Index i = 0; i < pi.size(); ++i)
        mix += pi.probs[i] * scenario.regimes[static_cast<std::size_t>(i)].cov;
    return mix;
}

/// Belief-mixed mean sum_i pi_i mu_i.
template <typename Scalar>
VectorX<Scalar> mixed_mean(const ScenarioT<Scalar>& scenario, const BeliefT<Scalar>& pi) {
    VectorX<Scalar> mix = VectorX<Scalar>::Zero(scenario.num_assets());
    for (Index i = 0; i < pi.size(); ++i)
        mix += pi.probs[i] * scenario.regimes[static_cast<std::size_t>(i)].mean;
    return mix;
}

/**
 * Gradient matrix of the stationarity condition: column i holds
 * cost_gradient(i, u), so that sum_i pi_i grad_u c(i, u) = G * pi.
 */
template <typename Scalar>
MatrixX<Scalar> gradient_matrix(const ScenarioT<Scalar>& scenario, const ActionT<Scalar>& u) {
    MatrixX<Scalar> g(scenario.num_assets(), scenario.num_regimes());
    for (Index i = 0; i < scenario.num_regimes(); ++i) g.col(i) = cost_gradient(scenario, i, u);
    return g;
}

}  // namespace cadm

#endif  // CADM_COST_HPP
