// Hidden-regime world model: Markov regime transitions, discrete
// observations, and the Bayes filter the agent runs over them.

#ifndef CADM_FILTER_HPP
#define CADM_FILTER_HPP

#include "cadm/rng.hpp"
#include "cadm/types.hpp"

#include <vector>

namespace cadm {

/// One-step prediction: the belief pushed through the regime transition,
/// (T' pi)_j = sum_i pi_i T(i, j).
template <typename Scalar>
VectorX<Scalar> predict_belief(const ScenarioT<Scalar>& scenario,
                               const BeliefT<Scalar>& belief) {
    if (belief.size() != scenario.num_regimes())
        throw InvalidInput("predict_belief: belief dimension mismatch");
    return scenario.transition.transpose() * belief.probs;
}

/**
 * Bayes update after observing symbol `observation`: predict through the
 * transition, weight by the observation likelihood column, renormalize.
 * Throws SolverError if the observation has zero probability under the
 * predicted belief (the posterior would be undefined).
 */
template <typename Scalar>
BeliefT<Scalar> filter_update(const ScenarioT<Scalar>& scenario,
                              const BeliefT<Scalar>& prior, Index observation) {
    if (observation < 0 || observation >= scenario.num_observations())
        throw InvalidInput("filter_update: observation index out of range");
    VectorX<Scalar> unnormalized =
        scenario.obs_likelihood.col(observation).cwiseProduct(
            predict_belief(scenario, prior));
    const Scalar total = unnormalized.sum();
    if (!(total > Scalar(0)))
        throw SolverError(
            "filter_update: observation has zero likelihood under the "
            "predicted belief");
    return BeliefT<Scalar>(unnormalized / total);
}

/// The hidden side of the simulation: true regime and step counter.
struct WorldState {
    Index regime = 0;
    Index time = 0;
};

/// Observation indices, one per timestep (0-based internally).
struct ObservationTrace {
    std::vector<Index> observations;

    void validate(Index num_observations) const {
        for (const Index y : observations)
            if (y < 0 || y >= num_observations)
                throw InvalidInput("observation trace: symbol out of range");
    }
};

/**
 * Advances the world one step: draws the next regime from the transition row
 * of the current regime, then an observation from the new regime's likelihood
 * row, and increments time. Returns the observation index. The draw order
 * (regime first, observation second) is part of the reproducibility contract.
 */
template <typename Scalar>
Index simulate_step(const ScenarioT<Scalar>& scenario, WorldState& state,
                    RngStream& rng) {
    if (state.regime < 0 || state.regime >= scenario.num_regimes())
        throw InvalidInput("simulate_step: regime index out of range");
    state.regime =
        rng.categorical(scenario.transition.row(state.regime).transpose().eval());
    const Index observation = rng.categorical(
        scenario.obs_likelihood.row(state.regime).transpose().eval());
    ++state.time;
    return observation;
}

/// Runs the filter along a whole observation sequence; element k of the
/// result is the posterior after the (k+1)-th observation.
template <typename Scalar>
std::vector<BeliefT<Scalar>> filter_trace(const ScenarioT<Scalar>& scenario,
                                          const BeliefT<Scalar>& initial,
                                          const std::vector<Index>& observations) {
    std::vector<BeliefT<Scalar>> posteriors;
    posteriors.reserve(observations.size());
    BeliefT<Scalar> belief = initial;
    for (const Index y : observations) {
        belief = filter_update(scenario, belief, y);
        posteriors.push_back(belief);
    }
    return posteriors;
}

}  // namespace cadm

#endif  // CADM_FILTER_HPP
