// The five privacy measures scoring how well an action hides the belief
// behind it, as extended reals (finite or infinite):
//
//   infeasible  — 0 when no belief rationalizes the action, else -inf
//   nonunique   — 0 when some rationalizing belief differs from the truth
//   nonexist    — 0 when the true belief is not among the rationalizing ones
//   desired     — minus the distance from a chosen decoy belief to the set
//   maximal     — the distance from the true belief to the set
//
// An empty set makes the two distance measures undefined; by default it
// scores -inf ("worst": the adversary may notice the obfuscation), and the
// "best" policy flips the maximal measure to +inf for experimentation.

#ifndef CADM_PRIVACY_HPP
#define CADM_PRIVACY_HPP

#include "cadm/polytope.hpp"
#include "cadm/types.hpp"

#include <limits>
#include <optional>
#include <string>

namespace cadm {

enum class MeasureKind {
    Infeasibility,
    NonUniqueness,
    NonExistence,
    DesiredObfuscation,
    MaximalObfuscation,
};

enum class EmptySetPolicy { Worst, Best };

inline MeasureKind parse_measure_kind(const std::string& name) {
    if (name == "infeasible") return MeasureKind::Infeasibility;
    if (name == "nonunique") return MeasureKind::NonUniqueness;
    if (name == "nonexist") return MeasureKind::NonExistence;
    if (name == "desired") return MeasureKind::DesiredObfuscation;
    if (name == "maximal") return MeasureKind::MaximalObfuscation;
    throw InvalidInput("unknown privacy measure '" + name +
                       "' (expected infeasible|nonunique|nonexist|desired|maximal)");
}

inline const char* to_string(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::Infeasibility: return "infeasible";
        case MeasureKind::NonUniqueness: return "nonunique";
        case MeasureKind::NonExistence: return "nonexist";
        case MeasureKind::DesiredObfuscation: return "desired";
        case MeasureKind::MaximalObfuscation: return "maximal";
    }
    return "unknown";
}

template <typename Scalar>
struct PrivacyMeasureT {
    MeasureKind kind = MeasureKind::MaximalObfuscation;
    std::optional<BeliefT<Scalar>> desired;  // required iff kind is desired
    EmptySetPolicy empty_set_policy = EmptySetPolicy::Worst;

    void validate() const {
        if ((kind == MeasureKind::DesiredObfuscation) != desired.has_value())
            throw InvalidInput(
                "privacy measure: a desired belief is required exactly for the "
                "'desired' measure");
        if (desired) desired->validate();
    }
};

template <typename Scalar>
struct PrivacyValueT {
    Scalar value = -std::numeric_limits<Scalar>::infinity();

    bool finite() const { return std::isfinite(double(value)); }
    static PrivacyValueT neg_inf() { return {}; }
};

using PrivacyMeasure = PrivacyMeasureT<double>;
using PrivacyValue = PrivacyValueT<double>;

/**
 * The belief-independent facts about one action's polytope. Grid scans
 * evaluate many beliefs against the same action, so callers may build this
 * once per action and reuse it; `singleton` can be precomputed when the
 * measure will need it (it is ignored for empty polytopes).
 */
template <typename Scalar>
struct PolytopeFactsT {
    BeliefPolytopeT<Scalar> polytope;
    bool empty = false;
    std::optional<bool> singleton;
};

using PolytopeFacts = PolytopeFactsT<double>;

template <typename Scalar>
PolytopeFactsT<Scalar> make_polytope_facts(const ScenarioT<Scalar>& scenario,
                                           const ActionT<Scalar>& u,
                                           bool need_singleton = false) {
    PolytopeFactsT<Scalar> facts;
    facts.polytope = build_polytope(scenario, u);
    facts.empty = is_empty(facts.polytope);
    if (need_singleton && !facts.empty) facts.singleton = is_singleton(facts.polytope);
    return facts;
}

/// Scores one action's polytope against the true belief under `measure`.
template <typename Scalar>
PrivacyValueT<Scalar> evaluate(const PrivacyMeasureT<Scalar>& measure,
                               const PolytopeFactsT<Scalar>& facts,
                               const BeliefT<Scalar>& pi_true) {
    measure.validate();
    pi_true.validate();
    const Scalar inf = std::numeric_limits<Scalar>::infinity();
    PrivacyValueT<Scalar> out;
    switch (measure.kind) {
        case MeasureKind::Infeasibility:
            out.value = facts.empty ? Scalar(0) : -inf;
            break;
        case MeasureKind::NonUniqueness: {
            if (facts.empty) {
                out.value = -inf;  // no belief at all, let alone a second one
                break;
            }
            const bool single = facts.singleton ? *facts.singleton
                                                : is_singleton(facts.polytope);
            if (!single) {
                out.value = Scalar(0);
            } else {
                // A unique point only helps the agent if it is the wrong one.
                out.value = distance(facts.polytope, pi_true) > Scalar(kSingletonTol)
                                ? Scalar(0)
                                : -inf;
            }
            break;
        }
        case MeasureKind::NonExistence:
            if (facts.empty)
                out.value = Scalar(0);  // the set misses pi_true vacuously
            else
                out.value = contains(facts.polytope, pi_true) ? -inf : Scalar(0);
            break;
        case MeasureKind::DesiredObfuscation:
            out.value = facts.empty ? -inf : -distance(facts.polytope, *measure.desired);
            break;
        case MeasureKind::MaximalObfuscation:
            if (facts.empty)
                out.value = measure.empty_set_policy == EmptySetPolicy::Best ? inf : -inf;
            else
                out.value = distance(facts.polytope, pi_true);
            break;
    }
    return out;
}

/// Convenience overload building the polytope facts on the spot.
template <typename Scalar>
PrivacyValueT<Scalar> evaluate(const PrivacyMeasureT<Scalar>& measure,
                               const ScenarioT<Scalar>& scenario,
                               const ActionT<Scalar>& u,
                               const BeliefT<Scalar>& pi_true) {
    return evaluate(measure,
                    make_polytope_facts(scenario, u,
                                        measure.kind == MeasureKind::NonUniqueness),
                    pi_true);
}

}  // namespace cadm

#endif  // CADM_PRIVACY_HPP
