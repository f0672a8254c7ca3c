#include "cadm/privacy.hpp"

#include "scenarios.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace cadm;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PrivacyMeasure measure_of(MeasureKind kind,
                          EmptySetPolicy policy = EmptySetPolicy::Worst) {
    PrivacyMeasure m;
    m.kind = kind;
    m.empty_set_policy = policy;
    return m;
}

PrivacyMeasure desired_measure(const Belief& decoy) {
    PrivacyMeasure m;
    m.kind = MeasureKind::DesiredObfuscation;
    m.desired = decoy;
    return m;
}

}  // namespace

TEST_SUITE("privacy measures") {

TEST_CASE("measure names round-trip through the parser") {
    for (const MeasureKind kind :
         {MeasureKind::Infeasibility, MeasureKind::NonUniqueness,
          MeasureKind::NonExistence, MeasureKind::DesiredObfuscation,
          MeasureKind::MaximalObfuscation})
        CHECK(parse_measure_kind(to_string(kind)) == kind);
    CHECK_THROWS_AS(parse_measure_kind("stealth"), InvalidInput);
    CHECK_THROWS_AS(parse_measure_kind(""), InvalidInput);
}

TEST_CASE("a desired belief is required exactly for the desired measure") {
    PrivacyMeasure m = measure_of(MeasureKind::DesiredObfuscation);
    CHECK_THROWS_AS(m.validate(), InvalidInput);
    m.desired = Belief::uniform(3);
    CHECK_NOTHROW(m.validate());
    m.kind = MeasureKind::MaximalObfuscation;
    CHECK_THROWS_AS(m.validate(), InvalidInput);
    m.desired.reset();
    CHECK_NOTHROW(m.validate());
}

TEST_CASE("default privacy value is negative infinity") {
    PrivacyValue v;
    CHECK(v.value == -kInf);
    CHECK(!v.finite());
    CHECK(PrivacyValue::neg_inf().value == -kInf);
    v.value = 0.25;
    CHECK(v.finite());
}

TEST_CASE("scores when the action pins down the acting belief") {
    // Identity market: an interior action is rationalized by exactly itself.
    const Scenario s = testbed::identity_scenario(3);
    const Belief pi{(VectorX<double>(3) << 0.5, 0.3, 0.2).finished()};
    const PolytopeFacts facts =
        make_polytope_facts(s, Action(pi.probs), /*need_singleton=*/true);
    REQUIRE(!facts.empty);
    REQUIRE(facts.singleton.has_value());
    REQUIRE(*facts.singleton);

    CHECK(evaluate(measure_of(MeasureKind::Infeasibility), facts, pi).value ==
          -kInf);
    // The adversary's unique candidate is the truth: no protection at all.
    CHECK(evaluate(measure_of(MeasureKind::NonUniqueness), facts, pi).value ==
          -kInf);
    CHECK(evaluate(measure_of(MeasureKind::NonExistence), facts, pi).value ==
          -kInf);
    const Belief decoy{(VectorX<double>(3) << 0.2, 0.3, 0.5).finished()};
    const double d = (pi.probs - decoy.probs).norm();
    CHECK(std::abs(evaluate(desired_measure(decoy), facts, pi).value + d) <
          1e-6);
    CHECK(std::abs(
              evaluate(measure_of(MeasureKind::MaximalObfuscation), facts, pi)
                  .value) < 1e-6);
}

TEST_CASE("scores when the unique candidate is the wrong belief") {
    const Scenario s = testbed::identity_scenario(3);
    const Belief pi_true{(VectorX<double>(3) << 0.5, 0.3, 0.2).finished()};
    const Belief played{(VectorX<double>(3) << 0.1, 0.6, 0.3).finished()};
    const PolytopeFacts facts =
        make_polytope_facts(s, Action(played.probs), /*need_singleton=*/true);
    REQUIRE(!facts.empty);

    // Unique but wrong: the adversary reconstructs with confidence and errs.
    CHECK(evaluate(measure_of(MeasureKind::NonUniqueness), facts, pi_true)
              .value == 0.0);
    CHECK(evaluate(measure_of(MeasureKind::NonExistence), facts, pi_true)
              .value == 0.0);
    const double d = (pi_true.probs - played.probs).norm();
    CHECK(std::abs(evaluate(measure_of(MeasureKind::MaximalObfuscation), facts,
                            pi_true)
                       .value -
                   d) < 1e-6);
    CHECK(std::abs(evaluate(desired_measure(played), facts, pi_true).value) <
          1e-6);
}

TEST_CASE("scores for a segment of rationalizing beliefs") {
    const Scenario s = testbed::duplicated_regime_scenario();
    const Action u((VectorX<double>(3) << 0.4, 0.0, 0.6).finished());
    const PolytopeFacts facts = make_polytope_facts(s, u, true);
    REQUIRE(!facts.empty);
    REQUIRE(!*facts.singleton);

    const Belief on_segment{(VectorX<double>(3) << 0.1, 0.3, 0.6).finished()};
    CHECK(evaluate(measure_of(MeasureKind::NonUniqueness), facts, on_segment)
              .value == 0.0);
    // Membership decides nonexistence even inside a fat set.
    CHECK(evaluate(measure_of(MeasureKind::NonExistence), facts, on_segment)
              .value == -kInf);
    const Belief off_segment{(VectorX<double>(3) << 0.6, 0.2, 0.2).finished()};
    CHECK(evaluate(measure_of(MeasureKind::NonExistence), facts, off_segment)
              .value == 0.0);
    CHECK(evaluate(measure_of(MeasureKind::MaximalObfuscation), facts,
                   off_segment)
              .value > 1e-3);
}

TEST_CASE("scores for an action nothing rationalizes") {
    const Scenario s = testbed::identity_scenario(3);
    const Action impossible((VectorX<double>(3) << 2.0, -1.0, 0.0).finished());
    const PolytopeFacts facts = make_polytope_facts(s, impossible, true);
    REQUIRE(facts.empty);
    const Belief pi = Belief::uniform(3);

    CHECK(evaluate(measure_of(MeasureKind::Infeasibility), facts, pi).value ==
          0.0);
    CHECK(evaluate(measure_of(MeasureKind::NonUniqueness), facts, pi).value ==
          -kInf);
    CHECK(evaluate(measure_of(MeasureKind::NonExistence), facts, pi).value ==
          0.0);
    CHECK(evaluate(desired_measure(pi), facts, pi).value == -kInf);
    CHECK(evaluate(measure_of(MeasureKind::MaximalObfuscation), facts, pi)
              .value == -kInf);
}

TEST_CASE("the empty-set policy only flips the maximal measure") {
    const Scenario s = testbed::identity_scenario(3);
    const Action impossible((VectorX<double>(3) << 2.0, -1.0, 0.0).finished());
    const PolytopeFacts facts = make_polytope_facts(s, impossible, true);
    REQUIRE(facts.empty);
    const Belief pi = Belief::uniform(3);

    CHECK(evaluate(measure_of(MeasureKind::MaximalObfuscation,
                              EmptySetPolicy::Best),
                   facts, pi)
              .value == kInf);
    for (const MeasureKind kind :
         {MeasureKind::Infeasibility, MeasureKind::NonUniqueness,
          MeasureKind::NonExistence}) {
        CHECK(evaluate(measure_of(kind, EmptySetPolicy::Best), facts, pi)
                  .value ==
              evaluate(measure_of(kind, EmptySetPolicy::Worst), facts, pi)
                  .value);
    }
    PrivacyMeasure best_desired = desired_measure(pi);
    best_desired.empty_set_policy = EmptySetPolicy::Best;
    CHECK(evaluate(best_desired, facts, pi).value == -kInf);

    // On a nonempty set the policy is inert for every measure.
    const PolytopeFacts interior =
        make_polytope_facts(s, Action(pi.probs), true);
    for (const MeasureKind kind :
         {MeasureKind::Infeasibility, MeasureKind::NonUniqueness,
          MeasureKind::NonExistence, MeasureKind::MaximalObfuscation})
        CHECK(evaluate(measure_of(kind, EmptySetPolicy::Best), interior, pi)
                  .value ==
              evaluate(measure_of(kind, EmptySetPolicy::Worst), interior, pi)
                  .value);
}

TEST_CASE("the convenience overload matches the two-step evaluation") {
    const Scenario s = testbed::duplicated_regime_scenario();
    RngStream rng(71);
    for (int trial = 0; trial < 5; ++trial) {
        const Belief pi = testbed::random_belief(rng, 3);
        const double a = 0.2 + 0.1 * trial;
        const Action u((VectorX<double>(3) << a, 0.0, 1.0 - a).finished());
        for (const MeasureKind kind :
             {MeasureKind::Infeasibility, MeasureKind::NonUniqueness,
              MeasureKind::NonExistence, MeasureKind::MaximalObfuscation}) {
            const PrivacyMeasure m = measure_of(kind);
            const PolytopeFacts facts = make_polytope_facts(
                s, u, kind == MeasureKind::NonUniqueness);
            CHECK(evaluate(m, s, u, pi).value == evaluate(m, facts, pi).value);
        }
    }
}

TEST_CASE("evaluation rejects malformed inputs") {
    const Scenario s = testbed::identity_scenario(3);
    const PolytopeFacts facts =
        make_polytope_facts(s, Action(Belief::uniform(3).probs));
    PrivacyMeasure missing = measure_of(MeasureKind::DesiredObfuscation);
    CHECK_THROWS_AS(evaluate(missing, facts, Belief::uniform(3)), InvalidInput);
}

}  // TEST_SUITE
