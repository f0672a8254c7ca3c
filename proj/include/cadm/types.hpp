// Core domain types for regime-switching Markowitz decision problems.

#ifndef CADM_TYPES_HPP
#define CADM_TYPES_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cadm {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

/// Thrown when an input violates a documented invariant.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical engine fails to produce a usable answer.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    return m.allFinite();
}

}  // namespace detail

/**
 * Probability vector over the hidden market regimes: the agent's private
 * posterior. Entries are nonnegative and sum to one within 1e-12.
 */
template <typename Scalar>
struct BeliefT {
    VectorX<Scalar> probs;

    BeliefT() = default;
    explicit BeliefT(VectorX<Scalar> p) : probs(std::move(p)) { validate(); }

    Index size() const { return probs.size(); }

    void validate() const {
        if (probs.size() < 1) throw InvalidInput("belief: empty probability vector");
        if (!detail::all_finite(probs)) throw InvalidInput("belief: non-finite entry");
        if ((probs.array() < Scalar(0)).any())
            throw InvalidInput("belief: negative probability");
        using std::abs;
        if (abs(probs.sum() - Scalar(1)) > Scalar(1e-12))
            throw InvalidInput("belief: probabilities sum to " + std::to_string(double(probs.sum())) +
                               ", expected 1 within 1e-12");
    }

    /// Uniform distribution over `n` regimes.
    static BeliefT uniform(Index n) {
        return BeliefT(VectorX<Scalar>::Constant(n, Scalar(1) / Scalar(n)));
    }

    /// Point mass on regime `i` (0-based).
    static BeliefT vertex(Index n, Index i) {
        VectorX<Scalar> p = VectorX<Scalar>::Zero(n);
        p[i] = Scalar(1);
        return BeliefT(std::move(p));
    }
};

/**
 * Portfolio allocation vector: fraction of capital per asset. Construction
 * only requires finite entries; feasibility against a ConstraintSet is
 * checked by the operations that need it.
 */
template <typename Scalar>
struct ActionT {
    VectorX<Scalar> alloc;

    ActionT() = default;
    explicit ActionT(VectorX<Scalar> a) : alloc(std::move(a)) {
        if (alloc.size() < 1) throw InvalidInput("action: empty allocation vector");
        if (!detail::all_finite(alloc)) throw InvalidInput("action: non-finite entry");
    }

    Index size() const { return alloc.size(); }
};

/**
 * One market regime: expected per-asset return and return covariance.
 * The covariance must be symmetric (1e-10) and positive semidefinite
 * (eigenvalue floor -1e-10, absorbing round-off in generated Gram matrices).
 */
template <typename Scalar>
struct RegimeT {
    VectorX<Scalar> mean;
    MatrixX<Scalar> cov;

    RegimeT() = default;
    RegimeT(VectorX<Scalar> mu, MatrixX<Scalar> sigma)
        : mean(std::move(mu)), cov(std::move(sigma)) {
        validate();
    }

    void validate() const {
        const Index u = mean.size();
        if (u < 1) throw InvalidInput("regime: empty mean vector");
        if (cov.rows() != u || cov.cols() != u)
            throw InvalidInput("regime: covariance must be " + std::to_string(u) + "x" +
                               std::to_string(u));
        if (!detail::all_finite(mean) || !detail::all_finite(cov))
            throw InvalidInput("regime: non-finite entry");
        if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-10))
            throw InvalidInput("regime: covariance not symmetric within 1e-10");
        Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(cov, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < Scalar(-1e-10))
            throw InvalidInput("regime: covariance has eigenvalue " +
                               std::to_string(double(es.eigenvalues().minCoeff())) +
                               " below -1e-10");
    }
};

/**
 * Feasible action set: equality system a_eq * u = b_eq plus an optional
 * elementwise nonnegativity constraint u >= 0. Rows of a_eq must be
 * linearly independent.
 */
template <typename Scalar>
struct ConstraintSetT {
    MatrixX<Scalar> a_eq;   // E x U
    VectorX<Scalar> b_eq;   // E
    bool nonneg = true;

    ConstraintSetT() = default;
    ConstraintSetT(MatrixX<Scalar> a, VectorX<Scalar> b, bool nn)
        : a_eq(std::move(a)), b_eq(std::move(b)), nonneg(nn) {
        validate();
    }

    Index num_equalities() const { return a_eq.rows(); }

    void validate() const {
        if (a_eq.rows() != b_eq.size())
            throw InvalidInput("constraints: a_eq rows must match b_eq length");
        if (a_eq.rows() < 1 || a_eq.cols() < 1)
            throw InvalidInput("constraints: empty equality system");
        if (!detail::all_finite(a_eq) || !detail::all_finite(b_eq))
            throw InvalidInput("constraints: non-finite entry");
        Eigen::FullPivLU<MatrixX<Scalar>> lu(a_eq);
        if (lu.rank() < a_eq.rows())
            throw InvalidInput("constraints: a_eq rows are linearly dependent (rank " +
                               std::to_string(long(lu.rank())) + " < " +
                               std::to_string(long(a_eq.rows())) + ")");
    }

    /// Full-investment budget for `u` assets: 1^T u = 1, u >= 0.
    static ConstraintSetT budget_simplex(Index u) {
        return ConstraintSetT(MatrixX<Scalar>::Ones(1, u), VectorX<Scalar>::Ones(1), true);
    }

    /// Residual infinity-norm of the equality system at `u`.
    Scalar equality_residual(const VectorX<Scalar>& u) const {
        return (a_eq * u - b_eq).cwiseAbs().maxCoeff();
    }

    /// Membership test at absolute tolerance `tol`.
    bool contains(const VectorX<Scalar>& u, Scalar tol = Scalar(1e-9)) const {
        if (u.size() != a_eq.cols()) return false;
        if (equality_residual(u) > tol) return false;
        if (nonneg && (u.array() < -tol).any()) return false;
        return true;
    }
};

/**
 * A complete decision problem: the regime set, the risk-aversion weight of
 * the Markowitz cost, the feasible action set, and the hidden-regime world
 * model (Markov transition matrix plus categorical observation likelihoods).
 */
template <typename Scalar>
struct ScenarioT {
    std::vector<RegimeT<Scalar>> regimes;   // length X
    Scalar gamma = Scalar(1);               // risk aversion, > 0 (or 0 for the pure linear cost)
    ConstraintSetT<Scalar> constraints;
    MatrixX<Scalar> transition;             // X x X, row-stochastic
    MatrixX<Scalar> obs_likelihood;         // X x Y, rows sum to 1
    std::uint64_t rng_seed = 0;

    Index num_regimes() const { return static_cast<Index>(regimes.size()); }
    Index num_assets() const { return regimes.empty() ? 0 : regimes.front().mean.size(); }
    Index num_observations() const { return obs_likelihood.cols(); }

    void validate() const {
        const Index x = num_regimes();
        if (x < 1) throw InvalidInput("scenario: need at least one regime");
        const Index u = regimes.front().mean.size();
        for (const auto& r : regimes) {
            r.validate();
            if (r.mean.size() != u)
                throw InvalidInput("scenario: regimes disagree on asset count");
        }
        if (u < 1) throw InvalidInput("scenario: need at least one asset");
        if (!(gamma >= Scalar(0)) || !std::isfinite(double(gamma)))
            throw InvalidInput("scenario: gamma must be finite and >= 0");
        constraints.validate();
        if (constraints.a_eq.cols() != u)
            throw InvalidInput("scenario: constraint system has wrong asset count");
        check_stochastic(transition, x, x, "transition");
        if (obs_likelihood.rows() != x || obs_likelihood.cols() < 1)
            throw InvalidInput("scenario: obs_likelihood must have one row per regime");
        check_stochastic(obs_likelihood, x, obs_likelihood.cols(), "obs_likelihood");
    }

private:
    static void check_stochastic(const MatrixX<Scalar>& m, Index rows, Index cols,
                                 const char* name) {
        using std::abs;
        if (m.rows() != rows || m.cols() != cols)
            throw InvalidInput(std::string("scenario: ") + name + " has wrong shape");
        if (!detail::all_finite(m))
            throw InvalidInput(std::string("scenario: ") + name + " has non-finite entry");
        if ((m.array() < Scalar(0)).any())
            throw InvalidInput(std::string("scenario: ") + name + " has negative entry");
        for (Index i = 0; i < m.rows(); ++i)
            if (abs(m.row(i).sum() - Scalar(1)) > Scalar(1e-12))
                throw InvalidInput(std::string("scenario: ") + name + " row " +
                                   std::to_string(long(i)) + " does not sum to 1 within 1e-12");
    }
};

using Belief = BeliefT<double>;
using Action = ActionT<double>;
using Regime = RegimeT<double>;
using ConstraintSet = ConstraintSetT<double>;
using Scenario = ScenarioT<double>;

}  // namespace cadm

#endif  // CADM_TYPES_HPP
