// Dense linear programming by the two-phase simplex method.
//
// Pricing is Dantzig (most negative reduced cost, lowest index on ties);
// after 100 degenerate pivots the solve switches to Bland's rule, which
// guarantees termination. All tie-breaking is by lowest index, so identical
// inputs produce bit-identical outputs.

#ifndef CADM_LINPROG_HPP
#define CADM_LINPROG_HPP

#include "cadm/types.hpp"

#include <limits>
#include <vector>

namespace cadm {

enum class SolveStatusKind { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* to_string(SolveStatusKind k) {
    switch (k) {
        case SolveStatusKind::Optimal: return "optimal";
        case SolveStatusKind::Infeasible: return "infeasible";
        case SolveStatusKind::Unbounded: return "unbounded";
        case SolveStatusKind::IterationLimit: return "iteration-limit";
    }
    return "unknown";
}

/**
 * minimize    objective . x
 * subject to  a_eq x = b_eq,  a_ineq x <= b_ineq,  x >= lower_bounds
 *
 * A lower bound of -infinity marks a free variable. Empty constraint
 * blocks are allowed.
 */
template <typename Scalar>
struct LinearProgramT {
    VectorX<Scalar> objective;
    MatrixX<Scalar> a_eq;
    VectorX<Scalar> b_eq;
    MatrixX<Scalar> a_ineq;
    VectorX<Scalar> b_ineq;
    VectorX<Scalar> lower_bounds;

    static constexpr Scalar unbounded_below() {
        return -std::numeric_limits<Scalar>::infinity();
    }

    Index num_vars() const { return objective.size(); }

    /// LP with `n` variables, no constraints, zero objective, bounds at 0.
    static LinearProgramT zeros(Index n) {
        LinearProgramT lp;
        lp.objective = VectorX<Scalar>::Zero(n);
        lp.a_eq.resize(0, n);
        lp.b_eq.resize(0);
        lp.a_ineq.resize(0, n);
        lp.b_ineq.resize(0);
        lp.lower_bounds = VectorX<Scalar>::Zero(n);
        return lp;
    }

    void validate() const {
        const Index n = num_vars();
        if (n < 1) throw InvalidInput("lp: no variables");
        if (a_eq.cols() != n && a_eq.rows() > 0)
            throw InvalidInput("lp: a_eq column count mismatch");
        if (a_ineq.cols() != n && a_ineq.rows() > 0)
            throw InvalidInput("lp: a_ineq column count mismatch");
        if (a_eq.rows() != b_eq.size()) throw InvalidInput("lp: b_eq length mismatch");
        if (a_ineq.rows() != b_ineq.size()) throw InvalidInput("lp: b_ineq length mismatch");
        if (lower_bounds.size() != n) throw InvalidInput("lp: lower_bounds length mismatch");
        if (!detail::all_finite(objective) || (a_eq.size() > 0 && !detail::all_finite(a_eq)) ||
            (a_ineq.size() > 0 && !detail::all_finite(a_ineq)) ||
            (b_eq.size() > 0 && !detail::all_finite(b_eq)) ||
            (b_ineq.size() > 0 && !detail::all_finite(b_ineq)))
            throw InvalidInput("lp: non-finite coefficient");
        for (Index j = 0; j < n; ++j)
            if (std::isnan(double(lower_bounds[j])) ||
                lower_bounds[j] == std::numeric_limits<Scalar>::infinity())
                throw InvalidInput("lp: invalid lower bound");
    }
};

template <typename Scalar>
struct SolveStatusT {
    SolveStatusKind kind = SolveStatusKind::IterationLimit;
    VectorX<Scalar> x;        // valid when Optimal
    Scalar objective = Scalar(0);
    // Row multipliers, filled in by the QP solver (see quadprog.hpp).
    VectorX<Scalar> dual_eq;
    VectorX<Scalar> dual_ineq;
    VectorX<Scalar> dual_bounds;
    long iterations = 0;
};

using LinearProgram = LinearProgramT<double>;
using SolveStatus = SolveStatusT<double>;

namespace detail {

inline constexpr long kMaxPivots = 10000;
inline constexpr long kDegeneratePivotsBeforeBland = 100;

/// Two-phase tableau simplex over the standard form A x = b, x >= 0.
template <typename Scalar>
class SimplexEngine {
public:
    // A maps original variables to standard ones: each original variable is
    // either shifted by its finite lower bound (one column) or split into a
    // positive and a negative part (two columns).
    explicit SimplexEngine(const LinearProgramT<Scalar>& lp) : lp_(lp) {
        const Index n = lp.num_vars();
        for (Index j = 0; j < n; ++j) {
            if (lp.lower_bounds[j] == LinearProgramT<Scalar>::unbounded_below()) {
                col_of_var_.push_back(int(num_cols_));
                split_.push_back(true);
                num_cols_ += 2;
            } else {
                col_of_var_.push_back(int(num_cols_));
                split_.push_back(false);
                num_cols_ += 1;
            }
        }
        const Index m_eq = lp.a_eq.rows();
        const Index m_in = lp.a_ineq.rows();
        num_rows_ = m_eq + m_in;
        slack_start_ = num_cols_;
        num_cols_ += m_in;

        a_ = MatrixX<Scalar>::Zero(num_rows_, num_cols_);
        b_ = VectorX<Scalar>::Zero(num_rows_);
        for (Index r = 0; r < num_rows_; ++r) {
            const bool ineq = r >= m_eq;
            const auto row = ineq ? lp.a_ineq.row(r - m_eq) : lp.a_eq.row(r);
            Scalar rhs = ineq ? lp.b_ineq[r - m_eq] : lp.b_eq[r];
            for (Index j = 0; j < n; ++j) {
                const Index c = col_of_var_[static_cast<std::size_t>(j)];
                if (split_[static_cast<std::size_t>(j)]) {
                    a_(r, c) = row[j];
                    a_(r, c + 1) = -row[j];
                } else {
                    a_(r, c) = row[j];
                    rhs -= row[j] * lp.lower_bounds[j];
                }
            }
            if (ineq) a_(r, slack_start_ + (r - m_eq)) = Scalar(1);
            b_[r] = rhs;
        }
        // Nonnegative right-hand sides so artificials start feasible.
        for (Index r = 0; r < num_rows_; ++r) {
            if (b_[r] < Scalar(0)) {
                a_.row(r) = -a_.row(r);
                b_[r] = -b_[r];
            }
        }
    }

    /// Runs phase 1; when `phase1_only` is false and the system is feasible,
    /// continues with phase 2 on the real objective.
    SolveStatusT<Scalar> solve(bool phase1_only) {
        SolveStatusT<Scalar> out;
        const Index m = num_rows_;
        const Index total = num_cols_ + m;  // + artificials

        tab_ = MatrixX<Scalar>::Zero(m + 1, total + 1);
        tab_.block(0, 0, m, num_cols_) = a_;
        tab_.block(0, num_cols_, m, m) = MatrixX<Scalar>::Identity(m, m);
        tab_.col(total).head(m) = b_;
        basis_.assign(static_cast<std::size_t>(m), 0);
        for (Index r = 0; r < m; ++r) basis_[static_cast<std::size_t>(r)] = int(num_cols_ + r);
        allowed_.assign(static_cast<std::size_t>(total), true);

        // Phase-1 objective row: reduced costs of min(sum of artificials).
        for (Index j = 0; j < num_cols_; ++j) tab_(m, j) = -tab_.col(j).head(m).sum();
        tab_(m, total) = -b_.sum();

        bland_ = false;
        degenerate_pivots_ = 0;
        if (!run_pivots(out)) return out;

        phase1_objective_ = -tab_(num_rows_, total);
        if (phase1_objective_ > Scalar(1e-9)) {
            out.kind = SolveStatusKind::Infeasible;
            out.objective = phase1_objective_;
            return out;
        }
        if (phase1_only) {
            out.kind = SolveStatusKind::Optimal;
            out.objective = phase1_objective_;
            return out;
        }

        remove_artificials();

        // Phase-2 objective row from the real costs over the current basis.
        VectorX<Scalar> cost = VectorX<Scalar>::Zero(num_cols_);
        for (Index j = 0; j < lp_.num_vars(); ++j) {
            const Index c = col_of_var_[static_cast<std::size_t>(j)];
            cost[c] = lp_.objective[j];
            if (split_[static_cast<std::size_t>(j)]) cost[c + 1] = -lp_.objective[j];
        }
        const Index m2 = num_rows_;
        const Index rhs_col = tab_.cols() - 1;
        tab_.row(m2).setZero();
        for (Index j = 0; j < num_cols_; ++j) {
            if (!allowed_[static_cast<std::size_t>(j)]) continue;
            Scalar rc = cost[j];
            for (Index r = 0; r < m2; ++r) {
                const int bv = basis_[static_cast<std::size_t>(r)];
                if (bv < int(num_cols_)) rc -= cost[bv] * tab_(r, j);
            }
            tab_(m2, j) = rc;
        }
        Scalar z = Scalar(0);
        for (Index r = 0; r < m2; ++r) {
            const int bv = basis_[static_cast<std::size_t>(r)];
            if (bv < int(num_cols_)) z += cost[bv] * tab_(r, rhs_col);
        }
        tab_(m2, rhs_col) = -z;

        if (!run_pivots(out)) return out;

        out.kind = SolveStatusKind::Optimal;
        out.x = extract_solution();
        out.objective = lp_.objective.dot(out.x);
        out.iterations = iterations_;
        return out;
    }

    Scalar phase1_objective() const { return phase1_objective_; }

private:
    bool run_pivots(SolveStatusT<Scalar>& out) {
        const Index m = num_rows_;
        const Index rhs_col = tab_.cols() - 1;
        const Scalar rc_tol = Scalar(1e-9);
        const Scalar piv_tol = Scalar(1e-9);

        while (true) {
            if (iterations_ >= kMaxPivots) {
                out.kind = SolveStatusKind::IterationLimit;
                out.iterations = iterations_;
                return false;
            }
            // Entering column.
            Index enter = -1;
            if (bland_) {
                for (Index j = 0; j + 1 < tab_.cols(); ++j)
                    if (allowed_[static_cast<std::size_t>(j)] && tab_(m, j) < -rc_tol) {
                        enter = j;
                        break;
                    }
            } else {
                Scalar best = -rc_tol;
                for (Index j = 0; j + 1 < tab_.cols(); ++j)
                    if (allowed_[static_cast<std::size_t>(j)] && tab_(m, j) < best) {
                        best = tab_(m, j);
                        enter = j;
                    }
            }
            if (enter < 0) return true;  // optimal for the current objective

            // Ratio test.
            Index leave = -1;
            Scalar best_ratio = std::numeric_limits<Scalar>::infinity();
            for (Index r = 0; r < m; ++r) {
                const Scalar a = tab_(r, enter);
                if (a > piv_tol) {
                    const Scalar ratio = tab_(r, rhs_col) / a;
                    if (ratio < best_ratio - Scalar(1e-12)) {
                        best_ratio = ratio;
                        leave = r;
                    } else if (ratio < best_ratio + Scalar(1e-12) && leave >= 0) {
                        // Tie: lowest basic-variable index under Bland,
                        // lowest row index otherwise.
                        if (bland_ && basis_[static_cast<std::size_t>(r)] <
                                          basis_[static_cast<std::size_t>(leave)])
                            leave = r;
                    }
                }
            }
            if (leave < 0) {
                out.kind = SolveStatusKind::Unbounded;
                out.iterations = iterations_;
                return false;
            }
            if (best_ratio < Scalar(1e-12)) {
                if (++degenerate_pivots_ >= kDegeneratePivotsBeforeBland) bland_ = true;
            }
            pivot(leave, enter);
            ++iterations_;
        }
    }

    void pivot(Index row, Index col) {
        const Scalar p = tab_(row, col);
        tab_.row(row) /= p;
        for (Index r = 0; r < tab_.rows(); ++r) {
            if (r == row) continue;
            const Scalar f = tab_(r, col);
            if (f != Scalar(0)) tab_.row(r) -= f * tab_.row(row);
        }
        basis_[static_cast<std::size_t>(row)] = int(col);
    }

    /// Pivot basic artificials out; a row that cannot be cleared is redundant
    /// and gets neutralized by keeping its artificial allowed but pinned.
    void remove_artificials() {
        const Index m = num_rows_;
        for (Index r = 0; r < m; ++r) {
            const int bv = basis_[static_cast<std::size_t>(r)];
            if (bv < int(num_cols_)) continue;
            Index enter = -1;
            for (Index j = 0; j < num_cols_; ++j) {
                if (std::abs(double(tab_(r, j))) > 1e-9) {
                    enter = j;
                    break;
                }
            }
            if (enter >= 0) pivot(r, enter);
        }
        for (Index j = num_cols_; j + 1 < tab_.cols(); ++j)
            allowed_[static_cast<std::size_t>(j)] = false;
    }

    VectorX<Scalar> extract_solution() const {
        const Index rhs_col = tab_.cols() - 1;
        VectorX<Scalar> std_x = VectorX<Scalar>::Zero(num_cols_);
        for (Index r = 0; r < num_rows_; ++r) {
            const int bv = basis_[static_cast<std::size_t>(r)];
            if (bv < int(num_cols_)) std_x[bv] = tab_(r, rhs_col);
        }
        VectorX<Scalar> x(lp_.num_vars());
        for (Index j = 0; j < lp_.num_vars(); ++j) {
            const Index c = col_of_var_[static_cast<std::size_t>(j)];
            if (split_[static_cast<std::size_t>(j)])
                x[j] = std_x[c] - std_x[c + 1];
            else
                x[j] = std_x[c] + lp_.lower_bounds[j];
        }
        return x;
    }

    const LinearProgramT<Scalar>& lp_;
    std::vector<Index> col_of_var_;
    std::vector<bool> split_;
    Index num_cols_ = 0;
    Index num_rows_ = 0;
    Index slack_start_ = 0;
    MatrixX<Scalar> a_;
    VectorX<Scalar> b_;
    MatrixX<Scalar> tab_;
    std::vector<int> basis_;
    std::vector<bool> allowed_;
    bool bland_ = false;
    long degenerate_pivots_ = 0;
    long iterations_ = 0;
    Scalar phase1_objective_ = Scalar(0);
};

}  // namespace detail

/// Basic optimal solution of `lp`, or the Infeasible / Unbounded /
/// IterationLimit verdict. IterationLimit is reported, never swallowed.
template <typename Scalar>
SolveStatusT<Scalar> solve_lp(const LinearProgramT<Scalar>& lp) {
    lp.validate();
    detail::SimplexEngine<Scalar> engine(lp);
    return engine.solve(/*phase1_only=*/false);
}

/// Phase-1 optimum of the feasibility system (0 when feasible).
/// Throws SolverError if the simplex hits its pivot limit.
template <typename Scalar>
Scalar phase1_infeasibility(const LinearProgramT<Scalar>& lp) {
    lp.validate();
    detail::SimplexEngine<Scalar> engine(lp);
    const SolveStatusT<Scalar> st = engine.solve(/*phase1_only=*/true);
    if (st.kind == SolveStatusKind::IterationLimit)
        throw SolverError("feasibility check hit the simplex pivot limit");
    return st.objective;
}

/// True iff the system a_eq x = b_eq, a_ineq x <= b_ineq, x >= lower_bounds
/// admits a point (phase-1 optimum <= 1e-9).
template <typename Scalar>
bool check_feasible(const MatrixX<Scalar>& a_eq, const VectorX<Scalar>& b_eq,
                    const MatrixX<Scalar>& a_ineq, const VectorX<Scalar>& b_ineq,
                    const VectorX<Scalar>& lower_bounds) {
    LinearProgramT<Scalar> lp;
    const Index n = lower_bounds.size();
    lp.objective = VectorX<Scalar>::Zero(n);
    lp.a_eq = a_eq;
    lp.b_eq = b_eq;
    lp.a_ineq = a_ineq;
    lp.b_ineq = b_ineq;
    lp.lower_bounds = lower_bounds;
    if (lp.a_eq.cols() == 0 && lp.a_eq.rows() == 0) lp.a_eq.resize(0, n);
    if (lp.a_ineq.cols() == 0 && lp.a_ineq.rows() == 0) lp.a_ineq.resize(0, n);
    return phase1_infeasibility(lp) <= Scalar(1e-9);
}

}  // namespace cadm

#endif  // CADM_LINPROG_HPP
