// Dense convex quadratic programming via operator-splitting ADMM,
// in the style of OSQP (Stellato et al.), sized for small problems.
//
// Constraints are kept as rows l <= Ax <= u internally; equality rows get a
// larger penalty parameter. After convergence an active-set polish solves the
// reduced KKT system with an LU factorization so that active bounds come out
// as crisp zeros. Feasibility is decided up front by a simplex phase-1 check
// (see linprog.hpp) rather than by divergence certificates, which keeps the
// infeasible verdict deterministic.
//
// The solver assumes P is positive semidefinite; it does not attempt to
// detect unbounded objectives (none of the in-tree problems are unbounded,
// and pathological inputs surface as an iteration-limit status).

#ifndef CADM_QUADPROG_HPP
#define CADM_QUADPROG_HPP

#include "cadm/linprog.hpp"
#include "cadm/types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace cadm {

/**
 * minimize    0.5 x' P x + q . x
 * subject to  a_eq x = b_eq,  a_ineq x <= b_ineq,  x >= lower_bounds
 *
 * P must be symmetric positive semidefinite; a lower bound of -infinity
 * marks a free variable.
 */
template <typename Scalar>
struct QuadraticProgramT {
    MatrixX<Scalar> p;
    VectorX<Scalar> q;
    MatrixX<Scalar> a_eq;
    VectorX<Scalar> b_eq;
    MatrixX<Scalar> a_ineq;
    VectorX<Scalar> b_ineq;
    VectorX<Scalar> lower_bounds;

    static constexpr Scalar unbounded_below() {
        return -std::numeric_limits<Scalar>::infinity();
    }

    Index num_vars() const { return q.size(); }

    static QuadraticProgramT zeros(Index n) {
        QuadraticProgramT qp;
        qp.p = MatrixX<Scalar>::Zero(n, n);
        qp.q = VectorX<Scalar>::Zero(n);
        qp.a_eq.resize(0, n);
        qp.b_eq.resize(0);
        qp.a_ineq.resize(0, n);
        qp.b_ineq.resize(0);
        qp.lower_bounds = VectorX<Scalar>::Zero(n);
        return qp;
    }

    void validate() const {
        const Index n = num_vars();
        if (n < 1) throw InvalidInput("qp: no variables");
        if (p.rows() != n || p.cols() != n) throw InvalidInput("qp: P must be n x n");
        if (!p.isApprox(p.transpose(), Scalar(1e-10)) &&
            (p - p.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-10))
            throw InvalidInput("qp: P must be symmetric");
        if (a_eq.rows() > 0 && a_eq.cols() != n)
            throw InvalidInput("qp: a_eq column count mismatch");
        if (a_ineq.rows() > 0 && a_ineq.cols() != n)
            throw InvalidInput("qp: a_ineq column count mismatch");
        if (a_eq.rows() != b_eq.size()) throw InvalidInput("qp: b_eq length mismatch");
        if (a_ineq.rows() != b_ineq.size()) throw InvalidInput("qp: b_ineq length mismatch");
        if (lower_bounds.size() != n) throw InvalidInput("qp: lower_bounds length mismatch");
        if (!detail::all_finite(p) || !detail::all_finite(q) ||
            (a_eq.size() > 0 && !detail::all_finite(a_eq)) ||
            (a_ineq.size() > 0 && !detail::all_finite(a_ineq)) ||
            (b_eq.size() > 0 && !detail::all_finite(b_eq)) ||
            (b_ineq.size() > 0 && !detail::all_finite(b_ineq)))
            throw InvalidInput("qp: non-finite coefficient");
        for (Index j = 0; j < n; ++j)
            if (std::isnan(double(lower_bounds[j])) ||
                lower_bounds[j] == std::numeric_limits<Scalar>::infinity())
                throw InvalidInput("qp: invalid lower bound");
    }
};

using QuadraticProgram = QuadraticProgramT<double>;

namespace detail {

inline constexpr long kQpMaxIterations = 50000;

template <typename Scalar>
struct QpRows {
    MatrixX<Scalar> a;  // stacked eq rows, ineq rows, bound rows
    VectorX<Scalar> lo;
    VectorX<Scalar> hi;
    Index m_eq = 0;
    Index m_ineq = 0;
    std::vector<Index> bound_vars;  // variable index per bound row
};

template <typename Scalar>
QpRows<Scalar> stack_rows(const QuadraticProgramT<Scalar>& qp) {
    const Index n = qp.num_vars();
    const Scalar inf = std::numeric_limits<Scalar>::infinity();
    QpRows<Scalar> rows;
    rows.m_eq = qp.a_eq.rows();
    rows.m_ineq = qp.a_ineq.rows();
    for (Index j = 0; j < n; ++j)
        if (qp.lower_bounds[j] != QuadraticProgramT<Scalar>::unbounded_below())
            rows.bound_vars.push_back(j);
    const Index m = rows.m_eq + rows.m_ineq + Index(rows.bound_vars.size());
    rows.a = MatrixX<Scalar>::Zero(m, n);
    rows.lo = VectorX<Scalar>::Constant(m, -inf);
    rows.hi = VectorX<Scalar>::Constant(m, inf);
    if (rows.m_eq > 0) {
        rows.a.topRows(rows.m_eq) = qp.a_eq;
        rows.lo.head(rows.m_eq) = qp.b_eq;
        rows.hi.head(rows.m_eq) = qp.b_eq;
    }
    if (rows.m_ineq > 0) {
        rows.a.middleRows(rows.m_eq, rows.m_ineq) = qp.a_ineq;
        rows.hi.segment(rows.m_eq, rows.m_ineq) = qp.b_ineq;
    }
    for (std::size_t k = 0; k < rows.bound_vars.size(); ++k) {
        const Index r = rows.m_eq + rows.m_ineq + Index(k);
        rows.a(r, rows.bound_vars[k]) = Scalar(1);
        rows.lo[r] = qp.lower_bounds[rows.bound_vars[k]];
    }
    return rows;
}

/// Tries to improve an ADMM iterate by solving the KKT system restricted to
/// the rows considered active. Returns true and overwrites (x, y) only when
/// the polished point is feasible and has no worse a KKT residual.
template <typename Scalar>
bool polish(const QuadraticProgramT<Scalar>& qp, const QpRows<Scalar>& rows,
            VectorX<Scalar>& x, VectorX<Scalar>& y) {
    const Index n = qp.num_vars();
    const Index m = rows.a.rows();
    const Scalar act_tol = Scalar(1e-7);
    const Scalar dual_tol = Scalar(1e-9);
    const Scalar delta = Scalar(1e-9);

    std::vector<Index> active;
    std::vector<Scalar> rhs;
    const VectorX<Scalar> ax = rows.a * x;
    for (Index r = 0; r < m; ++r) {
        const bool is_eq = rows.lo[r] == rows.hi[r];
        const bool lower = rows.lo[r] != -std::numeric_limits<Scalar>::infinity() &&
                           (ax[r] - rows.lo[r] <= act_tol || y[r] < -dual_tol);
        const bool upper = rows.hi[r] != std::numeric_limits<Scalar>::infinity() &&
                           (rows.hi[r] - ax[r] <= act_tol || y[r] > dual_tol);
        if (is_eq || lower || upper) {
            active.push_back(r);
            rhs.push_back(is_eq || upper ? rows.hi[r] : rows.lo[r]);
        }
    }
    const Index ma = Index(active.size());

    MatrixX<Scalar> kkt = MatrixX<Scalar>::Zero(n + ma, n + ma);
    kkt.topLeftCorner(n, n) = qp.p + delta * MatrixX<Scalar>::Identity(n, n);
    for (Index k = 0; k < ma; ++k) {
        kkt.block(n + k, 0, 1, n) = rows.a.row(active[static_cast<std::size_t>(k)]);
        kkt.block(0, n + k, n, 1) =
            rows.a.row(active[static_cast<std::size_t>(k)]).transpose();
        kkt(n + k, n + k) = -delta;
    }
    VectorX<Scalar> full_rhs(n + ma);
    full_rhs.head(n) = -qp.q;
    for (Index k = 0; k < ma; ++k) full_rhs[n + k] = rhs[static_cast<std::size_t>(k)];

    Eigen::PartialPivLU<MatrixX<Scalar>> lu(kkt);
    VectorX<Scalar> sol = lu.solve(full_rhs);
    // One step of iterative refinement against the unregularized system.
    MatrixX<Scalar> kkt0 = kkt;
    kkt0.topLeftCorner(n, n) -= delta * MatrixX<Scalar>::Identity(n, n);
    for (Index k = 0; k < ma; ++k) kkt0(n + k, n + k) = Scalar(0);
    sol += lu.solve(full_rhs - kkt0 * sol);

    VectorX<Scalar> x_new = sol.head(n);
    VectorX<Scalar> y_new = VectorX<Scalar>::Zero(m);
    for (Index k = 0; k < ma; ++k) y_new[active[static_cast<std::size_t>(k)]] = sol[n + k];

    const auto kkt_residual = [&](const VectorX<Scalar>& xv, const VectorX<Scalar>& yv) {
        const VectorX<Scalar> stat = qp.p * xv + qp.q + rows.a.transpose() * yv;
        Scalar prim = Scalar(0);
        const VectorX<Scalar> axv = rows.a * xv;
        for (Index r = 0; r < m; ++r) {
            if (rows.lo[r] != -std::numeric_limits<Scalar>::infinity())
                prim = std::max(prim, rows.lo[r] - axv[r]);
            if (rows.hi[r] != std::numeric_limits<Scalar>::infinity())
                prim = std::max(prim, axv[r] - rows.hi[r]);
        }
        return std::max(stat.template lpNorm<Eigen::Infinity>(), prim);
    };

    if (!all_finite(x_new) || !all_finite(y_new)) return false;
    if (kkt_residual(x_new, y_new) > kkt_residual(x, y) + Scalar(1e-12)) return false;
    x = x_new;
    y = y_new;
    return true;
}

}  // namespace detail

/**
 * Solves the QP by ADMM with over-relaxation (alpha = 1.6) and a
 * deterministically adapted step size, then polishes the active set.
 *
 * Terminates when the primal residual drops below 1e-8 and the dual
 * residual below 1e-6 (infinity norms). Multipliers are reported so that
 *     P x + q + a_eq' dual_eq + a_ineq' dual_ineq + dual_bounds = 0
 * with dual_ineq >= 0 and dual_bounds <= 0 (nonzero only where the
 * corresponding lower bound is active).
 */
template <typename Scalar>
SolveStatusT<Scalar> solve_qp(const QuadraticProgramT<Scalar>& qp) {
    qp.validate();
    const Index n = qp.num_vars();
    SolveStatusT<Scalar> out;

    if (!check_feasible(qp.a_eq, qp.b_eq, qp.a_ineq, qp.b_ineq, qp.lower_bounds)) {
        out.kind = SolveStatusKind::Infeasible;
        return out;
    }

    const detail::QpRows<Scalar> rows = detail::stack_rows(qp);
    const Index m = rows.a.rows();
    const Scalar sigma = Scalar(1e-6);
    const Scalar alpha = Scalar(1.6);
    const Scalar prim_tol = Scalar(1e-8);
    const Scalar dual_tol = Scalar(1e-6);

    VectorX<Scalar> x = VectorX<Scalar>::Zero(n);
    VectorX<Scalar> z = VectorX<Scalar>::Zero(m);
    VectorX<Scalar> y = VectorX<Scalar>::Zero(m);
    for (Index r = 0; r < m; ++r)
        z[r] = std::min(std::max(Scalar(0), rows.lo[r]), rows.hi[r]);

    Scalar rho_base = Scalar(0.1);
    VectorX<Scalar> rho(m), rho_inv(m);
    const auto set_rho = [&](Scalar base) {
        for (Index r = 0; r < m; ++r) {
            const Scalar rr = rows.lo[r] == rows.hi[r] ? base * Scalar(1e3) : base;
            rho[r] = rr;
            rho_inv[r] = Scalar(1) / rr;
        }
    };
    set_rho(rho_base);

    MatrixX<Scalar> kkt(n + m, n + m);
    Eigen::PartialPivLU<MatrixX<Scalar>> lu;
    const auto factor = [&]() {
        kkt.topLeftCorner(n, n) =
            qp.p + sigma * MatrixX<Scalar>::Identity(n, n);
        kkt.topRightCorner(n, m) = rows.a.transpose();
        kkt.bottomLeftCorner(m, n) = rows.a;
        kkt.bottomRightCorner(m, m) = (-rho_inv).asDiagonal();
        lu.compute(kkt);
    };
    factor();

    long iter = 0;
    bool converged = false;
    VectorX<Scalar> rhs(n + m), xz_tilde(n + m);
    for (; iter < detail::kQpMaxIterations; ++iter) {
        rhs.head(n) = sigma * x - qp.q;
        rhs.tail(m) = z - rho_inv.cwiseProduct(y);
        xz_tilde = lu.solve(rhs);
        const auto x_tilde = xz_tilde.head(n);
        const VectorX<Scalar> z_tilde =
            z + rho_inv.cwiseProduct(xz_tilde.tail(m) - y);

        x = alpha * x_tilde + (Scalar(1) - alpha) * x;
        const VectorX<Scalar> z_pre =
            alpha * z_tilde + (Scalar(1) - alpha) * z;
        VectorX<Scalar> z_new = z_pre + rho_inv.cwiseProduct(y);
        for (Index r = 0; r < m; ++r)
            z_new[r] = std::min(std::max(z_new[r], rows.lo[r]), rows.hi[r]);
        y += rho.cwiseProduct(z_pre - z_new);
        z = z_new;

        const Scalar r_prim =
            m > 0 ? (rows.a * x - z).template lpNorm<Eigen::Infinity>() : Scalar(0);
        const Scalar r_dual = (qp.p * x + qp.q + rows.a.transpose() * y)
                                  .template lpNorm<Eigen::Infinity>();
        if (r_prim <= prim_tol && r_dual <= dual_tol) {
            converged = true;
            break;
        }
        if ((iter + 1) % 100 == 0) {
            const Scalar ratio =
                std::sqrt((r_prim + Scalar(1e-16)) / (r_dual + Scalar(1e-16)));
            if (ratio > Scalar(5) || ratio < Scalar(0.2)) {
                rho_base = std::min(Scalar(1e6),
                                    std::max(Scalar(1e-6), rho_base * ratio));
                set_rho(rho_base);
                factor();
            }
        }
    }

    if (!converged) {
        out.kind = SolveStatusKind::IterationLimit;
        out.iterations = iter;
        return out;
    }

    detail::polish(qp, rows, x, y);

    out.kind = SolveStatusKind::Optimal;
    out.x = x;
    out.objective = Scalar(0.5) * x.dot(qp.p * x) + qp.q.dot(x);
    out.iterations = iter + 1;
    out.dual_eq = y.head(rows.m_eq);
    out.dual_ineq = y.segment(rows.m_eq, rows.m_ineq).cwiseMax(Scalar(0));
    out.dual_bounds = VectorX<Scalar>::Zero(n);
    for (std::size_t k = 0; k < rows.bound_vars.size(); ++k) {
        const Scalar yr = y[rows.m_eq + rows.m_ineq + Index(k)];
        out.dual_bounds[rows.bound_vars[k]] = std::min(yr, Scalar(0));
    }
    return out;
}

}  // namespace cadm

#endif  // CADM_QUADPROG_HPP
