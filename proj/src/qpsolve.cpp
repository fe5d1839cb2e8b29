#include "sct/qpsolve.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace sct::qp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum VarState : int { kFree = 0, kAtLower = 1, kAtUpper = 2 };

struct CoreResult {
    Status status = Status::iteration_limit;
    int iterations = 0;
    Eigen::VectorXd mult_eq, mult_in, mult_lower, mult_upper;
    double stationarity = 0.0;  // |grad L|_inf over free variables
};

// Active-set iteration on a feasible starting point. Equality rows stay in
// the working set permanently; bound constraints are tracked as variable
// states, general inequalities as an active flag. Blocking constraints are
// scanned in a fixed order (inequality rows, then lower bounds, then upper
// bounds, each ascending), so equally violated candidates resolve to the
// lowest index and the whole run is deterministic.
CoreResult active_set_min(const Eigen::MatrixXd& Q, const Eigen::VectorXd& c,
                          const Eigen::MatrixXd& A_eq,
                          const Eigen::MatrixXd& A_in, const Eigen::VectorXd& b_in,
                          const Eigen::VectorXd& lo, const Eigen::VectorXd& up,
                          double kkt_tol, int max_iter, Eigen::VectorXd& z) {
    const Eigen::Index k = z.size();
    const Eigen::Index e = A_eq.rows();
    const Eigen::Index q = A_in.rows();

    std::vector<int> vstate(static_cast<std::size_t>(k), kFree);
    for (Eigen::Index j = 0; j < k; ++j) {
        const double snap = 1e-12 * (1.0 + std::abs(z[j]));
        if (lo[j] == up[j]) {
            vstate[j] = kAtLower;  // pinned variable, never dropped
            z[j] = lo[j];
        } else if (std::isfinite(lo[j]) && z[j] - lo[j] <= snap) {
            vstate[j] = kAtLower;
            z[j] = lo[j];
        } else if (std::isfinite(up[j]) && up[j] - z[j] <= snap) {
            vstate[j] = kAtUpper;
            z[j] = up[j];
        }
    }
    std::vector<char> row_active(static_cast<std::size_t>(q), 0);

    CoreResult res;
    res.mult_eq = Eigen::VectorXd::Zero(e);
    res.mult_in = Eigen::VectorXd::Zero(q);
    res.mult_lower = Eigen::VectorXd::Zero(k);
    res.mult_upper = Eigen::VectorXd::Zero(k);

    for (int iter = 0; iter < max_iter; ++iter) {
        res.iterations = iter + 1;

        std::vector<Eigen::Index> free_idx, act_rows;
        for (Eigen::Index j = 0; j < k; ++j)
            if (vstate[j] == kFree) free_idx.push_back(j);
        for (Eigen::Index i = 0; i < q; ++i)
            if (row_active[i]) act_rows.push_back(i);

        const Eigen::Index nf = static_cast<Eigen::Index>(free_idx.size());
        const Eigen::Index ng = e + static_cast<Eigen::Index>(act_rows.size());

        const Eigen::VectorXd g = Q * z + c;
        const double gscale = 1.0 + g.lpNorm<Eigen::Infinity>();

        // Equality-constrained subproblem on the free variables:
        //   [Q_FF  A_GF'] [d]      [-g_F]
        //   [A_GF    0  ] [lam]  = [  0 ]
        // Solved by a rank-revealing decomposition so a degenerate working
        // set still yields the minimum-norm step.
        Eigen::VectorXd d_f(nf), lam = Eigen::VectorXd::Zero(ng);
        if (nf > 0) {
            Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nf + ng, nf + ng);
            for (Eigen::Index a = 0; a < nf; ++a)
                for (Eigen::Index b = 0; b < nf; ++b)
                    M(a, b) = Q(free_idx[a], free_idx[b]);
            for (Eigen::Index r = 0; r < ng; ++r) {
                for (Eigen::Index a = 0; a < nf; ++a) {
                    const double v = r < e ? A_eq(r, free_idx[a])
                                           : A_in(act_rows[r - e], free_idx[a]);
                    M(nf + r, a) = v;
                    M(a, nf + r) = v;
                }
            }
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf + ng);
            for (Eigen::Index a = 0; a < nf; ++a) rhs[a] = -g[free_idx[a]];
            Eigen::VectorXd sol =
                Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(M).solve(rhs);
            d_f = sol.head(nf);
            lam = sol.tail(ng);
        }

        const double dnorm = nf > 0 ? d_f.lpNorm<Eigen::Infinity>() : 0.0;
        const double zscale = 1.0 + z.lpNorm<Eigen::Infinity>();

        if (dnorm <= 1e-11 * zscale) {
            // Stationary on the current working set: examine multipliers.
            Eigen::VectorXd r = g;
            for (Eigen::Index i = 0; i < e; ++i) r += lam[i] * A_eq.row(i).transpose();
            for (Eigen::Index a = e; a < ng; ++a)
                r += lam[a] * A_in.row(act_rows[a - e]).transpose();

            // Candidates in canonical order; most negative wins, first seen
            // wins ties. After long stalls fall back to first-negative
            // (Bland style) to rule out cycling.
            const bool bland = iter > max_iter / 2;
            const double drop_tol = kkt_tol * gscale;
            double worst = -drop_tol;
            int drop_kind = -1;  // 0 row, 1 lower, 2 upper
            Eigen::Index drop_idx = -1;
            auto consider = [&](double sigma, int kind, Eigen::Index idx) {
                if (sigma < worst) {
                    worst = sigma;
                    drop_kind = kind;
                    drop_idx = idx;
                    return true;
                }
                return false;
            };
            bool found_bland = false;
            for (Eigen::Index a = e; a < ng && !found_bland; ++a)
                if (consider(lam[a], 0, act_rows[a - e]) && bland) found_bland = true;
            for (Eigen::Index j = 0; j < k && !found_bland; ++j) {
                if (lo[j] == up[j]) continue;
                if (vstate[j] == kAtLower) {
                    if (consider(r[j], 1, j) && bland) found_bland = true;
                } else if (vstate[j] == kAtUpper) {
                    if (consider(-r[j], 2, j) && bland) found_bland = true;
                }
            }

            if (drop_kind < 0) {
                // Optimal. Record multipliers.
                res.mult_eq = lam.head(e);
                for (Eigen::Index a = e; a < ng; ++a)
                    res.mult_in[act_rows[a - e]] = lam[a];
                double stat = 0.0;
                for (Eigen::Index j = 0; j < k; ++j) {
                    if (vstate[j] == kAtLower)
                        res.mult_lower[j] = std::max(0.0, r[j]);
                    else if (vstate[j] == kAtUpper)
                        res.mult_upper[j] = std::max(0.0, -r[j]);
                    else
                        stat = std::max(stat, std::abs(r[j]));
                }
                res.stationarity = stat;
                res.status = Status::optimal;
                return res;
            }
            if (drop_kind == 0)
                row_active[drop_idx] = 0;
            else
                vstate[drop_idx] = kFree;
            continue;
        }

        // Ratio test along d (zero outside the free set).
        double alpha = 1.0;
        int block_kind = -1;  // 0 row, 1 lower, 2 upper
        Eigen::Index block_idx = -1;
        auto propose = [&](double step, int kind, Eigen::Index idx) {
            if (step < alpha) {
                alpha = step;
                block_kind = kind;
                block_idx = idx;
            }
        };
        const double dir_tol = 1e-13 * (1.0 + dnorm);
        for (Eigen::Index i = 0; i < q; ++i) {
            if (row_active[i]) continue;
            double ad = 0.0;
            for (Eigen::Index a = 0; a < nf; ++a) ad += A_in(i, free_idx[a]) * d_f[a];
            if (ad <= dir_tol) continue;
            const double slack = b_in[i] - A_in.row(i).dot(z);
            propose(std::max(0.0, slack) / ad, 0, i);
        }
        for (Eigen::Index a = 0; a < nf; ++a) {
            const Eigen::Index j = free_idx[a];
            if (d_f[a] < -dir_tol && std::isfinite(lo[j]))
                propose((lo[j] - z[j]) / d_f[a], 1, j);
            else if (d_f[a] > dir_tol && std::isfinite(up[j]))
                propose((up[j] - z[j]) / d_f[a], 2, j);
        }

        for (Eigen::Index a = 0; a < nf; ++a) z[free_idx[a]] += alpha * d_f[a];
        if (block_kind == 0) {
            row_active[block_idx] = 1;
        } else if (block_kind == 1) {
            vstate[block_idx] = kAtLower;
            z[block_idx] = lo[block_idx];
        } else if (block_kind == 2) {
            vstate[block_idx] = kAtUpper;
            z[block_idx] = up[block_idx];
        }
    }
    return res;  // iteration_limit, best iterate left in z
}

// Least-norm correction pinning the equality rows (and any violated
// inequality rows) exactly, applied after the elastic phase-1.
void polish_feasibility(const Problem& p, Eigen::VectorXd& z) {
    for (int pass = 0; pass < 3; ++pass) {
        for (Eigen::Index j = 0; j < p.size(); ++j)
            z[j] = std::min(std::max(z[j], p.lower[j]), p.upper[j]);
        std::vector<Eigen::Index> rows;  // inequality rows to pin
        for (Eigen::Index i = 0; i < p.A_in.rows(); ++i)
            if (p.A_in.row(i).dot(z) > p.b_in[i]) rows.push_back(i);
        const Eigen::Index e = p.A_eq.rows();
        const Eigen::Index nr = e + static_cast<Eigen::Index>(rows.size());
        if (nr == 0) return;
        Eigen::MatrixXd A(nr, p.size());
        Eigen::VectorXd resid(nr);
        for (Eigen::Index i = 0; i < e; ++i) {
            A.row(i) = p.A_eq.row(i);
            resid[i] = p.b_eq[i] - p.A_eq.row(i).dot(z);
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
            A.row(e + static_cast<Eigen::Index>(i)) = p.A_in.row(rows[i]);
            resid[e + static_cast<Eigen::Index>(i)] =
                p.b_in[rows[i]] - p.A_in.row(rows[i]).dot(z);
        }
        if (resid.lpNorm<Eigen::Infinity>() == 0.0) return;
        z += Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(A).solve(resid);
    }
}

// Elastic feasibility problem: minimize the squared elastic variables that
// absorb equality residuals and inequality excesses, with a tiny pull
// towards z0 to keep the problem strictly convex in z.
bool phase_one(const Problem& p, const Config& cfg, Eigen::VectorXd& z) {
    const Eigen::Index k = p.size();
    const Eigen::Index e = p.A_eq.rows();
    const Eigen::Index q = p.A_in.rows();
    const Eigen::Index ka = k + e + q;
    const double eps_z = 1e-10;

    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(ka, ka);
    Q.topLeftCorner(k, k) = eps_z * Eigen::MatrixXd::Identity(k, k);
    Q.bottomRightCorner(e + q, e + q) = Eigen::MatrixXd::Identity(e + q, e + q);

    Eigen::VectorXd c = Eigen::VectorXd::Zero(ka);
    c.head(k) = -eps_z * z;

    Eigen::MatrixXd A_eq = Eigen::MatrixXd::Zero(e, ka);
    A_eq.topLeftCorner(e, k) = p.A_eq;
    A_eq.block(0, k, e, e) = -Eigen::MatrixXd::Identity(e, e);

    Eigen::MatrixXd A_in = Eigen::MatrixXd::Zero(q, ka);
    A_in.topLeftCorner(q, k) = p.A_in;
    A_in.block(0, k + e, q, q) = -Eigen::MatrixXd::Identity(q, q);

    Eigen::VectorXd lo(ka), up(ka);
    lo.head(k) = p.lower;
    up.head(k) = p.upper;
    lo.segment(k, e).setConstant(-kInf);
    up.segment(k, e).setConstant(kInf);
    lo.tail(q).setZero();
    up.tail(q).setConstant(kInf);

    Eigen::VectorXd za(ka);
    za.head(k) = z;
    za.segment(k, e) = p.A_eq * z - p.b_eq;
    for (Eigen::Index i = 0; i < q; ++i)
        za[k + e + i] = std::max(0.0, p.A_in.row(i).dot(z) - p.b_in[i]);

    const int max_iter = 50 * static_cast<int>(ka);
    active_set_min(Q, c, A_eq, A_in, p.b_in, lo, up, cfg.kkt_tol, max_iter, za);

    z = za.head(k);
    polish_feasibility(p, z);
    return max_violation(p, z) <= cfg.feas_tol;
}

}  // namespace

void Problem::validate() const {
    const Eigen::Index k = size();
    if (Q.rows() != k || Q.cols() != k)
        throw std::invalid_argument("Q must be k x k");
    if ((Q - Q.transpose()).lpNorm<Eigen::Infinity>() > 1e-10)
        throw std::invalid_argument("Q must be symmetric within 1e-10");
    if (A_eq.rows() != b_eq.size() || (A_eq.rows() > 0 && A_eq.cols() != k))
        throw std::invalid_argument("equality block shape mismatch");
    if (A_in.rows() != b_in.size() || (A_in.rows() > 0 && A_in.cols() != k))
        throw std::invalid_argument("inequality block shape mismatch");
    if (lower.size() != k || upper.size() != k)
        throw std::invalid_argument("bound vectors must have length k");
    for (Eigen::Index j = 0; j < k; ++j)
        if (lower[j] > upper[j])
            throw std::invalid_argument("lower bound exceeds upper bound");
}

double max_violation(const Problem& p, const Eigen::VectorXd& z) {
    double v = 0.0;
    if (p.A_eq.rows() > 0)
        v = (p.A_eq * z - p.b_eq).lpNorm<Eigen::Infinity>();
    for (Eigen::Index i = 0; i < p.A_in.rows(); ++i)
        v = std::max(v, p.A_in.row(i).dot(z) - p.b_in[i]);
    for (Eigen::Index j = 0; j < p.size(); ++j) {
        v = std::max(v, p.lower[j] - z[j]);
        v = std::max(v, z[j] - p.upper[j]);
    }
    return v;
}

Solution solve_qp(const Problem& p, const Config& cfg) {
    p.validate();
    const Eigen::Index k = p.size();

    Solution out;
    out.mult_eq = Eigen::VectorXd::Zero(p.A_eq.rows());
    out.mult_in = Eigen::VectorXd::Zero(p.A_in.rows());
    out.mult_lower = Eigen::VectorXd::Zero(k);
    out.mult_upper = Eigen::VectorXd::Zero(k);

    // Strictly convex regularization when Q looks singular.
    Eigen::MatrixXd Qr = 0.5 * (p.Q + p.Q.transpose());
    const double min_eig =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Qr, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff();
    if (min_eig < 1e-12) {
        Qr += 1e-10 * Eigen::MatrixXd::Identity(k, k);
        out.regularized = true;
    }

    // Feasible start: caller hint, clamped origin, then phase-1.
    Eigen::VectorXd z(k);
    bool have_start = false;
    if (cfg.start && cfg.start->size() == k &&
        max_violation(p, *cfg.start) <= 1e-12) {
        z = *cfg.start;
        have_start = true;
    }
    if (!have_start) {
        for (Eigen::Index j = 0; j < k; ++j)
            z[j] = std::min(std::max(0.0, p.lower[j]), p.upper[j]);
        have_start = max_violation(p, z) <= 1e-12;
    }
    if (!have_start && !phase_one(p, cfg, z)) {
        out.status = Status::infeasible;
        out.z = z;
        out.objective = 0.5 * z.dot(p.Q * z) + p.c.dot(z);
        return out;
    }

    const int max_iter = cfg.max_iter > 0 ? cfg.max_iter : 50 * static_cast<int>(k);
    CoreResult core = active_set_min(Qr, p.c, p.A_eq, p.A_in, p.b_in, p.lower,
                                     p.upper, cfg.kkt_tol, max_iter, z);

    out.z = z;
    out.objective = 0.5 * z.dot(p.Q * z) + p.c.dot(z);
    out.iterations = core.iterations;
    out.mult_eq = core.mult_eq;
    out.mult_in = core.mult_in;
    out.mult_lower = core.mult_lower;
    out.mult_upper = core.mult_upper;

    const double gscale = 1.0 + (Qr * z + p.c).lpNorm<Eigen::Infinity>();
    double comp = 0.0;
    for (Eigen::Index i = 0; i < p.A_in.rows(); ++i)
        comp = std::max(comp, std::abs(core.mult_in[i] *
                                       (p.A_in.row(i).dot(z) - p.b_in[i])));
    for (Eigen::Index j = 0; j < k; ++j) {
        if (std::isfinite(p.lower[j]))
            comp = std::max(comp, std::abs(core.mult_lower[j] * (z[j] - p.lower[j])));
        if (std::isfinite(p.upper[j]))
            comp = std::max(comp, std::abs(core.mult_upper[j] * (z[j] - p.upper[j])));
    }
    out.kkt_residual = std::max(core.stationarity, comp) / gscale;

    const double feas = max_violation(p, z);
    if (core.status == Status::optimal && feas <= cfg.feas_tol &&
        out.kkt_residual <= cfg.kkt_tol)
        out.status = Status::optimal;
    else if (core.status == Status::optimal)
        out.status = Status::iteration_limit;  // converged outside tolerances
    else
        out.status = core.status;
    return out;
}

}  // namespace sct::qp
