#include "sct/linsvm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sct/kernels.hpp"

namespace sct::linsvm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void SvmConfig::validate() const {
    if (!(C > 0.0)) throw std::invalid_argument("C must be positive");
    const double tol = effective_sv_tol();
    if (!(tol > 0.0 && tol < C / 2.0))
        throw std::invalid_argument("sv_tol must satisfy 0 < sv_tol < C/2");
}

TrainReport train_soft_margin_report(const BinaryView& v, const SvmConfig& cfg,
                                     const qp::Config& qp_cfg) {
    cfg.validate();
    const Eigen::Index n = static_cast<Eigen::Index>(v.n);
    const Eigen::Index m = static_cast<Eigen::Index>(v.m);
    if (n < 2) throw std::invalid_argument("need at least 2 training samples");
    bool has_pos = false, has_neg = false;
    for (int yi : v.y) (yi > 0 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg)
        throw ClassMissingError("training view must contain both labels");

    qp::Problem p;
    p.Q.resize(n, n);
    kernels::gram_matrix_omp(v.features.data(), v.y.data(), v.n, v.m, p.Q.data());
    p.c = Eigen::VectorXd::Constant(n, -1.0);
    p.A_eq.resize(1, n);
    for (Eigen::Index i = 0; i < n; ++i) p.A_eq(0, i) = v.y[i];
    p.b_eq = Eigen::VectorXd::Zero(1);
    p.A_in.resize(0, n);
    p.b_in.resize(0);
    p.lower = Eigen::VectorXd::Zero(n);
    p.upper = Eigen::VectorXd::Constant(n, cfg.C);

    qp::Solution sol = qp::solve_qp(p, qp_cfg);
    if (sol.status != qp::Status::optimal)
        throw SolverError("soft-margin dual did not converge");

    TrainReport rep;
    rep.alphas.assign(sol.z.data(), sol.z.data() + n);

    ClassifierParams c;
    c.w.assign(v.m, 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double ay = sol.z[i] * v.y[i];
        if (ay == 0.0) continue;
        auto xi = v.row(i);
        for (std::size_t j = 0; j < v.m; ++j) c.w[j] += ay * xi[j];
    }

    // Bias from free support vectors; otherwise the midpoint of the interval
    // the KKT bound constraints leave for b.
    const double tol = cfg.effective_sv_tol();
    double bsum = 0.0;
    int nfree = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (sol.z[i] > tol && sol.z[i] < cfg.C - tol) {
            double wx = 0.0;
            auto xi = v.row(i);
            for (std::size_t j = 0; j < v.m; ++j) wx += c.w[j] * xi[j];
            bsum += v.y[i] - wx;
            ++nfree;
        }
    }
    if (nfree > 0) {
        c.b = bsum / nfree;
    } else {
        double blo = -kInf, bhi = kInf;
        for (Eigen::Index i = 0; i < n; ++i) {
            double wx = 0.0;
            auto xi = v.row(i);
            for (std::size_t j = 0; j < v.m; ++j) wx += c.w[j] * xi[j];
            const bool at_zero = sol.z[i] <= tol;
            // alpha=0: y*(wx+b) >= 1; alpha=C: y*(wx+b) <= 1.
            if (v.y[i] > 0) {
                if (at_zero) blo = std::max(blo, 1.0 - wx);
                else bhi = std::min(bhi, 1.0 - wx);
            } else {
                if (at_zero) bhi = std::min(bhi, -1.0 - wx);
                else blo = std::max(blo, -1.0 - wx);
            }
        }
        if (std::isfinite(blo) && std::isfinite(bhi)) c.b = 0.5 * (blo + bhi);
        else if (std::isfinite(blo)) c.b = blo;
        else if (std::isfinite(bhi)) c.b = bhi;
        else c.b = 0.0;
        rep.bias_from_fallback = true;
    }

    rep.params = c;
    rep.dual_objective = -sol.objective;  // dual maximizes sum(a) - 1/2 a'Qa
    rep.primal_objective = primal_objective(c, v, cfg.C);
    rep.duality_gap = rep.primal_objective - rep.dual_objective;
    return rep;
}

ClassifierParams train_soft_margin(const BinaryView& v, const SvmConfig& cfg,
                                   const qp::Config& qp_cfg) {
    return train_soft_margin_report(v, cfg, qp_cfg).params;
}

double decision_value(const ClassifierParams& c, std::span<const double> x) {
    if (c.dim() != x.size())
        throw std::invalid_argument("feature dimension mismatch");
    double f = c.b;
    for (std::size_t j = 0; j < x.size(); ++j) f += c.w[j] * x[j];
    return f;
}

int classify_binary(const ClassifierParams& c, std::span<const double> x) {
    return decision_value(c, x) >= 0.0 ? +1 : -1;
}

double primal_objective(const ClassifierParams& c, const BinaryView& v, double C) {
    double obj = 0.0;
    for (double wj : c.w) obj += 0.5 * wj * wj;
    for (std::size_t i = 0; i < v.n; ++i) {
        const double margin = v.y[i] * decision_value(c, v.row(i));
        obj += C * std::max(0.0, 1.0 - margin);
    }
    return obj;
}

}  // namespace sct::linsvm
