#include "sct/trend.hpp"

#include <algorithm>
#include <cmath>

namespace sct::trend {

namespace {

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Vandermonde least squares in shifted date coordinates.
Eigen::VectorXd poly_fit(const std::vector<double>& xs, const std::vector<double>& ys,
                         int order) {
    const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
    Eigen::MatrixXd V(n, order + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        double p = 1.0;
        for (int j = 0; j <= order; ++j) {
            V(i, j) = p;
            p *= xs[static_cast<std::size_t>(i)];
        }
    }
    return V.colPivHouseholderQr().solve(to_eigen(ys));
}

}  // namespace

std::pair<std::vector<double>, std::vector<std::vector<double>>> center_history(
    const PairHistory& h) {
    if (h.size() == 0) throw std::invalid_argument("history is empty");
    const std::size_t dim = h.feature_dim() + 1;
    std::vector<double> mean(dim, 0.0);
    std::vector<std::vector<double>> stacked;
    stacked.reserve(h.size());
    for (const auto& e : h.entries()) {
        stacked.push_back(stack_params(e.params));
        for (std::size_t j = 0; j < dim; ++j) mean[j] += stacked.back()[j];
    }
    for (double& v : mean) v /= static_cast<double>(h.size());
    for (auto& p : stacked)
        for (std::size_t j = 0; j < dim; ++j) p[j] -= mean[j];
    return {std::move(mean), std::move(stacked)};
}

Eigen::MatrixXd fit_pca(const std::vector<std::vector<double>>& centered) {
    if (centered.empty()) throw std::invalid_argument("no centered vectors");
    const Eigen::Index dim = static_cast<Eigen::Index>(centered.front().size());
    Eigen::MatrixXd P(static_cast<Eigen::Index>(centered.size()), dim);
    for (std::size_t i = 0; i < centered.size(); ++i)
        P.row(static_cast<Eigen::Index>(i)) = to_eigen(centered[i]).transpose();

    if (P.lpNorm<Eigen::Infinity>() == 0.0)
        return Eigen::MatrixXd::Identity(dim, dim);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(P, Eigen::ComputeFullV);
    Eigen::MatrixXd G = svd.matrixV();
    // Deterministic sign: largest-magnitude entry of each column positive.
    for (Eigen::Index c = 0; c < G.cols(); ++c) {
        Eigen::Index imax = 0;
        G.col(c).cwiseAbs().maxCoeff(&imax);
        if (G(imax, c) < 0.0) G.col(c) = -G.col(c);
    }
    return G;
}

std::vector<double> fit_trend(const std::vector<double>& scores,
                              const std::vector<int>& dates, int order) {
    if (order < 0) throw std::invalid_argument("polynomial order must be >= 0");
    if (scores.size() != dates.size())
        throw std::invalid_argument("scores and dates must align");
    if (scores.size() < static_cast<std::size_t>(order) + 1)
        throw std::invalid_argument("insufficient points for the requested order");
    for (std::size_t i = 0; i < dates.size(); ++i)
        for (std::size_t j = i + 1; j < dates.size(); ++j)
            if (dates[i] == dates[j])
                throw std::invalid_argument("duplicate sensing dates");

    std::vector<double> xs(dates.begin(), dates.end());
    Eigen::VectorXd a = poly_fit(xs, scores, order);
    return {a.data(), a.data() + a.size()};
}

double eval_poly(const std::vector<double>& coeffs, double x) {
    double v = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 0;) v = coeffs[j] + x * v;
    return v;
}

std::pair<ClassifierParams, TrendModel> predict_classifier(const PairHistory& h,
                                                           int order,
                                                           int target_date) {
    auto [mean, centered] = center_history(h);
    TrendModel model;
    model.mean_p = mean;
    model.G = fit_pca(centered);
    model.order = order;
    model.target_date = target_date;

    const std::size_t n = h.size();
    model.dates.reserve(n);
    model.scores.reserve(n);
    std::vector<double> shifted;
    shifted.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        model.dates.push_back(h.entries()[i].date);
        // Shifting so the target maps to zero makes the predicted score the
        // fitted constant term.
        shifted.push_back(static_cast<double>(h.entries()[i].date - target_date));
        model.scores.push_back(model.G.col(0).dot(to_eigen(centered[i])));
    }

    std::vector<int> shifted_int(shifted.begin(), shifted.end());
    Eigen::VectorXd a = poly_fit(shifted, model.scores, order);
    if (h.size() < static_cast<std::size_t>(order) + 1)
        throw std::invalid_argument("insufficient history for the requested order");
    for (std::size_t i = 0; i < model.dates.size(); ++i)
        for (std::size_t j = i + 1; j < model.dates.size(); ++j)
            if (model.dates[i] == model.dates[j])
                throw std::invalid_argument("duplicate sensing dates");
    model.coeffs.assign(a.data(), a.data() + a.size());

    const double q1 = model.coeffs[0];  // polynomial at the (shifted) target
    Eigen::VectorXd p = to_eigen(mean) + q1 * model.G.col(0);
    ClassifierParams predicted = unstack_params({p.data(), p.data() + p.size()});
    return {std::move(predicted), std::move(model)};
}

int select_order(const PairHistory& h, const std::set<int>& candidate_orders,
                 int target_date) {
    if (candidate_orders.empty())
        throw std::invalid_argument("no candidate orders");
    const std::size_t n = h.size();
    for (int r : candidate_orders) {
        if (r < 0) throw std::invalid_argument("polynomial order must be >= 0");
        if (n < static_cast<std::size_t>(r) + 2)
            throw std::invalid_argument("insufficient points for leave-one-out order selection");
    }

    auto [mean, centered] = center_history(h);
    (void)mean;
    Eigen::MatrixXd G = fit_pca(centered);
    std::vector<double> scores(n), xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        scores[i] = G.col(0).dot(to_eigen(centered[i]));
        xs[i] = static_cast<double>(h.entries()[i].date - target_date);
    }

    int best_order = *candidate_orders.begin();
    double best_err = -1.0;
    for (int r : candidate_orders) {  // std::set iterates ascending
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> xs_loo, sc_loo;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                xs_loo.push_back(xs[j]);
                sc_loo.push_back(scores[j]);
            }
            Eigen::VectorXd a = poly_fit(xs_loo, sc_loo, r);
            std::vector<double> coeffs(a.data(), a.data() + a.size());
            const double pred = eval_poly(coeffs, xs[i]);
            err += (pred - scores[i]) * (pred - scores[i]);
        }
        // Near-ties resolve to the smaller order.
        if (best_err < 0.0 || err < best_err - 1e-9 * std::max(1.0, best_err))
            best_err = err, best_order = r;
    }
    return best_order;
}

}  // namespace sct::trend
