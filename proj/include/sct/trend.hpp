#pragma once

#include <Eigen/Dense>
#include <set>
#include <vector>

#include "sct/core.hpp"

// Classifier prediction: mean-center the stacked parameters of a history,
// take the first principal direction via SVD, regress its scores on the
// sensing dates with a polynomial, and reconstruct the classifier predicted
// for the target date.
namespace sct::trend {

struct TrendModel {
    std::vector<double> mean_p;    // history mean of stacked parameters
    Eigen::MatrixXd G;             // orthogonal, columns by descending singular value
    std::vector<double> coeffs;    // a_0..a_r for the polynomial in (date - target)
    int order = 0;
    std::vector<int> dates;        // raw entry dates, oldest first
    std::vector<double> scores;    // first-component score per entry
    int target_date = 0;
};

/// Mean of the stacked history parameters and the centered vectors
/// (same order as the history entries). Throws on an empty history.
std::pair<std::vector<double>, std::vector<std::vector<double>>> center_history(
    const PairHistory& h);

/// Orthogonal basis of the centered set, first column along the direction of
/// maximal variance. Columns are sign-fixed so their largest-magnitude entry
/// is positive; an all-zero set yields the identity.
Eigen::MatrixXd fit_pca(const std::vector<std::vector<double>>& centered);

/// Least-squares polynomial coefficients a_0..a_r of scores over dates.
/// Throws when fewer than r+1 points or when dates repeat.
std::vector<double> fit_trend(const std::vector<double>& scores,
                              const std::vector<int>& dates, int order);

double eval_poly(const std::vector<double>& coeffs, double x);

/// Predicts the classifier for target_date from the history trend.
std::pair<ClassifierParams, TrendModel> predict_classifier(const PairHistory& h,
                                                           int order,
                                                           int target_date);

/// Picks the candidate order with the smallest leave-one-out prediction
/// error of the first-component scores; near-ties go to the smaller order.
/// Every candidate r must satisfy N >= r+2.
int select_order(const PairHistory& h, const std::set<int>& candidate_orders,
                 int target_date);

}  // namespace sct::trend
