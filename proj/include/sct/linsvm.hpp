#pragma once

#include <vector>

#include "sct/core.hpp"
#include "sct/qpsolve.hpp"

// Standard soft-margin linear SVM, trained through the box-constrained dual.
namespace sct::linsvm {

struct SvmConfig {
    double C = 1.0;
    double sv_tol = -1.0;  // < 0 means the scale-invariant default 1e-6*C

    double effective_sv_tol() const { return sv_tol < 0.0 ? 1e-6 * C : sv_tol; }
    void validate() const;
};

/// Training byproducts used by diagnostics and tests.
struct TrainReport {
    ClassifierParams params;
    std::vector<double> alphas;
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double duality_gap = 0.0;
    bool bias_from_fallback = false;  // no free support vectors existed
};

/// Thrown when a view lacks one of the two labels.
class ClassMissingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when the QP backend fails to converge.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

TrainReport train_soft_margin_report(const BinaryView& v, const SvmConfig& cfg,
                                     const qp::Config& qp_cfg = {});

ClassifierParams train_soft_margin(const BinaryView& v, const SvmConfig& cfg,
                                   const qp::Config& qp_cfg = {});

double decision_value(const ClassifierParams& c, std::span<const double> x);

/// sign(decision_value) with 0 mapped to +1.
int classify_binary(const ClassifierParams& c, std::span<const double> x);

/// Soft-margin primal value 1/2|w|^2 + C * sum of hinge losses.
double primal_objective(const ClassifierParams& c, const BinaryView& v, double C);

}  // namespace sct::linsvm
