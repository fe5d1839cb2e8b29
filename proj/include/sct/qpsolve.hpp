#pragma once

#include <Eigen/Dense>
#include <optional>

// Dense convex quadratic programming:
//
//   minimize   1/2 z'Qz + c'z
//   subject to A_eq z  = b_eq
//              A_in z <= b_in
//              lower <= z <= upper   (entries may be +-infinity)
//
// Solved with a primal active-set method. Feasible starting points are
// found with an elastic phase-1 run of the same iteration. The solver is
// deterministic: identical problems and configs produce bitwise-identical
// solutions.
namespace sct::qp {

struct Problem {
    Eigen::MatrixXd Q;     // k x k, symmetric positive semidefinite
    Eigen::VectorXd c;     // k
    Eigen::MatrixXd A_eq;  // e x k (0 x k when absent)
    Eigen::VectorXd b_eq;  // e
    Eigen::MatrixXd A_in;  // q x k, rows encode a.z <= b
    Eigen::VectorXd b_in;  // q
    Eigen::VectorXd lower; // k
    Eigen::VectorXd upper; // k

    Eigen::Index size() const { return c.size(); }
    /// Throws std::invalid_argument on inconsistent shapes, asymmetry
    /// beyond 1e-10, or lower > upper.
    void validate() const;
};

enum class Status { optimal, infeasible, iteration_limit };

struct Solution {
    Eigen::VectorXd z;
    double objective = 0.0;     // evaluated with the unregularized Q
    Status status = Status::iteration_limit;
    double kkt_residual = 0.0;  // stationarity+complementarity, relative to 1+|grad|
    int iterations = 0;
    bool regularized = false;   // eps*I was added to Q for the solve

    // Lagrange multipliers at the solution (zero for inactive constraints).
    Eigen::VectorXd mult_eq;
    Eigen::VectorXd mult_in;
    Eigen::VectorXd mult_lower;
    Eigen::VectorXd mult_upper;
};

struct Config {
    double feas_tol = 1e-8;
    double kkt_tol = 1e-8;
    int max_iter = 0;  // 0 means 50*k
    /// Optional starting point; used when it is feasible, otherwise the
    /// solver falls back to its own phase-1.
    std::optional<Eigen::VectorXd> start;
};

Solution solve_qp(const Problem& p, const Config& cfg = {});

/// Largest constraint violation of z: equality residual, inequality excess,
/// and bound excess.
double max_violation(const Problem& p, const Eigen::VectorXd& z);

}  // namespace sct::qp
