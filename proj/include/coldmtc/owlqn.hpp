#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace coldmtc {

struct OwlqnConfig {
    std::size_t memory = 10;       // stored (s, y) pairs
    std::size_t max_iters = 500;
    /// Stop when ||pseudo-gradient||_inf <= grad_tol * max(1, ||x||_inf).
    double grad_tol = 1e-6;
    double sufficient_decrease = 1e-4;
    double shrink = 0.5;
    std::size_t max_line_search = 50;
    /// Keep every accepted iterate in the report (tests, diagnostics).
    bool keep_path = false;

    void validate() const;
};

enum class Termination { Converged, MaxIters, LineSearchFailure };

std::string_view to_string(Termination t);

struct OwlqnReport {
    Eigen::VectorXd x;
    double objective = 0.0;
    std::size_t iterations = 0;
    Termination reason = Termination::MaxIters;
    std::vector<double> trace;          // objective at x0 and after each accepted step
    std::vector<Eigen::VectorXd> path;  // x0 and accepted iterates, when keep_path
    double pseudo_grad_norm = 0.0;      // at the returned point
};

/// Smooth part of the objective: returns f(x) and writes grad f(x).
using SmoothObjective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

/// Pseudo-gradient of f(x) + sum_j c_j |x_j|.
Eigen::VectorXd pseudo_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& grad, const Eigen::VectorXd& l1);

/// Minimises f(x) + sum_j l1_weights_j |x_j| with orthant-wise L-BFGS.
///
/// Coordinates with a zero L1 weight are unconstrained and follow plain
/// L-BFGS; coordinates with a positive weight are kept inside the orthant
/// chosen at the start of each step, so they can land exactly on zero.
/// Throws NumericalError when f or its gradient is non-finite at x0.
OwlqnReport minimize(const SmoothObjective& objective, const Eigen::VectorXd& l1_weights, Eigen::VectorXd x0,
                     const OwlqnConfig& cfg = {});

}  // namespace coldmtc
