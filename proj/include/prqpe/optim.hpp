#pragma once

#include <Eigen/Dense>
#include <functional>

namespace prqpe {

struct MinimizeOptions {
    int max_iterations = 200;
    double gradient_tol = 1e-8;
    double line_shrink = 0.5;
    int max_line_shrinks = 30;
    int history = 8;  // L-BFGS memory
};

struct MinimizeResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    bool line_search_failed = false;
};

// Limited-memory BFGS with Armijo backtracking. The returned point never
// evaluates above the start: if no descent step is found the start point
// comes back with `line_search_failed` set.
MinimizeResult minimize_lbfgs(const std::function<double(const Eigen::VectorXd&)>& f,
                              const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
                              Eigen::VectorXd x0, const MinimizeOptions& opts = {});

}  // namespace prqpe
