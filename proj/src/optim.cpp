#include "prqpe/optim.hpp"

#include <cmath>
#include <deque>

namespace prqpe {

MinimizeResult minimize_lbfgs(const std::function<double(const Eigen::VectorXd&)>& f,
                              const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
                              Eigen::VectorXd x0, const MinimizeOptions& opts) {
    MinimizeResult res;
    res.x = x0;
    res.value = f(x0);

    Eigen::VectorXd x = x0;
    double fx = res.value;
    Eigen::VectorXd g = grad(x);

    std::deque<Eigen::VectorXd> s_hist, y_hist;
    std::deque<double> rho_hist;

    for (int it = 0; it < opts.max_iterations; ++it) {
        res.iterations = it;
        if (g.norm() <= opts.gradient_tol) {
            res.converged = true;
            break;
        }

        // two-loop recursion
        Eigen::VectorXd q = g;
        const int k = static_cast<int>(s_hist.size());
        std::vector<double> alpha(k);
        for (int i = k - 1; i >= 0; --i) {
            alpha[i] = rho_hist[i] * s_hist[i].dot(q);
            q -= alpha[i] * y_hist[i];
        }
        if (k > 0) {
            const double gamma = s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
            q *= gamma;
        }
        for (int i = 0; i < k; ++i) {
            const double beta = rho_hist[i] * y_hist[i].dot(q);
            q += (alpha[i] - beta) * s_hist[i];
        }
        Eigen::VectorXd dir = -q;
        double slope = g.dot(dir);
        if (!(slope < 0)) {  // not a descent direction; reset to steepest descent
            dir = -g;
            slope = -g.squaredNorm();
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }
        // keep probe points within a sane trust region
        const double dir_cap = 1e3 * std::max(1.0, x.norm());
        if (dir.norm() > dir_cap) {
            const double scale = dir_cap / dir.norm();
            dir *= scale;
            slope *= scale;
        }

        // Armijo backtracking
        double step = 1.0;
        bool accepted = false;
        Eigen::VectorXd x_new;
        double f_new = fx;
        for (int ls = 0; ls < opts.max_line_shrinks; ++ls) {
            x_new = x + step * dir;
            f_new = f(x_new);
            if (std::isfinite(f_new) && f_new <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= opts.line_shrink;
        }
        if (!accepted) {
            res.line_search_failed = true;
            break;
        }

        Eigen::VectorXd g_new = grad(x_new);
        Eigen::VectorXd s = x_new - x;
        Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            s_hist.push_back(s);
            y_hist.push_back(y);
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > opts.history) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        x = std::move(x_new);
        fx = f_new;
        g = std::move(g_new);
        if (fx < res.value) {
            res.value = fx;
            res.x = x;
        }
    }
    return res;
}

}  // namespace prqpe
