#pragma once

#include <string>
#include <vector>

#include "prqpe/costmodel.hpp"
#include "prqpe/integrals.hpp"
#include "prqpe/optim.hpp"
#include "prqpe/transforms.hpp"

namespace prqpe {

enum class UwcObjective { soft_gate_cost, l1_norm };
enum class GradientMode { finite_difference, analytic };
enum class TransformBlock { oo, bliss, spin_bliss };

struct UwcConfig {
    double epsilon_soft = 1e-4;    // sigmoid regularization width
    double delta_th = 1e-3;        // relative convergence threshold (0.1%)
    int n_iter_max = 10;
    UwcObjective objective = UwcObjective::soft_gate_cost;
    GradientMode gradient_mode = GradientMode::finite_difference;
    bool include_spin_bliss = false;
    double cholesky_tol = 1e-8;
    MinimizeOptions optimizer;
    // cyclic 1-D line-minimization sweeps after the quasi-Newton stage;
    // rescues descent at the |c| kinks where finite differences vanish
    int polish_sweeps = 2;

    void validate() const;
};

struct UwcIterationRecord {
    int iteration = 0;
    std::uint64_t g_m_discrete = 0;
    double g_soft = 0.0;  // normalized objective after the block sequence
    double lambda = 0.0;
    std::size_t l_d_star = 0;
    double w_soft = 0.0;
    bool accepted = false;
    bool optimizer_warning = false;
};

struct UwcHistory {
    std::uint64_t initial_g_m = 0;
    double initial_lambda = 0.0;
    double cost_delta = 0.0;  // fixed Trotter step used for all iterations
    int cost_m_rounds = 0;
    std::vector<UwcIterationRecord> iterations;
    std::string termination;  // converged | degraded | max_iterations | empty_table
};

struct UwcResult {
    ElectronIntegrals integrals;
    UwcHistory history;
};

// Mean coefficient weight at the optimal partitioning point (1-based
// indexing); the degenerate ends use |c_1| * 1.05 (everything randomized)
// and |c_L| / 2.
double w_soft_from(const CoefficientTable& sorted_table, double g_det_factor, double g_rand_factor);

// Sigmoid-softened gate cost, not yet normalized.
double soft_cost(const std::vector<double>& abs_coeffs, double w_soft, double epsilon_soft,
                 double g_det_factor, double g_rand_factor);

// Context shared by the block minimizations of one optimization run: the
// partition weight and gate factors are frozen at the start, the objective
// is rescaled by the initial discrete cost.
struct UwcObjectiveContext {
    UwcObjective mode = UwcObjective::soft_gate_cost;
    double w_soft = 0.0;
    double epsilon_soft = 1e-4;
    double g_det_factor = 0.0;
    double g_rand_factor = 0.0;
    double normalization = 1.0;

    double evaluate(const ElectronIntegrals& x, Exec exec) const;
};

struct BlockResult {
    ElectronIntegrals integrals;
    double value = 0.0;
    bool warning = false;
};

// Gradient-based descent over one transform block from the zero start.
// Never returns a value above the start (identity fallback).
BlockResult minimize_block(const ElectronIntegrals& x, TransformBlock block,
                           const UwcObjectiveContext& ctx, const UwcConfig& cfg);

// Central finite-difference gradient of a block objective at `params`.
Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&, Exec)>& f,
                            const Eigen::VectorXd& params);

// Analytic gradient for the linear shift blocks (bliss / spin_bliss).
Eigen::VectorXd analytic_block_gradient(const ElectronIntegrals& x, TransformBlock block,
                                        const UwcObjectiveContext& ctx,
                                        const Eigen::VectorXd& params);

// Full iterative procedure: Cholesky-basis initialization, then per
// iteration a refreshed partition weight and the OO -> BLISS -> spin-BLISS
// block sequence, with discrete-cost convergence and degradation checks.
UwcResult uwc_optimize(const ElectronIntegrals& x, const CostModelConfig& cost_cfg,
                       const UwcConfig& uwc_cfg);

}  // namespace prqpe
