#pragma once

#include <cstdint>
#include <vector>

#include "prqpe/pauli.hpp"

namespace prqpe {

// Algorithmic cost parameters. Only second-order product formulas are
// supported: the Trotter-constant heuristic C_gs = a * lambda^b is
// calibrated for p = 2 and other orders are rejected rather than
// extrapolated.
struct CostModelConfig {
    double epsilon = 1.6e-3;      // target precision, Hartree (chemical accuracy)
    double xi = 0.01;             // initial-state infidelity knob, in (0, 1)
    double eta = 0.99;            // overlap lower bound, in (0, 1]
    int order_p = 2;              // Trotter order
    double gamma = 1.0;           // randomized-protocol constant (1 = qDRIFT)
    double c_gate = 1.0;          // gate-conversion factor (1: rotations native)
    double alpha_hoeffding = 10.0;
    double trotter_a = 3.41e-5;   // C_gs = a * lambda^b
    double trotter_b = 2.09;

    void validate() const;
};

struct StepSizes {
    double delta = 0.0;     // optimal Trotter step
    double eps_qpe = 0.0;   // phase-estimation share of the budget
    double eps_trot = 0.0;  // Trotter-bias share
};

struct RoundCost {
    int m = 0;                    // round index, evolution t_m = 2^m steps
    std::uint64_t t_m = 0;        // Trotter-unitary applications
    std::size_t l_d_star = 0;     // optimal deterministic term count
    double lambda_r = 0.0;        // randomized-part weight at the optimum
    std::uint64_t g_det = 0;      // deterministic Pauli rotations
    std::uint64_t g_rand = 0;     // randomized Pauli rotations
    std::uint64_t g_m = 0;        // g_det + g_rand
    std::uint64_t n_shots = 0;    // schedule entry N_m
    double g_det_factor = 0.0;    // per-term deterministic cost g^(det)_m
    double g_rand_factor = 0.0;   // per-weight^2 randomized cost g^(rand)_m
    double phi_m = 0.0;           // fixed qDRIFT rotation angle of this round
};

// C_gs = a * lambda^b
double trotter_constant(double lambda, const CostModelConfig& cfg = {});

// Optimal step for the quadrature error split eps^2 = eps_qpe^2 + eps_trot^2.
StepSizes optimal_step(double epsilon, double c_gs, int order_p);

// M = ceil(log2(xi / (eps_qpe * delta))); the argument must exceed 1.
int rounds(double xi, double eps_qpe, double delta);

// Hoeffding-derived shot schedule; every N_m is even so shots split equally
// between the real and imaginary estimators.
std::vector<std::uint64_t> sample_schedule(const CostModelConfig& cfg, int m_rounds);

struct PartitionChoice {
    std::size_t l_d = 0;
    double lambda_r = 0.0;
    std::uint64_t g_det = 0;
    std::uint64_t g_rand = 0;
    std::uint64_t g_m = 0;
};

// Suffix-sum scan over all partition points; the minimized objective is the
// integer gate count ceil(g_det_factor * L_D) + ceil(g_rand_factor *
// lambda_R^2), smallest L_D on ties.
PartitionChoice optimal_partition(const std::vector<double>& sorted_abs_coeffs, double g_det_factor,
                                  double g_rand_factor);

// Optimal deterministic/randomized partition for round m.
RoundCost round_cost(const CoefficientTable& sorted_table, int m, double delta,
                     const CostModelConfig& cfg);

struct CostBreakdown {
    double lambda = 0.0;
    double c_gs = 0.0;
    StepSizes step;
    int m_rounds = 0;
    std::vector<RoundCost> rounds;
    double g_total = 0.0;           // sum_m e N_m G_m
    // deterministic second-order baseline (tail truncated at weight 1e-3,
    // all remaining terms Trotterized)
    double baseline_g_total = 0.0;
    int baseline_m_rounds = 0;
    double baseline_delta = 0.0;
    std::size_t baseline_terms = 0;
};

CostBreakdown total_cost(const CoefficientTable& sorted_table, const CostModelConfig& cfg);

// Deterministic baseline weight threshold.
inline constexpr double kBaselineTruncation = 1e-3;

}  // namespace prqpe
