#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prqpe/calibration.hpp"
#include "prqpe/costmodel.hpp"

namespace prqpe {

struct AngleCount {
    double theta = 0.0;  // magnitude of the rotation angle
    std::uint64_t count = 0;
};

// Compressed rotation-angle multiset of the round-m circuit: every
// deterministic term contributes |c_l| delta / 2 with multiplicity 2^m
// (halving-trick counting, consistent with g_det = 2^m L_D), plus one entry
// for the fixed-angle randomized rotations. Total count equals G_m.
std::vector<AngleCount> rotation_angle_multiset(const RoundCost& rc, const CoefficientTable& table,
                                                double delta, int m);

// P_total = sum alpha_RUS(|theta|) |theta| p_ph over the multiset.
double total_logical_error(const std::vector<AngleCount>& angles, const SmmCalibration& cal,
                           SmmSetting setting, double p_ph, bool clamp = false);

// Total clock count: sum C_smm(|theta|) over the multiset.
double total_clocks(const std::vector<AngleCount>& angles, const SmmCalibration& cal,
                    SmmSetting setting, double p_ph, bool clamp = false);

// PEC sampling overhead gamma^2 ~ e^{4 P_total}.
double pec_overhead(double p_total);

// Surface-code logical error per cycle, p_L = 0.1 (100 p_ph)^{(d+1)/2}.
double clifford_error(double p_ph, int d);

// Smallest odd d >= 3 with p_L(p_ph, d)^{-1} >= 100 d N_patch C_total;
// throws InfeasibleError when no d <= d_max works.
int choose_distance(int n_patch, double c_total_clocks, double p_ph, int d_max = 51);

// Fast-block layout: N_patch = 2 N_L + ceil(sqrt(8 N_L)) + 11.
int patches_for(int n_logical);
// Q_QPU = N_patch * 2 d^2
std::uint64_t qubits_per_qpu(int n_patch, int d);

struct ParallelismPlan {
    int k_star = 0;
    double t_parallel_seconds = 0.0;
};
// k* = floor(budget / per-QPU); throws InfeasibleError when k* = 0.
ParallelismPlan parallelism(double q_budget, std::uint64_t q_qpu, double t_total_seconds);

struct Runtimes {
    double t_max_seconds = 0.0;
    double t_total_seconds = 0.0;
    std::vector<double> per_round_seconds;
};

// Per-shot runtimes T_m = C_total,m * d code cycles and the mitigation- and
// shot-weighted total sum_m e gamma_m^2 N_m T_m.
Runtimes runtimes(const std::vector<double>& c_total_clocks, int d,
                  const std::vector<std::uint64_t>& n_shots, const std::vector<double>& gamma_sq,
                  double code_cycle_us = 1.0);

enum class EvolutionScheme { partial_random, deterministic };

struct SmmRoundDetail {
    int m = 0;
    std::uint64_t n_shots = 0;
    std::uint64_t g_m = 0;
    double c_total_clocks = 0.0;
    double p_total = 0.0;
    double gamma_sq = 0.0;
    double t_seconds = 0.0;  // per-shot runtime at the chosen distance
};

struct ResourceReport {
    // logical columns
    std::size_t l_d = 0;
    double lambda_r = 0.0;
    double lambda = 0.0;
    int n_l = 0;
    std::uint64_t g_m = 0;
    std::string smm_priority;
    int d = 0;
    double theta_bar_l = 0.0;
    double p_total = 0.0;
    // physical columns
    int n_patch = 0;
    std::uint64_t physical_qubits_per_qpu = 0;
    double maximum_per_shot_runtime_s = 0.0;
    double time_to_solution_single_qpu_days = 0.0;
    double t_total_seconds = 0.0;
    int qpu_parallelism_k_star = 0;
    double time_to_solution_k_star_qpus_days = 0.0;
    double gamma_sq_m = 0.0;
    // chain metadata
    double delta = 0.0;
    int m_rounds = 0;
    double epsilon = 0.0, xi = 0.0, p_ph = 0.0, q_budget = 0.0;
    double code_cycle_us = 1.0;
    std::string scheme;
    std::string calibration_provenance;
    std::vector<SmmRoundDetail> rounds;
};

struct EstimateOptions {
    double p_ph = 1e-3;
    double q_budget = 5e5;
    // nullopt = auto: run both settings, keep the shorter time-to-solution
    std::optional<SmmSetting> setting;
    bool clamp_calibration = false;
    double code_cycle_us = 1.0;
    EvolutionScheme scheme = EvolutionScheme::partial_random;
};

// End-to-end physical estimate for a sorted coefficient table: round costs,
// angle multisets, clock totals, code distance from the final round,
// runtimes and QPU parallelism.
ResourceReport estimate(const CoefficientTable& sorted_table, const CostModelConfig& cost_cfg,
                        const SmmCalibration& cal, const EstimateOptions& opts);

}  // namespace prqpe
