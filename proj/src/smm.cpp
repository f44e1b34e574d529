#include "prqpe/smm.hpp"

#include <cmath>

#include "prqpe/errors.hpp"

namespace prqpe {

namespace {
const double kE = std::exp(1.0);
constexpr double kSecondsPerDay = 86400.0;
}  // namespace

std::vector<AngleCount> rotation_angle_multiset(const RoundCost& rc, const CoefficientTable& table,
                                                double delta, int m) {
    if (!table.sorted) throw ValidationError("rotation_angle_multiset: table must be sorted");
    std::vector<AngleCount> out;
    out.reserve(rc.l_d_star + 1);
    const auto per_term = static_cast<std::uint64_t>(1) << m;
    for (std::size_t l = 0; l < rc.l_d_star; ++l)
        out.push_back({std::abs(table.terms[l].coefficient) * delta / 2.0, per_term});
    if (rc.g_rand > 0) out.push_back({rc.phi_m, rc.g_rand});
    return out;
}

double total_logical_error(const std::vector<AngleCount>& angles, const SmmCalibration& cal,
                           SmmSetting setting, double p_ph, bool clamp) {
    double acc = 0.0;
    for (const auto& a : angles)
        acc += cal.query(setting, p_ph, a.theta, clamp).alpha_rus * a.theta * p_ph *
               static_cast<double>(a.count);
    return acc;
}

double total_clocks(const std::vector<AngleCount>& angles, const SmmCalibration& cal,
                    SmmSetting setting, double p_ph, bool clamp) {
    double acc = 0.0;
    for (const auto& a : angles)
        acc += cal.query(setting, p_ph, a.theta, clamp).c_smm_clocks * static_cast<double>(a.count);
    return acc;
}

double pec_overhead(double p_total) {
    if (p_total < 0) throw ValidationError("pec_overhead: P_total must be non-negative");
    return std::exp(4.0 * p_total);
}

double clifford_error(double p_ph, int d) {
    if (d < 3 || d % 2 == 0) throw ValidationError("clifford_error: d must be odd and >= 3");
    if (p_ph <= 0 || p_ph > 0.01)
        throw ValidationError("clifford_error: p_ph must lie in (0, 0.01]");
    return 0.1 * std::pow(100.0 * p_ph, 0.5 * (d + 1));
}

int choose_distance(int n_patch, double c_total_clocks, double p_ph, int d_max) {
    if (c_total_clocks <= 0) throw ValidationError("choose_distance: C_total must be positive");
    if (n_patch <= 0) throw ValidationError("choose_distance: N_patch must be positive");
    for (int d = 3; d <= d_max; d += 2) {
        const double budget = 100.0 * d * static_cast<double>(n_patch) * c_total_clocks;
        if (1.0 / clifford_error(p_ph, d) >= budget) return d;
    }
    throw InfeasibleError("choose_distance: no code distance d <= " + std::to_string(d_max) +
                          " meets the logical error budget");
}

int patches_for(int n_logical) {
    if (n_logical < 1) throw ValidationError("patches_for: N_L must be at least 1");
    const auto sq = static_cast<int>(std::ceil(std::sqrt(8.0 * n_logical)));
    return 2 * n_logical + sq + 11;
}

std::uint64_t qubits_per_qpu(int n_patch, int d) {
    return static_cast<std::uint64_t>(n_patch) * 2ULL * static_cast<std::uint64_t>(d) *
           static_cast<std::uint64_t>(d);
}

ParallelismPlan parallelism(double q_budget, std::uint64_t q_qpu, double t_total_seconds) {
    if (q_qpu == 0) throw ValidationError("parallelism: Q_QPU must be positive");
    const int k = static_cast<int>(std::floor(q_budget / static_cast<double>(q_qpu)));
    if (k < 1)
        throw InfeasibleError("parallelism: a single QPU already exceeds the qubit budget");
    return {k, t_total_seconds / k};
}

Runtimes runtimes(const std::vector<double>& c_total_clocks, int d,
                  const std::vector<std::uint64_t>& n_shots, const std::vector<double>& gamma_sq,
                  double code_cycle_us) {
    if (c_total_clocks.size() != n_shots.size() || c_total_clocks.size() != gamma_sq.size())
        throw ValidationError("runtimes: inconsistent per-round data");
    if (c_total_clocks.empty()) throw ValidationError("runtimes: no rounds");
    Runtimes out;
    for (std::size_t m = 0; m < c_total_clocks.size(); ++m) {
        const double t_m = c_total_clocks[m] * d * code_cycle_us * 1e-6;
        out.per_round_seconds.push_back(t_m);
        out.t_total_seconds += kE * gamma_sq[m] * static_cast<double>(n_shots[m]) * t_m;
    }
    out.t_max_seconds = out.per_round_seconds.back();
    return out;
}

namespace {

ResourceReport estimate_one(const CoefficientTable& table, const CostModelConfig& cost_cfg,
                            const SmmCalibration& cal, const EstimateOptions& opts,
                            SmmSetting setting) {
    ResourceReport rep;
    const CostBreakdown cost = total_cost(table, cost_cfg);

    // the deterministic baseline keeps every surviving term in the
    // deterministic segment
    CoefficientTable work = table;
    std::vector<RoundCost> rounds = cost.rounds;
    int m_rounds = cost.m_rounds;
    double delta = cost.step.delta;
    if (opts.scheme == EvolutionScheme::deterministic) {
        work = truncate_tail(table, kBaselineTruncation);
        delta = cost.baseline_delta;
        m_rounds = cost.baseline_m_rounds;
        const auto schedule = sample_schedule(cost_cfg, m_rounds);
        rounds.clear();
        for (int m = 0; m <= m_rounds; ++m) {
            RoundCost rc;
            rc.m = m;
            rc.t_m = 1ULL << m;
            rc.g_det_factor = 0.5 * cost_cfg.c_gate * 2.0 * std::ldexp(1.0, m);
            rc.l_d_star = work.terms.size();
            rc.lambda_r = 0.0;
            rc.g_det = static_cast<std::uint64_t>(
                std::ceil(rc.g_det_factor * static_cast<double>(work.terms.size())));
            rc.g_rand = 0;
            rc.g_m = rc.g_det;
            rc.n_shots = schedule[m];
            rounds.push_back(rc);
        }
    }

    rep.scheme = opts.scheme == EvolutionScheme::deterministic ? "deterministic" : "partial_random";
    rep.lambda = work.l1();
    rep.delta = delta;
    rep.m_rounds = m_rounds;
    rep.epsilon = cost_cfg.epsilon;
    rep.xi = cost_cfg.xi;
    rep.p_ph = opts.p_ph;
    rep.q_budget = opts.q_budget;
    rep.code_cycle_us = opts.code_cycle_us;
    rep.smm_priority = to_string(setting);
    rep.calibration_provenance = cal.provenance();

    rep.n_l = work.n_qubits + 1;  // data qubits plus the Hadamard-test ancilla
    rep.n_patch = patches_for(rep.n_l);

    // per-round clock totals and mitigation overheads
    std::vector<double> c_total(m_rounds + 1), p_total(m_rounds + 1), gamma_sq(m_rounds + 1);
    for (int m = 0; m <= m_rounds; ++m) {
        const auto angles = rotation_angle_multiset(rounds[m], work, delta, m);
        std::uint64_t count = 0;
        for (const auto& a : angles) count += a.count;
        if (count != rounds[m].g_m)
            throw ValidationError("estimate: angle multiset does not account for G_m");
        c_total[m] = total_clocks(angles, cal, setting, opts.p_ph, opts.clamp_calibration);
        p_total[m] = total_logical_error(angles, cal, setting, opts.p_ph, opts.clamp_calibration);
        gamma_sq[m] = pec_overhead(p_total[m]);
    }

    // code distance from the deepest circuit, applied to the qubit count
    rep.d = choose_distance(rep.n_patch, c_total[m_rounds], opts.p_ph);
    rep.physical_qubits_per_qpu = qubits_per_qpu(rep.n_patch, rep.d);

    const RoundCost& last = rounds[m_rounds];
    rep.l_d = last.l_d_star;
    rep.lambda_r = last.lambda_r;
    rep.g_m = last.g_m;
    rep.p_total = p_total[m_rounds];
    rep.gamma_sq_m = gamma_sq[m_rounds];
    {
        const auto angles = rotation_angle_multiset(last, work, delta, m_rounds);
        double sum = 0.0;
        std::uint64_t count = 0;
        for (const auto& a : angles) {
            sum += a.theta * static_cast<double>(a.count);
            count += a.count;
        }
        rep.theta_bar_l = count > 0 ? sum / static_cast<double>(count) : 0.0;
    }

    std::vector<std::uint64_t> shot_schedule;
    for (const auto& rc : rounds) shot_schedule.push_back(rc.n_shots);
    const Runtimes times = runtimes(c_total, rep.d, shot_schedule, gamma_sq, opts.code_cycle_us);
    for (int m = 0; m <= m_rounds; ++m)
        rep.rounds.push_back({m, rounds[m].n_shots, rounds[m].g_m, c_total[m], p_total[m],
                              gamma_sq[m], times.per_round_seconds[m]});
    rep.maximum_per_shot_runtime_s = times.t_max_seconds;
    rep.t_total_seconds = times.t_total_seconds;
    rep.time_to_solution_single_qpu_days = times.t_total_seconds / kSecondsPerDay;

    const ParallelismPlan plan =
        parallelism(opts.q_budget, rep.physical_qubits_per_qpu, times.t_total_seconds);
    rep.qpu_parallelism_k_star = plan.k_star;
    rep.time_to_solution_k_star_qpus_days = plan.t_parallel_seconds / kSecondsPerDay;
    return rep;
}

}  // namespace

ResourceReport estimate(const CoefficientTable& table, const CostModelConfig& cost_cfg,
                        const SmmCalibration& cal, const EstimateOptions& opts) {
    if (!table.sorted) throw ValidationError("estimate: table must be sorted");
    if (table.terms.empty()) throw ValidationError("estimate: empty coefficient table");
    cost_cfg.validate();

    if (opts.setting) return estimate_one(table, cost_cfg, cal, opts, *opts.setting);

    // auto mode: evaluate both threshold-adjustment patterns, keep the
    // shorter time-to-solution
    std::optional<ResourceReport> best;
    std::string failures;
    for (const SmmSetting s : {SmmSetting::accuracy, SmmSetting::speed}) {
        try {
            ResourceReport rep = estimate_one(table, cost_cfg, cal, opts, s);
            if (!best || rep.t_total_seconds < best->t_total_seconds) best = std::move(rep);
        } catch (const std::exception& e) {
            failures += std::string(failures.empty() ? "" : "; ") + to_string(s) + ": " + e.what();
        }
    }
    if (!best) throw InfeasibleError("estimate: both settings failed (" + failures + ")");
    return *best;
}

}  // namespace prqpe
