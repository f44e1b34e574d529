#include "prqpe/costmodel.hpp"

#include <cmath>

#include "prqpe/errors.hpp"

namespace prqpe {

namespace {

const double kE = std::exp(1.0);

// Integer gate counts round up (a rotation is indivisible), with a small
// relative slack so that products like 100 * 0.1^2 do not ceil to 2.
std::uint64_t ceil_count(double x) {
    if (x <= 0.0) return 0;
    const double adj = x - std::max(1.0, std::abs(x)) * 1e-9;
    return static_cast<std::uint64_t>(std::ceil(adj));
}

std::uint64_t ceil_even(double x) {
    auto v = static_cast<std::uint64_t>(std::ceil(x));
    return v % 2 == 0 ? v : v + 1;
}

}  // namespace

void CostModelConfig::validate() const {
    if (epsilon <= 0) throw ValidationError("cost config: epsilon must be positive");
    if (!(xi > 0 && xi < 1)) throw ValidationError("cost config: xi must lie in (0, 1)");
    if (!(eta > 0 && eta <= 1)) throw ValidationError("cost config: eta must lie in (0, 1]");
    if (order_p != 2)
        throw ValidationError("cost config: only order p=2 is supported (C_gs heuristic calibration)");
    const double xi_min = (3.0 / M_PI) * std::asin((1.0 - eta) / eta);
    if (!(xi > xi_min))
        throw ValidationError("cost config: xi must exceed (3/pi) asin((1-eta)/eta)");
    if (gamma <= 0 || c_gate <= 0) throw ValidationError("cost config: gamma and c_gate must be positive");
}

double trotter_constant(double lambda, const CostModelConfig& cfg) {
    if (lambda <= 0) throw ValidationError("trotter_constant: lambda must be positive");
    return cfg.trotter_a * std::pow(lambda, cfg.trotter_b);
}

StepSizes optimal_step(double epsilon, double c_gs, int order_p) {
    if (c_gs <= 0) throw ValidationError("optimal_step: C_gs must be positive");
    if (order_p != 2) throw ValidationError("optimal_step: only p=2 supported");
    const double p = order_p;
    StepSizes s;
    s.delta = std::pow(epsilon / c_gs, 1.0 / p) * std::pow(1.0 / (1.0 + p), 1.0 / (2.0 * p));
    s.eps_qpe = epsilon * std::sqrt(p / (1.0 + p));
    s.eps_trot = epsilon / std::sqrt(1.0 + p);
    return s;
}

int rounds(double xi, double eps_qpe, double delta) {
    const double ratio = xi / (eps_qpe * delta);
    if (!(ratio > 1.0))
        throw ValidationError("rounds: xi/(eps_qpe*delta) must exceed 1 (degenerate precision)");
    return static_cast<int>(std::ceil(std::log2(ratio)));
}

std::vector<std::uint64_t> sample_schedule(const CostModelConfig& cfg, int m_rounds) {
    const double beta = cfg.eta * (1.0 + std::sin(M_PI / 3.0)) - 1.0;
    if (beta <= 0)
        throw ValidationError("sample_schedule: eta*(1+sin(pi/3)) must exceed 1");
    std::vector<std::uint64_t> n(m_rounds + 1);
    for (int m = 0; m < m_rounds; ++m) {
        const double raw = (2.0 / (beta * beta)) *
                           (std::log(1.0 / cfg.xi) +
                            std::log(2.0) * (cfg.alpha_hoeffding * (m_rounds - m) + 1.0));
        n[m] = ceil_even(raw);
    }
    n[m_rounds] = ceil_even(2.0 / (cfg.xi * cfg.xi));
    return n;
}

PartitionChoice optimal_partition(const std::vector<double>& sorted_abs, double g_det_factor,
                                  double g_rand_factor) {
    const std::size_t L = sorted_abs.size();
    // suffix[i] = sum_{l > i} |c_l| (1-based L_D semantics: suffix[L_D] = lambda_R)
    std::vector<double> suffix(L + 1, 0.0);
    for (std::size_t i = L; i-- > 0;) suffix[i] = suffix[i + 1] + sorted_abs[i];

    PartitionChoice best;
    std::uint64_t best_g = UINT64_MAX;
    for (std::size_t ld = 0; ld <= L; ++ld) {
        const std::uint64_t gd = ceil_count(g_det_factor * static_cast<double>(ld));
        const std::uint64_t gr = ceil_count(g_rand_factor * suffix[ld] * suffix[ld]);
        if (gd + gr < best_g) {
            best_g = gd + gr;
            best.l_d = ld;
            best.lambda_r = suffix[ld];
            best.g_det = gd;
            best.g_rand = gr;
        }
    }
    best.g_m = best_g;
    return best;
}

RoundCost round_cost(const CoefficientTable& table, int m, double delta, const CostModelConfig& cfg) {
    if (!table.sorted) throw ValidationError("round_cost: table must be sorted");
    if (m < 0 || m > 62) throw ValidationError("round_cost: round index out of range");

    RoundCost rc;
    rc.m = m;
    rc.t_m = 1ULL << m;
    const double n_stage = 2.0;  // second-order symmetric formula
    rc.g_det_factor = 0.5 * cfg.c_gate * n_stage * std::ldexp(1.0, m);
    rc.g_rand_factor = cfg.c_gate * cfg.gamma * delta * delta * std::ldexp(1.0, 2 * m);

    std::vector<double> abs_coeffs(table.terms.size());
    for (std::size_t i = 0; i < table.terms.size(); ++i)
        abs_coeffs[i] = std::abs(table.terms[i].coefficient);
    const PartitionChoice pc = optimal_partition(abs_coeffs, rc.g_det_factor, rc.g_rand_factor);
    rc.l_d_star = pc.l_d;
    rc.lambda_r = pc.lambda_r;
    rc.g_det = pc.g_det;
    rc.g_rand = pc.g_rand;
    rc.g_m = pc.g_m;
    rc.phi_m = rc.lambda_r > 0.0
                   ? std::atan(1.0 / (2.0 * rc.lambda_r * delta * std::ldexp(1.0, m)))
                   : 0.0;
    return rc;
}

CostBreakdown total_cost(const CoefficientTable& table, const CostModelConfig& cfg) {
    cfg.validate();
    if (!table.sorted) throw ValidationError("total_cost: table must be sorted");

    CostBreakdown out;
    out.lambda = table.l1();
    out.c_gs = trotter_constant(out.lambda, cfg);
    out.step = optimal_step(cfg.epsilon, out.c_gs, cfg.order_p);
    out.m_rounds = rounds(cfg.xi, out.step.eps_qpe, out.step.delta);
    const auto schedule = sample_schedule(cfg, out.m_rounds);

    out.rounds.resize(out.m_rounds + 1);
    for (int m = 0; m <= out.m_rounds; ++m) {
        out.rounds[m] = round_cost(table, m, out.step.delta, cfg);
        out.rounds[m].n_shots = schedule[m];
    }
    out.g_total = 0.0;
    for (const auto& rc : out.rounds)
        out.g_total += kE * static_cast<double>(rc.n_shots) * static_cast<double>(rc.g_m);

    // deterministic Trotter baseline: truncate the tail, keep every
    // remaining term in the deterministic segment
    const CoefficientTable trunc = truncate_tail(table, kBaselineTruncation);
    out.baseline_terms = trunc.terms.size();
    if (!trunc.terms.empty()) {
        const double lambda_b = trunc.l1();
        const double c_gs_b = trotter_constant(lambda_b, cfg);
        const StepSizes step_b = optimal_step(cfg.epsilon, c_gs_b, cfg.order_p);
        out.baseline_delta = step_b.delta;
        out.baseline_m_rounds = rounds(cfg.xi, step_b.eps_qpe, step_b.delta);
        const auto schedule_b = sample_schedule(cfg, out.baseline_m_rounds);
        out.baseline_g_total = 0.0;
        for (int m = 0; m <= out.baseline_m_rounds; ++m) {
            const double g_det_factor = 0.5 * cfg.c_gate * 2.0 * std::ldexp(1.0, m);
            const std::uint64_t g_m = ceil_count(g_det_factor * static_cast<double>(trunc.terms.size()));
            out.baseline_g_total += kE * static_cast<double>(schedule_b[m]) * static_cast<double>(g_m);
        }
    }
    return out;
}

}  // namespace prqpe
