#include "prqpe/rpe.hpp"

#include <cmath>

#include "prqpe/errors.hpp"
#include "prqpe/rng.hpp"

namespace prqpe {

namespace {

double wrap_pi(double x) {
    x = std::fmod(x + M_PI, 2.0 * M_PI);
    if (x <= 0) x += 2.0 * M_PI;
    return x - M_PI;
}

// shared spectral setup: eigendecompose, project the initial state
void spectral_setup(SignalBackend& b, const Eigen::MatrixXcd& h, const Statevector& psi) {
    const auto dim = h.rows();
    if (static_cast<Eigen::Index>(psi.size()) != dim)
        throw ValidationError("rpe backend: state dimension mismatch");
    Eigen::Map<const Eigen::VectorXcd> v(psi.data(), dim);
    if (std::abs(v.norm() - 1.0) > 1e-12) throw ValidationError("rpe backend: state must be normalized");
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw ValidationError("rpe backend: Hamiltonian must be Hermitian");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    b.energies.resize(dim);
    b.weights.resize(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        b.energies[k] = es.eigenvalues()(k);
        const std::complex<double> overlap = es.eigenvectors().col(k).dot(v);
        b.weights[k] = std::norm(overlap);
    }
}

}  // namespace

SignalBackend make_spectral_backend_scaled(const Eigen::MatrixXcd& h, const Statevector& psi,
                                           SignalMode mode, double shift, double scale) {
    if (mode == SignalMode::circuit_partial_random)
        throw ValidationError("rpe backend: circuit mode needs make_circuit_backend");
    if (scale <= 0) throw ValidationError("rpe backend: scale must be positive");
    SignalBackend b;
    b.mode = mode;
    b.energy_shift = shift;
    b.energy_scale = scale;
    spectral_setup(b, h, psi);
    for (auto& e : b.energies) e = (e - shift) / scale;
    return b;
}

SignalBackend make_spectral_backend(const Eigen::MatrixXcd& h, const Statevector& psi,
                                    SignalMode mode, double margin) {
    // Gershgorin window keeps the scaled spectrum clear of the +/- pi alias
    double lo = 0.0, hi = 0.0;
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        double radius = 0.0;
        for (Eigen::Index j = 0; j < h.cols(); ++j)
            if (j != i) radius += std::abs(h(i, j));
        const double center = h(i, i).real();
        lo = i == 0 ? center - radius : std::min(lo, center - radius);
        hi = i == 0 ? center + radius : std::max(hi, center + radius);
    }
    const double shift = 0.5 * (lo + hi);
    double scale = 0.5 * (hi - lo) / (M_PI * (1.0 - margin));
    if (scale <= 0) scale = 1.0;
    return make_spectral_backend_scaled(h, psi, mode, shift, scale);
}

SignalBackend make_circuit_backend(const CoefficientTable& sorted_table, double delta,
                                   const CostModelConfig& cost_cfg, Statevector psi, int n_qubits) {
    if (!sorted_table.sorted) throw ValidationError("rpe backend: circuit table must be sorted");
    if (n_qubits > 12) throw ValidationError("rpe backend: circuit mode limited to 12 qubits");
    if (delta <= 0) throw ValidationError("rpe backend: delta must be positive");
    if (delta * sorted_table.l1() >= M_PI)
        throw ValidationError("rpe backend: delta * lambda must stay below pi (aliasing)");
    SignalBackend b;
    b.mode = SignalMode::circuit_partial_random;
    b.table = sorted_table;
    b.delta = delta;
    b.cost_cfg = cost_cfg;
    b.psi = std::move(psi);
    b.n_qubits = n_qubits;
    return b;
}

std::complex<double> exact_signal(const SignalBackend& b, double t) {
    std::complex<double> g = 0.0;
    for (std::size_t k = 0; k < b.energies.size(); ++k) {
        if (b.weights[k] == 0.0) continue;
        g += b.weights[k] * std::exp(std::complex<double>(0.0, -t * b.energies[k]));
    }
    return g;
}

std::complex<double> partial_random_amplitude(const SignalBackend& b, int m,
                                              std::uint64_t shot_index, std::uint64_t seed) {
    if (b.mode != SignalMode::circuit_partial_random)
        throw ValidationError("partial_random_amplitude: circuit backend required");

    const RoundCost rc = round_cost(b.table, m, b.delta, b.cost_cfg);
    const std::size_t ld = rc.l_d_star;
    const std::uint64_t steps = 1ULL << m;

    // qDRIFT sampling table over the randomized tail
    std::vector<double> cdf;
    cdf.reserve(b.table.terms.size() - ld);
    double acc = 0.0;
    for (std::size_t l = ld; l < b.table.terms.size(); ++l) {
        acc += std::abs(b.table.terms[l].coefficient);
        cdf.push_back(acc);
    }
    // per-step rotation budget; the remainder goes to the final steps
    const std::uint64_t base = cdf.empty() ? 0 : rc.g_rand / steps;
    const std::uint64_t remainder = cdf.empty() ? 0 : rc.g_rand % steps;

    CounterRng rng(seed, 0x9d5ULL + static_cast<std::uint64_t>(m), shot_index);
    Statevector psi = b.psi;

    for (std::uint64_t step = 0; step < steps; ++step) {
        // forward half sweep over the deterministic terms
        for (std::size_t l = 0; l < ld; ++l)
            apply_pauli_rotation(psi, b.table.terms[l].mask,
                                 -0.5 * b.delta * b.table.terms[l].coefficient, b.n_qubits,
                                 Exec::serial);
        // randomized middle block: fixed-angle rotations, sign-absorbed
        const std::uint64_t r_step = base + (step >= steps - remainder ? 1 : 0);
        for (std::uint64_t j = 0; j < r_step; ++j) {
            const std::size_t pick = ld + rng.pick(cdf);
            const double sign = b.table.terms[pick].coefficient < 0 ? -1.0 : 1.0;
            apply_pauli_rotation(psi, b.table.terms[pick].mask, -rc.phi_m * sign, b.n_qubits,
                                 Exec::serial);
        }
        // reverse half sweep
        for (std::size_t l = ld; l-- > 0;)
            apply_pauli_rotation(psi, b.table.terms[l].mask,
                                 -0.5 * b.delta * b.table.terms[l].coefficient, b.n_qubits,
                                 Exec::serial);
    }

    std::complex<double> amp = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) amp += std::conj(b.psi[i]) * psi[i];
    return amp;
}

std::complex<double> hadamard_shots(const SignalBackend& b, int m, std::uint64_t n_shots,
                                    std::uint64_t seed) {
    if (n_shots == 0 || n_shots % 2 != 0)
        throw ValidationError("hadamard_shots: shot count must be even and positive");
    const std::uint64_t half = n_shots / 2;

    std::vector<int> outcomes(n_shots);
    const bool circuit = b.mode == SignalMode::circuit_partial_random;
    std::complex<double> g = 0.0;
    if (!circuit) g = exact_signal(b, std::ldexp(1.0, m));

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(n_shots); ++s) {
        const auto shot = static_cast<std::uint64_t>(s);
        std::complex<double> a = g;
        if (circuit) a = partial_random_amplitude(b, m, shot, seed);
        CounterRng rng(seed, 0xbe7ULL + static_cast<std::uint64_t>(m), shot, 0x51ULL);
        const double target = shot < half ? a.real() : a.imag();
        outcomes[shot] = rng.bernoulli_pm1(0.5 * (1.0 + target));
    }

    // deterministic reduction order
    double re = 0.0, im = 0.0;
    for (std::uint64_t s = 0; s < half; ++s) re += outcomes[s];
    for (std::uint64_t s = half; s < n_shots; ++s) im += outcomes[s];
    return {re / static_cast<double>(half), im / static_cast<double>(half)};
}

std::vector<double> rpe_candidates(double phase, int m) {
    std::vector<double> out;
    out.reserve(1ULL << m);
    const double scale = std::ldexp(1.0, -m);
    for (std::uint64_t k = 0; k < (1ULL << m); ++k)
        out.push_back((phase + 2.0 * M_PI * static_cast<double>(k)) * scale);
    return out;
}

double angular_distance(double a, double b) { return std::abs(wrap_pi(a - b)); }

void RpeConfig::validate() const {
    if (!(xi > 0 && xi < 1)) throw ValidationError("rpe config: xi must lie in (0, 1)");
    if (!(eta > 0 && eta <= 1)) throw ValidationError("rpe config: eta must lie in (0, 1]");
    const double xi_min = (3.0 / M_PI) * std::asin((1.0 - eta) / eta);
    if (!(xi > xi_min)) throw ValidationError("rpe config: xi must exceed (3/pi) asin((1-eta)/eta)");
    if (m_rounds < 0 || m_rounds > 30) throw ValidationError("rpe config: m_rounds out of range");
}

RpeRun rpe_run(const SignalBackend& backend, const RpeConfig& cfg) {
    cfg.validate();
    if (cfg.infinite_samples && backend.mode != SignalMode::exact)
        throw ValidationError("rpe_run: infinite-sample mode requires the exact backend");

    CostModelConfig sched_cfg;
    sched_cfg.xi = cfg.xi;
    sched_cfg.eta = cfg.eta;
    sched_cfg.alpha_hoeffding = cfg.alpha_hoeffding;
    const auto schedule = sample_schedule(sched_cfg, cfg.m_rounds);

    RpeRun run;
    run.energy_shift = backend.energy_shift;
    run.energy_scale = backend.energy_scale;

    double theta_prev = 0.0;
    for (int m = 0; m <= cfg.m_rounds; ++m) {
        RpeRound round;
        round.m = m;
        round.t_m = 1ULL << m;
        round.n_shots = cfg.infinite_samples ? 0 : schedule[m];

        round.z_bar = cfg.infinite_samples ? exact_signal(backend, std::ldexp(1.0, m))
                                           : hadamard_shots(backend, m, schedule[m], cfg.seed);
        if (std::abs(round.z_bar) < 1e-6)
            throw RoundFailure("rpe_run: estimator magnitude below 1e-6, phase undefined", m);

        // The estimator mean follows e^{-i t E}; the candidate lattice
        // tracks +E when fed the conjugate phase.
        const double phase = -std::arg(round.z_bar);
        double best = 0.0, best_dist = -1.0;
        for (const double cand : rpe_candidates(phase, m)) {
            const double dist = angular_distance(cand, theta_prev);
            if (best_dist < 0 || dist < best_dist) {
                best_dist = dist;
                best = cand;
            }
        }
        round.theta_m = best;
        theta_prev = best;
        run.rounds.push_back(round);
    }

    run.theta_star = wrap_pi(theta_prev);
    if (backend.mode == SignalMode::circuit_partial_random) {
        // phase per product-formula application is delta * E_eff; the
        // identity component is never exponentiated
        run.energy_estimate = run.theta_star / backend.delta + backend.table.constant;
    } else {
        run.energy_estimate = run.theta_star * backend.energy_scale + backend.energy_shift;
    }
    return run;
}

}  // namespace prqpe
