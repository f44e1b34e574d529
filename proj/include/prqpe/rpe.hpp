#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "prqpe/costmodel.hpp"
#include "prqpe/dense.hpp"
#include "prqpe/pauli.hpp"

namespace prqpe {

enum class SignalMode { exact, sampled_exact, circuit_partial_random };

// Signal source for the Hadamard-test estimator. The exact and sampled
// modes draw from the spectral decomposition p_k, E_k (energies already
// scaled into the aliasing-safe window); the circuit mode runs statevector
// realizations of the partially randomized product formula.
struct SignalBackend {
    SignalMode mode = SignalMode::exact;

    // exact / sampled_exact
    std::vector<double> energies;  // scaled E_k
    std::vector<double> weights;   // p_k = |<psi_k|psi>|^2

    // circuit_partial_random
    CoefficientTable table;  // sorted
    double delta = 0.0;
    CostModelConfig cost_cfg;
    Statevector psi;
    int n_qubits = 0;

    // recorded scale metadata: E_original = scale * E_scaled + shift
    double energy_shift = 0.0;
    double energy_scale = 1.0;
};

// Spectral backend from a dense Hermitian Hamiltonian and a normalized
// initial state. Energies are shifted/scaled into (-pi(1-margin), ...)
// using a Gershgorin window unless an explicit (shift, scale) is given.
SignalBackend make_spectral_backend(const Eigen::MatrixXcd& hamiltonian, const Statevector& psi,
                                    SignalMode mode, double margin = 0.1);
SignalBackend make_spectral_backend_scaled(const Eigen::MatrixXcd& hamiltonian, const Statevector& psi,
                                           SignalMode mode, double shift, double scale);

SignalBackend make_circuit_backend(const CoefficientTable& sorted_table, double delta,
                                   const CostModelConfig& cost_cfg, Statevector psi, int n_qubits);

// g(t) = sum_k p_k e^{-i t E_k} on the scaled spectrum.
std::complex<double> exact_signal(const SignalBackend& backend, double t);

// Sampling-mean Hadamard estimator at evolution index m (t = 2^m unitary
// applications); n_shots must be even, half real half imaginary.
std::complex<double> hadamard_shots(const SignalBackend& backend, int m, std::uint64_t n_shots,
                                    std::uint64_t seed);

// One stochastic realization of the round-m partially randomized circuit,
// returning <psi| W |psi>.
std::complex<double> partial_random_amplitude(const SignalBackend& backend, int m,
                                              std::uint64_t shot_index, std::uint64_t seed);

struct RpeConfig {
    double xi = 0.1;
    double eta = 0.95;
    double alpha_hoeffding = 10.0;
    int m_rounds = 6;
    bool infinite_samples = false;  // exact mode only: bypass the Bernoulli layer
    std::uint64_t seed = 1;

    void validate() const;
};

struct RpeRound {
    int m = 0;
    std::uint64_t t_m = 0;
    std::uint64_t n_shots = 0;
    std::complex<double> z_bar;
    double theta_m = 0.0;
};

struct RpeRun {
    std::vector<RpeRound> rounds;
    double theta_star = 0.0;       // final lattice estimate, in (-pi, pi]
    double energy_estimate = 0.0;  // theta_star mapped back to input units
    double energy_shift = 0.0;
    double energy_scale = 1.0;
};

// Candidate energies of round m for a measured phase angle:
// { (phase + 2 pi k) / 2^m }, k = 0 .. 2^m - 1.
std::vector<double> rpe_candidates(double phase, int m);

// min_n |a - b + 2 pi n|
double angular_distance(double a, double b);

// Full multi-round robust phase estimation against the chosen backend.
RpeRun rpe_run(const SignalBackend& backend, const RpeConfig& cfg);

}  // namespace prqpe
