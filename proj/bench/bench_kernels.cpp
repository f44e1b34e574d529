// Kernel benchmark: OpenMP implementations against their serial references.
// Usage: bench_kernels [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "prqpe/dense.hpp"
#include "prqpe/extract.hpp"
#include "prqpe/integrals.hpp"
#include "prqpe/parallel.hpp"
#include "prqpe/rng.hpp"
#include "prqpe/transforms.hpp"

using namespace prqpe;

namespace {

double seconds_of(const std::function<void()>& fn, int repeats) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

void row(const char* name, double serial_s, double parallel_s) {
    std::printf("%-34s %10.4f ms %10.4f ms %8.2fx\n", name, serial_s * 1e3, parallel_s * 1e3,
                serial_s / parallel_s);
}

ElectronIntegrals random_integrals(std::uint64_t seed, int n) {
    CounterRng rng(seed);
    ElectronIntegrals x = ElectronIntegrals::zeros(n, n / 2, n / 2);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q <= p; ++q) {
            const double v = rng.uniform() - 0.5;
            x.h(p, q) = v;
            x.h(q, p) = v;
        }
    for (int p = 0; p < n; ++p)
        for (int q = 0; q <= p; ++q)
            for (int r = 0; r <= p; ++r)
                for (int s = 0; s <= r; ++s) {
                    if (r == p && s > q) continue;
                    x.g.set_sym8(p, q, r, s, rng.uniform() - 0.5);
                }
    return x;
}

}  // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
    std::printf("threads: %d, repeats: %d\n\n", max_threads(), repeats);
    std::printf("%-34s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    {  // statevector Pauli rotation, 14 qubits
        const int nq = 14;
        Statevector psi(1ULL << nq);
        CounterRng rng(7);
        for (auto& a : psi) a = {rng.uniform() - 0.5, rng.uniform() - 0.5};
        PauliMask mask;
        mask.x_bits.w[0] = 0x2a55;
        mask.z_bits.w[0] = 0x1f0f;
        auto run = [&](Exec e) {
            Statevector v = psi;
            for (int i = 0; i < 20; ++i) apply_pauli_rotation(v, mask, 0.013 * (i + 1), nq, e);
        };
        row("pauli rotation (n=14, 20 gates)",
            seconds_of([&] { run(Exec::serial); }, repeats),
            seconds_of([&] { run(Exec::parallel); }, repeats));
    }

    {  // two-body basis rotation, N = 40
        const int n = 40;
        const ElectronIntegrals x = random_integrals(11, n);
        CounterRng rng(13);
        Eigen::VectorXd kappa(TransformParams::n_kappa(n));
        for (int i = 0; i < kappa.size(); ++i) kappa(i) = 0.02 * (rng.uniform() - 0.5);
        row("orbital rotation (N=40)",
            seconds_of([&] { apply_orbital_rotation(x, kappa, Exec::serial); }, repeats),
            seconds_of([&] { apply_orbital_rotation(x, kappa, Exec::parallel); }, repeats));
    }

    {  // Pauli-LCU extraction, N = 16
        const ElectronIntegrals x = random_integrals(17, 16);
        row("coefficient extraction (N=16)",
            seconds_of([&] { extract_coefficients(x, Exec::serial); }, repeats),
            seconds_of([&] { extract_coefficients(x, Exec::parallel); }, repeats));
    }

    {  // dense matrix assembly, 12 qubits
        const ElectronIntegrals x = random_integrals(23, 6);
        const CoefficientTable t = extract_coefficients(x);
        row("dense assembly (n=12)",
            seconds_of([&] { jw_matrix(t, Exec::serial); }, repeats),
            seconds_of([&] { jw_matrix(t, Exec::parallel); }, repeats));
    }

    return 0;
}
