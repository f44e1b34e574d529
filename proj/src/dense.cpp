#include "prqpe/dense.hpp"

#include <bit>
#include <cmath>

#include "prqpe/errors.hpp"

namespace prqpe {

namespace {
constexpr std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
}

std::complex<double> pauli_entry(const PauliMask& m, std::uint64_t b) {
    const int e = (m.x_bits & m.z_bits).popcount() & 3;
    const int sign = std::popcount(b & m.z_bits.w[0]) & 1;
    return kIPow[e] * (sign ? -1.0 : 1.0);
}

Eigen::MatrixXcd jw_matrix(const CoefficientTable& table, Exec exec) {
    const int nq = table.n_qubits;
    if (nq <= 0 || nq > kDenseQubitLimit)
        throw ValidationError("jw_matrix: n_qubits must be in [1, " + std::to_string(kDenseQubitLimit) + "]");
    const std::uint64_t dim = 1ULL << nq;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::uint64_t b = 0; b < dim; ++b) m(b, b) = table.constant;

    const bool par = exec == Exec::parallel;
    for (const auto& term : table.terms) {
        const std::uint64_t x = term.mask.x_bits.w[0];
        const std::uint64_t z = term.mask.z_bits.w[0];
        const int e = (term.mask.x_bits & term.mask.z_bits).popcount() & 3;
        const std::complex<double> base = kIPow[e] * term.coefficient;
#pragma omp parallel for schedule(static) if (par)
        for (std::int64_t b = 0; b < static_cast<std::int64_t>(dim); ++b) {
            const int sign = std::popcount(static_cast<std::uint64_t>(b) & z) & 1;
            m(b ^ x, b) += sign ? -base : base;
        }
    }
    return m;
}

void apply_pauli_rotation(Statevector& psi, const PauliMask& mask, double theta, int n_qubits,
                          Exec exec) {
    if (n_qubits > kDenseQubitLimit) throw ValidationError("apply_pauli_rotation: statevector too large");
    const std::uint64_t dim = 1ULL << n_qubits;
    if (psi.size() != dim) throw ValidationError("apply_pauli_rotation: statevector size mismatch");

    const std::uint64_t x = mask.x_bits.w[0];
    const std::uint64_t z = mask.z_bits.w[0];
    const double c = std::cos(theta), s = std::sin(theta);
    const bool par = exec == Exec::parallel;

    if (x == 0) {
        // diagonal: amplitudes pick up e^{+/- i theta}
        const std::complex<double> plus(c, s), minus(c, -s);
#pragma omp parallel for schedule(static) if (par)
        for (std::int64_t b = 0; b < static_cast<std::int64_t>(dim); ++b)
            psi[b] *= (std::popcount(static_cast<std::uint64_t>(b) & z) & 1) ? minus : plus;
        return;
    }

    const int pivot = std::countr_zero(x);
    const std::uint64_t low = (1ULL << pivot) - 1;
    const int e = (mask.x_bits & mask.z_bits).popcount() & 3;
    const std::complex<double> is_base = kIPow[e] * std::complex<double>(0, s);

#pragma omp parallel for schedule(static) if (par)
    for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(dim / 2); ++idx) {
        const std::uint64_t b = ((static_cast<std::uint64_t>(idx) & ~low) << 1) |
                                (static_cast<std::uint64_t>(idx) & low);
        const std::uint64_t bx = b ^ x;
        // f(b) = i^{|x&z|} (-1)^{|b&z|}: P|b> = f(b)|b^x>
        const std::complex<double> fb = (std::popcount(b & z) & 1) ? -is_base : is_base;
        const std::complex<double> fbx = (std::popcount(bx & z) & 1) ? -is_base : is_base;
        const std::complex<double> vb = psi[b], vbx = psi[bx];
        psi[b] = c * vb + fbx * vbx;
        psi[bx] = c * vbx + fb * vb;
    }
}

}  // namespace prqpe
