#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "prqpe/parallel.hpp"
#include "prqpe/pauli.hpp"

namespace prqpe {

// Largest qubit count the dense oracle will materialize (2^14 amplitudes
// squared for matrices).
inline constexpr int kDenseQubitLimit = 14;

// <b ^ x| P |b> for P = i^{|x&z|} X^x Z^z with basis index b (low 64 bits).
std::complex<double> pauli_entry(const PauliMask& m, std::uint64_t b);

// Dense Hermitian matrix sum c_l P_l + constant * I.
Eigen::MatrixXcd jw_matrix(const CoefficientTable& table, Exec exec = Exec::parallel);

using Statevector = std::vector<std::complex<double>>;

// In-place e^{i theta P} |psi> via mask-pair traversal.
void apply_pauli_rotation(Statevector& psi, const PauliMask& m, double theta, int n_qubits,
                          Exec exec = Exec::parallel);

}  // namespace prqpe
