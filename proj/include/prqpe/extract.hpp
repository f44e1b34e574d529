#pragma once

#include "prqpe/integrals.hpp"
#include "prqpe/parallel.hpp"
#include "prqpe/pauli.hpp"

namespace prqpe {

// Expands the electron integrals into the Pauli-LCU coefficient table via
// the Majorana monomial expansion under the Jordan-Wigner convention
// (spin-up orbitals on qubits 0..N-1, spin-down on N..2N-1). Terms with
// |c| < 1e-12 after accumulation are dropped; the identity component and
// core_energy land in `constant`. The coefficient multiset itself is
// independent of the mapping convention.
CoefficientTable extract_coefficients(const ElectronIntegrals& x, Exec exec = Exec::parallel);

// Magnitude floor applied during extraction.
inline constexpr double kCoefficientFloor = 1e-12;

}  // namespace prqpe
