#pragma once

#include <Eigen/Dense>
#include <vector>

#include "prqpe/integrals.hpp"
#include "prqpe/parallel.hpp"

namespace prqpe {

// Parameter bundles for the spectrally-invariant transformation family.
// kappa: strict upper triangle of the skew-symmetric generator, row-major.
// xi_shift / zeta: symmetric N x N shift matrices.
struct TransformParams {
    Eigen::VectorXd kappa;                // N(N-1)/2
    double mu1 = 0.0, mu2 = 0.0;          // particle-number shift scalars
    Eigen::MatrixXd xi_shift;             // N x N symmetric
    double nu1 = 0.0, nu2 = 0.0, nu3 = 0.0;
    std::array<Eigen::MatrixXd, 3> zeta;  // three N x N symmetric matrices

    static int n_kappa(int n) { return n * (n - 1) / 2; }
    static int n_bliss(int n) { return 2 + n * (n + 1) / 2; }
    static int n_spin_bliss(int n) { return 3 + 3 * (n * (n + 1) / 2); }
};

// Skew-symmetric K from the packed upper triangle, and its orthogonal
// exponential exp(-K) computed through the Hermitian eigendecomposition of
// iK (orthogonal to machine precision).
Eigen::MatrixXd skew_from_packed(const Eigen::VectorXd& kappa, int n);
Eigen::MatrixXd orbital_rotation_matrix(const Eigen::VectorXd& kappa, int n);

// Basis rotation of the integrals by an explicit orthogonal U:
//   h' = U^T h U,  g' contracted with U on all four indices.
ElectronIntegrals apply_orbital_rotation_matrix(const ElectronIntegrals& x, const Eigen::MatrixXd& u,
                                                Exec exec = Exec::parallel);
ElectronIntegrals apply_orbital_rotation(const ElectronIntegrals& x, const Eigen::VectorXd& kappa,
                                         Exec exec = Exec::parallel);

// Particle-number symmetry shift: spectrum in the N_e sector is preserved.
ElectronIntegrals apply_bliss(const ElectronIntegrals& x, double mu1, double mu2,
                              const Eigen::MatrixXd& xi_shift, int n_electrons);

// Spin-extended shift; output is spin-resolved (restricted inputs are
// promoted). Preserves the (N_e, S_z) sector spectrum.
ElectronIntegrals apply_spin_bliss(const ElectronIntegrals& x, double nu1, double nu2, double nu3,
                                   const std::array<Eigen::MatrixXd, 3>& zeta, int n_electrons,
                                   double s_z);

struct CholeskyFactorization {
    std::vector<Eigen::MatrixXd> vectors;      // symmetric L^(t)
    std::vector<Eigen::MatrixXd> eigenbases;   // orthogonal U^(t)
    std::vector<Eigen::VectorXd> eigenvalues;  // W^(t)
    int rank = 0;
};

// Pivoted Cholesky of g viewed as an N^2 x N^2 PSD matrix, truncated when
// the residual diagonal falls to `tol`. Throws if a pivot is below -tol.
CholeskyFactorization cholesky_factorize(const ElectronIntegrals& x, double tol = 1e-8);

struct BasisCandidate {
    ElectronIntegrals integrals;
    double l1 = 0.0;
};

// Identity basis plus one candidate per Cholesky eigenbasis, each tagged
// with the l1-norm of its Pauli-LCU expansion.
std::vector<BasisCandidate> cholesky_basis_candidates(const ElectronIntegrals& x, double tol = 1e-8,
                                                      Exec exec = Exec::parallel);

// Candidate with the smallest l1; earliest wins ties (identity is first).
const BasisCandidate& select_min_l1(const std::vector<BasisCandidate>& candidates);

}  // namespace prqpe
