#pragma once

#include <Eigen/Dense>
#include <vector>

namespace prqpe {

// Dense two-electron integral tensor in chemist index order (pq|rs).
struct TwoBodyTensor {
    int n = 0;
    std::vector<double> v;

    TwoBodyTensor() = default;
    explicit TwoBodyTensor(int n_orb) : n(n_orb), v(static_cast<std::size_t>(n_orb) * n_orb * n_orb * n_orb, 0.0) {}

    double& at(int p, int q, int r, int s) {
        return v[((static_cast<std::size_t>(p) * n + q) * n + r) * n + s];
    }
    double at(int p, int q, int r, int s) const {
        return v[((static_cast<std::size_t>(p) * n + q) * n + r) * n + s];
    }

    // Writes value into all eight chemist-symmetry-equivalent slots.
    void set_sym8(int p, int q, int r, int s, double value);
    bool empty() const { return v.empty(); }
};

// Active-space electron integrals plus the sector metadata every transform
// needs. Restricted data lives in (h, g); a spin-resolved instance (produced
// only in memory, e.g. by the spin symmetry shift) uses the per-spin blocks.
// Values are immutable by convention once constructed: transforms return
// fresh copies.
struct ElectronIntegrals {
    int n_orbitals = 0;
    int n_alpha = 0;
    int n_beta = 0;
    double core_energy = 0.0;
    bool spin_resolved = false;

    // restricted representation
    Eigen::MatrixXd h;
    TwoBodyTensor g;

    // spin-resolved representation; g_ud holds g^(up,down), the (down,up)
    // block is reached through g^(du)_pqrs = g^(ud)_rspq
    Eigen::MatrixXd h_up, h_dn;
    TwoBodyTensor g_uu, g_dd, g_ud;

    int n_electrons() const { return n_alpha + n_beta; }
    double s_z() const { return 0.5 * (n_alpha - n_beta); }

    static ElectronIntegrals zeros(int n_orbitals, int n_alpha, int n_beta);

    const Eigen::MatrixXd& h_block(int sigma) const {
        return spin_resolved ? (sigma == 0 ? h_up : h_dn) : h;
    }
    // sigma/tau: 0 = up, 1 = down
    double g_block(int sigma, int tau, int p, int q, int r, int s) const {
        if (!spin_resolved) return g.at(p, q, r, s);
        if (sigma == tau) return sigma == 0 ? g_uu.at(p, q, r, s) : g_dd.at(p, q, r, s);
        return sigma == 0 ? g_ud.at(p, q, r, s) : g_ud.at(r, s, p, q);
    }

    // Throws ValidationError if sector bounds or the symmetry invariants
    // (h symmetric, g 8-fold / per-block) are violated beyond 1e-12.
    void validate() const;

    ElectronIntegrals promoted_to_spin_resolved() const;
};

// k_pq = h_pq - (1/2) sum_r g_prrq
Eigen::MatrixXd effective_one_body(const ElectronIntegrals& x);
// Per-spin pair for spin-resolved inputs: k^(s) = h^(s) - (1/2) sum_r g^(ss)_prrq
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> effective_one_body_spin(const ElectronIntegrals& x);

}  // namespace prqpe
