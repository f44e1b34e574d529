#include "prqpe/extract.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "prqpe/errors.hpp"

namespace prqpe {

namespace {

// Pauli string with accumulated power of i: i^e * i^{|x&z|} X^x Z^z.
struct PhasedPauli {
    QubitBits x, z;
    int e = 0;  // mod 4
};

PhasedPauli multiply(const PhasedPauli& a, const PhasedPauli& b) {
    PhasedPauli r;
    r.x = a.x ^ b.x;
    r.z = a.z ^ b.z;
    r.e = (a.e + b.e + (a.x & a.z).popcount() + (b.x & b.z).popcount() - (r.x & r.z).popcount() +
           2 * (a.z & b.x).popcount()) &
          3;
    return r;
}

// Jordan-Wigner Majorana strings for fermionic mode j.
PhasedPauli majorana(int j) {
    PhasedPauli p;
    p.x.set(j);
    for (int k = 0; k < j; ++k) p.z.set(k);
    return p;
}

PhasedPauli majorana_bar(int j) {
    PhasedPauli p = majorana(j);
    p.z.set(j);
    return p;
}

struct Contribution {
    PauliMask mask;
    double coeff;
    std::uint64_t seq;  // deterministic tie order for the floating-point sum
};

// coefficient of i^e scaled by `pre`; the monomials of a Hermitian
// Hamiltonian always land on a real power
double real_coeff(double pre, int e) {
    switch (e & 3) {
        case 0: return pre;
        case 2: return -pre;
        default: throw ValidationError("extract: non-real Pauli coefficient (broken invariant)");
    }
}

}  // namespace

CoefficientTable extract_coefficients(const ElectronIntegrals& x, Exec exec) {
    x.validate();
    const int n = x.n_orbitals;
    const int nq = 2 * n;
    if (nq > QubitBits::kMaxQubits) throw ValidationError("extract: too many qubits for the mask width");

    const auto [k_up, k_dn] = effective_one_body_spin(x);
    auto mode = [&](int p, int sigma) { return p + sigma * n; };

    // Work is partitioned into deterministic blocks (one per leading orbital
    // index and kind) so the merge order, and therefore every floating-point
    // sum, is independent of the thread count.
    const int n_blocks = 3 * n;
    std::vector<std::vector<Contribution>> blocks(n_blocks);

    const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(dynamic) if (par)
    for (int blk = 0; blk < n_blocks; ++blk) {
        const int kind = blk / n;
        const int p = blk % n;
        auto& out = blocks[blk];

        if (kind == 0) {
            // one-body: (i/2) (k^s_pq + 1/2 sum_{r,t} g^{st}_pqrr) gamma_{ps} gbar_{qs}
            for (int sigma = 0; sigma < 2; ++sigma) {
                const Eigen::MatrixXd& k = sigma == 0 ? k_up : k_dn;
                for (int q = 0; q < n; ++q) {
                    double c = k(p, q);
                    for (int r = 0; r < n; ++r)
                        for (int tau = 0; tau < 2; ++tau) c += 0.5 * x.g_block(sigma, tau, p, q, r, r);
                    const PhasedPauli m = multiply(majorana(mode(p, sigma)), majorana_bar(mode(q, sigma)));
                    out.push_back({{m.x, m.z}, real_coeff(0.5 * c, m.e + 1), 0});
                }
            }
        } else if (kind == 1) {
            // same-spin: 1/4 (g^{ss}_pqrs - g^{ss}_psrq) gamma_p gamma_r gbar_q gbar_s, p>r, s>q
            for (int sigma = 0; sigma < 2; ++sigma)
                for (int r = 0; r < p; ++r)
                    for (int s = 0; s < n; ++s)
                        for (int q = 0; q < s; ++q) {
                            const double c = 0.25 * (x.g_block(sigma, sigma, p, q, r, s) -
                                                     x.g_block(sigma, sigma, p, s, r, q));
                            if (c == 0.0) continue;
                            PhasedPauli m = multiply(majorana(mode(p, sigma)), majorana(mode(r, sigma)));
                            m = multiply(m, majorana_bar(mode(q, sigma)));
                            m = multiply(m, majorana_bar(mode(s, sigma)));
                            out.push_back({{m.x, m.z}, real_coeff(c, m.e), 0});
                        }
        } else {
            // mixed-spin: 1/4 g^{ud}_pqrs gamma_{p,up} gamma_{r,dn} gbar_{q,up} gbar_{s,dn}
            for (int q = 0; q < n; ++q)
                for (int r = 0; r < n; ++r)
                    for (int s = 0; s < n; ++s) {
                        const double c = 0.25 * x.g_block(0, 1, p, q, r, s);
                        if (c == 0.0) continue;
                        PhasedPauli m = multiply(majorana(mode(p, 0)), majorana(mode(r, 1)));
                        m = multiply(m, majorana_bar(mode(q, 0)));
                        m = multiply(m, majorana_bar(mode(s, 1)));
                        out.push_back({{m.x, m.z}, real_coeff(c, m.e), 0});
                    }
        }
    }

    std::vector<Contribution> all;
    {
        std::size_t total = 0;
        for (const auto& b : blocks) total += b.size();
        all.reserve(total);
        std::uint64_t seq = 0;
        for (auto& b : blocks)
            for (auto& c : b) {
                c.seq = seq++;
                all.push_back(c);
            }
    }
    std::sort(all.begin(), all.end(), [](const Contribution& a, const Contribution& b) {
        if (a.mask != b.mask) return a.mask < b.mask;
        return a.seq < b.seq;
    });

    CoefficientTable table;
    table.n_qubits = nq;

    // identity coefficient: 2^{-Nq} Tr(H), in closed form
    double constant = x.core_energy;
    for (int sigma = 0; sigma < 2; ++sigma) {
        const Eigen::MatrixXd& h = x.h_block(sigma);
        for (int p = 0; p < n; ++p) constant += 0.5 * h(p, p);
    }
    double two = 0.0;
    for (int sigma = 0; sigma < 2; ++sigma)
        for (int tau = 0; tau < 2; ++tau)
            for (int p = 0; p < n; ++p)
                for (int r = 0; r < n; ++r) {
                    if (sigma != tau)
                        two += 0.25 * x.g_block(sigma, tau, p, p, r, r);
                    else if (p != r)
                        two += 0.25 * (x.g_block(sigma, sigma, p, p, r, r) -
                                       x.g_block(sigma, sigma, p, r, r, p));
                }
    constant += 0.5 * two;
    table.constant = constant;

    for (std::size_t i = 0; i < all.size();) {
        const PauliMask mask = all[i].mask;
        double acc = 0.0;
        while (i < all.size() && all[i].mask == mask) acc += all[i++].coeff;
        if (mask.is_identity()) {
            // monomials never produce the identity; guard anyway
            table.constant += acc;
            continue;
        }
        if (std::abs(acc) >= kCoefficientFloor) table.terms.push_back({mask, acc});
    }
    return table;
}

}  // namespace prqpe
