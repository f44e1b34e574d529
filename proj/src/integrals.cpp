#include "prqpe/integrals.hpp"

#include <cmath>
#include <string>

#include "prqpe/errors.hpp"

namespace prqpe {

namespace {
constexpr double kSymTol = 1e-12;
}

void TwoBodyTensor::set_sym8(int p, int q, int r, int s, double value) {
    at(p, q, r, s) = value;
    at(q, p, r, s) = value;
    at(p, q, s, r) = value;
    at(q, p, s, r) = value;
    at(r, s, p, q) = value;
    at(s, r, p, q) = value;
    at(r, s, q, p) = value;
    at(s, r, q, p) = value;
}

ElectronIntegrals ElectronIntegrals::zeros(int n_orbitals, int n_alpha, int n_beta) {
    ElectronIntegrals x;
    x.n_orbitals = n_orbitals;
    x.n_alpha = n_alpha;
    x.n_beta = n_beta;
    x.h = Eigen::MatrixXd::Zero(n_orbitals, n_orbitals);
    x.g = TwoBodyTensor(n_orbitals);
    return x;
}

void ElectronIntegrals::validate() const {
    const int n = n_orbitals;
    if (n <= 0) throw ValidationError("integrals: n_orbitals must be positive");
    if (n_alpha < 0 || n_beta < 0 || n_alpha > n || n_beta > n)
        throw ValidationError("integrals: electron counts outside [0, N]");

    // 1e-12 at unit scale; scale-aware above it so that large shift
    // parameters do not trip the check on representation roundoff
    auto tol_at = [](double a, double b) { return kSymTol * std::max(1.0, std::max(std::abs(a), std::abs(b))); };
    auto check_sym = [&](const Eigen::MatrixXd& m, const char* name) {
        if (m.rows() != n || m.cols() != n)
            throw ValidationError(std::string("integrals: ") + name + " has wrong shape");
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < p; ++q)
                if (std::abs(m(p, q) - m(q, p)) > tol_at(m(p, q), m(q, p)))
                    throw ValidationError(std::string("integrals: ") + name + " is not symmetric");
    };

    if (!spin_resolved) {
        check_sym(h, "h");
        for (int p = 0; p < n; ++p)
            for (int q = 0; q <= p; ++q)
                for (int r = 0; r < n; ++r)
                    for (int s = 0; s <= r; ++s) {
                        const double v = g.at(p, q, r, s);
                        if (std::abs(g.at(q, p, r, s) - v) > tol_at(g.at(q, p, r, s), v) ||
                            std::abs(g.at(p, q, s, r) - v) > tol_at(g.at(p, q, s, r), v) ||
                            std::abs(g.at(r, s, p, q) - v) > tol_at(g.at(r, s, p, q), v))
                            throw ValidationError("integrals: g violates 8-fold symmetry");
                    }
    } else {
        check_sym(h_up, "h_up");
        check_sym(h_dn, "h_dn");
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
                for (int r = 0; r < n; ++r)
                    for (int s = 0; s < n; ++s) {
                        const double uu = g_uu.at(p, q, r, s);
                        const double dd = g_dd.at(p, q, r, s);
                        const double ud = g_ud.at(p, q, r, s);
                        if (std::abs(uu - g_uu.at(r, s, p, q)) > tol_at(uu, g_uu.at(r, s, p, q)) ||
                            std::abs(dd - g_dd.at(r, s, p, q)) > tol_at(dd, g_dd.at(r, s, p, q)))
                            throw ValidationError("integrals: same-spin g violates pair-swap symmetry");
                        if (std::abs(ud - g_ud.at(q, p, r, s)) > tol_at(ud, g_ud.at(q, p, r, s)) ||
                            std::abs(ud - g_ud.at(p, q, s, r)) > tol_at(ud, g_ud.at(p, q, s, r)))
                            throw ValidationError("integrals: mixed-spin g violates index symmetry");
                    }
    }
}

ElectronIntegrals ElectronIntegrals::promoted_to_spin_resolved() const {
    if (spin_resolved) return *this;
    ElectronIntegrals out = *this;
    out.spin_resolved = true;
    out.h_up = h;
    out.h_dn = h;
    out.g_uu = g;
    out.g_dd = g;
    out.g_ud = g;
    out.h.resize(0, 0);
    out.g = TwoBodyTensor{};
    return out;
}

namespace {

Eigen::MatrixXd one_body_kernel(const Eigen::MatrixXd& h, const TwoBodyTensor& g) {
    const int n = static_cast<int>(h.rows());
    Eigen::MatrixXd k = h;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            double acc = 0.0;
            for (int r = 0; r < n; ++r) acc += g.at(p, r, r, q);
            k(p, q) -= 0.5 * acc;
        }
    return k;
}

}  // namespace

Eigen::MatrixXd effective_one_body(const ElectronIntegrals& x) {
    if (x.spin_resolved)
        throw ValidationError("effective_one_body: spin-resolved input, use effective_one_body_spin");
    return one_body_kernel(x.h, x.g);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> effective_one_body_spin(const ElectronIntegrals& x) {
    if (!x.spin_resolved) {
        Eigen::MatrixXd k = one_body_kernel(x.h, x.g);
        return {k, k};
    }
    return {one_body_kernel(x.h_up, x.g_uu), one_body_kernel(x.h_dn, x.g_dd)};
}

}  // namespace prqpe
