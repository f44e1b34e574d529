#include "prqpe/transforms.hpp"

#include <cmath>
#include <complex>

#include "prqpe/errors.hpp"
#include "prqpe/extract.hpp"

namespace prqpe {

namespace {

constexpr double kSymTol = 1e-12;
constexpr double kOrthTol = 1e-10;

void require_symmetric(const Eigen::MatrixXd& m, int n, const char* name) {
    if (m.rows() != n || m.cols() != n)
        throw ValidationError(std::string(name) + ": wrong shape");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymTol)
        throw ValidationError(std::string(name) + ": matrix must be symmetric");
}

// One four-index basis change: four rounds of "contract leading index with
// U, then rotate the index cycle". Contraction runs as a dense (n x n^3)
// matrix product; the cyclic permutation is the parallel kernel.
TwoBodyTensor rotate_two_body(const TwoBodyTensor& g, const Eigen::MatrixXd& u, Exec exec) {
    const int n = g.n;
    const std::size_t n3 = static_cast<std::size_t>(n) * n * n;
    TwoBodyTensor cur = g;
    TwoBodyTensor tmp(n);
    const bool par = exec == Exec::parallel;

    for (int round = 0; round < 4; ++round) {
        // contracted[a, j, k, l] = sum_p U_pa cur[p, j, k, l]
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> cm(
            cur.v.data(), n, static_cast<Eigen::Index>(n3));
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> contracted =
            u.transpose() * cm;

        // tmp[j, k, l, a] = contracted[a, j, k, l]; contiguous writes per jkl
#pragma omp parallel for schedule(static) if (par)
        for (std::int64_t jkl = 0; jkl < static_cast<std::int64_t>(n3); ++jkl) {
            double* dst = tmp.v.data() + static_cast<std::size_t>(jkl) * n;
            const double* src = contracted.data() + jkl;
            for (int a = 0; a < n; ++a) dst[a] = src[static_cast<std::size_t>(a) * n3];
        }
        std::swap(cur.v, tmp.v);
    }
    return cur;
}

}  // namespace

Eigen::MatrixXd skew_from_packed(const Eigen::VectorXd& kappa, int n) {
    if (kappa.size() != TransformParams::n_kappa(n))
        throw ValidationError("orbital rotation: kappa has wrong length");
    if (!kappa.allFinite()) throw ValidationError("orbital rotation: kappa must be finite");
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    int idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            k(i, j) = kappa(idx);
            k(j, i) = -kappa(idx);
            ++idx;
        }
    return k;
}

Eigen::MatrixXd orbital_rotation_matrix(const Eigen::VectorXd& kappa, int n) {
    const Eigen::MatrixXd k = skew_from_packed(kappa, n);
    // iK is Hermitian; exp(-K) = V diag(e^{i w}) V^dagger is real orthogonal
    const std::complex<double> im(0.0, 1.0);
    Eigen::MatrixXcd ik = im * k.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ik);
    Eigen::VectorXcd phases(n);
    for (int i = 0; i < n; ++i) phases(i) = std::exp(im * es.eigenvalues()(i));
    Eigen::MatrixXcd uc = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    Eigen::MatrixXd u = uc.real();
    if ((u.transpose() * u - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > kOrthTol)
        throw ValidationError("orbital rotation: exp(-K) lost orthogonality");
    return u;
}

ElectronIntegrals apply_orbital_rotation_matrix(const ElectronIntegrals& x, const Eigen::MatrixXd& u,
                                                Exec exec) {
    const int n = x.n_orbitals;
    if (u.rows() != n || u.cols() != n) throw ValidationError("orbital rotation: U has wrong shape");
    ElectronIntegrals out = x;
    if (!x.spin_resolved) {
        out.h = u.transpose() * x.h * u;
        out.g = rotate_two_body(x.g, u, exec);
    } else {
        out.h_up = u.transpose() * x.h_up * u;
        out.h_dn = u.transpose() * x.h_dn * u;
        out.g_uu = rotate_two_body(x.g_uu, u, exec);
        out.g_dd = rotate_two_body(x.g_dd, u, exec);
        out.g_ud = rotate_two_body(x.g_ud, u, exec);
    }
    return out;
}

ElectronIntegrals apply_orbital_rotation(const ElectronIntegrals& x, const Eigen::VectorXd& kappa,
                                         Exec exec) {
    return apply_orbital_rotation_matrix(x, orbital_rotation_matrix(kappa, x.n_orbitals), exec);
}

namespace {

void bliss_one_body(Eigen::MatrixXd& h, double mu1, double mu2, const Eigen::MatrixXd& xi,
                    int n_electrons) {
    const int n = static_cast<int>(h.rows());
    for (int p = 0; p < n; ++p) h(p, p) -= mu1 + mu2;
    h += (n_electrons - 1) * xi;
}

void bliss_two_body(TwoBodyTensor& g, double mu2, const Eigen::MatrixXd& xi) {
    const int n = g.n;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s) {
                    // the two shift contributions are added in value order so
                    // that pair-swapped slots receive bit-identical updates
                    double u = r == s ? xi(p, q) : 0.0;
                    double v = p == q ? xi(r, s) : 0.0;
                    if (u > v) std::swap(u, v);
                    const double d = (p == q && r == s ? 2.0 * mu2 : 0.0) + u + v;
                    if (d != 0.0) g.at(p, q, r, s) -= d;
                }
}

}  // namespace

ElectronIntegrals apply_bliss(const ElectronIntegrals& x, double mu1, double mu2,
                              const Eigen::MatrixXd& xi_shift, int n_electrons) {
    const int n = x.n_orbitals;
    require_symmetric(xi_shift, n, "bliss xi");
    ElectronIntegrals out = x;
    if (!x.spin_resolved) {
        bliss_one_body(out.h, mu1, mu2, xi_shift, n_electrons);
        bliss_two_body(out.g, mu2, xi_shift);
    } else {
        bliss_one_body(out.h_up, mu1, mu2, xi_shift, n_electrons);
        bliss_one_body(out.h_dn, mu1, mu2, xi_shift, n_electrons);
        bliss_two_body(out.g_uu, mu2, xi_shift);
        bliss_two_body(out.g_dd, mu2, xi_shift);
        bliss_two_body(out.g_ud, mu2, xi_shift);
    }
    out.core_energy += mu1 * n_electrons + mu2 * static_cast<double>(n_electrons) * n_electrons;
    return out;
}

ElectronIntegrals apply_spin_bliss(const ElectronIntegrals& x, double nu1, double nu2, double nu3,
                                   const std::array<Eigen::MatrixXd, 3>& zeta, int n_electrons,
                                   double s_z) {
    const int n = x.n_orbitals;
    for (int j = 0; j < 3; ++j) require_symmetric(zeta[j], n, "spin-bliss zeta");

    ElectronIntegrals out = x.promoted_to_spin_resolved();

    for (int spin = 0; spin < 2; ++spin) {
        const double sg = spin == 0 ? 1.0 : -1.0;
        Eigen::MatrixXd& h = spin == 0 ? out.h_up : out.h_dn;
        for (int p = 0; p < n; ++p) h(p, p) -= 0.5 * nu1 * sg;
        h += (s_z - 0.5 * sg) * zeta[0] + sg * (n_electrons - 1) * zeta[1] + (sg * s_z - 0.5) * zeta[2];
    }

    auto update_g = [&](TwoBodyTensor& g, double sg, double tu) {
        auto left = [&](int i, int j) {
            return 0.5 * tu * zeta[0](i, j) + sg * zeta[1](i, j) + 0.5 * sg * tu * zeta[2](i, j);
        };
        auto right = [&](int i, int j) {
            return 0.5 * sg * zeta[0](i, j) + tu * zeta[1](i, j) + 0.5 * sg * tu * zeta[2](i, j);
        };
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
                for (int r = 0; r < n; ++r)
                    for (int s = 0; s < n; ++s) {
                        // value-ordered addition keeps pair-swapped same-spin
                        // slots bit-identical
                        double u = r == s ? left(p, q) : 0.0;
                        double v = p == q ? right(r, s) : 0.0;
                        if (u > v) std::swap(u, v);
                        const double d =
                            (p == q && r == s ? 0.5 * (nu2 * sg * tu + nu3 * (sg + tu)) : 0.0) + u + v;
                        if (d != 0.0) g.at(p, q, r, s) -= d;
                    }
    };
    update_g(out.g_uu, 1.0, 1.0);
    update_g(out.g_dd, -1.0, -1.0);
    update_g(out.g_ud, 1.0, -1.0);

    out.core_energy += nu1 * s_z + nu2 * (s_z * s_z - 0.25 * n_electrons) +
                       nu3 * s_z * (n_electrons - 1);
    return out;
}

CholeskyFactorization cholesky_factorize(const ElectronIntegrals& x, double tol) {
    if (x.spin_resolved) throw ValidationError("cholesky: restricted integrals required");
    const int n = x.n_orbitals;
    const int nn = n * n;
    const TwoBodyTensor& g = x.g;

    auto gmat = [&](int row, int col) {
        return g.at(row / n, row % n, col / n, col % n);
    };

    CholeskyFactorization f;
    std::vector<Eigen::VectorXd> ell;  // n^2-length Cholesky columns
    Eigen::VectorXd diag(nn);
    for (int i = 0; i < nn; ++i) diag(i) = gmat(i, i);

    while (true) {
        int pivot = 0;
        for (int i = 1; i < nn; ++i)
            if (diag(i) > diag(pivot)) pivot = i;
        if (diag.minCoeff() < -tol)
            throw ValidationError("cholesky: two-electron tensor is not positive semidefinite");
        if (diag(pivot) <= tol) break;

        Eigen::VectorXd col(nn);
        for (int i = 0; i < nn; ++i) col(i) = gmat(i, pivot);
        for (const auto& prev : ell) col -= prev(pivot) * prev;
        col /= std::sqrt(diag(pivot));
        for (int i = 0; i < nn; ++i) diag(i) -= col(i) * col(i);
        ell.push_back(std::move(col));
        if (static_cast<int>(ell.size()) == nn) break;
    }

    f.rank = static_cast<int>(ell.size());
    for (const auto& col : ell) {
        Eigen::MatrixXd l(n, n);
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) l(p, q) = col(p * n + q);
        // rows (pq) and (qp) of the PSD matrix coincide, so L is symmetric
        l = 0.5 * (l + l.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l);
        f.vectors.push_back(l);
        f.eigenbases.push_back(es.eigenvectors());
        f.eigenvalues.push_back(es.eigenvalues());
    }
    return f;
}

std::vector<BasisCandidate> cholesky_basis_candidates(const ElectronIntegrals& x, double tol,
                                                      Exec exec) {
    const CholeskyFactorization f = cholesky_factorize(x, tol);
    std::vector<BasisCandidate> out(f.rank + 1);
    out[0].integrals = x;

    const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(dynamic) if (par)
    for (int t = 0; t < f.rank + 1; ++t) {
        if (t > 0) out[t].integrals = apply_orbital_rotation_matrix(x, f.eigenbases[t - 1], Exec::serial);
        out[t].l1 = extract_coefficients(out[t].integrals, Exec::serial).l1();
    }
    return out;
}

const BasisCandidate& select_min_l1(const std::vector<BasisCandidate>& candidates) {
    if (candidates.empty()) throw ValidationError("select_min_l1: empty candidate list");
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i)
        if (candidates[i].l1 < candidates[best].l1) best = i;
    return candidates[best];
}

}  // namespace prqpe
