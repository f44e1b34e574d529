#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "oracles.hpp"
#include "prqpe/dense.hpp"
#include "prqpe/errors.hpp"
#include "prqpe/extract.hpp"
#include "prqpe/pauli.hpp"

using namespace prqpe;

namespace {

PauliMask mask_of(const std::string& xs, const std::string& zs) {
    PauliMask m;
    m.x_bits = QubitBits::from_hex(xs);
    m.z_bits = QubitBits::from_hex(zs);
    return m;
}

CoefficientTable table_of(int nq, std::vector<std::pair<PauliMask, double>> terms) {
    CoefficientTable t;
    t.n_qubits = nq;
    for (auto& [m, c] : terms) t.terms.push_back({m, c});
    return t;
}

ElectronIntegrals one_orbital(double h, double g) {
    ElectronIntegrals x = ElectronIntegrals::zeros(1, 1, 1);
    x.h(0, 0) = h;
    x.g.at(0, 0, 0, 0) = g;
    return x;
}

double coefficient_of(const CoefficientTable& t, const PauliMask& m) {
    for (const auto& term : t.terms)
        if (term.mask == m) return term.coefficient;
    return 0.0;
}

}  // namespace

TEST_CASE("QubitBits hex round-trip and ordering") {
    QubitBits b;
    b.set(0);
    b.set(5);
    b.set(70);
    CHECK(QubitBits::from_hex(b.hex()) == b);
    CHECK(b.hex() == "400000000000000021");
    QubitBits small;
    small.set(1);
    CHECK(small < b);
    CHECK(small.hex() == "2");
}

TEST_CASE("PauliMask string form") {
    CHECK(mask_of("3", "2").str(2) == "X0 Y1");
    CHECK(mask_of("0", "1").str(2) == "Z0");
    CHECK(mask_of("0", "0").str(2) == "I");
}

TEST_CASE("l1_norm basics") {
    CHECK(table_of(2, {{mask_of("1", "0"), 0.5}}).l1() == doctest::Approx(0.5));
    CHECK(table_of(2, {{mask_of("1", "0"), 0.3}, {mask_of("2", "0"), -0.2}}).l1() ==
          doctest::Approx(0.5));
}

TEST_CASE("prepare_sorted: magnitude order with mask tie-break, idempotent") {
    CoefficientTable t = table_of(2, {{mask_of("1", "0"), 0.1},
                                      {mask_of("2", "0"), 0.5},
                                      {mask_of("3", "0"), -0.3}});
    const CoefficientTable s = prepare_sorted(t);
    CHECK(s.terms[0].coefficient == doctest::Approx(0.5));
    CHECK(std::abs(s.terms[1].coefficient) == doctest::Approx(0.3));
    CHECK(std::abs(s.terms[2].coefficient) == doctest::Approx(0.1));

    // equal magnitudes +-0.2 on masks A < B: A first
    CoefficientTable u = table_of(2, {{mask_of("2", "1"), -0.2}, {mask_of("1", "1"), 0.2}});
    const CoefficientTable su = prepare_sorted(u);
    CHECK(su.terms[0].mask == mask_of("1", "1"));

    const CoefficientTable twice = prepare_sorted(su);
    for (std::size_t i = 0; i < su.terms.size(); ++i) CHECK(twice.terms[i].mask == su.terms[i].mask);
}

TEST_CASE("truncate_tail") {
    CoefficientTable t = prepare_sorted(table_of(3, {{mask_of("1", "0"), 0.5},
                                                     {mask_of("2", "0"), 0.3},
                                                     {mask_of("4", "0"), 0.1},
                                                     {mask_of("3", "0"), 0.05},
                                                     {mask_of("5", "0"), 0.04}}));
    CHECK(truncate_tail(t, 0.1).terms.size() == 3);  // 0.04 + 0.05 = 0.09 <= 0.1
    CHECK(truncate_tail(t, 0.0).terms.size() == 5);
    CHECK(truncate_tail(t, t.l1()).terms.empty());
    CHECK_THROWS_AS(truncate_tail(table_of(2, {{mask_of("1", "0"), 1.0}}), 0.1), ValidationError);
}

TEST_CASE("table CSV round-trip") {
    CoefficientTable t = table_of(3, {{mask_of("1", "2"), 0.25}, {mask_of("6", "1"), -1e-7}});
    t.constant = -0.75;
    std::ostringstream out;
    write_table_csv(t, out);
    std::istringstream in(out.str());
    const CoefficientTable r = read_table_csv(in);
    CHECK(r.constant == t.constant);
    CHECK(r.n_qubits == 3);
    REQUIRE(r.terms.size() == 2);
    CHECK(r.terms[0].mask == t.terms[0].mask);
    CHECK(r.terms[0].coefficient == t.terms[0].coefficient);
    CHECK(r.terms[1].coefficient == t.terms[1].coefficient);
}

TEST_CASE("extract_coefficients: one-orbital closed form") {
    // H = h n + g n_up n_dn: Z coefficient -(h/2 + g/4) on each spin qubit,
    // Z(x)Z coefficient g/4, identity h + g/4
    const CoefficientTable t = extract_coefficients(one_orbital(0.5, 0.25));
    REQUIRE(t.terms.size() == 3);
    CHECK(coefficient_of(t, mask_of("0", "1")) == doctest::Approx(-0.3125).epsilon(1e-14));
    CHECK(coefficient_of(t, mask_of("0", "2")) == doctest::Approx(-0.3125).epsilon(1e-14));
    CHECK(coefficient_of(t, mask_of("0", "3")) == doctest::Approx(0.0625).epsilon(1e-14));
    CHECK(t.constant == doctest::Approx(0.5625).epsilon(1e-14));
    CHECK(t.l1() == doctest::Approx(0.6875).epsilon(1e-14));
}

TEST_CASE("extract_coefficients: all-zero integrals") {
    const CoefficientTable t = extract_coefficients(ElectronIntegrals::zeros(2, 1, 1));
    CHECK(t.terms.empty());
    CHECK(t.constant == 0.0);
}

TEST_CASE("extract_coefficients matches the second-quantized oracle") {
    for (std::uint64_t seed : {3ULL, 4ULL}) {
        const ElectronIntegrals x = oracle::random_integrals(seed, 3, false);
        const Eigen::MatrixXcd lhs = jw_matrix(extract_coefficients(x));
        const Eigen::MatrixXcd rhs = oracle::dense_hamiltonian(x);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("extract_coefficients: spin-resolved input matches the oracle") {
    ElectronIntegrals x = oracle::random_integrals(9, 2, false).promoted_to_spin_resolved();
    // perturb the blocks so they differ while keeping the required symmetries
    x.h_up(0, 0) += 0.3;
    x.g_uu.at(0, 0, 1, 1) += 0.1;
    x.g_uu.at(1, 1, 0, 0) += 0.1;
    x.g_ud.at(0, 1, 1, 1) += 0.2;
    x.g_ud.at(1, 0, 1, 1) += 0.2;
    x.validate();
    const Eigen::MatrixXcd lhs = jw_matrix(extract_coefficients(x));
    const Eigen::MatrixXcd rhs = oracle::dense_hamiltonian(x);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("extract_coefficients: core shift moves only the constant") {
    ElectronIntegrals x = oracle::random_integrals(6, 2, false);
    const CoefficientTable t0 = extract_coefficients(x);
    x.core_energy += 2.5;
    const CoefficientTable t1 = extract_coefficients(x);
    CHECK(t1.constant == doctest::Approx(t0.constant + 2.5).epsilon(1e-14));
    REQUIRE(t0.terms.size() == t1.terms.size());
    for (std::size_t i = 0; i < t0.terms.size(); ++i)
        CHECK(t0.terms[i].coefficient == t1.terms[i].coefficient);
}

TEST_CASE("extract_coefficients: l1 invariant under orbital relabeling") {
    const int n = 3;
    const ElectronIntegrals x = oracle::random_integrals(8, n, false);
    ElectronIntegrals y = ElectronIntegrals::zeros(n, x.n_alpha, x.n_beta);
    const int perm[3] = {2, 0, 1};
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) y.h(perm[p], perm[q]) = x.h(p, q);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s)
                    y.g.at(perm[p], perm[q], perm[r], perm[s]) = x.g.at(p, q, r, s);
    CHECK(extract_coefficients(y).l1() == doctest::Approx(extract_coefficients(x).l1()).epsilon(1e-12));
}

TEST_CASE("extract_coefficients: restricted tables are spin-exchange symmetric") {
    const ElectronIntegrals x = oracle::random_integrals(12, 2, false);
    const CoefficientTable t = extract_coefficients(x);
    const int n = x.n_orbitals;
    auto swap_spin = [&](const QubitBits& b) {
        QubitBits r;
        for (int q = 0; q < n; ++q) {
            if (b.test(q)) r.set(q + n);
            if (b.test(q + n)) r.set(q);
        }
        return r;
    };
    for (const auto& term : t.terms) {
        PauliMask m;
        m.x_bits = swap_spin(term.mask.x_bits);
        m.z_bits = swap_spin(term.mask.z_bits);
        CHECK(coefficient_of(t, m) == doctest::Approx(term.coefficient).epsilon(1e-12));
    }
}

TEST_CASE("extract_coefficients: parallel and serial agree bitwise") {
    const ElectronIntegrals x = oracle::random_integrals(14, 4, false);
    const CoefficientTable a = extract_coefficients(x, Exec::parallel);
    const CoefficientTable b = extract_coefficients(x, Exec::serial);
    REQUIRE(a.terms.size() == b.terms.size());
    CHECK(a.constant == b.constant);
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        CHECK(a.terms[i].mask == b.terms[i].mask);
        CHECK(a.terms[i].coefficient == b.terms[i].coefficient);
    }
}

TEST_CASE("jw_matrix: single Z and Hermiticity") {
    const CoefficientTable t = table_of(2, {{mask_of("0", "1"), 1.0}});
    const Eigen::MatrixXcd m = jw_matrix(t);
    CHECK(m(0, 0).real() == doctest::Approx(1.0));
    CHECK(m(1, 1).real() == doctest::Approx(-1.0));
    CHECK(m(2, 2).real() == doctest::Approx(1.0));
    CHECK(m(3, 3).real() == doctest::Approx(-1.0));

    for (std::uint64_t seed : {31ULL, 32ULL}) {
        const ElectronIntegrals x = oracle::random_integrals(seed, 2, false);
        const Eigen::MatrixXcd h = jw_matrix(extract_coefficients(x));
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("jw_matrix: one-orbital spectrum {0, h, h, 2h+g} up to the constant") {
    const double h = 0.5, g = 0.25;
    const CoefficientTable t = extract_coefficients(one_orbital(h, g));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(jw_matrix(t));
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + 4);
    std::sort(ev.begin(), ev.end());
    CHECK(ev[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(h).epsilon(1e-12));
    CHECK(ev[2] == doctest::Approx(h).epsilon(1e-12));
    CHECK(ev[3] == doctest::Approx(2 * h + g).epsilon(1e-12));
}

TEST_CASE("jw_matrix: size guard") {
    CoefficientTable t;
    t.n_qubits = 15;
    CHECK_THROWS_AS(jw_matrix(t), ValidationError);
}

TEST_CASE("apply_pauli_rotation agrees with the dense rotation") {
    oracle::Uniform u(77);
    const int nq = 4;
    for (const auto& [xs, zs] : std::vector<std::pair<std::string, std::string>>{
             {"3", "6"}, {"0", "5"}, {"f", "0"}, {"9", "9"}}) {
        const PauliMask m = mask_of(xs, zs);
        const double theta = 0.37;
        CoefficientTable single = table_of(nq, {{m, 1.0}});
        const Eigen::MatrixXcd p = jw_matrix(single);

        Statevector psi(1 << nq);
        double norm = 0.0;
        for (auto& a : psi) {
            a = {u(), u()};
            norm += std::norm(a);
        }
        for (auto& a : psi) a /= std::sqrt(norm);

        Eigen::Map<const Eigen::VectorXcd> v(psi.data(), psi.size());
        const Eigen::VectorXcd expect =
            std::cos(theta) * v + std::complex<double>(0, std::sin(theta)) * (p * v);

        Statevector par = psi, ser = psi;
        apply_pauli_rotation(par, m, theta, nq, Exec::parallel);
        apply_pauli_rotation(ser, m, theta, nq, Exec::serial);
        for (int i = 0; i < 1 << nq; ++i) {
            CHECK(std::abs(par[i] - expect(i)) < 1e-13);
            CHECK(par[i] == ser[i]);  // bitwise agreement
        }
    }
}
