#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "prqpe/dense.hpp"
#include "prqpe/errors.hpp"
#include "prqpe/extract.hpp"
#include "prqpe/fcidump.hpp"
#include "prqpe/uwc.hpp"

using namespace prqpe;

namespace {

CoefficientTable table_from_abs(const std::vector<double>& mags) {
    CoefficientTable t;
    t.n_qubits = 8;
    for (std::size_t i = 0; i < mags.size(); ++i) {
        PauliTerm term;
        term.mask.z_bits.w[0] = i + 1;
        term.coefficient = mags[i];
        t.terms.push_back(term);
    }
    return prepare_sorted(t);
}

ElectronIntegrals fixture_n4() { return parse_fcidump_file(std::string(PRQPE_FIXTURES) + "/n4.fcidump"); }

double golden_section(const std::function<double(double)>& f, double a, double b, int iters = 80) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    for (int i = 0; i < iters; ++i) {
        if (f(c) < f(d))
            b = d;
        else
            a = c;
        c = b - phi * (b - a);
        d = a + phi * (b - a);
    }
    return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("w_soft_from: interior and boundary conventions") {
    const CoefficientTable t = table_from_abs({1.0, 0.5, 0.1});
    // factors picked so the partition lands at L_D* = 2
    CHECK(w_soft_from(t, 1.0, 100.0) == doctest::Approx(0.3));
    // everything deterministic: w = |c_L| / 2
    CHECK(w_soft_from(t, 0.0, 1e9) == doctest::Approx(0.05));
    // everything randomized: w = 1.05 |c_1|
    CHECK(w_soft_from(t, 1e9, 1e-9) == doctest::Approx(1.05));
    CHECK_THROWS_AS(w_soft_from(CoefficientTable{}, 1.0, 1.0), ValidationError);
}

TEST_CASE("soft_cost: sigmoid midpoint, sharp limit, fully randomized limit") {
    // a coefficient exactly at w contributes 0.5 deterministic counts
    CHECK(soft_cost({0.3}, 0.3, 1e-4, 2.0, 0.0) == doctest::Approx(1.0));

    // eps_soft -> 0 on well-separated magnitudes reproduces the discrete cost
    const std::vector<double> mags{1.0, 0.8, 0.01, 0.005};
    const double w = 0.4;
    const double g_det = 3.0, g_rand = 7.0;
    const double sharp = soft_cost(mags, w, 1e-9, g_det, g_rand);
    const double tail = 0.015;
    CHECK(sharp == doctest::Approx(g_det * 2 + g_rand * tail * tail).epsilon(1e-6));

    // all magnitudes far below w: pure randomized cost g_rand * lambda^2
    const double all_rand = soft_cost({0.01, 0.02}, 10.0, 1e-2, 5.0, 7.0);
    CHECK(all_rand == doctest::Approx(7.0 * 0.03 * 0.03).epsilon(1e-8));
}

TEST_CASE("fd_gradient: constant objective gives the zero vector") {
    auto f = [](const Eigen::VectorXd&, Exec) { return 42.0; };
    const Eigen::VectorXd g = fd_gradient(f, Eigen::VectorXd::Zero(5));
    CHECK(g.norm() == 0.0);
}

TEST_CASE("fd_gradient: bliss mu1 direction matches a 1-D finite difference") {
    ElectronIntegrals x = ElectronIntegrals::zeros(1, 1, 1);
    x.h(0, 0) = 0.5;
    x.g.at(0, 0, 0, 0) = 0.25;

    UwcObjectiveContext ctx;
    ctx.mode = UwcObjective::l1_norm;
    ctx.normalization = 1.0;

    auto f = [&](const Eigen::VectorXd& p, Exec e) {
        Eigen::MatrixXd xi = Eigen::MatrixXd::Constant(1, 1, p(2));
        return ctx.evaluate(apply_bliss(x, p(0), p(1), xi, 2), e);
    };
    const Eigen::VectorXd grad = fd_gradient(f, Eigen::VectorXd::Zero(3));

    // independent 1-D central difference along mu1
    const double h = 1e-6;
    Eigen::VectorXd plus = Eigen::VectorXd::Zero(3), minus = Eigen::VectorXd::Zero(3);
    plus(0) = h;
    minus(0) = -h;
    const double expect = (f(plus, Exec::serial) - f(minus, Exec::serial)) / (2 * h);
    CHECK(grad(0) == doctest::Approx(expect).epsilon(1e-8));
    // moving h_11 toward zero lowers lambda, so the gradient must be negative
    CHECK(grad(0) < 0.0);
}

TEST_CASE("analytic gradient agrees with central differences (shift blocks)") {
    const ElectronIntegrals x = oracle::random_integrals(31, 3, false);
    const CoefficientTable table = prepare_sorted(extract_coefficients(x));

    UwcObjectiveContext ctx;
    ctx.mode = UwcObjective::soft_gate_cost;
    ctx.epsilon_soft = 1e-3;
    ctx.g_det_factor = 8.0;
    ctx.g_rand_factor = 40.0;
    ctx.w_soft = w_soft_from(table, ctx.g_det_factor, ctx.g_rand_factor);
    ctx.normalization = 10.0;

    for (const TransformBlock block : {TransformBlock::bliss, TransformBlock::spin_bliss}) {
        const int dim = block == TransformBlock::bliss ? TransformParams::n_bliss(3)
                                                       : TransformParams::n_spin_bliss(3);
        oracle::Uniform u(32);
        Eigen::VectorXd params(dim);
        for (int i = 0; i < dim; ++i) params(i) = 0.05 * u();

        auto f = [&](const Eigen::VectorXd& p, Exec e) {
            if (block == TransformBlock::bliss) {
                Eigen::MatrixXd xi(3, 3);
                int idx = 2;
                for (int i = 0; i < 3; ++i)
                    for (int j = i; j < 3; ++j) {
                        xi(i, j) = xi(j, i) = p(idx);
                        ++idx;
                    }
                return ctx.evaluate(apply_bliss(x, p(0), p(1), xi, x.n_electrons()), e);
            }
            std::array<Eigen::MatrixXd, 3> zeta;
            int idx = 3;
            for (auto& z : zeta) {
                z.resize(3, 3);
                for (int i = 0; i < 3; ++i)
                    for (int j = i; j < 3; ++j) {
                        z(i, j) = z(j, i) = p(idx);
                        ++idx;
                    }
            }
            return ctx.evaluate(apply_spin_bliss(x, p(0), p(1), p(2), zeta, x.n_electrons(), x.s_z()), e);
        };

        const Eigen::VectorXd fd = fd_gradient(f, params);
        const Eigen::VectorXd an = analytic_block_gradient(x, block, ctx, params);
        REQUIRE(an.size() == fd.size());
        const double rel = (an - fd).norm() / std::max(1e-12, fd.norm());
        CHECK(rel <= 1e-5);
    }
    CHECK_THROWS_AS(analytic_block_gradient(x, TransformBlock::oo, ctx, Eigen::VectorXd::Zero(3)),
                    ValidationError);
}

TEST_CASE("minimize_block: a stationary instance returns unchanged") {
    // zero integrals: every shift direction leaves lambda at zero
    const ElectronIntegrals x = ElectronIntegrals::zeros(2, 1, 1);
    UwcObjectiveContext ctx;
    ctx.mode = UwcObjective::l1_norm;
    ctx.normalization = 1.0;
    UwcConfig cfg;
    const BlockResult r = minimize_block(x, TransformBlock::oo, ctx, cfg);
    CHECK(r.value == doctest::Approx(0.0));
    CHECK((r.integrals.h - x.h).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("minimize_block: one-orbital bliss reaches the golden-section optimum") {
    ElectronIntegrals x = ElectronIntegrals::zeros(1, 1, 1);
    x.h(0, 0) = 0.5;
    x.g.at(0, 0, 0, 0) = 0.25;
    UwcObjectiveContext ctx;
    ctx.mode = UwcObjective::l1_norm;
    ctx.normalization = 1.0;
    const double initial = ctx.evaluate(x, Exec::serial);

    UwcConfig cfg;
    cfg.objective = UwcObjective::l1_norm;
    const BlockResult r = minimize_block(x, TransformBlock::bliss, ctx, cfg);
    CHECK(r.value <= initial + 1e-12);

    // independent golden-section scan over mu1 alone (mu2 = xi = 0)
    auto lam = [&](double mu1) {
        return extract_coefficients(apply_bliss(x, mu1, 0, Eigen::MatrixXd::Zero(1, 1), 2)).l1();
    };
    const double mu_star = golden_section(lam, -2.0, 2.0);
    CHECK(r.value <= lam(mu_star) + 1e-6);
}

TEST_CASE("minimize_block: orbital rotation beats a grid scan on a 2-orbital instance") {
    ElectronIntegrals x = ElectronIntegrals::zeros(2, 1, 1);
    x.h << 0.1, 0.9, 0.9, -0.1;  // off-diagonal dominant
    x.g.set_sym8(0, 0, 0, 0, 0.05);

    UwcObjectiveContext ctx;
    ctx.mode = UwcObjective::l1_norm;
    ctx.normalization = 1.0;
    const double initial = ctx.evaluate(x, Exec::serial);

    UwcConfig cfg;
    const BlockResult r = minimize_block(x, TransformBlock::oo, ctx, cfg);
    CHECK(r.value < initial);  // strict decrease

    double grid_best = initial;
    for (int i = 0; i <= 400; ++i) {
        Eigen::VectorXd kappa(1);
        kappa(0) = -M_PI + 2 * M_PI * i / 400.0;
        grid_best = std::min(grid_best,
                             extract_coefficients(apply_orbital_rotation(x, kappa)).l1());
    }
    CHECK(r.value <= grid_best + 1e-4);
}

TEST_CASE("uwc_optimize: diagonal one-body instance terminates cleanly") {
    // zero two-body, traceless diagonal h: the discrete cost can only move
    // through the symmetry-shift reshuffling, which settles within a couple
    // of iterations
    ElectronIntegrals x = ElectronIntegrals::zeros(2, 1, 1);
    x.h(0, 0) = 0.7;
    x.h(1, 1) = -0.7;
    CostModelConfig cost;
    cost.epsilon = 0.05;
    cost.xi = 0.2;
    cost.eta = 0.99;
    cost.trotter_a = 0.05;
    cost.trotter_b = 1.0;
    UwcConfig cfg;
    const UwcResult res = uwc_optimize(x, cost, cfg);
    CHECK((res.history.termination == "converged" || res.history.termination == "degraded"));
    REQUIRE(!res.history.iterations.empty());
    std::uint64_t prev = res.history.initial_g_m;
    for (const auto& rec : res.history.iterations) {
        if (!rec.accepted) continue;
        CHECK(rec.g_m_discrete <= prev);
        prev = rec.g_m_discrete;
    }
    // the (N_e, S_z) sector spectrum survives whatever reshaping happened
    const auto sx = oracle::sector_spectrum(oracle::dense_hamiltonian(x), 2, 2, 0);
    const auto sy = oracle::sector_spectrum(oracle::dense_hamiltonian(res.integrals), 2, 2, 0);
    REQUIRE(sx.size() == sy.size());
    for (std::size_t i = 0; i < sx.size(); ++i) CHECK(std::abs(sx[i] - sy[i]) < 1e-8);
}

TEST_CASE("uwc_optimize: bundled fixture improves and preserves the sector spectrum") {
    const ElectronIntegrals x = fixture_n4();
    CostModelConfig cost;
    cost.epsilon = 1.6e-3;
    cost.xi = 0.1;
    cost.eta = 0.95;
    UwcConfig cfg;
    cfg.n_iter_max = 3;
    cfg.optimizer.max_iterations = 40;
    const UwcResult res = uwc_optimize(x, cost, cfg);

    REQUIRE(!res.history.iterations.empty());
    const std::uint64_t final_g = res.history.iterations.back().accepted
                                      ? res.history.iterations.back().g_m_discrete
                                      : res.history.iterations.front().g_m_discrete;
    CHECK(final_g <= res.history.initial_g_m);

    // accepted-iteration discrete costs never increase
    std::uint64_t prev = res.history.initial_g_m;
    for (const auto& rec : res.history.iterations) {
        if (!rec.accepted) continue;
        CHECK(rec.g_m_discrete <= prev);
        prev = rec.g_m_discrete;
    }

    // the optimized Hamiltonian keeps the (N_e, S_z) sector spectrum
    const auto sx = oracle::sector_spectrum(oracle::dense_hamiltonian(x), 4, 4, 0);
    const auto sy =
        oracle::sector_spectrum(oracle::dense_hamiltonian(res.integrals), 4, 4, 0);
    REQUIRE(sx.size() == sy.size());
    for (std::size_t i = 0; i < sx.size(); ++i) CHECK(std::abs(sx[i] - sy[i]) < 1e-8);
}

TEST_CASE("uwc_optimize: soft-cost objective is no worse than the l1 objective") {
    const ElectronIntegrals x = fixture_n4();
    CostModelConfig cost;
    cost.epsilon = 1.6e-3;
    cost.xi = 0.1;
    cost.eta = 0.95;
    UwcConfig cfg;
    cfg.n_iter_max = 2;
    cfg.optimizer.max_iterations = 30;
    const UwcResult uwc = uwc_optimize(x, cost, cfg);
    cfg.objective = UwcObjective::l1_norm;
    const UwcResult l1 = uwc_optimize(x, cost, cfg);

    auto final_g = [&](const UwcResult& r) {
        const CoefficientTable t = prepare_sorted(extract_coefficients(r.integrals));
        return round_cost(t, r.history.cost_m_rounds, r.history.cost_delta, cost).g_m;
    };
    const double gu = static_cast<double>(final_g(uwc));
    const double gl = static_cast<double>(final_g(l1));
    CHECK(gu <= gl * 1.05);
}

TEST_CASE("uwc_optimize: objective invariant under orbital relabeling") {
    const ElectronIntegrals x = oracle::random_integrals(61, 3, true, 2, 1);
    ElectronIntegrals y = ElectronIntegrals::zeros(3, 2, 1);
    const int perm[3] = {1, 2, 0};
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) y.h(perm[p], perm[q]) = x.h(p, q);
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
            for (int r = 0; r < 3; ++r)
                for (int s = 0; s < 3; ++s)
                    y.g.at(perm[p], perm[q], perm[r], perm[s]) = x.g.at(p, q, r, s);

    CostModelConfig cost;
    cost.epsilon = 1.6e-3;
    cost.xi = 0.1;
    cost.eta = 0.95;
    UwcConfig cfg;
    cfg.n_iter_max = 1;
    cfg.optimizer.max_iterations = 20;
    const UwcResult rx = uwc_optimize(x, cost, cfg);
    const UwcResult ry = uwc_optimize(y, cost, cfg);
    CHECK(rx.history.initial_g_m == ry.history.initial_g_m);
    CHECK(rx.history.initial_lambda == doctest::Approx(ry.history.initial_lambda).epsilon(1e-10));
}
