#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "prqpe/calibration.hpp"
#include "prqpe/errors.hpp"
#include "prqpe/smm.hpp"

using namespace prqpe;

namespace {

CoefficientTable table_from_abs(const std::vector<double>& mags) {
    CoefficientTable t;
    t.n_qubits = 2;
    for (std::size_t i = 0; i < mags.size(); ++i) {
        PauliTerm term;
        term.mask.z_bits.w[0] = i + 1;
        term.coefficient = mags[i];
        t.terms.push_back(term);
    }
    return prepare_sorted(t);
}

SmmCalibration flat_calibration() {
    return load_calibration_file(std::string(PRQPE_FIXTURES) + "/smm_flat.csv");
}

SmmCalibration shaped_calibration() {
    return load_calibration_file(std::string(PRQPE_FIXTURES) + "/smm_shaped.csv");
}

}  // namespace

TEST_CASE("pchip: exact at knots and on linear data") {
    const std::vector<double> x{0.0, 1.0, 2.5, 4.0};
    const std::vector<double> y{1.0, 3.0, 6.0, 9.0};
    const PchipInterpolator p(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(p(x[i]) == doctest::Approx(y[i]).epsilon(1e-15));
    // linear segments of linear data reproduce exactly
    CHECK(p(0.5) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(p(3.0) == doctest::Approx(7.0).epsilon(1e-9));
    CHECK_THROWS_AS(p(-0.1), ValidationError);
    CHECK_THROWS_AS(p(4.1), ValidationError);
}

TEST_CASE("pchip: monotone data stays monotone") {
    const std::vector<double> x{0, 1, 2, 3, 4, 5};
    const std::vector<double> y{0.0, 0.1, 0.2, 4.0, 4.1, 4.2};
    const PchipInterpolator p(x, y);
    double prev = p(0.0);
    for (int i = 1; i <= 500; ++i) {
        const double v = p(5.0 * i / 500.0);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("load_calibration: happy path and provenance") {
    const SmmCalibration cal = flat_calibration();
    CHECK(cal.has_curve(SmmSetting::accuracy, 1e-3));
    CHECK(cal.has_curve(SmmSetting::speed, 1e-3));
    CHECK(!cal.has_curve(SmmSetting::accuracy, 1e-4));
    CHECK(cal.provenance().find("synthetic") != std::string::npos);
    const SmmQuery q = cal.query(SmmSetting::accuracy, 1e-3, 0.05);
    CHECK(q.alpha_rus == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q.c_smm_clocks == doctest::Approx(1.0).epsilon(1e-12));
    // knot is exact
    CHECK(cal.query(SmmSetting::speed, 1e-3, 0.1).alpha_rus == doctest::Approx(1.0));
}

TEST_CASE("load_calibration: malformed inputs") {
    auto parse = [](const std::string& body) {
        std::istringstream in(body);
        return load_calibration(in);
    };
    CHECK_THROWS_AS(parse("setting,p_ph,theta,alpha_rus,c_smm_clocks\n"
                          "accuracy,0.001,0.1,1,1\naccuracy,0.001,0.05,1,1\n"
                          "accuracy,0.001,0.2,1,1\naccuracy,0.001,0.3,1,1\n"),
                    ValidationError);  // out-of-order theta
    CHECK_THROWS_AS(parse("setting,p_ph,theta,alpha_rus,c_smm_clocks\nwarp,0.001,0.1,1,1\n"),
                    ValidationError);  // unknown setting
    CHECK_THROWS_AS(parse("setting,p_ph,theta,alpha_rus,c_smm_clocks\n"
                          "accuracy,0.001,0.1,1,1\naccuracy,0.001,0.2,1,1\n"
                          "accuracy,0.001,0.3,1,1\n"),
                    ValidationError);  // fewer than 4 samples
    CHECK_THROWS_AS(parse("theta,alpha\n"), ParseError);  // missing header
}

TEST_CASE("calibration query: clamping is opt-in") {
    const SmmCalibration cal = flat_calibration();
    CHECK_THROWS_AS(cal.query(SmmSetting::accuracy, 1e-3, 1e-7), ValidationError);
    CHECK(cal.query(SmmSetting::accuracy, 1e-3, 1e-7, true).alpha_rus == doctest::Approx(1.0));
    CHECK_THROWS_AS(cal.query(SmmSetting::accuracy, 5e-4, 0.1), ValidationError);  // no curve
}

TEST_CASE("rotation_angle_multiset: bookkeeping identities") {
    const CoefficientTable t = table_from_abs({0.8, 0.5, 0.2});
    CostModelConfig cfg;
    for (const double delta : {0.4, 1.5}) {
        for (int m = 0; m <= 3; ++m) {
            const RoundCost rc = round_cost(t, m, delta, cfg);
            const auto angles = rotation_angle_multiset(rc, t, delta, m);
            std::uint64_t total = 0;
            for (const auto& a : angles) total += a.count;
            CHECK(total == rc.g_m);
        }
    }
    // L_D = 0: a single fixed-angle entry
    const RoundCost rand_only = round_cost(t, 0, 0.6, cfg);
    REQUIRE(rand_only.l_d_star == 0);
    const auto angles = rotation_angle_multiset(rand_only, t, 0.6, 0);
    REQUIRE(angles.size() == 1);
    CHECK(angles[0].theta == doctest::Approx(rand_only.phi_m));
    CHECK(angles[0].count == rand_only.g_rand);

    // three deterministic terms at m = 1, two rotations each
    const RoundCost det3 = round_cost(t, 1, 4.0, cfg);
    REQUIRE(det3.l_d_star == 3);
    const auto det_angles = rotation_angle_multiset(det3, t, 4.0, 1);
    REQUIRE(det_angles.size() == 3);
    for (std::size_t l = 0; l < 3; ++l) {
        CHECK(det_angles[l].count == 2);
        CHECK(det_angles[l].theta ==
              doctest::Approx(std::abs(t.terms[l].coefficient) * 4.0 / 2.0));
    }
}

TEST_CASE("total_logical_error: closed forms and linearity") {
    const SmmCalibration cal = flat_calibration();
    CHECK(total_logical_error({}, cal, SmmSetting::accuracy, 1e-3) == 0.0);

    // alpha = 2 synthetic curve
    SmmCalibration two;
    two.add_curve(SmmSetting::accuracy, 1e-3, {1e-4, 1e-3, 1e-2, 1e-1},
                  {2.0, 2.0, 2.0, 2.0}, {1.0, 1.0, 1.0, 1.0});
    const std::vector<AngleCount> angles{{1e-3, 1000}};
    CHECK(total_logical_error(angles, two, SmmSetting::accuracy, 1e-3) ==
          doctest::Approx(2e-3).epsilon(1e-12));
    const std::vector<AngleCount> doubled{{1e-3, 2000}};
    CHECK(total_logical_error(doubled, two, SmmSetting::accuracy, 1e-3) ==
          doctest::Approx(4e-3).epsilon(1e-12));
}

TEST_CASE("pec_overhead") {
    CHECK(pec_overhead(0.0) == 1.0);
    CHECK(pec_overhead(0.25) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
    // FeMoco-like total logical error rate
    CHECK(pec_overhead(1.01) == doctest::Approx(56.9).epsilon(1e-2));
    CHECK_THROWS_AS(pec_overhead(-0.1), ValidationError);
}

TEST_CASE("clifford_error") {
    CHECK(clifford_error(1e-3, 21) == doctest::Approx(1e-12).epsilon(1e-12));
    CHECK(clifford_error(1e-2, 3) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(clifford_error(1e-2, 11) == doctest::Approx(0.1).epsilon(1e-12));
    for (int d = 3; d < 29; d += 2) CHECK(clifford_error(1e-3, d + 2) < clifford_error(1e-3, d));
    CHECK_THROWS_AS(clifford_error(1e-3, 4), ValidationError);
    CHECK_THROWS_AS(clifford_error(0.02, 3), ValidationError);
}

TEST_CASE("choose_distance: minimality against brute force, monotonicity") {
    auto brute = [](int n_patch, double c_total, double p_ph) {
        for (int d = 3; d <= 51; d += 2)
            if (1.0 / clifford_error(p_ph, d) >= 100.0 * d * n_patch * c_total) return d;
        return -1;
    };
    oracle::Uniform u(3);
    for (int i = 0; i < 200; ++i) {
        const int n_patch = 10 + static_cast<int>(400 * std::abs(u()));
        const double c_total = std::pow(10.0, 1.0 + 7.0 * std::abs(u()));
        const double p_ph = std::pow(10.0, -4.0 + 1.0 * std::abs(u()));
        const int expect = brute(n_patch, c_total, p_ph);
        if (expect < 0) {
            CHECK_THROWS_AS(choose_distance(n_patch, c_total, p_ph), InfeasibleError);
            continue;
        }
        const int d = choose_distance(n_patch, c_total, p_ph);
        CHECK(d == expect);
        CHECK(1.0 / clifford_error(p_ph, d) >= 100.0 * d * n_patch * c_total);
        if (d > 3)
            CHECK(1.0 / clifford_error(p_ph, d - 2) < 100.0 * (d - 2) * n_patch * c_total);
    }
    // tiny circuit
    CHECK(choose_distance(10, 10.0, 1e-3) == brute(10, 10.0, 1e-3));
    // monotone in the clock count
    int prev = 3;
    for (double c = 10; c < 1e9; c *= 10) {
        const int d = choose_distance(100, c, 1e-3);
        CHECK(d >= prev);
        prev = d;
    }
}

TEST_CASE("patches_and_qubits: published triples") {
    CHECK(patches_for(63) == 160);
    CHECK(qubits_per_qpu(patches_for(63), 21) == 141120);   // 1.41e5
    CHECK(patches_for(41) == 112);
    CHECK(qubits_per_qpu(patches_for(41), 19) == 80864);    // 8.02e4
    CHECK(patches_for(109) == 259);
    CHECK(qubits_per_qpu(patches_for(109), 25) == 323750);  // 3.23e5
}

TEST_CASE("parallelism") {
    CHECK(parallelism(5e5, 141120, 100.0).k_star == 3);
    CHECK(parallelism(5e5, 80864, 100.0).k_star == 6);
    const ParallelismPlan same = parallelism(80864, 80864, 50.0);
    CHECK(same.k_star == 1);
    CHECK(same.t_parallel_seconds == doctest::Approx(50.0));
    CHECK_THROWS_AS(parallelism(1000, 80864, 1.0), InfeasibleError);
}

TEST_CASE("estimate: flat-calibration spreadsheet oracle") {
    const CoefficientTable t = table_from_abs({0.5, 0.3, 0.2});
    CostModelConfig cfg;
    cfg.epsilon = 0.1;
    cfg.xi = 0.2;
    cfg.eta = 0.99;
    cfg.trotter_a = 0.1;
    cfg.trotter_b = 1.0;

    EstimateOptions opts;
    opts.setting = SmmSetting::accuracy;
    const ResourceReport rep = estimate(t, cfg, flat_calibration(), opts);

    // independent spreadsheet-style arithmetic
    const double delta = std::pow(3.0, -0.25);  // C_gs = epsilon here
    CHECK(rep.delta == doctest::Approx(delta).epsilon(1e-12));
    REQUIRE(rep.m_rounds == 2);
    REQUIRE(rep.n_l == 3);
    const int n_patch = 2 * 3 + 5 + 11;  // ceil(sqrt(24)) = 5
    CHECK(rep.n_patch == n_patch);

    // per-round gate counts from the hand scan
    REQUIRE(rep.rounds.size() == 3);
    CHECK(rep.rounds[0].g_m == 1);
    CHECK(rep.rounds[1].g_m == 3);
    CHECK(rep.rounds[2].g_m == 7);
    // flat calibration: clocks equal gate counts
    for (const auto& rd : rep.rounds) CHECK(rd.c_total_clocks == doctest::Approx(rd.g_m));

    // distance: smallest odd d with 0.1 (0.1)^{(d+1)/2} inverse >= 100 d n_patch 7
    int d_expect = -1;
    for (int d = 3; d <= 51; d += 2)
        if (1.0 / (0.1 * std::pow(0.1, 0.5 * (d + 1))) >= 100.0 * d * n_patch * 7.0) {
            d_expect = d;
            break;
        }
    CHECK(rep.d == d_expect);
    CHECK(rep.physical_qubits_per_qpu ==
          static_cast<std::uint64_t>(n_patch) * 2ULL * rep.d * rep.d);

    // runtimes: T_m = C d us; totals include e gamma^2 N_m
    const auto sched = sample_schedule(cfg, 2);
    double t_total = 0.0;
    for (int m = 0; m <= 2; ++m) {
        const double p_m = rep.rounds[m].p_total;
        const double t_m = rep.rounds[m].c_total_clocks * rep.d * 1e-6;
        CHECK(rep.rounds[m].t_seconds == doctest::Approx(t_m).epsilon(1e-12));
        CHECK(rep.rounds[m].n_shots == sched[m]);
        t_total += std::exp(1.0) * std::exp(4.0 * p_m) * static_cast<double>(sched[m]) * t_m;
    }
    CHECK(rep.t_total_seconds == doctest::Approx(t_total).epsilon(1e-12));
    CHECK(rep.maximum_per_shot_runtime_s == doctest::Approx(rep.rounds[2].t_seconds));

    // report invariants
    CHECK(rep.qpu_parallelism_k_star ==
          static_cast<int>(std::floor(5e5 / static_cast<double>(rep.physical_qubits_per_qpu))));
    CHECK(rep.time_to_solution_k_star_qpus_days * rep.qpu_parallelism_k_star ==
          doctest::Approx(rep.time_to_solution_single_qpu_days).epsilon(1e-12));
}

TEST_CASE("runtimes: unit conversion, dominance, linearity") {
    // single round: 10^6 clocks at d = 21 is 21 seconds per shot
    const Runtimes single = runtimes({1e6}, 21, {1}, {1.0});
    CHECK(single.t_max_seconds == doctest::Approx(21.0));
    CHECK(single.t_total_seconds == doctest::Approx(std::exp(1.0) * 21.0));

    const std::vector<double> clocks{100.0, 400.0, 1600.0};
    const std::vector<std::uint64_t> shots{40, 20, 200};
    const std::vector<double> gamma{1.0, 1.0, 1.0};
    const Runtimes r = runtimes(clocks, 9, shots, gamma);
    CHECK(r.t_max_seconds == doctest::Approx(1600.0 * 9e-6));
    // the final round dominates this schedule
    const double final_share = std::exp(1.0) * 200.0 * 1600.0 * 9e-6 / r.t_total_seconds;
    CHECK(final_share >= 0.5);
    // doubling every shot count doubles the total
    const Runtimes r2 = runtimes(clocks, 9, {80, 40, 400}, gamma);
    CHECK(r2.t_total_seconds == doctest::Approx(2.0 * r.t_total_seconds).epsilon(1e-12));
    CHECK_THROWS_AS(runtimes({1.0}, 3, {1, 2}, {1.0}), ValidationError);
}

TEST_CASE("P_total and C_total are additive over disjoint angle multisets") {
    const SmmCalibration cal = shaped_calibration();
    const std::vector<AngleCount> a{{1e-3, 10}, {1e-2, 4}};
    const std::vector<AngleCount> b{{1e-1, 7}};
    std::vector<AngleCount> both = a;
    both.insert(both.end(), b.begin(), b.end());
    const double pa = total_logical_error(a, cal, SmmSetting::speed, 1e-3);
    const double pb = total_logical_error(b, cal, SmmSetting::speed, 1e-3);
    CHECK(total_logical_error(both, cal, SmmSetting::speed, 1e-3) ==
          doctest::Approx(pa + pb).epsilon(1e-12));
    const double ca = total_clocks(a, cal, SmmSetting::speed, 1e-3);
    const double cb = total_clocks(b, cal, SmmSetting::speed, 1e-3);
    CHECK(total_clocks(both, cal, SmmSetting::speed, 1e-3) ==
          doctest::Approx(ca + cb).epsilon(1e-12));
}

TEST_CASE("estimate: auto mode picks the faster setting") {
    const CoefficientTable t = table_from_abs({0.5, 0.3, 0.2});
    CostModelConfig cfg;
    cfg.epsilon = 0.1;
    cfg.xi = 0.2;
    cfg.eta = 0.99;
    cfg.trotter_a = 0.1;
    cfg.trotter_b = 1.0;
    const SmmCalibration cal = shaped_calibration();

    EstimateOptions acc;
    acc.setting = SmmSetting::accuracy;
    EstimateOptions spd;
    spd.setting = SmmSetting::speed;
    EstimateOptions aut;  // setting unset: auto

    const ResourceReport ra = estimate(t, cfg, cal, acc);
    const ResourceReport rs = estimate(t, cfg, cal, spd);
    const ResourceReport rauto = estimate(t, cfg, cal, aut);
    CHECK(rauto.t_total_seconds == doctest::Approx(std::min(ra.t_total_seconds, rs.t_total_seconds)));
    CHECK(rauto.smm_priority ==
          (ra.t_total_seconds <= rs.t_total_seconds ? "accuracy" : "speed"));
}

TEST_CASE("estimate: reducing p_ph never increases d, P_total, or T_total") {
    const CoefficientTable t = table_from_abs({0.5, 0.3, 0.2});
    CostModelConfig cfg;
    cfg.epsilon = 0.1;
    cfg.xi = 0.2;
    cfg.eta = 0.99;
    cfg.trotter_a = 0.1;
    cfg.trotter_b = 1.0;
    const SmmCalibration cal = shaped_calibration();  // identical curves at both p_ph

    EstimateOptions hi;
    hi.setting = SmmSetting::accuracy;
    hi.p_ph = 1e-3;
    EstimateOptions lo = hi;
    lo.p_ph = 5e-4;
    const ResourceReport rh = estimate(t, cfg, cal, hi);
    const ResourceReport rl = estimate(t, cfg, cal, lo);
    CHECK(rl.d <= rh.d);
    CHECK(rl.p_total <= rh.p_total);
    CHECK(rl.t_total_seconds <= rh.t_total_seconds);
}

TEST_CASE("estimate: deterministic scheme accounts every term deterministically") {
    const CoefficientTable t = table_from_abs({0.5, 0.3, 0.2, 1e-4});
    CostModelConfig cfg;
    cfg.epsilon = 0.1;
    cfg.xi = 0.2;
    cfg.eta = 0.99;
    cfg.trotter_a = 0.1;
    cfg.trotter_b = 1.0;
    EstimateOptions opts;
    opts.setting = SmmSetting::accuracy;
    opts.scheme = EvolutionScheme::deterministic;
    const ResourceReport rep = estimate(t, cfg, flat_calibration(), opts);
    CHECK(rep.scheme == "deterministic");
    // the 1e-4 tail is truncated at the 1e-3 weight threshold
    CHECK(rep.l_d == 3);
    CHECK(rep.lambda_r == 0.0);
    for (const auto& rd : rep.rounds)
        CHECK(rd.g_m == static_cast<std::uint64_t>(std::ceil(std::ldexp(1.0, rd.m) * 3.0)));
}
