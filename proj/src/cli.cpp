#include "prqpe/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "prqpe/errors.hpp"
#include "prqpe/extract.hpp"
#include "prqpe/fcidump.hpp"
#include "prqpe/rng.hpp"

namespace prqpe::cli {

using nlohmann::json;

namespace {

std::string fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : bytes) h = (h ^ c) * 0x100000001b3ULL;
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << body;
}

// Collects output files and emits the run manifest last. The manifest
// carries a timestamp; every numerical output it references is
// reproducible from the config echo alone.
class ManifestBuilder {
  public:
    ManifestBuilder(std::string command, std::string prefix)
        : command_(std::move(command)), prefix_(std::move(prefix)) {}

    void add_input(const std::string& path) { inputs_[path] = file_digest(path); }
    void set_config(json cfg) { config_ = std::move(cfg); }

    void write_output(const std::string& path, const std::string& body) {
        write_text(path, body);
        outputs_[path] = fnv1a64(body);
    }

    void finalize() {
        json m;
        m["tool"] = "prqpe";
        m["version"] = kToolVersion;
        m["command"] = command_;
        m["inputs"] = inputs_;
        m["outputs"] = outputs_;
        m["config"] = config_;
        m["digest_algorithm"] = "fnv1a64";
        const auto now = std::chrono::system_clock::now();
        m["timestamp_unix"] =
            std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
        write_text(prefix_ + ".manifest.json", m.dump(2) + "\n");
    }

  private:
    std::string command_, prefix_;
    json inputs_ = json::object(), outputs_ = json::object(), config_ = json::object();
};

json table_stats(const CoefficientTable& sorted, int top_k) {
    json stats;
    stats["n_qubits"] = sorted.n_qubits;
    stats["n_terms"] = sorted.terms.size();
    stats["lambda"] = sorted.l1();
    stats["constant"] = sorted.constant;
    json top = json::array();
    for (std::size_t i = 0; i < sorted.terms.size() && i < static_cast<std::size_t>(top_k); ++i) {
        const auto& t = sorted.terms[i];
        top.push_back({{"x_bits", t.mask.x_bits.hex()},
                       {"z_bits", t.mask.z_bits.hex()},
                       {"pauli", t.mask.str(sorted.n_qubits)},
                       {"coefficient", t.coefficient}});
    }
    stats["top_coefficients"] = top;
    return stats;
}

std::string distribution_csv(const CoefficientTable& sorted) {
    std::ostringstream ss;
    ss << "rank,abs_coefficient\n";
    char buf[40];
    for (std::size_t i = 0; i < sorted.terms.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", std::abs(sorted.terms[i].coefficient));
        ss << (i + 1) << "," << buf << "\n";
    }
    return ss.str();
}

json uwc_history_to_json(const UwcHistory& h) {
    json j;
    j["initial_g_m"] = h.initial_g_m;
    j["initial_lambda"] = h.initial_lambda;
    j["delta"] = h.cost_delta;
    j["m_rounds"] = h.cost_m_rounds;
    j["termination"] = h.termination;
    json iters = json::array();
    for (const auto& rec : h.iterations)
        iters.push_back({{"iteration", rec.iteration},
                         {"g_m_discrete", rec.g_m_discrete},
                         {"g_soft", rec.g_soft},
                         {"lambda", rec.lambda},
                         {"l_d_star", rec.l_d_star},
                         {"w_soft", rec.w_soft},
                         {"accepted", rec.accepted},
                         {"optimizer_warning", rec.optimizer_warning}});
    j["iterations"] = iters;
    return j;
}

Statevector hartree_fock_state(int n_orbitals, int n_alpha, int n_beta, int n_qubits) {
    std::uint64_t det = 0;
    for (int p = 0; p < n_alpha; ++p) det |= 1ULL << p;
    for (int p = 0; p < n_beta; ++p) det |= 1ULL << (n_orbitals + p);
    Statevector psi(1ULL << n_qubits, 0.0);
    psi[det] = 1.0;
    return psi;
}

json cost_breakdown_to_json(const CostBreakdown& cost) {
    json j;
    j["lambda"] = cost.lambda;
    j["c_gs"] = cost.c_gs;
    j["delta"] = cost.step.delta;
    j["eps_qpe"] = cost.step.eps_qpe;
    j["eps_trot"] = cost.step.eps_trot;
    j["m_rounds"] = cost.m_rounds;
    json rounds = json::array();
    for (const auto& rc : cost.rounds)
        rounds.push_back({{"m", rc.m},
                          {"n_m", rc.n_shots},
                          {"l_d", rc.l_d_star},
                          {"lambda_r", rc.lambda_r},
                          {"g_det", rc.g_det},
                          {"g_rand", rc.g_rand}});
    j["rounds"] = rounds;
    j["g_total"] = cost.g_total;
    j["baseline_g_total"] = cost.baseline_g_total;
    j["baseline_m_rounds"] = cost.baseline_m_rounds;
    j["baseline_delta"] = cost.baseline_delta;
    j["baseline_terms"] = cost.baseline_terms;
    return j;
}

// one-row CSV mirroring the physical-resource table layout
std::string report_csv(const std::string& id, const ResourceReport& r) {
    std::ostringstream ss;
    ss << "molecule_id,physical_qubits_per_qpu,maximum_per_shot_runtime_s,"
          "time_to_solution_single_qpu_days,qpu_parallelism_k_star,"
          "time_to_solution_k_star_qpus_days\n";
    char buf[64];
    ss << id << "," << r.physical_qubits_per_qpu << ",";
    std::snprintf(buf, sizeof buf, "%.6g", r.maximum_per_shot_runtime_s);
    ss << buf << ",";
    std::snprintf(buf, sizeof buf, "%.6g", r.time_to_solution_single_qpu_days);
    ss << buf << "," << r.qpu_parallelism_k_star << ",";
    std::snprintf(buf, sizeof buf, "%.6g", r.time_to_solution_k_star_qpus_days);
    ss << buf << "\n";
    return ss.str();
}

std::string path_stem(const std::string& path) {
    const auto slash = path.find_last_of('/');
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    const auto dot = name.find_last_of('.');
    return dot == std::string::npos ? name : name.substr(0, dot);
}

}  // namespace

std::string file_digest(const std::string& path) { return fnv1a64(slurp(path)); }

json report_to_json(const ResourceReport& r) {
    json j;
    j["l_d"] = r.l_d;
    j["lambda_r"] = r.lambda_r;
    j["lambda"] = r.lambda;
    j["n_l"] = r.n_l;
    j["g_m"] = r.g_m;
    j["smm_priority"] = r.smm_priority;
    j["d"] = r.d;
    j["theta_bar_l"] = r.theta_bar_l;
    j["p_total"] = r.p_total;
    j["n_patch"] = r.n_patch;
    j["physical_qubits_per_qpu"] = r.physical_qubits_per_qpu;
    j["maximum_per_shot_runtime_s"] = r.maximum_per_shot_runtime_s;
    j["time_to_solution_single_qpu_days"] = r.time_to_solution_single_qpu_days;
    j["t_total_seconds"] = r.t_total_seconds;
    j["qpu_parallelism_k_star"] = r.qpu_parallelism_k_star;
    j["time_to_solution_k_star_qpus_days"] = r.time_to_solution_k_star_qpus_days;
    j["gamma_sq_m"] = r.gamma_sq_m;
    j["delta"] = r.delta;
    j["m_rounds"] = r.m_rounds;
    j["epsilon"] = r.epsilon;
    j["xi"] = r.xi;
    j["p_ph"] = r.p_ph;
    j["q_budget"] = r.q_budget;
    j["code_cycle_us"] = r.code_cycle_us;
    j["scheme"] = r.scheme;
    j["calibration_provenance"] = r.calibration_provenance;
    json rounds = json::array();
    for (const auto& rd : r.rounds)
        rounds.push_back({{"m", rd.m},
                          {"n_shots", rd.n_shots},
                          {"g_m", rd.g_m},
                          {"c_total_clocks", rd.c_total_clocks},
                          {"p_total", rd.p_total},
                          {"gamma_sq", rd.gamma_sq},
                          {"t_seconds", rd.t_seconds}});
    j["rounds"] = rounds;
    return j;
}

ResourceReport report_from_json(const json& j) {
    ResourceReport r;
    r.l_d = j.at("l_d").get<std::size_t>();
    r.lambda_r = j.at("lambda_r").get<double>();
    r.lambda = j.at("lambda").get<double>();
    r.n_l = j.at("n_l").get<int>();
    r.g_m = j.at("g_m").get<std::uint64_t>();
    r.smm_priority = j.at("smm_priority").get<std::string>();
    r.d = j.at("d").get<int>();
    r.theta_bar_l = j.at("theta_bar_l").get<double>();
    r.p_total = j.at("p_total").get<double>();
    r.n_patch = j.at("n_patch").get<int>();
    r.physical_qubits_per_qpu = j.at("physical_qubits_per_qpu").get<std::uint64_t>();
    r.maximum_per_shot_runtime_s = j.at("maximum_per_shot_runtime_s").get<double>();
    r.time_to_solution_single_qpu_days = j.at("time_to_solution_single_qpu_days").get<double>();
    r.t_total_seconds = j.at("t_total_seconds").get<double>();
    r.qpu_parallelism_k_star = j.at("qpu_parallelism_k_star").get<int>();
    r.time_to_solution_k_star_qpus_days = j.at("time_to_solution_k_star_qpus_days").get<double>();
    r.gamma_sq_m = j.at("gamma_sq_m").get<double>();
    r.delta = j.at("delta").get<double>();
    r.m_rounds = j.at("m_rounds").get<int>();
    r.epsilon = j.at("epsilon").get<double>();
    r.xi = j.at("xi").get<double>();
    r.p_ph = j.at("p_ph").get<double>();
    r.q_budget = j.at("q_budget").get<double>();
    r.code_cycle_us = j.at("code_cycle_us").get<double>();
    r.scheme = j.at("scheme").get<std::string>();
    r.calibration_provenance = j.at("calibration_provenance").get<std::string>();
    for (const auto& rd : j.at("rounds"))
        r.rounds.push_back({rd.at("m").get<int>(), rd.at("n_shots").get<std::uint64_t>(),
                            rd.at("g_m").get<std::uint64_t>(), rd.at("c_total_clocks").get<double>(),
                            rd.at("p_total").get<double>(), rd.at("gamma_sq").get<double>(),
                            rd.at("t_seconds").get<double>()});
    return r;
}

json rpe_run_to_json(const RpeRun& run) {
    json j;
    j["theta_star"] = run.theta_star;
    j["energy_estimate"] = run.energy_estimate;
    j["energy_shift"] = run.energy_shift;
    j["energy_scale"] = run.energy_scale;
    json rounds = json::array();
    for (const auto& r : run.rounds)
        rounds.push_back({{"m", r.m},
                          {"t_m", r.t_m},
                          {"n_shots", r.n_shots},
                          {"z_bar_re", r.z_bar.real()},
                          {"z_bar_im", r.z_bar.imag()},
                          {"theta_m", r.theta_m}});
    j["rounds"] = rounds;
    return j;
}

json run_ingest(const IngestOptions& opts, std::ostream& out) {
    set_thread_cap(opts.threads);
    ManifestBuilder manifest("ingest", opts.out_prefix);
    manifest.add_input(opts.input);
    manifest.set_config({{"input", opts.input}, {"truncate", opts.truncate}, {"top_k", opts.top_k}});

    const ElectronIntegrals x = parse_fcidump_file(opts.input);
    CoefficientTable table = prepare_sorted(extract_coefficients(x));
    if (opts.truncate > 0) table = truncate_tail(table, opts.truncate);

    json stats = table_stats(table, opts.top_k);
    stats["n_orbitals"] = x.n_orbitals;
    stats["n_electrons"] = x.n_electrons();
    stats["truncate_threshold"] = opts.truncate;

    {
        std::ostringstream ss;
        write_table_csv(table, ss);
        manifest.write_output(opts.out_prefix + ".table.csv", ss.str());
    }
    manifest.write_output(opts.out_prefix + ".stats.json", stats.dump(2) + "\n");
    manifest.finalize();
    out << stats.dump(2) << "\n";
    return stats;
}

json run_optimize(const OptimizeOptions& opts, std::ostream& out) {
    set_thread_cap(opts.threads);
    ManifestBuilder manifest("optimize", opts.out_prefix);
    manifest.add_input(opts.input);
    manifest.set_config({{"input", opts.input},
                         {"objective", opts.uwc.objective == UwcObjective::l1_norm ? "l1" : "uwc"},
                         {"epsilon_soft", opts.uwc.epsilon_soft},
                         {"delta_th", opts.uwc.delta_th},
                         {"max_iters", opts.uwc.n_iter_max},
                         {"spin_bliss", opts.uwc.include_spin_bliss},
                         {"epsilon", opts.cost.epsilon},
                         {"xi", opts.cost.xi}});

    const ElectronIntegrals x = parse_fcidump_file(opts.input);
    const CoefficientTable before = prepare_sorted(extract_coefficients(x));
    const UwcResult res = uwc_optimize(x, opts.cost, opts.uwc);
    const CoefficientTable after = prepare_sorted(extract_coefficients(res.integrals));

    manifest.write_output(opts.out_prefix + ".dist_initial.csv", distribution_csv(before));
    manifest.write_output(opts.out_prefix + ".dist_final.csv", distribution_csv(after));

    {
        std::ostringstream ss;
        for (const auto& rec : res.history.iterations) {
            json line = {{"iteration", rec.iteration},      {"g_m_discrete", rec.g_m_discrete},
                         {"g_soft", rec.g_soft},            {"lambda", rec.lambda},
                         {"l_d_star", rec.l_d_star},        {"w_soft", rec.w_soft},
                         {"accepted", rec.accepted},        {"optimizer_warning", rec.optimizer_warning}};
            ss << line.dump() << "\n";
        }
        manifest.write_output(opts.out_prefix + ".history.jsonl", ss.str());
    }

    json summary = uwc_history_to_json(res.history);
    summary["final_lambda"] = after.l1();
    summary["final_g_m"] = res.history.iterations.empty()
                               ? res.history.initial_g_m
                               : res.history.iterations.back().g_m_discrete;
    if (!res.integrals.spin_resolved) {
        std::ostringstream ss;
        write_fcidump(res.integrals, ss);
        manifest.write_output(opts.out_prefix + ".optimized.fcidump", ss.str());
        summary["optimized_fcidump"] = opts.out_prefix + ".optimized.fcidump";
    } else {
        // no file format exists for spin-resolved integrals; ship the table
        std::ostringstream ss;
        write_table_csv(after, ss);
        manifest.write_output(opts.out_prefix + ".optimized.table.csv", ss.str());
        summary["optimized_table"] = opts.out_prefix + ".optimized.table.csv";
    }
    manifest.finalize();
    out << summary.dump(2) << "\n";
    return summary;
}

json run_estimate(const EstimateOptions2& opts, std::ostream& out) {
    set_thread_cap(opts.threads);
    ManifestBuilder manifest("estimate", opts.out_prefix);
    manifest.add_input(opts.input);
    if (!opts.calibration_path.empty()) manifest.add_input(opts.calibration_path);
    manifest.set_config({{"input", opts.input},
                         {"calibration", opts.calibration_path},
                         {"epsilon", opts.cost.epsilon},
                         {"xi", opts.cost.xi},
                         {"p_ph", opts.p_ph},
                         {"q_budget", opts.q_budget},
                         {"setting", opts.setting},
                         {"clamp_calibration", opts.clamp_calibration},
                         {"compare", opts.compare}});

    const SmmCalibration cal = load_calibration_file(opts.calibration_path);
    const ElectronIntegrals x = parse_fcidump_file(opts.input);
    const CoefficientTable table = prepare_sorted(extract_coefficients(x));

    EstimateOptions est;
    est.p_ph = opts.p_ph;
    est.q_budget = opts.q_budget;
    est.clamp_calibration = opts.clamp_calibration;
    if (opts.setting != "auto") est.setting = smm_setting_from_string(opts.setting);

    json doc;
    if (!opts.compare) {
        const ResourceReport rep = estimate(table, opts.cost, cal, est);
        doc = report_to_json(rep);
        manifest.write_output(opts.out_prefix + ".report.csv",
                              report_csv(path_stem(opts.input), rep));
    } else {
        EstimateOptions det = est;
        det.scheme = EvolutionScheme::deterministic;
        const ResourceReport trotter = estimate(table, opts.cost, cal, det);
        const ResourceReport partial = estimate(table, opts.cost, cal, est);
        const UwcResult uwc = uwc_optimize(x, opts.cost, opts.uwc);
        const CoefficientTable opt_table = prepare_sorted(extract_coefficients(uwc.integrals));
        const ResourceReport partial_uwc = estimate(opt_table, opts.cost, cal, est);
        doc["trotter"] = report_to_json(trotter);
        doc["partial_random"] = report_to_json(partial);
        doc["partial_random_uwc"] = report_to_json(partial_uwc);
        manifest.write_output(opts.out_prefix + ".report.csv",
                              report_csv(path_stem(opts.input), partial_uwc));
    }
    manifest.write_output(opts.out_prefix + ".cost.json",
                          cost_breakdown_to_json(total_cost(table, opts.cost)).dump(2) + "\n");

    manifest.write_output(opts.out_prefix + ".report.json", doc.dump(2) + "\n");
    manifest.finalize();
    out << doc.dump(2) << "\n";
    return doc;
}

int run_rpe_sim(const RpeSimOptions& opts, std::ostream& out) {
    set_thread_cap(opts.threads);
    ManifestBuilder manifest("rpe-sim", opts.out_prefix);
    manifest.add_input(opts.input);
    manifest.set_config({{"input", opts.input},
                         {"mode", opts.mode},
                         {"trials", opts.trials},
                         {"seed", opts.seed},
                         {"xi", opts.xi},
                         {"eta", opts.eta},
                         {"m_rounds", opts.m_rounds}});

    const ElectronIntegrals x = parse_fcidump_file(opts.input);
    const CoefficientTable table = prepare_sorted(extract_coefficients(x));

    RpeConfig cfg;
    cfg.xi = opts.xi;
    cfg.eta = opts.eta;
    cfg.m_rounds = opts.m_rounds;

    SignalBackend backend;
    double e0_scaled = 0.0;
    // The per-trial reference is the lowest eigenvalue the initial state
    // actually supports: eigencomponents with zero weight are invisible to
    // the estimator.
    auto supported_ground = [](const std::vector<double>& energies,
                               const std::vector<double>& weights) {
        double best = 0.0;
        bool found = false;
        for (std::size_t k = 0; k < energies.size(); ++k) {
            if (weights[k] < 1e-12) continue;
            if (!found || energies[k] < best) best = energies[k];
            found = true;
        }
        if (!found) throw ValidationError("rpe-sim: initial state has no spectral support");
        return best;
    };
    if (opts.mode == "circuit") {
        if (table.n_qubits > 12)
            throw ValidationError("rpe-sim: circuit mode limited to 12 qubits");
        const double lambda = std::max(table.l1(), 1e-6);
        const double c_gs = trotter_constant(lambda, opts.cost);
        StepSizes step = optimal_step(opts.cost.epsilon, c_gs, opts.cost.order_p);
        // small toy instances can push the optimal step past the aliasing
        // window delta * lambda < pi; cap it there
        step.delta = std::min(step.delta, 2.0 / lambda);
        const Statevector psi =
            hartree_fock_state(x.n_orbitals, x.n_alpha, x.n_beta, table.n_qubits);
        backend = make_circuit_backend(table, step.delta, opts.cost, psi, table.n_qubits);
        CoefficientTable bare = table;
        bare.constant = 0.0;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(jw_matrix(bare));
        Eigen::Map<const Eigen::VectorXcd> v(psi.data(), psi.size());
        std::vector<double> energies, weights;
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
            energies.push_back(es.eigenvalues()(k));
            weights.push_back(std::norm(es.eigenvectors().col(k).dot(v)));
        }
        e0_scaled = supported_ground(energies, weights) * step.delta;
    } else {
        if (table.n_qubits > kDenseQubitLimit)
            throw ValidationError("rpe-sim: dense modes limited to 14 qubits");
        const Statevector psi =
            hartree_fock_state(x.n_orbitals, x.n_alpha, x.n_beta, table.n_qubits);
        const SignalMode mode =
            opts.mode == "exact" ? SignalMode::exact : SignalMode::sampled_exact;
        cfg.infinite_samples = opts.mode == "exact";
        backend = make_spectral_backend(jw_matrix(table), psi, mode);
        e0_scaled = supported_ground(backend.energies, backend.weights);
    }

    json trials = json::array();
    double sq_sum = 0.0;
    for (int t = 0; t < opts.trials; ++t) {
        cfg.seed = CounterRng::mix(opts.seed + 0x9e37ULL * static_cast<std::uint64_t>(t));
        const RpeRun run = rpe_run(backend, cfg);
        json jt = rpe_run_to_json(run);
        const double err = angular_distance(run.theta_star, e0_scaled);
        jt["error_vs_ground"] = err;
        sq_sum += err * err;
        trials.push_back(jt);
    }
    const double rmse = std::sqrt(sq_sum / opts.trials);
    const double rho = std::pow(16.0 * M_PI / 3.0, 2.0) /
                       (std::pow(4.0, cfg.alpha_hoeffding - 1.0) - 1.0);
    const double bound = std::sqrt(1.0 + rho) * opts.xi * std::ldexp(1.0, -opts.m_rounds);

    json doc;
    doc["mode"] = opts.mode;
    doc["trials"] = trials;
    doc["rmse"] = rmse;
    doc["bound"] = bound;
    doc["rho"] = rho;
    doc["ground_energy_scaled"] = e0_scaled;
    // The sampling bound governs the exact-signal estimators; the circuit
    // estimate additionally carries Trotter and randomization bias, so the
    // bound is reported there without gating the exit code.
    const bool bound_applicable = opts.mode != "circuit";
    doc["bound_applicable"] = bound_applicable;
    const bool pass = !bound_applicable || rmse <= bound;
    doc["pass"] = pass;

    manifest.write_output(opts.out_prefix + ".rpe.json", doc.dump(2) + "\n");
    manifest.finalize();
    out << doc.dump(2) << "\n";
    return pass ? kOk : kStatisticalFailure;
}

}  // namespace prqpe::cli
