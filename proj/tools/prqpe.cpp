// Command-line pipeline: ingest -> optimize -> estimate -> rpe-sim.
// The primary JSON document goes to stdout, diagnostics to stderr.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "prqpe/cli.hpp"
#include "prqpe/errors.hpp"

namespace {

const char* default_calibration() {
    const char* env = std::getenv("PRQPE_CALIBRATION");
    return env ? env : "";
}

void add_cost_flags(CLI::App* cmd, prqpe::CostModelConfig& cost) {
    cmd->add_option("--epsilon", cost.epsilon, "target precision in Hartree");
    cmd->add_option("--xi", cost.xi, "initial-state infidelity parameter");
    cmd->add_option("--eta", cost.eta, "overlap lower bound");
    cmd->add_option("--gamma", cost.gamma, "randomized-protocol constant");
    cmd->add_option("--c-gate", cost.c_gate, "gate conversion factor");
    cmd->add_option("--trotter-a", cost.trotter_a, "Trotter-constant prefactor a");
    cmd->add_option("--trotter-b", cost.trotter_b, "Trotter-constant exponent b");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pauli-LCU optimization and phase-estimation resource toolkit"};
    app.require_subcommand(1);

    prqpe::cli::IngestOptions ingest;
    auto* c_ingest = app.add_subcommand("ingest", "FCIDUMP to Pauli coefficient table and stats");
    c_ingest->add_option("input", ingest.input, "FCIDUMP file")->required();
    c_ingest->add_option("-o,--output", ingest.out_prefix, "output prefix")->required();
    c_ingest->add_option("--truncate", ingest.truncate, "tail-weight truncation threshold");
    c_ingest->add_option("--top-k", ingest.top_k, "coefficients listed in the stats");
    c_ingest->add_option("--threads", ingest.threads, "worker thread cap");

    prqpe::cli::OptimizeOptions optimize;
    std::string objective = "uwc";
    auto* c_opt = app.add_subcommand("optimize", "weight-concentration optimization");
    c_opt->add_option("input", optimize.input, "FCIDUMP file")->required();
    c_opt->add_option("-o,--output", optimize.out_prefix, "output prefix")->required();
    c_opt->add_option("--objective", objective, "uwc | l1")
        ->check(CLI::IsMember({"uwc", "l1"}));
    c_opt->add_option("--epsilon-soft", optimize.uwc.epsilon_soft, "sigmoid regularization");
    c_opt->add_option("--delta-th", optimize.uwc.delta_th, "relative convergence threshold");
    c_opt->add_option("--max-iters", optimize.uwc.n_iter_max, "iteration cap");
    c_opt->add_flag("--spin-bliss", optimize.uwc.include_spin_bliss,
                    "include the spin symmetry shift block");
    c_opt->add_option("--threads", optimize.threads, "worker thread cap");
    add_cost_flags(c_opt, optimize.cost);

    prqpe::cli::EstimateOptions2 estimate;
    estimate.calibration_path = default_calibration();
    auto* c_est = app.add_subcommand("estimate", "physical resource report");
    c_est->add_option("input", estimate.input, "FCIDUMP file")->required();
    c_est->add_option("-o,--output", estimate.out_prefix, "output prefix")->required();
    c_est->add_option("--calibration", estimate.calibration_path,
                      "calibration CSV (default $PRQPE_CALIBRATION)");
    c_est->add_option("--p-ph", estimate.p_ph, "physical error rate");
    c_est->add_option("--budget", estimate.q_budget, "physical qubit budget");
    c_est->add_option("--setting", estimate.setting, "accuracy | speed | auto")
        ->check(CLI::IsMember({"accuracy", "speed", "auto"}));
    c_est->add_flag("--clamp-calibration", estimate.clamp_calibration,
                    "clamp out-of-range angles to the calibration endpoints");
    c_est->add_flag("--compare", estimate.compare,
                    "emit the Trotter / partial-random / partial-random+optimized triple");
    c_est->add_option("--threads", estimate.threads, "worker thread cap");
    add_cost_flags(c_est, estimate.cost);

    prqpe::cli::RpeSimOptions rpe;
    auto* c_rpe = app.add_subcommand("rpe-sim", "phase-estimation simulation");
    c_rpe->add_option("input", rpe.input, "FCIDUMP file")->required();
    c_rpe->add_option("-o,--output", rpe.out_prefix, "output prefix")->required();
    c_rpe->add_option("--mode", rpe.mode, "exact | sampled | circuit")
        ->check(CLI::IsMember({"exact", "sampled", "circuit"}));
    c_rpe->add_option("--trials", rpe.trials, "independent runs");
    c_rpe->add_option("--seed", rpe.seed, "base RNG seed");
    c_rpe->add_option("--xi", rpe.xi, "infidelity parameter");
    c_rpe->add_option("--eta", rpe.eta, "overlap lower bound");
    c_rpe->add_option("--rounds", rpe.m_rounds, "number of RPE rounds M");
    c_rpe->add_option("--threads", rpe.threads, "worker thread cap");
    c_rpe->add_option("--epsilon", rpe.cost.epsilon, "target precision (circuit mode chain)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_ingest) prqpe::cli::run_ingest(ingest, std::cout);
        if (*c_opt) {
            optimize.uwc.objective = objective == "l1" ? prqpe::UwcObjective::l1_norm
                                                       : prqpe::UwcObjective::soft_gate_cost;
            prqpe::cli::run_optimize(optimize, std::cout);
        }
        if (*c_est) {
            if (estimate.calibration_path.empty())
                throw prqpe::ValidationError(
                    "estimate: no calibration file (--calibration or $PRQPE_CALIBRATION)");
            prqpe::cli::run_estimate(estimate, std::cout);
        }
        if (*c_rpe) return prqpe::cli::run_rpe_sim(rpe, std::cout);
    } catch (const prqpe::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return prqpe::cli::kInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return prqpe::cli::kValidationError;
    }
    return prqpe::cli::kOk;
}
