#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "prqpe/rpe.hpp"
#include "prqpe/smm.hpp"
#include "prqpe/uwc.hpp"

namespace prqpe::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// exit codes
inline constexpr int kOk = 0;
inline constexpr int kValidationError = 2;
inline constexpr int kInfeasible = 3;
inline constexpr int kStatisticalFailure = 4;

struct IngestOptions {
    std::string input;
    std::string out_prefix;
    double truncate = 0.0;  // 0 = keep everything
    int top_k = 10;
    int threads = 0;
};

struct OptimizeOptions {
    std::string input;
    std::string out_prefix;
    CostModelConfig cost;
    UwcConfig uwc;
    int threads = 0;
};

struct EstimateOptions2 {
    std::string input;
    std::string out_prefix;
    std::string calibration_path;
    CostModelConfig cost;
    double p_ph = 1e-3;
    double q_budget = 5e5;
    std::string setting = "auto";  // accuracy | speed | auto
    bool clamp_calibration = false;
    bool compare = false;  // emit the three-scheme comparison
    UwcConfig uwc;         // used by the comparison run
    int threads = 0;
};

struct RpeSimOptions {
    std::string input;
    std::string out_prefix;
    std::string mode = "exact";  // exact | sampled | circuit
    int trials = 1;
    std::uint64_t seed = 1;
    double xi = 0.1;
    double eta = 0.95;
    int m_rounds = 6;
    CostModelConfig cost;  // circuit mode chain
    int threads = 0;
};

nlohmann::json report_to_json(const ResourceReport& rep);
ResourceReport report_from_json(const nlohmann::json& j);

nlohmann::json rpe_run_to_json(const RpeRun& run);

// content hash used in run manifests (fnv1a64 over the file bytes)
std::string file_digest(const std::string& path);

// Each command writes its outputs plus a `<prefix>.manifest.json` and
// prints the primary JSON document to `out`. Errors are thrown.
nlohmann::json run_ingest(const IngestOptions& opts, std::ostream& out);
nlohmann::json run_optimize(const OptimizeOptions& opts, std::ostream& out);
nlohmann::json run_estimate(const EstimateOptions2& opts, std::ostream& out);
// returns kOk or kStatisticalFailure
int run_rpe_sim(const RpeSimOptions& opts, std::ostream& out);

}  // namespace prqpe::cli
