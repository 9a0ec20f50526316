#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace fraclab {

// A validated sweep configuration. The schema is strict: unknown keys are
// rejected, parameter grids must be nonempty, and the seed is explicit.
//
// {
//   "kind": "sumproduct" | "projection" | "tube" | "decay" | "pinned"
//           | "simplex" | "condition",
//   "seed": <u64>,
//   "params": { ... kind-specific ... }
// }
struct ExperimentConfig {
    std::string kind;
    std::uint64_t seed = 0;
    nlohmann::json params;

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load(const std::string& path);
    nlohmann::json to_json() const;
};

// One row per grid point. `measured` and `predicted` are always present;
// failures are recorded per row and never abort the sweep.
struct ExperimentReport {
    std::string kind;
    std::uint64_t seed = 0;
    std::string version;
    std::string config_digest;
    nlohmann::json config;
    std::vector<nlohmann::json> rows;

    static ExperimentReport from_json(const nlohmann::json& j);
    static ExperimentReport load(const std::string& path);
    nlohmann::json to_json() const;
};

ExperimentReport run_sweep(const ExperimentConfig& cfg, int threads = 1);

enum class ReportFormat { csv, json, svg };

// Writes <base>.csv / <base>.json / <base>.svg. The predicted column of
// every row is recomputed from its parameters at emission time and must
// match the stored value. Timestamps are opt-in so that identical
// configurations emit byte-identical files.
std::vector<std::string> emit_report(const ExperimentReport& report, const std::string& base_path,
                                     const std::vector<ReportFormat>& formats, bool with_timestamp = false);

// The prediction attached to a row, as a pure function of (kind, params).
nlohmann::json recompute_predicted(const std::string& kind, const nlohmann::json& row_params);

std::string fraclab_version();

}  // namespace fraclab
