#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "couette/config.hpp"
#include "couette/diagnostics.hpp"

namespace couette {

struct PresetInfo {
    std::string name;
    std::vector<std::string> claims;
    std::string description;
};

const std::vector<PresetInfo>& presets();
// Default configuration of a preset; unknown name throws with the list of known presets.
ExperimentConfig preset_config(const std::string& name);

// Default end time of a preset at the given physical parameters.
double default_T(const std::string& preset, const PhysicalParams& phys, const ModeGrid& grid);

FieldEnsemble make_initial_data(const ExperimentConfig& cfg);

// 1/(2pi)^3-normalized transform of amplitude*exp(-y^2/(2 sigma^2)) at (0, eta, 0).
double gaussian00_hat(double eta, double sigma, double amplitude);
double gaussian00_l2_exact(double sigma, double amplitude);  // physical L2 on T x R x T
double gaussian00_l1_exact(double sigma, double amplitude);  // physical L1 on T x R x T
// Physical norms of the k = l = 0 part of a component, by Parseval (L2) and by dense inverse transform (L1).
double physical_l2_00(const FieldEnsemble& ens, int component);
double physical_l1_00(const FieldEnsemble& ens, const std::vector<int>& components, const std::vector<double>& scale);

struct SubRunResult {
    std::string name;
    std::map<std::string, Series> series;  // energy CSV columns keyed by name
    std::vector<AuditReport> audits;
    nlohmann::json extra;  // preset-specific summaries
    bool pass = true;
};

struct RunResult {
    std::filesystem::path dir;
    std::vector<SubRunResult> subruns;
    nlohmann::json manifest;
    bool pass = true;
};

// Output root: $COUETTE_OUTPUT_ROOT if set, otherwise the current directory.
std::filesystem::path output_root();

RunResult run(const ExperimentConfig& cfg);
RunResult sweep(const ExperimentConfig& cfg, const std::vector<double>& mus);

// Re-audits a finished run from its CSV files.
std::vector<AuditReport> audit_run(const std::filesystem::path& run_dir, const std::string& claim);

nlohmann::json to_json(const AuditReport& r);

std::string sha256_hex(const std::string& bytes);

// Random non-zero-mode state per mode, independent of evaluation order.
PrimitiveState random_state(std::uint64_t seed, std::uint64_t index, double amplitude);

struct DuhamelCheck {
    double max_relative = 0.0;
};
// Integrates each k = 0 mode on a uniform grid of spacing h up to T and compares u1 with duhamel_u1_zero.
DuhamelCheck duhamel_crosscheck(const FieldEnsemble& ens, double T, double h, const PhysicalParams& phys,
                                double tol, unsigned threads = 0);

}  // namespace couette
