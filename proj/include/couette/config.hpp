#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "couette/dynamics_primitive.hpp"
#include "couette/params.hpp"

namespace couette {

enum class InitialKind { SingleMode, RandomBand, Gaussian00, GradientField, CustomList };

struct CustomEntry {
    int k = 0;
    double eta = 0.0;
    int l = 0;
    PrimitiveState state;
};

struct InitialDataSpec {
    InitialKind kind = InitialKind::RandomBand;
    double amplitude = 1.0;
    // single-mode: nearest grid point to (mode_k, mode_eta, mode_l)
    int mode_k = 1;
    double mode_eta = 0.0;
    int mode_l = 0;
    // random-band / gradient-field: |eta| <= band_eta on the selected x-modes
    double band_eta = 1.0;
    std::string modes = "nonzero";  // nonzero | zero | all
    // gaussian-00
    double sigma = 1.0;
    std::vector<std::string> fields{"b", "u2"};  // subset of b,u1,u2,u3
    bool conjugate_symmetric = true;
    std::vector<CustomEntry> entries;  // custom-list
};

struct TimeSpec {
    std::optional<double> T;  // unset: preset default
    std::size_t n_outputs = 200;
    Spacing spacing = Spacing::Log;
};

struct ExperimentConfig {
    std::string preset = "enhanced-dissipation";
    PhysicalParams phys{1e-3, 0.0, 1.0};
    std::optional<MultiplierParams> mp;
    ModeGrid grid;
    TimeSpec time;
    double tol = 1e-10;
    std::uint64_t seed = 1;
    std::string output_dir = "run";
    InitialDataSpec initial;
    // preset extras
    std::string base = "enhanced-dissipation";  // mu-sweep: wrapped preset
    std::vector<double> mu_list{1e-2, 1e-3, 1e-4};
    std::size_t samples = 100000;  // multiplier-audit sample count; oracle pair count
    unsigned threads = 0;
    std::string trajectory = "nonzero";  // full | nonzero | none
};

std::string_view initial_kind_name(InitialKind k);
InitialKind parse_initial_kind(std::string_view s);

// Applies the keys in `text` on top of `base`. Unknown sections/keys throw std::invalid_argument.
ExperimentConfig parse_config(const std::string& text, const ExperimentConfig& base);
// Starts from the preset named by the `preset` key (or enhanced-dissipation).
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

std::string serialize_config(const ExperimentConfig& cfg);

// Precision-preserving number formatting shared by every writer.
std::string fmt_double(double v);

}  // namespace couette
