#pragma once

// Run configuration: a small INI-style file of `key = value` lines, where a
// `[section]` header prefixes the keys that follow it (`[scan]` then `kmin = 1`
// is the same as `scan.kmin = 1`). Units are never implied: hbar and mass are required.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scaledecay/analytic_models.hpp"
#include "scaledecay/potential.hpp"
#include "scaledecay/scaling_frame.hpp"
#include "scaledecay/tdse_oracle.hpp"

namespace scaledecay {

struct RunConfig {
    PhysicalConstants consts;
    double L0 = 1.0;
    double v = 0.0;

    PotentialKind kind = PotentialKind::delta;
    double V0bar = 0.0;
    double abar = 1.0;
    double bbar = 0.0;

    double scan_kmin = 0.05;
    double scan_kmax = 10.0;
    int scan_samples = 2000;
    double scan_grid_step = 1e-3;

    double survival_tmax = 100.0;
    int survival_samples = 101;

    bool oracle_enabled = false;
    int oracle_grid_points = 20001;
    double oracle_time_step = 0.02;
    double oracle_domain_end = 600.0;
    Boundary oracle_boundary = Boundary::reflecting;
    double oracle_absorbing_strength = 1.0;

    /// Highest resonance index to report (0: every root for a barrier, 3 for a delta wall).
    int resonance_n = 0;

    /// Every assignment as written, in file order, for echoing into result records.
    std::vector<std::pair<std::string, std::string>> entries;

    ScaleLaw law() const { return {L0, v}; }
    RescaledPotential potential() const;
    DeltaModel delta_model() const;
    BarrierModel barrier_model() const;
};

/// Parses configuration text. Throws ConfigError naming the line and key on any
/// syntax error, unknown or duplicate key, missing required key or invalid value.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::filesystem::path& path);

/// Every key the parser accepts.
const std::vector<std::string_view>& known_config_keys();

} // namespace scaledecay
