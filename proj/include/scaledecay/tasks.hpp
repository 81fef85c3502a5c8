#pragma once

// The five CLI pipelines and the pieces they share. Each task writes its CSV/JSON
// files atomically into an output directory and returns a ResultRecord.

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "scaledecay/config.hpp"
#include "scaledecay/scattering_solver.hpp"

namespace scaledecay {

std::string_view version_string();

/// `# scaledecay v<version>, units: hbar=<..> mass=<..>`
std::string csv_header(const PhysicalConstants& consts);

/// Writes `content` to a temporary sibling and renames it over `path`, creating the directory if needed.
void write_atomic(const std::filesystem::path& path, std::string_view content);

struct ResultRecord {
    std::string task;
    std::vector<std::pair<std::string, std::string>> input;
    std::vector<std::string> outputs;
    nlohmann::json summary = nlohmann::json::object();
    std::vector<std::string> warnings;
    double wall_time_s = 0.0;
    bool failed_validation = false;

    nlohmann::json to_json() const;
};

// --- shared pipeline pieces ----------------------------------------------------

/// Closed-form resonances 1..N. N is resonance.n when set, otherwise 2 for a delta
/// wall and every under-barrier root for a square barrier. Barrier values use the
/// exact-slope expansion. Throws NoSuchResonance past the last barrier root.
std::vector<Resonance> analytic_resonances(const RunConfig& cfg);

/// Scans C^2 around the analytic kbar_n, takes the nearest minimum and fits it with
/// kbar_n as the expansion point.
ResonanceFit fit_near(const RunConfig& cfg, const Resonance& analytic);

/// Box-assembled confined state of `resonance` (R = 100 abar, 201 members) as a profile phi(xbar).
std::function<double(double)> confined_profile(const RunConfig& cfg, const Resonance& resonance);

EvolutionConfig oracle_config(const RunConfig& cfg, double total_time);

// --- tasks -----------------------------------------------------------------------

ResultRecord run_scan(const RunConfig& cfg, const std::filesystem::path& out, int threads = 1);
ResultRecord run_resonances(const RunConfig& cfg, const std::filesystem::path& out, int threads = 1);
ResultRecord run_survival(const RunConfig& cfg, const std::filesystem::path& out, int threads = 1);
ResultRecord run_validate(const RunConfig& cfg, const std::filesystem::path& out, int threads = 1);
ResultRecord run_figures(const RunConfig& cfg, const std::filesystem::path& out, int threads = 1);

enum ExitCode : int {
    exit_ok = 0,
    exit_other = 1,
    exit_config = 2,
    exit_numerical = 3,
    exit_validation = 4,
};

/// Loads the config, runs `task`, writes `<task>.json` next to the task outputs and
/// maps failures onto exit codes. Diagnostics go to `log`.
int run_task(std::string_view task, const std::filesystem::path& config, const std::filesystem::path& out,
             int threads, std::ostream& log);

} // namespace scaledecay
