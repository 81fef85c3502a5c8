#pragma once

// Self-checks run by `scaledecay validate`: closed forms against an independent
// transfer matrix, the integrator against the closed forms, fitted against analytic
// resonances and, when the oracle is enabled, direct time evolution against the
// survival predictions, frame consistency, unitarity and grid convergence.

#include <string>
#include <vector>

#include "json.hpp"
#include "scaledecay/config.hpp"

namespace scaledecay {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
    nlohmann::json data = nlohmann::json::object();
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool passed() const;
    nlohmann::json to_json() const;
};

/// Runs every check that applies to the configuration. Exceptions inside a check
/// turn it into a failure with the message as detail.
ValidationReport validate_config(const RunConfig& cfg, int threads = 1);

/// Observed order log2(|a - b| / |b - c|) of three successively halved runs.
double observed_order(double coarse, double medium, double fine);

} // namespace scaledecay
