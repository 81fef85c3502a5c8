#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scaledecay {

enum class Provenance { analytic, fitted, oracle };

std::string_view to_string(Provenance p);

/// One metastable level, described by the local model
///   C^2(Ebar) ~ G^2 (Delta + delta)^2 + F^2,   Delta = Ebar - Ebar_n.
/// The level decays in rescaled time with the width 2|F/G|.
struct Resonance {
    int index_n = 0;
    double kbar_n = 0.0;
    double Ebar_n = 0.0;
    std::optional<double> kprime_n; ///< evanescent wavenumber inside a square barrier
    double F = 0.0;
    double G = 0.0;
    double delta_shift = 0.0;
    double C2_min = 0.0;
    Provenance origin = Provenance::analytic;
    std::vector<std::string> warnings; ///< regime diagnostics; values are still computed

    /// 2|F/G|, the decay width in the rescaled frame (energy units).
    double width() const;
};

struct SurvivalCurve {
    std::vector<double> times;
    std::vector<double> tau;
    std::vector<double> gamma;
    std::vector<double> P;
    Provenance provenance = Provenance::analytic;
};

} // namespace scaledecay
