#include "scaledecay/resonance.hpp"

#include <cmath>

namespace scaledecay {

std::string_view to_string(Provenance p) {
    switch (p) {
    case Provenance::analytic: return "analytic";
    case Provenance::fitted: return "fitted";
    case Provenance::oracle: return "oracle";
    }
    return "unknown";
}

double Resonance::width() const { return 2.0 * std::abs(F / G); }

} // namespace scaledecay
