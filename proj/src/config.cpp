#include "scaledecay/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace scaledecay {
namespace {

const std::vector<std::string_view> kKnownKeys = {
    "hbar", "mass", "L0", "v",
    "potential.kind", "potential.V0bar", "potential.abar", "potential.bbar",
    "scan.kmin", "scan.kmax", "scan.samples", "scan.grid_step",
    "survival.tmax", "survival.samples",
    "oracle.enabled", "oracle.grid_points", "oracle.time_step", "oracle.domain_end",
    "oracle.boundary", "oracle.absorbing_strength",
    "resonance.n",
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

struct Entry {
    std::string value;
    int line = 0;
};

class Reader {
public:
    explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    int line_of(const std::string& key) const { return has(key) ? entries_.at(key).line : 0; }

    const Entry& require(const std::string& key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
        return it->second;
    }

    double number(const std::string& key) const { return parse_number(key, require(key)); }

    double number_or(const std::string& key, double fallback) const {
        return has(key) ? parse_number(key, entries_.at(key)) : fallback;
    }

    int integer_or(const std::string& key, int fallback) const {
        if (!has(key)) return fallback;
        const auto& e = entries_.at(key);
        int out = 0;
        const auto* first = e.value.data();
        const auto* last = first + e.value.size();
        const auto [ptr, ec] = std::from_chars(first, last, out);
        if (ec != std::errc() || ptr != last) throw ConfigError("'" + key + "' must be an integer, got '" + e.value + "'", e.line);
        return out;
    }

    bool boolean_or(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const auto& e = entries_.at(key);
        if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
        if (e.value == "false" || e.value == "0" || e.value == "no") return false;
        throw ConfigError("'" + key + "' must be true or false, got '" + e.value + "'", e.line);
    }

    std::string text(const std::string& key) const { return require(key).value; }

private:
    static double parse_number(const std::string& key, const Entry& e) {
        double out = 0.0;
        const auto* first = e.value.data();
        const auto* last = first + e.value.size();
        const auto [ptr, ec] = std::from_chars(first, last, out);
        if (ec != std::errc() || ptr != last || !std::isfinite(out)) {
            throw ConfigError("'" + key + "' must be a finite number, got '" + e.value + "'", e.line);
        }
        return out;
    }

    std::map<std::string, Entry> entries_;
};

void require(bool ok, const std::string& message, int line) {
    if (!ok) throw ConfigError(message, line);
}

} // namespace

const std::vector<std::string_view>& known_config_keys() { return kKnownKeys; }

RescaledPotential RunConfig::potential() const {
    return kind == PotentialKind::delta ? RescaledPotential::from(delta_model())
                                        : RescaledPotential::from(barrier_model());
}

DeltaModel RunConfig::delta_model() const { return {consts, V0bar, abar}; }

BarrierModel RunConfig::barrier_model() const { return {consts, V0bar, abar, bbar}; }

RunConfig parse_config(std::string_view text) {
    std::map<std::string, Entry> entries;
    RunConfig cfg;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find_first_of("#;"); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            require(line.back() == ']', "unterminated section header '" + line + "'", line_no);
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            require(!section.empty(), "empty section name", line_no);
            continue;
        }
        const auto eq = line.find('=');
        require(eq != std::string::npos, "expected 'key = value', got '" + line + "'", line_no);
        std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        require(!key.empty(), "missing key before '='", line_no);
        require(!value.empty(), "missing value for '" + key + "'", line_no);
        if (!section.empty()) key = section + "." + key;
        require(std::find(kKnownKeys.begin(), kKnownKeys.end(), key) != kKnownKeys.end(), "unknown key '" + key + "'", line_no);
        if (const auto dup = entries.find(key); dup != entries.end()) {
            throw ConfigError("duplicate key '" + key + "' (first set on line " + std::to_string(dup->second.line) + ")",
                              line_no);
        }
        entries[key] = {value, line_no};
        cfg.entries.emplace_back(key, value);
    }

    const Reader r(std::move(entries));
    cfg.consts.hbar = r.number("hbar");
    cfg.consts.mass = r.number("mass");
    require(cfg.consts.hbar > 0.0, "hbar must be positive", r.line_of("hbar"));
    require(cfg.consts.mass > 0.0, "mass must be positive", r.line_of("mass"));
    cfg.L0 = r.number("L0");
    cfg.v = r.number("v");
    require(cfg.L0 > 0.0, "L0 must be positive", r.line_of("L0"));

    const std::string kind = r.text("potential.kind");
    if (kind == "delta") {
        cfg.kind = PotentialKind::delta;
    } else if (kind == "square-barrier" || kind == "square_barrier") {
        cfg.kind = PotentialKind::square_barrier;
    } else {
        throw ConfigError("potential.kind must be 'delta' or 'square-barrier', got '" + kind + "'",
                          r.line_of("potential.kind"));
    }
    cfg.V0bar = r.number("potential.V0bar");
    cfg.abar = r.number("potential.abar");
    require(cfg.V0bar > 0.0, "potential.V0bar must be positive", r.line_of("potential.V0bar"));
    require(cfg.abar > 0.0, "potential.abar must be positive", r.line_of("potential.abar"));
    if (cfg.kind == PotentialKind::square_barrier) {
        cfg.bbar = r.number("potential.bbar");
        require(cfg.bbar > cfg.abar, "potential.bbar must exceed potential.abar", r.line_of("potential.bbar"));
    } else if (r.has("potential.bbar")) {
        throw ConfigError("potential.bbar only applies to kind = square-barrier", r.line_of("potential.bbar"));
    }

    cfg.scan_kmin = r.number_or("scan.kmin", cfg.scan_kmin);
    cfg.scan_kmax = r.number_or("scan.kmax", cfg.scan_kmax);
    cfg.scan_samples = r.integer_or("scan.samples", cfg.scan_samples);
    cfg.scan_grid_step = r.number_or("scan.grid_step", cfg.scan_grid_step);
    require(cfg.scan_kmin > 0.0, "scan.kmin must be positive", r.line_of("scan.kmin"));
    require(cfg.scan_kmax > cfg.scan_kmin, "scan.kmax must exceed scan.kmin", r.line_of("scan.kmax"));
    require(cfg.scan_samples >= 3, "scan.samples must be at least 3", r.line_of("scan.samples"));
    require(cfg.scan_grid_step > 0.0, "scan.grid_step must be positive", r.line_of("scan.grid_step"));

    cfg.survival_tmax = r.number_or("survival.tmax", cfg.survival_tmax);
    cfg.survival_samples = r.integer_or("survival.samples", cfg.survival_samples);
    require(cfg.survival_tmax > 0.0, "survival.tmax must be positive", r.line_of("survival.tmax"));
    require(cfg.survival_samples >= 2, "survival.samples must be at least 2", r.line_of("survival.samples"));
    if (cfg.v < 0.0 && cfg.survival_tmax >= cfg.L0 / -cfg.v) {
        throw ConfigError("survival.tmax must stay below L0/|v| = " + std::to_string(cfg.L0 / -cfg.v) +
                              " for a contracting potential",
                          r.has("survival.tmax") ? r.line_of("survival.tmax") : r.line_of("v"));
    }

    cfg.oracle_enabled = r.boolean_or("oracle.enabled", cfg.oracle_enabled);
    cfg.oracle_grid_points = r.integer_or("oracle.grid_points", cfg.oracle_grid_points);
    cfg.oracle_time_step = r.number_or("oracle.time_step", cfg.oracle_time_step);
    cfg.oracle_domain_end = r.number_or("oracle.domain_end", cfg.oracle_domain_end);
    cfg.oracle_absorbing_strength = r.number_or("oracle.absorbing_strength", cfg.oracle_absorbing_strength);
    require(cfg.oracle_grid_points >= 8, "oracle.grid_points must be at least 8", r.line_of("oracle.grid_points"));
    require(cfg.oracle_time_step > 0.0, "oracle.time_step must be positive", r.line_of("oracle.time_step"));
    require(cfg.oracle_domain_end > 0.0, "oracle.domain_end must be positive", r.line_of("oracle.domain_end"));
    require(cfg.oracle_absorbing_strength > 0.0, "oracle.absorbing_strength must be positive",
            r.line_of("oracle.absorbing_strength"));
    if (r.has("oracle.boundary")) {
        const std::string b = r.text("oracle.boundary");
        if (b == "reflecting") {
            cfg.oracle_boundary = Boundary::reflecting;
        } else if (b == "absorbing") {
            cfg.oracle_boundary = Boundary::absorbing;
        } else {
            throw ConfigError("oracle.boundary must be 'reflecting' or 'absorbing', got '" + b + "'",
                              r.line_of("oracle.boundary"));
        }
    }

    cfg.resonance_n = r.integer_or("resonance.n", 0);
    require(cfg.resonance_n >= 0, "resonance.n must be non-negative", r.line_of("resonance.n"));
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace scaledecay
