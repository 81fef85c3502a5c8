#include "scaledecay/tasks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <system_error>

#include "scaledecay/numerics.hpp"
#include "scaledecay/tdse_oracle.hpp"
#include "scaledecay/validation.hpp"

#ifndef SCALEDECAY_VERSION
#define SCALEDECAY_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace scaledecay {
namespace {

constexpr int kDeltaDefaultCount = 2;
constexpr double kBoxLengthInWells = 100.0;
constexpr int kBoxMembers = 201;
constexpr int kLocalScanSamples = 401;

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

double rel_dev(double fitted, double analytic) {
    return analytic != 0.0 ? (fitted - analytic) / std::abs(analytic) : fitted - analytic;
}

ResultRecord make_record(std::string task, const RunConfig& cfg) {
    ResultRecord r;
    r.task = std::move(task);
    r.input = cfg.entries;
    return r;
}

void emit(ResultRecord& rec, const fs::path& out, const std::string& name, const std::string& content) {
    write_atomic(out / name, content);
    rec.outputs.push_back(name);
}

void collect_warnings(ResultRecord& rec, const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) {
        if (std::find(rec.warnings.begin(), rec.warnings.end(), w) == rec.warnings.end()) rec.warnings.push_back(w);
    }
}

// Sample-level local minima of a curve, polished by a three-point parabola.
json curve_minima(const std::vector<double>& x, const std::vector<double>& y) {
    json out = json::array();
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (y[i] < y[i - 1] && y[i] < y[i + 1]) {
            out.push_back(numerics::parabola_vertex(x[i - 1], y[i - 1], x[i], y[i], x[i + 1], y[i + 1]));
        }
    }
    return out;
}

json resonance_json(const Resonance& r) {
    json j{{"n", r.index_n}, {"kbar_n", r.kbar_n}, {"Ebar_n", r.Ebar_n}, {"F", r.F}, {"G", r.G},
           {"delta", r.delta_shift}, {"C2_min", r.C2_min}, {"width", r.width()},
           {"origin", std::string(to_string(r.origin))}};
    if (r.kprime_n) j["kprime_n"] = *r.kprime_n;
    if (!r.warnings.empty()) j["warnings"] = r.warnings;
    return j;
}

} // namespace

std::string_view version_string() { return SCALEDECAY_VERSION; }

std::string csv_header(const PhysicalConstants& consts) {
    return "# scaledecay v" + std::string(version_string()) + ", units: hbar=" + num(consts.hbar) +
           " mass=" + num(consts.mass) + "\n";
}

void write_atomic(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::system_error(errno, std::generic_category(), "cannot write " + tmp.string());
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) throw std::system_error(errno, std::generic_category(), "write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

json ResultRecord::to_json() const {
    json in = json::array();
    for (const auto& [k, v] : input) in.push_back({k, v});
    return json{{"task", task},
                {"tool", "scaledecay"},
                {"version", std::string(version_string())},
                {"input", in},
                {"outputs", outputs},
                {"summary", summary},
                {"warnings", warnings},
                {"validation_passed", !failed_validation},
                {"wall_time_s", wall_time_s}};
}

// --- shared pieces ---------------------------------------------------------------

std::vector<Resonance> analytic_resonances(const RunConfig& cfg) {
    std::vector<Resonance> out;
    if (cfg.kind == PotentialKind::delta) {
        const int count = cfg.resonance_n > 0 ? cfg.resonance_n : kDeltaDefaultCount;
        for (int n = 1; n <= count; ++n) out.push_back(delta_resonance(cfg.delta_model(), n));
    } else {
        const auto model = cfg.barrier_model();
        const auto roots = barrier_roots(model);
        const int count = cfg.resonance_n > 0 ? cfg.resonance_n : static_cast<int>(roots.size());
        if (count == 0) throw NoSuchResonance("the barrier has no under-barrier roots");
        for (int n = 1; n <= count; ++n) out.push_back(barrier_resonance(model, n));
    }
    return out;
}

ResonanceFit fit_near(const RunConfig& cfg, const Resonance& analytic) {
    const auto pot = cfg.potential();
    const double half = 0.25 * pi / cfg.abar;
    const double lo = std::max(analytic.kbar_n - half, 0.05 * analytic.kbar_n);
    double hi = analytic.kbar_n + half;
    if (cfg.kind == PotentialKind::square_barrier) hi = std::min(hi, cfg.barrier_model().kbar_cut() * (1.0 - 1e-9));
    const auto scan = scan_C2(pot, cfg.consts, lo, hi, kLocalScanSamples, cfg.scan_grid_step);
    const auto minima = locate_minima(scan);
    if (minima.empty()) {
        throw NoSuchResonance("no C2 minimum near kbar_" + std::to_string(analytic.index_n) + " = " + num(analytic.kbar_n));
    }
    const auto best = std::min_element(minima.begin(), minima.end(), [&](const auto& a, const auto& b) {
        return std::abs(a.kbar - analytic.kbar_n) < std::abs(b.kbar - analytic.kbar_n);
    });
    FitOptions opt;
    opt.grid_step = cfg.scan_grid_step;
    opt.anchor_kbar = analytic.kbar_n;
    opt.index_n = analytic.index_n;
    return fit_resonance(pot, cfg.consts, *best, -1.0, opt);
}

std::function<double(double)> confined_profile(const RunConfig& cfg, const Resonance& resonance) {
    const auto pot = cfg.potential();
    auto state = std::make_shared<AssembledState>(assemble_confined_state(
        pot, cfg.consts, resonance, kBoxLengthInWells * cfg.abar, kBoxMembers, cfg.scan_grid_step));
    return [state](double x) { return state->evaluate(x); };
}

EvolutionConfig oracle_config(const RunConfig& cfg, double total_time) {
    EvolutionConfig e;
    e.domain_end = cfg.oracle_domain_end;
    e.grid_points = cfg.oracle_grid_points;
    e.time_step = cfg.oracle_time_step;
    e.total_time = total_time;
    e.boundary = cfg.oracle_boundary;
    e.absorbing_strength = cfg.oracle_absorbing_strength;
    e.boundary_leak_threshold = 1e-2;
    return e;
}

// --- tasks -------------------------------------------------------------------------

ResultRecord run_scan(const RunConfig& cfg, const fs::path& out, int threads) {
    auto rec = make_record("scan", cfg);
    const auto pot = cfg.potential();
    const auto scan = scan_C2(pot, cfg.consts, cfg.scan_kmin, cfg.scan_kmax, cfg.scan_samples, cfg.scan_grid_step, threads);

    std::string csv = csv_header(cfg.consts) + "kbar_abar,C2,ln_C2\n";
    for (const auto& s : scan) csv += num(s.kbar * cfg.abar) + "," + num(s.C2) + "," + num(std::log(s.C2)) + "\n";
    emit(rec, out, "scan.csv", csv);

    auto c2 = [&](double k) {
        const auto s = integrate_state(pot, cfg.consts, k, cfg.scan_grid_step);
        return s.C * s.C;
    };
    json minima = json::array();
    for (const auto& m : locate_minima(scan, c2)) minima.push_back({{"kbar_abar", m.kbar * cfg.abar}, {"C2", m.C2}});
    rec.summary = {{"samples", scan.size()}, {"minima", minima}};
    if (cfg.kind == PotentialKind::square_barrier) rec.summary["kbar_cut_abar"] = cfg.barrier_model().kbar_cut() * cfg.abar;
    return rec;
}

ResultRecord run_resonances(const RunConfig& cfg, const fs::path& out, int /*threads*/) {
    auto rec = make_record("resonances", cfg);
    const auto analytic = analytic_resonances(cfg);
    const double L0sq = cfg.L0 * cfg.L0;

    std::string csv = csv_header(cfg.consts) +
                      "n,kbar_n,Ebar_n,F,G,delta,Gamma_n_static,F_fit,G_fit,delta_fit,Gamma_n_static_fit,"
                      "dev_F,dev_G,dev_delta,dev_Gamma\n";
    json rows = json::array();
    for (const auto& a : analytic) {
        const auto fit = fit_near(cfg, a);
        const auto& f = fit.resonance;
        const double ga = a.width() / L0sq;
        const double gf = f.width() / L0sq;
        csv += std::to_string(a.index_n) + "," + num(a.kbar_n) + "," + num(a.Ebar_n) + "," + num(a.F) + "," + num(a.G) +
               "," + num(a.delta_shift) + "," + num(ga) + "," + num(f.F) + "," + num(f.G) + "," + num(f.delta_shift) +
               "," + num(gf) + "," + num(rel_dev(f.F, a.F)) + "," + num(rel_dev(f.G, a.G)) + "," +
               num(rel_dev(f.delta_shift, a.delta_shift)) + "," + num(rel_dev(gf, ga)) + "\n";
        json row{{"analytic", resonance_json(a)}, {"fitted", resonance_json(f)}, {"fit_residual", fit.residual},
                 {"kbar_min", fit.kbar_min}, {"window", {fit.window_lo, fit.window_hi}}};
        if (cfg.kind == PotentialKind::square_barrier) {
            const auto thick = barrier_resonance(cfg.barrier_model(), a.index_n, BarrierExpansion::thick_well);
            row["thick_well"] = resonance_json(thick);
            row["closed_form_width"] = barrier_closed_form_width(cfg.barrier_model(), a.Ebar_n);
        }
        rows.push_back(row);
        collect_warnings(rec, a.warnings);
    }
    emit(rec, out, "resonances.csv", csv);
    rec.summary = {{"count", analytic.size()}, {"resonances", rows}};
    return rec;
}

ResultRecord run_survival(const RunConfig& cfg, const fs::path& out, int /*threads*/) {
    auto rec = make_record("survival", cfg);
    const auto law = cfg.law();
    const int n = cfg.resonance_n > 0 ? cfg.resonance_n : 1;
    RunConfig one = cfg;
    one.resonance_n = n;
    const Resonance res = analytic_resonances(one).back();
    collect_warnings(rec, res.warnings);

    const auto times = numerics::linspace(0.0, cfg.survival_tmax, cfg.survival_samples);
    const auto curve = survival_curve(res, law, times, cfg.consts);

    std::vector<double> oracle_P;
    json oracle_summary;
    if (cfg.oracle_enabled) {
        auto ecfg = oracle_config(cfg, cfg.survival_tmax);
        ecfg.output_times.assign(times.begin() + 1, times.end());
        const auto pot = cfg.potential();
        const auto psi0 = lifted_initial_state(confined_profile(cfg, res), law, cfg.consts, oracle_grid(ecfg));
        const auto run = evolve(pot, law, cfg.consts, psi0, ecfg);
        oracle_P = run.curve.P;
        double worst = 0.0;
        for (std::size_t i = 1; i < times.size(); ++i) {
            const double g = curve.gamma[i];
            if (g > 1.0) break;
            if (g < 0.05) continue;
            worst = std::max(worst, std::abs(-std::log(oracle_P[i]) - g) / g);
        }
        oracle_summary = {{"max_rel_dev_lnP_first_efold", worst},
                          {"norm_drift", run.norm_drift},
                          {"leak_at_boundary", run.leak_at_boundary},
                          {"P_final", oracle_P.back()}};
    }

    std::string csv = csv_header(cfg.consts) + (cfg.oracle_enabled ? "t,tau,gamma,P_analytic,P_oracle\n" : "t,tau,gamma,P_analytic\n");
    for (std::size_t i = 0; i < times.size(); ++i) {
        csv += num(curve.times[i]) + "," + num(curve.tau[i]) + "," + num(curve.gamma[i]) + "," + num(curve.P[i]);
        if (cfg.oracle_enabled) csv += "," + num(oracle_P[i]);
        csv += "\n";
    }
    emit(rec, out, "survival.csv", csv);

    rec.summary = {{"resonance", resonance_json(res)}, {"gamma_final", curve.gamma.back()}, {"P_final", curve.P.back()}};
    if (cfg.v > 0.0) rec.summary["P_plateau"] = std::exp(-res.width() / (cfg.consts.hbar * cfg.L0 * cfg.v));
    if (cfg.oracle_enabled) rec.summary["oracle"] = oracle_summary;
    return rec;
}

ResultRecord run_validate(const RunConfig& cfg, const fs::path& out, int threads) {
    auto rec = make_record("validate", cfg);
    const auto report = validate_config(cfg, threads);
    emit(rec, out, "validation_report.json", report.to_json().dump(2) + "\n");
    json checks = json::object();
    for (const auto& c : report.checks) checks[c.name] = c.passed;
    rec.summary = {{"passed", report.passed()}, {"checks", checks}};
    rec.failed_validation = !report.passed();
    return rec;
}

ResultRecord run_figures(const RunConfig& cfg, const fs::path& out, int /*threads*/) {
    auto rec = make_record("figures", cfg);
    const auto& c = cfg.consts;
    const double a = cfg.abar;
    const int samples = cfg.scan_samples;
    json summary = json::object();

    for (const double strength : {10.0, 200.0}) {
        // Dimensionless strength 2 m V0bar abar / hbar^2.
        const DeltaModel model{c, strength / (c.two_m_over_hbar2() * a), a};
        std::vector<double> x;
        std::vector<double> y;
        std::string csv = csv_header(c) + "kbar_abar,C2,ln_C2\n";
        for (double ka : numerics::linspace(0.02, 10.0, samples)) {
            const double C2 = delta_C2(model, ka / a);
            x.push_back(ka);
            y.push_back(std::log(C2));
            csv += num(ka) + "," + num(C2) + "," + num(std::log(C2)) + "\n";
        }
        const std::string name = "delta_landscape_strength" + num(strength) + ".csv";
        emit(rec, out, name, csv);
        summary[name] = {{"strength", strength}, {"ln_C2_minima_kbar_abar", curve_minima(x, y)}};
    }

    const BarrierModel barrier{c, 40.0 / (c.two_m_over_hbar2() * a * a), a, 2.0 * a};
    const double cut = barrier.kbar_cut() * a;
    std::vector<double> x;
    std::vector<double> y;
    std::string csv = csv_header(c) + "kbar_abar,C2,ln_C2,A_scaled\n";
    for (int i = 1; i <= samples; ++i) {
        const double ka = cut * i / (samples + 1);
        const double k = ka / a;
        const double C2 = barrier_C2(barrier, k);
        const double A = 2.5 * std::exp(barrier.kprime(k) * a) * barrier_A(barrier, k);
        x.push_back(ka);
        y.push_back(std::log(C2));
        csv += num(ka) + "," + num(C2) + "," + num(std::log(C2)) + "," + num(A) + "\n";
    }
    emit(rec, out, "barrier_landscape.csv", csv);
    json roots = json::array();
    for (double r : barrier_roots(barrier)) roots.push_back(r * a);
    summary["barrier_landscape.csv"] = {{"ln_C2_minima_kbar_abar", curve_minima(x, y)}, {"roots_kbar_abar", roots}, {"kbar_cut_abar", cut}};
    rec.summary = summary;
    return rec;
}

int run_task(std::string_view task, const fs::path& config, const fs::path& out, int threads, std::ostream& log) {
    using Runner = ResultRecord (*)(const RunConfig&, const fs::path&, int);
    Runner runner = nullptr;
    if (task == "scan") runner = run_scan;
    else if (task == "resonances") runner = run_resonances;
    else if (task == "survival") runner = run_survival;
    else if (task == "validate") runner = run_validate;
    else if (task == "figures") runner = run_figures;
    if (!runner) {
        log << "error: unknown task '" << task << "'\n";
        return exit_config;
    }
    if (threads < 1) {
        log << "error: --threads must be at least 1\n";
        return exit_config;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        const RunConfig cfg = load_config(config);
        fs::create_directories(out);
        ResultRecord rec = runner(cfg, out, threads);
        rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_atomic(out / (std::string(task) + ".json"), rec.to_json().dump(2) + "\n");
        for (const auto& w : rec.warnings) log << "warning: " << w << "\n";
        if (rec.failed_validation) {
            log << "validation failed; see " << (out / "validation_report.json").string() << "\n";
            return exit_validation;
        }
        return exit_ok;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const Error& e) {
        log << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return exit_other;
    }
}

} // namespace scaledecay
