#include "catch_amalgamated.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "scaledecay/tasks.hpp"

using namespace scaledecay;
namespace fs = std::filesystem;

namespace {

const std::string kScanConfig = R"(hbar = 1
mass = 1
L0 = 1
v = 0.1
[potential]
kind = delta
V0bar = 50
abar = 1
[scan]
kmin = 0.5
kmax = 7
samples = 240
[survival]
tmax = 50
samples = 11
)";

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("scaledecay_test_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter()++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int n = 0;
        return n;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const fs::path& dir, const std::string& text, const std::string& name = "run.ini") {
    const auto p = dir / name;
    std::ofstream(p) << text;
    return p;
}

int cli(const std::string& args) {
    const char* exe = std::getenv("SCALEDECAY_CLI");
    REQUIRE(exe != nullptr);
    const int status = std::system((std::string(exe) + " " + args + " 2>/dev/null").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

nlohmann::json without_wall_time(const fs::path& p) {
    auto j = nlohmann::json::parse(slurp(p));
    j.erase("wall_time_s");
    return j;
}

} // namespace

TEST_CASE("write_atomic replaces the file and leaves no temporary", "[tasks]") {
    TempDir dir;
    const auto p = dir.path / "out.csv";
    write_atomic(p, "first\n");
    write_atomic(p, "second\n");
    CHECK(slurp(p) == "second\n");
    int files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path)) ++files;
    CHECK(files == 1);
}

TEST_CASE("csv header names the version and units", "[tasks]") {
    CHECK(csv_header({1.0, 1.0}).rfind("# scaledecay v" + std::string(version_string()), 0) == 0);
    CHECK(csv_header({2.0, 0.5}).find("hbar=2 mass=0.5") != std::string::npos);
}

TEST_CASE("default resonance counts", "[tasks]") {
    auto cfg = parse_config(kScanConfig);
    CHECK(analytic_resonances(cfg).size() == 2);
    cfg.resonance_n = 3;
    CHECK(analytic_resonances(cfg).size() == 3);
    const auto barrier = parse_config("hbar = 1\nmass = 1\nL0 = 1\nv = 0\n[potential]\nkind = square-barrier\n"
                                      "V0bar = 20\nabar = 1\nbbar = 2\n");
    CHECK(analytic_resonances(barrier).size() == 2);
}

TEST_CASE("scan output is byte-identical across runs and thread counts", "[tasks]") {
    TempDir dir;
    const auto cfg = parse_config(kScanConfig);
    const auto rec1 = run_scan(cfg, dir.path / "a", 1);
    const auto rec4 = run_scan(cfg, dir.path / "b", 4);
    const auto a = slurp(dir.path / "a" / "scan.csv");
    CHECK(a == slurp(dir.path / "b" / "scan.csv"));
    CHECK(a.rfind("# scaledecay", 0) == 0);
    CHECK(a.find("kbar_abar,C2,ln_C2\n") != std::string::npos);
    CHECK(rec1.summary == rec4.summary);
    CHECK(rec1.summary["minima"].size() == 2);
}

TEST_CASE("cli exit codes", "[tasks][cli]") {
    TempDir dir;
    const auto good = write_config(dir.path, kScanConfig);
    const auto out = dir.path / "out";

    SECTION("success writes outputs and the record") {
        REQUIRE(cli("scan --config " + good.string() + " --out " + out.string() + " --threads 2") == 0);
        CHECK(fs::exists(out / "scan.csv"));
        const auto rec = nlohmann::json::parse(slurp(out / "scan.json"));
        CHECK(rec["task"] == "scan");
        CHECK(rec.contains("wall_time_s"));
        CHECK(rec["outputs"].size() == 1);
    }
    SECTION("rerun is identical apart from wall time") {
        REQUIRE(cli("resonances --config " + good.string() + " --out " + (dir.path / "r1").string()) == 0);
        REQUIRE(cli("resonances --config " + good.string() + " --out " + (dir.path / "r2").string()) == 0);
        CHECK(slurp(dir.path / "r1" / "resonances.csv") == slurp(dir.path / "r2" / "resonances.csv"));
        CHECK(without_wall_time(dir.path / "r1" / "resonances.json") ==
              without_wall_time(dir.path / "r2" / "resonances.json"));
    }
    SECTION("malformed config exits 2 and writes nothing") {
        const auto bad = write_config(dir.path, kScanConfig + "bogus = 1\n", "bad.ini");
        CHECK(cli("scan --config " + bad.string() + " --out " + out.string()) == 2);
        CHECK_FALSE(fs::exists(out));
        CHECK(cli("scan --config " + (dir.path / "missing.ini").string() + " --out " + out.string()) == 2);
        CHECK(cli("scan --out " + out.string()) == 2);
        CHECK(cli("launch --config " + good.string()) == 2);
        CHECK(cli("scan --config " + good.string() + " --threads 0") == 2);
        CHECK_FALSE(fs::exists(out));
    }
    SECTION("numerical failure exits 3") {
        const auto coarse = write_config(dir.path, kScanConfig + "[scan]\ngrid_step = 0.3\n", "coarse.ini");
        CHECK(cli("scan --config " + coarse.string() + " --out " + out.string()) == 3);
    }
    SECTION("failed validation exits 4 with a report") {
        const auto configs = std::getenv("SCALEDECAY_CONFIGS");
        REQUIRE(configs != nullptr);
        CHECK(cli("validate --config " + (fs::path(configs) / "coarse.ini").string() + " --out " + out.string()) == 4);
        const auto report = nlohmann::json::parse(slurp(out / "validation_report.json"));
        CHECK(report["passed"] == false);
    }
}

TEST_CASE("figures task emits both landscapes", "[tasks][cli]") {
    TempDir dir;
    const auto configs = std::getenv("SCALEDECAY_CONFIGS");
    REQUIRE(configs != nullptr);
    REQUIRE(cli("figures --config " + (fs::path(configs) / "landscape_delta200.ini").string() + " --out " +
                dir.path.string()) == 0);
    CHECK(fs::exists(dir.path / "delta_landscape_strength10.csv"));
    CHECK(fs::exists(dir.path / "delta_landscape_strength200.csv"));
    CHECK(fs::exists(dir.path / "barrier_landscape.csv"));
    const auto rec = nlohmann::json::parse(slurp(dir.path / "figures.json"));
    CHECK(rec["summary"]["barrier_landscape.csv"]["roots_kbar_abar"].size() == 2);
}
