#include <doctest.h>

#include "quadprop/cli.hpp"
#include "quadprop/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace quadprop;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("quadprop_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

std::filesystem::path write_config(const TempDir& tmp, const json& j, const char* name = "cfg.json") {
    auto p = tmp.path / name;
    std::ofstream(p) << j.dump(2);
    return p;
}

int run_binary(const std::string& args) {
    const std::string cmd = std::string(QPROP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json propagate_config(double t) {
    json cfg;
    cfg["schema"] = 1;
    cfg["preset"] = {{"name", "isotropic"}};
    cfg["grid"] = {{"n", 128}, {"center", 0.0}, {"spacing", 16.0 / 128.0}};
    cfg["initial"] = {{"kind", "gaussian"}, {"center", 1.0}, {"width", 1.0}};
    cfg["time"] = {{"t", t}};
    cfg["method"] = "direct";
    return cfg;
}

} // namespace

TEST_CASE("propagate command produces artifacts and a report") {
    TempDir tmp;
    auto cfg = write_config(tmp, propagate_config(0.7));
    CliOverrides ov;
    ov.out_dir = tmp.path / "out";
    CHECK(run_command("propagate", cfg, ov) == 0);
    CHECK(std::filesystem::exists(*ov.out_dir / "report.json"));
    json report;
    std::ifstream(*ov.out_dir / "report.json") >> report;
    CHECK(report.at("status") == "ok");
    CHECK(report.at("states")[0].at("norm_drift").get<double>() < 1e-7);
    CHECK(std::filesystem::exists(*ov.out_dir / "state_t0.69999999999999996.csv"));
}

TEST_CASE("propagate at a caustic exits 3 and names the time") {
    TempDir tmp;
    auto cfg = write_config(tmp, propagate_config(M_PI));
    CliOverrides ov;
    ov.out_dir = tmp.path / "out";
    CHECK(run_command("propagate", cfg, ov) == 3);
    json report;
    std::ifstream(*ov.out_dir / "report.json") >> report;
    CHECK(report.at("status") == "numeric-error");
    CHECK(report.at("error").get<std::string>().find("caustic") != std::string::npos);
    CHECK(report.at("error").get<std::string>().find("3.14") != std::string::npos);
}

TEST_CASE("supercritical nls exits 2 citing the subcritical window") {
    TempDir tmp;
    json cfg = propagate_config(0.0);
    cfg.erase("method");
    cfg["preset"] = {{"name", "free"}};
    cfg["time"] = {{"T", 0.1}, {"dt", 0.01}};
    cfg["nls"] = {{"p", 5.0}, {"h", {{"kind", "constant"}, {"value", 1.0}}}};
    auto path = write_config(tmp, cfg);
    CliOverrides ov;
    ov.out_dir = tmp.path / "out";
    CHECK(run_command("nls", path, ov) == 2);
    json report;
    std::ifstream(*ov.out_dir / "report.json") >> report;
    CHECK(report.at("error").get<std::string>().find("p - 1 < 4/d") != std::string::npos);
}

TEST_CASE("unknown config keys are a validation error") {
    TempDir tmp;
    json cfg = propagate_config(0.5);
    cfg["typo_key"] = 1;
    auto path = write_config(tmp, cfg);
    CliOverrides ov;
    ov.out_dir = tmp.path / "out";
    CHECK(run_command("propagate", path, ov) == 2);
}

TEST_CASE("missing config file is an I/O error") {
    TempDir tmp;
    CliOverrides ov;
    ov.out_dir = tmp.path / "out";
    CHECK(run_command("propagate", tmp.path / "nope.json", ov) == 4);
}

TEST_CASE("identical config and seed give byte-identical artifacts") {
    TempDir tmp;
    auto cfg = write_config(tmp, propagate_config(0.9));
    CliOverrides a, b;
    a.out_dir = tmp.path / "a";
    b.out_dir = tmp.path / "b";
    a.seed = b.seed = 42;
    REQUIRE(run_command("propagate", cfg, a) == 0);
    REQUIRE(run_command("propagate", cfg, b) == 0);
    const auto name = "state_t0.90000000000000002.csv";
    CHECK(slurp(*a.out_dir / name) == slurp(*b.out_dir / name));
}

TEST_CASE("derive and strichartz commands") {
    TempDir tmp;
    SUBCASE("derive") {
        json cfg;
        cfg["preset"] = {{"name", "anisotropic"}, {"omega", 2.0}};
        cfg["time"] = {{"T", 1.2}, {"dt", 0.05}};
        auto path = write_config(tmp, cfg);
        CliOverrides ov;
        ov.out_dir = tmp.path / "out";
        CHECK(run_command("derive", path, ov) == 0);
        CHECK(std::filesystem::exists(*ov.out_dir / "characteristic_axis0.csv"));
        CHECK(std::filesystem::exists(*ov.out_dir / "phases_axis0.csv"));
    }
    SUBCASE("strichartz") {
        json cfg;
        cfg["strichartz"] = {{"pairs", {{2.0, 6.0, 1.5}, {2.0, 1e308, 1.0}}}};
        auto path = write_config(tmp, cfg);
        CliOverrides ov;
        ov.out_dir = tmp.path / "out";
        CHECK(run_command("strichartz", path, ov) == 0);
        CHECK(std::filesystem::exists(*ov.out_dir / "admissibility.csv"));
    }
}

TEST_CASE("the installed binary maps errors to exit codes") {
    TempDir tmp;
    auto good = write_config(tmp, propagate_config(0.7), "good.json");
    auto caustic = write_config(tmp, propagate_config(M_PI), "caustic.json");
    CHECK(run_binary("propagate --config " + good.string() + " --out " + (tmp.path / "o1").string()) == 0);
    CHECK(run_binary("propagate --config " + caustic.string() + " --out " + (tmp.path / "o2").string()) == 3);
    CHECK(run_binary("--help") == 0);
}
