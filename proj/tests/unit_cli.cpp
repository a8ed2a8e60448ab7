#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "wwbloch/cli.hpp"

using namespace wwbloch;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               fs::path("wwbloch_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string prefix(const std::string& stem) const {
        return (path / stem).string();
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json base_config() {
    return json{{"profile", {{"preset", "cosx"}, {"eps", 0.01}}},
                {"N", 12},
                {"order", 4},
                {"theta_points", 65},
                {"bands", 5}};
}

} // namespace

TEST_CASE("setup parsing accepts presets and explicit profiles") {
    cli::RunSetup s = cli::parse_setup(base_config());
    CHECK(s.preset == "cosx");
    CHECK(s.profile.eps == doctest::Approx(0.01));
    CHECK(s.N == 12);

    json explicit_beta{
        {"profile",
         {{"h", 2.0}, {"eps", 0.02}, {"beta", {{1, 0.5, 0.0}, {-1, 0.5, 0.0}}}}}};
    cli::RunSetup e = cli::parse_setup(explicit_beta);
    CHECK(e.preset.empty());
    CHECK(e.profile.h == doctest::Approx(2.0));
    CHECK(e.profile.beta_support() == 1);
}

TEST_CASE("config rejection: unknown keys, bad types, conflicting profile") {
    TempDir tmp;
    json cfg = base_config();
    cfg["junk"] = 1;
    CHECK_THROWS_AS(cli::run_gap_scan(cfg, tmp.prefix("a"), 1), ConfigError);
    CHECK_FALSE(fs::exists(tmp.prefix("a") + "_gaps.json"));

    cfg = base_config();
    cfg["profile"]["typo"] = true;
    CHECK_THROWS_AS(cli::run_gap_scan(cfg, tmp.prefix("b"), 1), ConfigError);

    cfg = base_config();
    cfg["profile"]["beta"] = {{1, 0.5, 0.0}};  // preset and beta together
    CHECK_THROWS_AS(cli::parse_setup(cfg), ConfigError);

    cfg = base_config();
    cfg["N"] = "twelve";
    CHECK_THROWS_AS(cli::parse_setup(cfg), ConfigError);

    cfg = base_config();
    cfg["profile"].erase("eps");
    CHECK_THROWS_AS(cli::parse_setup(cfg), ConfigError);
}

TEST_CASE("band-structure writes the CSV grid and the gap report") {
    TempDir tmp;
    cli::run_band_structure(base_config(), tmp.prefix("run"), 2);
    const std::string csv = slurp(tmp.prefix("run") + "_bands.csv");
    REQUIRE_FALSE(csv.empty());
    CHECK(csv.rfind("theta,band0,band1,band2,band3,band4\n", 0) == 0);
    CHECK(csv.find("\r") == std::string::npos);  // LF only
    // 65 data rows + header
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 66);
    // first data row starts at the left cell edge
    CHECK(csv.substr(csv.find('\n') + 1, 6) == "-5.000");

    json gaps = json::parse(slurp(tmp.prefix("run") + "_gaps.json"));
    REQUIRE(gaps["gaps"].size() == 4);
    CHECK(gaps["gaps"][0]["index"] == 1);
    CHECK(gaps["gaps"][0]["closed"] == false);
    const double ratio = gaps["gaps"][0]["width"].get<double>() / 0.01;
    CHECK(ratio == doctest::Approx(0.19661).epsilon(2e-3));
}

TEST_CASE("repeated runs are byte-identical") {
    TempDir tmp;
    cli::run_band_structure(base_config(), tmp.prefix("x"), 1);
    cli::run_band_structure(base_config(), tmp.prefix("y"), 3);
    CHECK(slurp(tmp.prefix("x") + "_bands.csv") ==
          slurp(tmp.prefix("y") + "_bands.csv"));
    CHECK(slurp(tmp.prefix("x") + "_gaps.json") ==
          slurp(tmp.prefix("y") + "_gaps.json"));
}

TEST_CASE("gap scaling over an eps ladder") {
    TempDir tmp;
    json cfg = base_config();
    cfg["theta_points"] = 129;
    cfg["eps_ladder"] = {0.02, 0.01, 0.005, 0.0025};
    cfg["gaps"] = {1};
    cli::run_gap_scaling(cfg, tmp.prefix("s"), 2);
    json doc = json::parse(slurp(tmp.prefix("s") + "_scaling.json"));
    REQUIRE(doc["fits"].size() == 1);
    CHECK(doc["fits"][0]["gap"] == 1);
    CHECK(doc["fits"][0]["predicted_open"] == true);
    CHECK(doc["fits"][0]["exponent"].get<double>() == doctest::Approx(1.0).epsilon(0.02));
    CHECK(doc["fits"][0]["coefficient"].get<double>() ==
          doctest::Approx(0.19661).epsilon(0.01));

    cfg["eps_ladder"] = {0.02, 0.01};
    CHECK_THROWS_AS(cli::run_gap_scaling(cfg, tmp.prefix("short"), 1), ConfigError);
}

TEST_CASE("oracle validation report") {
    TempDir tmp;
    json cfg{{"profile", {{"preset", "cosx"}, {"eps", 0.02}}},
             {"N", 4},
             {"theta", 0.3},
             {"orders", {1, 2}},
             {"oracle", {{"nx", 48}, {"nsigma", 48}, {"richardson", false}}},
             {"seed", 5}};
    cli::run_validate_oracle(cfg, tmp.prefix("o"), 1);
    json doc = json::parse(slurp(tmp.prefix("o") + "_oracle.json"));
    REQUIRE(doc["residuals"].size() == 2);
    CHECK(doc["residuals"][0]["order"] == 1);
    CHECK(doc["residuals"][0]["relative"].get<double>() < 0.05);
    CHECK(doc["residuals"][1]["relative"].get<double>() <
          doc["residuals"][0]["relative"].get<double>());
}

TEST_CASE("evolution writes energy alongside the surface samples") {
    TempDir tmp;
    json cfg{{"profile", {{"preset", "cosx"}, {"eps", 0.02}}},
             {"N", 8},
             {"order", 4},
             {"theta", 0.0},
             {"gravity", 1.0},
             {"t_max", 2.0},
             {"steps", 4},
             {"grid_size", 32},
             {"initial",
              {{"eta", {{1, 1.0, 0.0}, {-1, 1.0, 0.0}}},
               {"eta_dot", json::array()}}}};
    cli::run_evolve(cfg, tmp.prefix("e"), 1);
    const std::string csv = slurp(tmp.prefix("e") + "_evolve.csv");
    REQUIRE_FALSE(csv.empty());
    CHECK(csv.rfind("t,energy,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    // energy column constant across rows
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    double e0 = -1.0;
    while (std::getline(lines, line)) {
        const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
        const double e = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        if (e0 < 0.0)
            e0 = e;
        else
            CHECK(e == doctest::Approx(e0).epsilon(1e-12));
    }
    CHECK(e0 > 0.0);
}

TEST_CASE("dispatch rejects unknown commands and bad files") {
    TempDir tmp;
    CHECK_THROWS_AS(
        cli::run_command("no-such", tmp.prefix("c") + ".json", tmp.prefix("c"), 1),
        ConfigError);
    CHECK_THROWS_AS(
        cli::run_command("gap-scan", tmp.prefix("absent.json"), tmp.prefix("c"), 1),
        ConfigError);
    std::ofstream bad(tmp.prefix("bad.json"));
    bad << "{ not json";
    bad.close();
    CHECK_THROWS_AS(
        cli::run_command("gap-scan", tmp.prefix("bad.json"), tmp.prefix("c"), 1),
        ConfigError);
}
