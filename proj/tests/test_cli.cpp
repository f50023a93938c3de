#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "zbw/cli.hpp"
#include "zbw/dynamics.hpp"
#include "zbw/kinematics.hpp"

namespace fs = std::filesystem;
using zbw::cli::run;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("zbw_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const {
        return (path / name).string();
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("profile command writes csv and manifest") {
    TempDir tmp;
    const std::string out = tmp.file("profile");
    const int rc = run({"profile", "--f", "0.839", "--v-o", "0.6", "--theta",
                        "0", "--grid", "501", "--r-floor", "0.05", "--out",
                        out});
    CHECK(rc == 0);

    const std::string csv = slurp(out + ".csv");
    CHECK(csv.rfind("ell,R,V_Q,H,beta\n", 0) == 0);
    CHECK(csv.back() == '\n');
    // header + one row per grid point
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 502);

    const auto manifest = nlohmann::json::parse(slurp(out + ".csv.manifest.json"));
    CHECK(manifest.at("tool") == "zbw");
    CHECK(manifest.at("parameters").at("v_o") == 0.6);
    CHECK(manifest.at("derived").contains("lambda_r"));
    CHECK(manifest.at("outputs").size() == 1);

    // checksum recorded in the manifest matches the bytes on disk
    const std::string recorded = manifest.at("outputs")[0].at("fnv1a64");
    char expect[20];
    std::snprintf(expect, sizeof(expect), "0x%016llx",
                  static_cast<unsigned long long>(zbw::cli::fnv1a64(csv)));
    CHECK(recorded == expect);
}

TEST_CASE("identical configuration produces identical bytes") {
    TempDir tmp;
    const std::string a = tmp.file("a");
    const std::string b = tmp.file("b");
    const std::vector<std::string> base = {"profile", "--f",   "0.9",
                                           "--v-o",   "0.4",   "--grid",
                                           "301",     "--out", ""};
    auto with_out = [&base](const std::string& out) {
        auto v = base;
        v.back() = out;
        return v;
    };
    CHECK(run(with_out(a)) == 0);
    CHECK(run(with_out(b)) == 0);
    CHECK(slurp(a + ".csv") == slurp(b + ".csv"));
}

TEST_CASE("trajectory command respects the drift contract") {
    TempDir tmp;
    const std::string out = tmp.file("traj");
    const int rc = run({"trajectory", "--f", "0.839", "--vi0", "1.0",
                        "--periods", "2", "--grid", "1001", "--out", out});
    CHECK(rc == 0);
    const std::string csv = slurp(out + ".csv");
    CHECK(csv.rfind("tau,ell,v_i,V_Q,E_Q,drift\n", 0) == 0);

    // every recorded drift entry stays under the default ceiling
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line); // header
    double max_drift = 0.0;
    while (std::getline(lines, line)) {
        const auto pos = line.rfind(',');
        max_drift = std::max(max_drift, std::stod(line.substr(pos + 1)));
    }
    CHECK(max_drift <= 1e-8);

    const auto manifest = nlohmann::json::parse(slurp(out + ".csv.manifest.json"));
    CHECK(manifest.at("derived").at("energy_drift").get<double>() <= 1e-8);
}

TEST_CASE("uncertainty and sweep are consistent") {
    TempDir tmp;
    const std::string single = tmp.file("single");
    CHECK(run({"uncertainty", "--f", "0.839", "--v-o", "0.3", "--theta", "25",
               "--out", single}) == 0);
    const auto one = nlohmann::json::parse(slurp(single + ".json"));

    const std::string swept = tmp.file("swept");
    CHECK(run({"sweep", "--f", "0.839", "--v-o-min", "0.3", "--v-o-max", "0.3",
               "--v-o-step", "0.1", "--theta-min", "25", "--theta-max", "25",
               "--theta-step", "1", "--out", swept}) == 0);
    const auto many = nlohmann::json::parse(slurp(swept + ".json"));
    REQUIRE(many.at("rows").size() == 1);
    CHECK(many.at("rows")[0].at("dx_dp") == one.at("dx_dp"));
    CHECK(many.at("rows")[0].at("dE_dt") == one.at("dE_dt"));
}

TEST_CASE("sweep scaling behavior across v_o") {
    TempDir tmp;
    const std::string out = tmp.file("sweep");
    CHECK(run({"sweep", "--f", "0.839", "--v-o-min", "0.1", "--v-o-max", "0.9",
               "--v-o-step", "0.1", "--out", out}) == 0);
    const auto j = nlohmann::json::parse(slurp(out + ".json"));
    const auto& rows = j.at("rows");
    REQUIRE(rows.size() == 9);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].at("v_o").get<double>() >
              rows[i - 1].at("v_o").get<double>());
        CHECK(rows[i].at("dx_dp").get<double>() <
              rows[i - 1].at("dx_dp").get<double>());
    }

    const std::string perp = tmp.file("sweep_perp");
    CHECK(run({"sweep", "--f", "0.839", "--v-o-min", "0.1", "--v-o-max", "0.9",
               "--v-o-step", "0.1", "--theta-min", "90", "--theta-max", "90",
               "--theta-step", "1", "--out", perp}) == 0);
    const auto jp = nlohmann::json::parse(slurp(perp + ".json"));
    const double first = jp.at("rows")[0].at("dx_dp").get<double>();
    for (const auto& row : jp.at("rows"))
        CHECK(std::abs(row.at("dx_dp").get<double>() - first) < 1e-12);
}

TEST_CASE("verify command certifies the default configuration") {
    TempDir tmp;
    const std::string out = tmp.file("verify");
    CHECK(run({"verify", "--grid", "1001", "--out", out}) == 0);
    const auto j = nlohmann::json::parse(slurp(out + ".json"));
    CHECK(j.at("all_certified") == true);
    CHECK(j.at("kg_split").at("certified") == true);
    CHECK(j.at("nogo").at("confirmed") == true);
}

TEST_CASE("verify exits 1 when certification fails") {
    // 16 samples are too few for the finite-difference certifier to reach
    // its residual gate, so the run must report failure.
    TempDir tmp;
    const std::string out = tmp.file("verify16");
    CHECK(run({"verify", "--grid", "16", "--out", out}) == 1);
    const auto j = nlohmann::json::parse(slurp(out + ".json"));
    CHECK(j.at("all_certified") == false);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run({"profile", "--no-such-flag", "1"}) == 2);
    CHECK(run({"profile", "--v-o", "0"}) == 2);
    CHECK(run({"profile", "--v-o", "1.5"}) == 2);
    CHECK(run({"profile", "--f", "0.8", "--target", "2.0"}) == 2);
    CHECK(run({"sweep", "--v-o-min", "0.9", "--v-o-max", "0.1", "--v-o-step",
               "0.1"}) == 2);
    CHECK(run({"sweep", "--v-o-min", "0.1", "--v-o-max", "0.9", "--v-o-step",
               "-0.1"}) == 2);
    CHECK(run({}) == 2);
}

TEST_CASE("config file merges under explicit flags") {
    TempDir tmp;
    const std::string cfg = tmp.file("cfg.json");
    {
        std::ofstream out(cfg);
        out << R"({"v_o": 0.3, "grid": 301, "f": 0.9})" << "\n";
    }
    const std::string out1 = tmp.file("from_config");
    CHECK(run({"profile", "--config", cfg, "--out", out1}) == 0);
    const auto m1 = nlohmann::json::parse(slurp(out1 + ".csv.manifest.json"));
    CHECK(m1.at("parameters").at("v_o") == 0.3);
    CHECK(m1.at("parameters").at("grid") == 301);
    CHECK(m1.at("parameters").at("f") == 0.9);

    const std::string out2 = tmp.file("flag_wins");
    CHECK(run({"profile", "--config", cfg, "--v-o", "0.6", "--out", out2}) == 0);
    const auto m2 = nlohmann::json::parse(slurp(out2 + ".csv.manifest.json"));
    CHECK(m2.at("parameters").at("v_o") == 0.6);
    CHECK(m2.at("parameters").at("grid") == 301);
}

TEST_CASE("csv rendering contract") {
    zbw::cli::CsvTable empty;
    empty.header = {"a", "b"};
    CHECK(zbw::cli::render_csv(empty) == "a,b\n");

    zbw::cli::CsvTable t;
    t.header = {"x"};
    t.rows = {{1.0 / 3.0}};
    const std::string s = zbw::cli::render_csv(t);
    CHECK(s == "x\n0.33333333333333331\n");

    // json round trip preserves the double exactly
    nlohmann::json j;
    j["v"] = 1.0 / 3.0;
    const auto back = nlohmann::json::parse(j.dump());
    CHECK(back.at("v").get<double>() == 1.0 / 3.0);
}
