#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zbw::cli {

inline constexpr const char* kToolVersion = "1.0.0";

/// Resolved configuration of one CLI run. Defaults here are the tool
/// defaults; a JSON config file (--config) overrides them and explicit flags
/// override the file.
struct RunConfig {
    std::string command;

    // physical inputs
    double m = 1.0;
    double v_o = 0.6;        // fraction of c
    double theta_deg = 0.0;

    // model inputs: exactly one of f / target is in effect
    std::optional<double> f;
    std::optional<double> target;

    // numeric inputs
    int grid_n = 4001;
    double r_floor = 0.05;
    double dtau = 0.0;       // 0 = auto
    int periods = 10;
    double vi0 = 1.0;        // fraction of c
    double drift_tol = 1e-8;
    int stride = 20;
    bool normalize = false;

    // sweep ranges (lexicographic row order in the output)
    std::optional<double> v_o_min, v_o_max, v_o_step;
    std::optional<double> theta_min, theta_max, theta_step; // degrees

    // output
    std::string out = "zbw_out";
    std::string format = "csv"; // csv | json

    double resolved_f() const; // from f or solve_f(target); target 2.0 default
};

/// Tabular payload for CSV export.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Render with a header row, '.' decimal separator, %.17g values, trailing
/// newline. Byte-identical for identical input.
std::string render_csv(const CsvTable& table);

/// FNV-1a 64-bit checksum of a byte string (recorded in run manifests).
std::uint64_t fnv1a64(std::string_view bytes);

/// Entry point used by the zbw binary and by tests. Returns the process
/// exit code: 0 success, 1 verification/numeric failure, 2 usage error.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

} // namespace zbw::cli
