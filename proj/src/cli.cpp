#include "zbw/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "zbw/dynamics.hpp"
#include "zbw/errors.hpp"
#include "zbw/field.hpp"
#include "zbw/kinematics.hpp"
#include "zbw/nonrel.hpp"
#include "zbw/profile.hpp"

namespace zbw::cli {

namespace {

using nlohmann::ordered_json;

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

LogLevel log_level() {
    static LogLevel level = [] {
        const char* env = std::getenv("ZBW_LOG");
        if (!env) return LogLevel::Warn;
        const std::string s(env);
        if (s == "error") return LogLevel::Error;
        if (s == "info") return LogLevel::Info;
        if (s == "debug") return LogLevel::Debug;
        return LogLevel::Warn;
    }();
    return level;
}

void log(LogLevel lvl, const std::string& msg) {
    static const char* names[] = {"error", "warn", "info", "debug"};
    if (lvl <= log_level())
        std::cerr << "[zbw] " << names[static_cast<int>(lvl)] << ": " << msg
                  << "\n";
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct WrittenFile {
    std::string path;
    std::size_t bytes;
    std::uint64_t checksum;
};

WrittenFile write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
    log(LogLevel::Info, "wrote " + path + " (" +
                            std::to_string(content.size()) + " bytes)");
    return {path, content.size(), fnv1a64(content)};
}

PhysicalParams make_phys(const RunConfig& cfg) {
    return PhysicalParams(cfg.v_o, cfg.theta_deg * std::numbers::pi / 180.0,
                          cfg.m);
}

ordered_json config_json(const RunConfig& cfg) {
    ordered_json j;
    j["command"] = cfg.command;
    j["m"] = cfg.m;
    j["v_o"] = cfg.v_o;
    j["theta_deg"] = cfg.theta_deg;
    if (cfg.f) j["f"] = *cfg.f;
    if (cfg.target) j["target"] = *cfg.target;
    j["grid"] = cfg.grid_n;
    j["r_floor"] = cfg.r_floor;
    j["dtau"] = cfg.dtau;
    j["periods"] = cfg.periods;
    j["vi0"] = cfg.vi0;
    j["drift_tol"] = cfg.drift_tol;
    j["stride"] = cfg.stride;
    j["normalize"] = cfg.normalize;
    j["out"] = cfg.out;
    j["format"] = cfg.format;
    return j;
}

class ManifestWriter {
public:
    ManifestWriter(const RunConfig& cfg) : cfg_(cfg) {
        start_ = std::chrono::steady_clock::now();
    }

    void derived(const std::string& key, double value) { derived_[key] = value; }
    void record(const WrittenFile& f) {
        char hex[20];
        std::snprintf(hex, sizeof(hex), "0x%016llx",
                      static_cast<unsigned long long>(f.checksum));
        outputs_.push_back({{"path", f.path},
                            {"bytes", f.bytes},
                            {"fnv1a64", std::string(hex)}});
        if (manifest_path_.empty()) manifest_path_ = f.path + ".manifest.json";
    }

    void write() const {
        const auto elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start_)
                .count();
        ordered_json j;
        j["tool"] = "zbw";
        j["version"] = kToolVersion;
        j["parameters"] = config_json(cfg_);
        j["derived"] = derived_;
        j["outputs"] = outputs_;
        j["wall_time_s"] = elapsed;
        const std::string path = manifest_path_.empty()
                                     ? cfg_.out + ".manifest.json"
                                     : manifest_path_;
        write_file(path, j.dump(2) + "\n");
    }

private:
    const RunConfig& cfg_;
    std::chrono::steady_clock::time_point start_;
    ordered_json derived_ = ordered_json::object();
    ordered_json outputs_ = ordered_json::array();
    std::string manifest_path_;
};

void fill_common_derived(ManifestWriter& mw, const PhysicalParams& phys,
                         double f) {
    mw.derived("gamma_o", phys.gamma_o());
    mw.derived("gamma_s", phys.gamma_s());
    mw.derived("lambda_r", phys.lambda_r());
    mw.derived("f", f);
    mw.derived("omega", intrinsic_omega(f, phys));
    mw.derived("A", phys.c() / intrinsic_omega(f, phys));
}

std::string out_path(const RunConfig& cfg) {
    const std::string ext = cfg.format == "json" ? ".json" : ".csv";
    if (cfg.out.size() > ext.size() &&
        cfg.out.compare(cfg.out.size() - ext.size(), ext.size(), ext) == 0)
        return cfg.out;
    return cfg.out + ext;
}

int cmd_profile(const RunConfig& cfg) {
    ManifestWriter mw(cfg);
    const PhysicalParams phys = make_phys(cfg);
    const double f = cfg.resolved_f();
    fill_common_derived(mw, phys, f);

    ProfileParams params = ProfileParams::make(f, 1.0, phys.lambda_r());
    ProfileGrid grid = integrate_profile(params, cfg.r_floor, cfg.grid_n);
    if (cfg.normalize) {
        NormalizedProfile norm = normalize_profile(grid);
        grid = std::move(norm.grid);
        mw.derived("R_M", norm.R_M);
    }

    CsvTable table;
    table.header = {"ell", "R", "V_Q", "H", "beta"};
    const auto& ell = grid.ell();
    for (std::size_t i = 0; i < ell.size(); ++i) {
        const FieldSample s = field_sample(ell[i], grid, phys);
        table.rows.push_back({s.ell, s.R, s.V_Q, s.H, s.beta});
    }
    if (cfg.format == "json") {
        ordered_json rows = ordered_json::array();
        for (const auto& r : table.rows)
            rows.push_back({{"ell", r[0]},
                            {"R", r[1]},
                            {"V_Q", r[2]},
                            {"H", r[3]},
                            {"beta", r[4]}});
        mw.record(write_file(out_path(cfg), rows.dump(2) + "\n"));
    } else {
        mw.record(write_file(out_path(cfg), render_csv(table)));
    }
    mw.write();
    return 0;
}

int cmd_trajectory(const RunConfig& cfg) {
    ManifestWriter mw(cfg);
    const PhysicalParams phys = make_phys(cfg);
    const double f = cfg.resolved_f();
    fill_common_derived(mw, phys, f);

    ProfileParams params = ProfileParams::make(f, 1.0, phys.lambda_r());
    ProfileGrid grid = integrate_profile(params, cfg.r_floor, cfg.grid_n);

    TrajectoryOptions opt;
    opt.dtau = cfg.dtau;
    opt.drift_tol = cfg.drift_tol;
    opt.record_stride = cfg.stride;
    const TauTrajectory traj =
        integrate_tau(grid, phys, cfg.vi0 * phys.c(), cfg.periods, opt);
    mw.derived("period_estimate", traj.period_estimate);
    mw.derived("energy_drift", traj.energy_drift);
    mw.derived("ell_turn", traj.ell_turn);

    CsvTable table;
    table.header = {"tau", "ell", "v_i", "V_Q", "E_Q", "drift"};
    for (const TauState& s : traj.states) {
        const double V = quantum_potential(grid.R_at(s.ell), params, phys);
        table.rows.push_back({s.tau, s.ell, s.v_i, V, s.E_Q,
                              std::abs(s.E_Q - traj.E_Q0) / traj.E_Q0});
    }
    if (cfg.format == "json") {
        ordered_json rows = ordered_json::array();
        for (const auto& r : table.rows)
            rows.push_back({{"tau", r[0]},
                            {"ell", r[1]},
                            {"v_i", r[2]},
                            {"V_Q", r[3]},
                            {"E_Q", r[4]},
                            {"drift", r[5]}});
        mw.record(write_file(out_path(cfg), rows.dump(2) + "\n"));
    } else {
        mw.record(write_file(out_path(cfg), render_csv(table)));
    }
    mw.write();
    return 0;
}

int cmd_uncertainty(const RunConfig& cfg) {
    ManifestWriter mw(cfg);
    const PhysicalParams phys = make_phys(cfg);
    const double f = cfg.resolved_f();
    fill_common_derived(mw, phys, f);
    const UncertaintyProducts u = uncertainty_products(f, phys);

    ordered_json j;
    j["v_o"] = cfg.v_o;
    j["theta_deg"] = cfg.theta_deg;
    j["gamma_o"] = phys.gamma_o();
    j["gamma_s"] = phys.gamma_s();
    j["f"] = f;
    j["dx_dp"] = u.dx_dp;
    j["dE_dt"] = u.dE_dt;
    j["omega"] = intrinsic_omega(f, phys);
    j["A"] = phys.c() / intrinsic_omega(f, phys);
    RunConfig out_cfg = cfg;
    out_cfg.format = "json";
    mw.record(write_file(out_path(out_cfg), j.dump(2) + "\n"));
    mw.write();
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    ManifestWriter mw(cfg);
    const PhysicalParams phys = make_phys(cfg);
    const double f = cfg.resolved_f();
    fill_common_derived(mw, phys, f);

    bool all_ok = true;
    ordered_json j;

    // first-integral certification of a freshly constructed grid
    ProfileParams params = ProfileParams::make(f, 1.0, phys.lambda_r());
    ProfileGrid grid = integrate_profile(params, cfg.r_floor, cfg.grid_n);
    const KgSplitReport kg = kg_split_residual(grid, phys);
    j["kg_split"] = ordered_json::parse(to_json(kg));
    all_ok = all_ok && kg.certified;

    // non-relativistic split residuals on the bounded cosine family
    const auto cosine =
        nonrel::nonrel_profile(nonrel::Kind::Cosine, 1.0, 1.0, 0.0, 0.5, 1.0);
    const double p_mom = cosine.m * cosine.v;
    const double E = p_mom * p_mom / (2.0 * cosine.m) + cosine.V_Q();
    const auto res = nonrel::nonrel_split_residuals(cosine, p_mom, E);
    const bool nonrel_ok = res.vq_stddev < 1e-5 &&
                           std::abs(res.hj_residual) < 1e-5 &&
                           res.continuity_max < 1e-5;
    j["nonrel_split"] = ordered_json::parse(to_json(res));
    j["nonrel_split"]["ok"] = nonrel_ok;
    all_ok = all_ok && nonrel_ok;

    // divergence flag on the exponential family
    const auto expo = nonrel::nonrel_profile(nonrel::Kind::Exponential, 1.0,
                                             1.0, 1.0, 0.5, 1.0);
    j["exponential_divergent"] = expo.divergent;
    all_ok = all_ok && expo.divergent;

    // no-go demonstrations
    const nonrel::NogoReport nogo = nonrel::nogo_checks({1.0, 10.0, 100.0});
    j["nogo"] = ordered_json::parse(to_json(nogo));
    all_ok = all_ok && nogo.confirmed;

    // non-relativistic-limit verdict for the canonical shape constant
    const nonrel::LimitVerdict verdict = nonrel::nonrel_limit_check(params, phys);
    j["limit_check"] = ordered_json::parse(to_json(verdict));
    // for f of order unity the expansion must come out invalid
    all_ok = all_ok && !verdict.expansion_valid;

    j["all_certified"] = all_ok;
    RunConfig out_cfg = cfg;
    out_cfg.format = "json";
    mw.record(write_file(out_path(out_cfg), j.dump(2) + "\n"));
    mw.write();
    std::cout << (all_ok ? "verify: all checks certified\n"
                         : "verify: FAILURES present\n");
    return all_ok ? 0 : 1;
}

std::vector<double> make_range(double lo, double hi, double step) {
    if (!(step > 0.0) || hi < lo)
        throw std::domain_error("sweep: empty or invalid range");
    std::vector<double> out;
    for (double v = lo; v <= hi + 1e-12 * step; v += step) out.push_back(v);
    return out;
}

int cmd_sweep(const RunConfig& cfg) {
    ManifestWriter mw(cfg);
    const double f = cfg.resolved_f();

    std::vector<double> v_points;
    if (cfg.v_o_min)
        v_points = make_range(*cfg.v_o_min, cfg.v_o_max.value_or(*cfg.v_o_min),
                              cfg.v_o_step.value_or(1.0));
    else
        v_points = {cfg.v_o};
    std::vector<double> t_points;
    if (cfg.theta_min)
        t_points =
            make_range(*cfg.theta_min, cfg.theta_max.value_or(*cfg.theta_min),
                       cfg.theta_step.value_or(1.0));
    else
        t_points = {cfg.theta_deg};
    if (v_points.empty() || t_points.empty())
        throw std::domain_error("sweep: empty range");

    struct Row {
        double v_o, theta_deg, gamma_o, gamma_s, dx_dp, dE_dt, omega, A;
    };
    std::vector<Row> rows;
    rows.reserve(v_points.size() * t_points.size());
    for (double v : v_points) {
        for (double th : t_points) {
            const PhysicalParams phys(v, th * std::numbers::pi / 180.0, cfg.m);
            const UncertaintyProducts u = uncertainty_products(f, phys);
            rows.push_back({v, th, phys.gamma_o(), phys.gamma_s(), u.dx_dp,
                            u.dE_dt, intrinsic_omega(f, phys),
                            phys.c() / intrinsic_omega(f, phys)});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.v_o != b.v_o) return a.v_o < b.v_o;
        return a.theta_deg < b.theta_deg;
    });

    ordered_json arr = ordered_json::array();
    for (const Row& r : rows)
        arr.push_back({{"v_o", r.v_o},
                       {"theta_deg", r.theta_deg},
                       {"gamma_o", r.gamma_o},
                       {"gamma_s", r.gamma_s},
                       {"dx_dp", r.dx_dp},
                       {"dE_dt", r.dE_dt},
                       {"omega", r.omega},
                       {"A", r.A}});
    ordered_json j;
    j["f"] = f;
    j["rows"] = arr;
    RunConfig out_cfg = cfg;
    out_cfg.format = "json";
    mw.record(write_file(out_path(out_cfg), j.dump(2) + "\n"));
    mw.write();
    return 0;
}

void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("config file not readable: " + path);
    nlohmann::json j;
    in >> j;
    auto get = [&j](const char* key, auto& slot) {
        if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
    };
    get("m", cfg.m);
    get("v_o", cfg.v_o);
    get("theta_deg", cfg.theta_deg);
    if (j.contains("f")) cfg.f = j.at("f").get<double>();
    if (j.contains("target")) cfg.target = j.at("target").get<double>();
    get("grid", cfg.grid_n);
    get("r_floor", cfg.r_floor);
    get("dtau", cfg.dtau);
    get("periods", cfg.periods);
    get("vi0", cfg.vi0);
    get("drift_tol", cfg.drift_tol);
    get("stride", cfg.stride);
    get("normalize", cfg.normalize);
    get("out", cfg.out);
    get("format", cfg.format);
    log(LogLevel::Debug, "loaded config " + path);
}

} // namespace

double RunConfig::resolved_f() const {
    if (f && target)
        throw std::domain_error("give either f or target, not both");
    if (f) {
        if (!(*f > 0.0)) throw std::domain_error("f must be positive");
        return *f;
    }
    return solve_f(target.value_or(2.0));
}

std::string render_csv(const CsvTable& table) {
    std::ostringstream out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out << ',';
        out << table.header[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_double(row[i]);
        }
        out << '\n';
    }
    return out.str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

int run(const std::vector<std::string>& args) {
    RunConfig cfg;

    // config file pre-pass so explicit flags win over file values
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config") {
            try {
                load_config_file(args[i + 1], cfg);
            } catch (const std::exception& e) {
                std::cerr << "zbw: " << e.what() << "\n";
                return 2;
            }
        }
    }

    CLI::App app{"two-time pilot-wave free particle toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags win)");

    auto add_common = [&cfg](CLI::App* sub) {
        sub->add_option("--m", cfg.m, "rest mass (natural units)");
        sub->add_option("--v-o", cfg.v_o, "observable speed as fraction of c");
        sub->add_option("--theta", cfg.theta_deg, "probe angle in degrees");
        auto* fopt = sub->add_option("--f", cfg.f, "shape constant");
        auto* topt =
            sub->add_option("--target", cfg.target, "target for solve_f");
        fopt->excludes(topt);
        topt->excludes(fopt);
        sub->add_option("--grid", cfg.grid_n, "profile grid points");
        sub->add_option("--r-floor", cfg.r_floor, "grid amplitude floor");
        sub->add_option("--out", cfg.out, "output path (extension added)");
        sub->add_option("--format", cfg.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--config", "JSON config file (parsed in pre-pass)");
    };

    CLI::App* profile = app.add_subcommand("profile", "export the amplitude profile");
    add_common(profile);
    profile->add_flag("--normalize", cfg.normalize,
                      "rescale so the R^2 integral over the grid domain is 1");

    CLI::App* traj = app.add_subcommand("trajectory", "integrate the intrinsic motion");
    add_common(traj);
    traj->add_option("--dtau", cfg.dtau, "integrator step (0 = auto)");
    traj->add_option("--periods", cfg.periods, "full oscillations to cover");
    traj->add_option("--vi0", cfg.vi0, "launch speed as fraction of c");
    traj->add_option("--drift-tol", cfg.drift_tol, "energy drift ceiling");
    traj->add_option("--stride", cfg.stride, "record every k-th state");

    CLI::App* unc = app.add_subcommand("uncertainty", "uncertainty products");
    add_common(unc);

    CLI::App* verify = app.add_subcommand("verify", "run certification suites");
    add_common(verify);

    CLI::App* sweep = app.add_subcommand("sweep", "scan v_o and/or theta");
    add_common(sweep);
    sweep->add_option("--v-o-min", cfg.v_o_min, "sweep start for v_o");
    sweep->add_option("--v-o-max", cfg.v_o_max, "sweep end for v_o");
    sweep->add_option("--v-o-step", cfg.v_o_step, "sweep step for v_o");
    sweep->add_option("--theta-min", cfg.theta_min, "sweep start for theta (deg)");
    sweep->add_option("--theta-max", cfg.theta_max, "sweep end for theta (deg)");
    sweep->add_option("--theta-step", cfg.theta_step, "sweep step (deg)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (profile->parsed()) {
            cfg.command = "profile";
            return cmd_profile(cfg);
        }
        if (traj->parsed()) {
            cfg.command = "trajectory";
            return cmd_trajectory(cfg);
        }
        if (unc->parsed()) {
            cfg.command = "uncertainty";
            return cmd_uncertainty(cfg);
        }
        if (verify->parsed()) {
            cfg.command = "verify";
            return cmd_verify(cfg);
        }
        if (sweep->parsed()) {
            cfg.command = "sweep";
            return cmd_sweep(cfg);
        }
    } catch (const NumericError& e) {
        std::cerr << "zbw: numeric failure: " << e.what()
                  << " (achieved " << e.achieved() << ", requested "
                  << e.requested() << ")\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "zbw: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "zbw: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "zbw: no command given\n";
    return 2;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

} // namespace zbw::cli
