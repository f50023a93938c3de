#include "zbw/nonrel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace zbw::nonrel {

double NonRelProfile::V_Q() const {
    const double mag = hbar * hbar * k / (2.0 * m);
    return kind == Kind::Cosine ? mag : -mag;
}

double NonRelProfile::value(double x, double t) const {
    const double ell = x - v * t;
    if (kind == Kind::Cosine) return std::abs(A * std::cos(std::sqrt(k) * ell));
    return A * std::exp(std::sqrt(k) * ell) + B * std::exp(-std::sqrt(k) * ell);
}

NonRelProfile nonrel_profile(Kind kind, double k, double A, double B, double v,
                             double m, double hbar) {
    if (!(k > 0.0)) throw std::domain_error("nonrel_profile: k must be positive");
    if (!(m > 0.0)) throw std::domain_error("nonrel_profile: m must be positive");
    if (!(hbar > 0.0))
        throw std::domain_error("nonrel_profile: hbar must be positive");
    return NonRelProfile{kind, k, A, B, v, m, hbar,
                         kind == Kind::Exponential};
}

SplitResiduals nonrel_split_residuals(const NonRelProfile& profile, double p,
                                      double E, ResidualOptions opt) {
    const double root_k = std::sqrt(profile.k);
    const double h = opt.fd_step / root_k;
    const double hbar2_2m =
        profile.hbar * profile.hbar / (2.0 * profile.m);

    SplitResiduals out{};
    double sum = 0.0, sum2 = 0.0;
    int used = 0;
    for (int i = 0; i < opt.n; ++i) {
        const double x = opt.x_lo + (opt.x_hi - opt.x_lo) * i / (opt.n - 1);
        if (profile.kind == Kind::Cosine) {
            // stay away from the |cos| kinks where R -> 0
            const double phase = root_k * (x - profile.v * opt.t);
            const double dist = std::abs(
                std::remainder(phase - std::numbers::pi / 2.0, std::numbers::pi));
            if (dist < 0.1) {
                ++out.n_excluded;
                continue;
            }
        }
        const double R0 = profile.value(x, opt.t);
        const double Rp = profile.value(x + h, opt.t);
        const double Rm = profile.value(x - h, opt.t);
        const double lap = (Rp - 2.0 * R0 + Rm) / (h * h);
        const double vq = -hbar2_2m * lap / R0;
        sum += vq;
        sum2 += vq * vq;
        ++used;

        // continuity of R^2 for the traveling wave at constant p
        const double ht = h / std::max(std::abs(profile.v), 1.0);
        auto R2 = [&](double xx, double tt) {
            const double r = profile.value(xx, tt);
            return r * r;
        };
        const double dR2_dt =
            (R2(x, opt.t + ht) - R2(x, opt.t - ht)) / (2.0 * ht);
        const double dR2_dx = (R2(x + h, opt.t) - R2(x - h, opt.t)) / (2.0 * h);
        const double cont = dR2_dt + (p / profile.m) * dR2_dx;
        out.continuity_max = std::max(out.continuity_max, std::abs(cont));
    }
    out.n_points = used;
    if (used > 0) {
        out.vq_mean = sum / used;
        const double var = std::max(sum2 / used - out.vq_mean * out.vq_mean, 0.0);
        out.vq_stddev = std::sqrt(var);
    }
    // dS/dt + (dS/dx)^2/(2m) + V_Q with S = p x - E t
    out.hj_residual = -E + p * p / (2.0 * profile.m) + profile.V_Q();
    return out;
}

LimitVerdict nonrel_limit_check(const ProfileParams& p,
                                const PhysicalParams& phys) {
    LimitVerdict v{};
    v.correction_at_origin = p.f * (p.f + 2.0);
    v.vqm_ratio = p.f + 0.5;
    v.expansion_valid = v.correction_at_origin < 0.1;
    v.eq73_rest = phys.m() * phys.c() * phys.c();
    v.eq73_kinetic = 0.5 * phys.m() * phys.v_o() * phys.v_o();
    // Rddot/R at the origin is -f(f+2)/lambda_r^2.
    v.eq73_vq = phys.hbar() * phys.hbar() / (2.0 * phys.m()) *
                v.correction_at_origin / (p.lambda_r * p.lambda_r);
    return v;
}

namespace {

// Fixed demonstration profile and motion constants for the variable-momentum
// no-go: |cos| shape evaluated away from its zeros, v = 0.6 c so gamma = 1.25.
struct NogoSetup {
    double hbar = 1.0;
    double c = 1.0;
    double v = 0.6;
    double vp = 0.1;   // dv/dt
    double vpp = 0.05; // d2v/dt2
    double A = 1.0;
    double kappa = 1.0;
    double ell = 0.3;
};

NogoTermRow nogo_row(double m, const NogoSetup& s) {
    const double gamma = 1.0 / std::sqrt(1.0 - (s.v / s.c) * (s.v / s.c));
    const double R = s.A * std::cos(s.kappa * s.ell);
    const double Rd = -s.A * s.kappa * std::sin(s.kappa * s.ell);
    const double Rdd = -s.kappa * s.kappa * R;
    const double Rddd = -s.kappa * s.kappa * Rd;
    const double h2 = s.hbar * s.hbar;
    const double c2 = s.c * s.c;
    const double H = std::sqrt(m * m * gamma * gamma * c2 * c2 -
                               h2 * (c2 / (gamma * gamma)) * Rdd / R -
                               h2 * s.vp * Rd / R);
    NogoTermRow row{};
    row.m = m;
    row.T1 = (H - m * gamma * c2 - h2 * s.vpp / (4.0 * m * gamma * c2 * s.v)) *
             4.0 * Rd / (m * s.vp * R);
    row.T2 = 3.0 * h2 / (m * m * gamma * c2) * (Rd * Rd / (R * R) + Rdd / R);
    row.T3 = h2 / (m * m * gamma * gamma * gamma * s.vp) *
             (3.0 * Rdd * Rd / (R * R) + Rddd / R);
    row.T4 = 2.0 * gamma * gamma * gamma;
    row.hbar_sum = row.T1 + row.T2 + row.T3;
    row.total = row.hbar_sum + row.T4;
    return row;
}

} // namespace

NogoReport nogo_checks(const std::vector<double>& masses) {
    if (masses.size() < 3)
        throw std::domain_error("nogo_checks: need at least 3 masses");
    for (std::size_t i = 1; i < masses.size(); ++i)
        if (!(masses[i] > masses[i - 1]))
            throw std::domain_error("nogo_checks: masses must increase");
    for (double m : masses)
        if (!(m > 0.0)) throw std::domain_error("nogo_checks: masses must be positive");

    NogoReport rep;

    // Stationary split relation: v Rdot (m gamma c^2 - H) = 0 is linear in H
    // with slope -v Rdot != 0, so the root is forced.
    {
        const double gamma = 1.0 / std::sqrt(1.0 - rep.stationary.v * rep.stationary.v);
        bool ok = true;
        for (double m : masses) {
            const double H = m * gamma;
            rep.stationary.H_forced.push_back(H);
            auto product = [&](double Hx) {
                return rep.stationary.v * rep.stationary.Rdot * (m * gamma - Hx);
            };
            ok = ok && product(H) == 0.0 && product(H + 0.1) != 0.0 &&
                 product(H - 0.1) != 0.0;
        }
        rep.stationary.confirmed = ok;
    }

    const NogoSetup setup;
    for (double m : masses) rep.rows.push_back(nogo_row(m, setup));

    rep.last_term_constant = true;
    rep.no_sign_change = true;
    rep.hbar_terms_decrease = true;
    const double T4_ref = rep.rows.front().T4;
    const double sign_ref = rep.rows.front().total > 0.0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const NogoTermRow& r = rep.rows[i];
        if (std::abs(r.T4 - T4_ref) > 1e-12 * std::abs(T4_ref))
            rep.last_term_constant = false;
        if (r.total * sign_ref <= 0.0) rep.no_sign_change = false;
        if (i > 0 &&
            !(std::abs(r.hbar_sum) < std::abs(rep.rows[i - 1].hbar_sum)))
            rep.hbar_terms_decrease = false;
    }
    rep.confirmed = rep.stationary.confirmed && rep.last_term_constant &&
                    rep.no_sign_change && rep.hbar_terms_decrease;
    return rep;
}

std::string to_json(const LimitVerdict& v, int indent) {
    nlohmann::ordered_json j;
    j["correction_at_origin"] = v.correction_at_origin;
    j["vqm_ratio"] = v.vqm_ratio;
    j["expansion_valid"] = v.expansion_valid;
    j["verdict"] = v.expansion_valid ? "expansion valid" : "expansion invalid";
    j["expansion_energy_split"] = {{"rest", v.eq73_rest},
                                   {"kinetic", v.eq73_kinetic},
                                   {"quantum", v.eq73_vq}};
    return j.dump(indent);
}

std::string to_json(const NogoReport& rep, int indent) {
    nlohmann::ordered_json j;
    j["stationary"] = {{"v", rep.stationary.v},
                       {"Rdot", rep.stationary.Rdot},
                       {"H_forced", rep.stationary.H_forced},
                       {"confirmed", rep.stationary.confirmed}};
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : rep.rows) {
        rows.push_back({{"m", r.m},
                        {"T1", r.T1},
                        {"T2", r.T2},
                        {"T3", r.T3},
                        {"T4", r.T4},
                        {"hbar_sum", r.hbar_sum},
                        {"total", r.total}});
    }
    j["variable_momentum_terms"] = rows;
    j["hbar_terms_decrease"] = rep.hbar_terms_decrease;
    j["last_term_constant"] = rep.last_term_constant;
    j["no_sign_change"] = rep.no_sign_change;
    j["confirmed"] = rep.confirmed;
    return j.dump(indent);
}

std::string to_json(const SplitResiduals& r, int indent) {
    nlohmann::ordered_json j;
    j["vq_mean"] = r.vq_mean;
    j["vq_stddev"] = r.vq_stddev;
    j["hj_residual"] = r.hj_residual;
    j["continuity_max"] = r.continuity_max;
    j["n_points"] = r.n_points;
    j["n_excluded"] = r.n_excluded;
    return j.dump(indent);
}

} // namespace zbw::nonrel
