#include "zbw/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zbw/errors.hpp"
#include "zbw/numeric/quadrature.hpp"
#include "zbw/numeric/rootfind.hpp"

namespace zbw {

namespace detail {

double slope_radicand(double r, double f) {
    // f (1/r^2 - 1) - 4 ln r, written through s = 1 - r so the difference
    // survives r -> 1 where both pieces vanish.
    const double s = 1.0 - r;
    return f * s * (2.0 - s) / (r * r) - 4.0 * std::log1p(-s);
}

double g_of_u(double u, double f) {
    const double s = u * u; // s = 1 - r
    if (s == 0.0) return 2.0 * (f + 2.0);
    const double x = 1.0 - s;
    return f * (2.0 - s) / (x * x) - 4.0 * std::log1p(-s) / s;
}

} // namespace detail

ProfileParams ProfileParams::make(double f, double R_M, double lambda_r) {
    if (!(f > 0.0)) throw std::domain_error("ProfileParams: f must be positive");
    if (!(R_M > 0.0)) throw std::domain_error("ProfileParams: R_M must be positive");
    if (!(lambda_r > 0.0))
        throw std::domain_error("ProfileParams: lambda_r must be positive");
    return ProfileParams{f, R_M, lambda_r, f * R_M * R_M};
}

double shape_target(double f) { return f * std::sqrt(2.0 * (f + 2.0)); }

double solve_f(double target, double abs_tol) {
    if (!(target > 0.0)) throw std::domain_error("solve_f: target must be positive");
    double hi = 1.0;
    while (shape_target(hi) < target) hi *= 2.0;
    auto fn = [target](double t) { return shape_target(t) - target; };
    auto dfn = [](double t) {
        const double s = std::sqrt(2.0 * (t + 2.0));
        return s + t / s;
    };
    return num::find_root(fn, dfn, 0.0, hi, {abs_tol, 200});
}

ProfileDerivs profile_derivatives(double R, Side side, const ProfileParams& p) {
    if (!(R > 0.0) || R > p.R_M * (1.0 + 1e-12))
        throw std::domain_error("profile_derivatives: R must lie in (0, R_M]");
    const double r = std::min(R / p.R_M, 1.0);
    const double rad = std::max(detail::slope_radicand(r, p.f), 0.0);
    double Rdot = -(std::sqrt(p.f) * p.R_M / p.lambda_r) * std::sqrt(rad);
    if (side == Side::Minus) Rdot = -Rdot;
    const double q = 1.0 + p.c1 / (R * R);
    const double Rddot = R * (1.0 - q * q) / (p.lambda_r * p.lambda_r);
    return {Rdot, Rddot};
}

double small_ell_profile(double ell, const ProfileParams& p) {
    const double z = ell / p.lambda_r;
    return p.R_M * (1.0 - 0.5 * p.f * (p.f + 2.0) * z * z);
}

ProfileGrid integrate_profile(const ProfileParams& p, double r_floor,
                              int n_points, GridOptions opt) {
    if (!(r_floor > 0.0 && r_floor < 1.0))
        throw std::domain_error("integrate_profile: r_floor must lie in (0, 1)");
    if (n_points < 16)
        throw std::domain_error("integrate_profile: n_points must be >= 16");

    ProfileGrid grid;
    grid.params_ = p;
    grid.r_floor_ = r_floor;

    const int n = n_points;
    const double u_max = std::sqrt(1.0 - r_floor);
    grid.u_.resize(n);
    grid.ell_.resize(n);
    grid.R_.resize(n);

    const double scale = p.lambda_r / std::sqrt(p.f);
    auto integrand = [&p](double u) {
        return 2.0 / std::sqrt(detail::g_of_u(u, p.f));
    };

    num::QuadOptions qopt;
    qopt.rel_tol = opt.rel_tol * 1e-2; // leave headroom for accumulation
    qopt.abs_tol = opt.rel_tol * u_max / n;

    double acc = 0.0, acc_err = 0.0;
    grid.u_[0] = 0.0;
    grid.ell_[0] = 0.0; // c3 convention: ell(R_M) = 0
    grid.R_[0] = p.R_M;
    for (int i = 1; i < n; ++i) {
        const double u0 = u_max * (i - 1) / (n - 1);
        const double u1 = u_max * i / (n - 1);
        num::QuadResult seg = num::integrate_adaptive(integrand, u0, u1, qopt);
        if (!seg.converged)
            throw NumericError("integrate_profile: ell quadrature stalled",
                               seg.error, qopt.abs_tol);
        acc += seg.value;
        acc_err += seg.error;
        grid.u_[i] = u1;
        grid.ell_[i] = scale * acc;
        grid.R_[i] = p.R_M * (1.0 - u1 * u1);
    }
    grid.quad_error_ = scale * acc_err;
    const double tol = opt.rel_tol * grid.ell_.back();
    if (grid.quad_error_ > tol)
        throw NumericError("integrate_profile: accumulated quadrature error "
                           "above requested tolerance",
                           grid.quad_error_, tol);

    // Interpolants on reflected extensions. The even reflection of (ell, R)
    // pins a zero slope at the peak; the odd reflection of (u, ell) does the
    // same for the inverse map.
    const int ng = std::min(4, n - 1);
    std::vector<double> xe, ye, xu, yu;
    xe.reserve(n + ng);
    ye.reserve(n + ng);
    for (int k = ng; k >= 1; --k) {
        xe.push_back(-grid.ell_[k]);
        ye.push_back(grid.R_[k]);
        xu.push_back(-grid.u_[k]);
        yu.push_back(-grid.ell_[k]);
    }
    for (int k = 0; k < n; ++k) {
        xe.push_back(grid.ell_[k]);
        ye.push_back(grid.R_[k]);
        xu.push_back(grid.u_[k]);
        yu.push_back(grid.ell_[k]);
    }
    grid.R_of_ell_ = num::MonotoneCubic(std::move(xe), std::move(ye));
    grid.ell_of_u_ = num::MonotoneCubic(std::move(xu), std::move(yu));
    return grid;
}

double ProfileGrid::R_at(double ell) const {
    const double a = std::abs(ell);
    if (a > ell_.back())
        throw std::domain_error("ProfileGrid::R_at: ell outside grid domain");
    return R_of_ell_(a);
}

double ProfileGrid::ell_at_R(double R) const {
    const double RM = params_.R_M;
    if (!(R <= RM * (1.0 + 1e-12)) || R < R_.back() * (1.0 - 1e-12))
        throw std::domain_error("ProfileGrid::ell_at_R: R outside grid range");
    const double s = std::clamp(1.0 - R / RM, 0.0, 1.0);
    const double u = std::min(std::sqrt(s), u_.back());
    return ell_of_u_(u);
}

double minimum_amplitude_ratio(double f) {
    if (!(f > 0.0))
        throw std::domain_error("minimum_amplitude_ratio: f must be positive");
    return 1.0 / std::sqrt(1.0 + 0.5 / f);
}

ProfileExtremes profile_extremes(const ProfileGrid& grid) {
    const double ratio = minimum_amplitude_ratio(grid.params().f);
    const double R_m = ratio * grid.params().R_M;
    return {ratio, grid.ell_at_R(R_m)};
}

NormalizedProfile normalize_profile(const ProfileGrid& grid, double tail_tol) {
    const ProfileParams& p = grid.params();
    const double u_max = std::sqrt(1.0 - grid.r_floor());

    // Shape integral for unit peak amplitude: 2 * int_0^{u_max} r(u)^2 ell'(u) du
    // with ell'(u) = (lambda_r / sqrt f) * 2 / sqrt(g(u)).
    auto body = [&p](double u) {
        const double r = 1.0 - u * u;
        return r * r * 2.0 / std::sqrt(detail::g_of_u(u, p.f));
    };
    num::QuadOptions qopt;
    qopt.rel_tol = 1e-12;
    const double unit = 2.0 * p.lambda_r / std::sqrt(p.f);
    const double I = unit * num::integrate_or_throw(body, 0.0, u_max, qopt);

    // Tail estimate: extend the same integral down to r_cut plus an analytic
    // bound on the remaining piece (dl/dr <= r / (f sqrt(1 - r^2)) there).
    const double r_cut = std::min(grid.r_floor() / 64.0, 1e-3);
    const double u_cut = std::sqrt(1.0 - r_cut);
    double tail = unit * num::integrate_or_throw(body, u_max, u_cut, qopt);
    tail += p.lambda_r * std::pow(r_cut, 4) / (4.0 * p.f) /
            std::sqrt(1.0 - r_cut * r_cut) * 2.0;
    const double tail_fraction = tail / (I + tail);
    if (tail_fraction > tail_tol)
        throw NumericError("normalize_profile: tail beyond r_floor exceeds "
                           "tolerance; lower r_floor",
                           tail_fraction, tail_tol);

    // I scales as R_M^2, so the normalized peak is R_M_new with
    // R_M_new^2 * (I / R_M^2) = 1.
    const double R_M_new = p.R_M / std::sqrt(I);
    const double factor = R_M_new / p.R_M;

    ProfileGrid scaled = grid;
    for (double& v : scaled.R_) v *= factor;
    scaled.params_ = ProfileParams::make(p.f, R_M_new, p.lambda_r);

    const int n = static_cast<int>(scaled.ell_.size());
    const int ng = std::min(4, n - 1);
    std::vector<double> xe, ye;
    for (int k = ng; k >= 1; --k) {
        xe.push_back(-scaled.ell_[k]);
        ye.push_back(scaled.R_[k]);
    }
    for (int k = 0; k < n; ++k) {
        xe.push_back(scaled.ell_[k]);
        ye.push_back(scaled.R_[k]);
    }
    scaled.R_of_ell_ = num::MonotoneCubic(std::move(xe), std::move(ye));

    return {std::move(scaled), R_M_new, tail_fraction};
}

} // namespace zbw
