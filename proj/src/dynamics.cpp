#include "zbw/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "zbw/errors.hpp"

namespace zbw {

double intrinsic_omega(double f, const PhysicalParams& phys) {
    return phys.c() / phys.lambda_r() * shape_target(f);
}

double tau_acceleration(double ell, const ProfileGrid& grid,
                        const PhysicalParams& phys) {
    const ProfileParams& p = grid.params();
    const double R = grid.R_at(ell); // throws outside the grid domain
    // dV_Q/dR = -2 m gamma c^2 f R_M^2 / R^3
    const double dVdR =
        -2.0 * phys.energy_scale() * p.f * p.R_M * p.R_M / (R * R * R);
    const Side side = (ell >= 0.0) ? Side::Plus : Side::Minus;
    const double Rdot = profile_derivatives(R, side, p).Rdot;
    return -dVdR * Rdot / (phys.m() * phys.gamma_o());
}

namespace {

double quantum_energy(double ell, const ProfileGrid& grid,
                      const PhysicalParams& phys, double v_i) {
    const double V = quantum_potential(grid.R_at(ell), grid.params(), phys);
    return V + 0.5 * phys.m() * phys.gamma_o() * v_i * v_i;
}

} // namespace

TauState verlet_step(const TauState& s, double dtau, const ProfileGrid& grid,
                     const PhysicalParams& phys) {
    // State (ell, w) with w = d(ell)/dtau = -v_i; w' = tau_acceleration(ell).
    const double w = -s.v_i;
    const double a = tau_acceleration(s.ell, grid, phys);
    const double w_half = w + 0.5 * dtau * a;
    const double ell = s.ell + dtau * w_half;
    const double a2 = tau_acceleration(ell, grid, phys);
    const double v_i = -(w_half + 0.5 * dtau * a2);
    return TauState{s.tau + dtau, ell, v_i,
                    quantum_energy(ell, grid, phys, v_i)};
}

TauTrajectory integrate_tau(const ProfileGrid& grid, const PhysicalParams& phys,
                            double v_i0, int n_periods, TrajectoryOptions opt) {
    if (!(v_i0 > 0.0) || v_i0 > phys.c())
        throw std::domain_error("integrate_tau: v_i0 must lie in (0, c]");
    if (n_periods < 1)
        throw std::domain_error("integrate_tau: n_periods must be >= 1");
    if (opt.record_stride < 1)
        throw std::domain_error("integrate_tau: record_stride must be >= 1");

    const double omega = intrinsic_omega(grid.params().f, phys);
    const double T_h = 2.0 * std::numbers::pi / omega;
    const double dtau = (opt.dtau > 0.0) ? opt.dtau : T_h / 80000.0;

    TauTrajectory traj;
    traj.dtau = dtau;
    traj.scheme = "velocity-verlet";

    double ell = 0.0;
    double w = -v_i0; // ell' = w
    double a = tau_acceleration(ell, grid, phys);
    double tau = 0.0;
    const double E0 = quantum_energy(ell, grid, phys, v_i0);
    traj.E_Q0 = E0;
    traj.states.push_back({0.0, 0.0, v_i0, E0});

    std::vector<double> crossings; // v_i sign changes, linearly interpolated
    const int need = 2 * n_periods + 1;
    const long max_steps =
        static_cast<long>(std::ceil((n_periods + 2.0) * T_h / dtau)) * 4 + 16;

    double drift = 0.0;
    double ell_turn = 0.0;
    double prev_vi = v_i0;
    double prev_ell = 0.0, prev2_ell = 0.0;
    long step = 0;
    while (static_cast<int>(crossings.size()) < need) {
        if (++step > max_steps)
            throw NumericError("integrate_tau: crossing count not reached; "
                               "step size or grid domain unsuitable",
                               static_cast<double>(crossings.size()),
                               static_cast<double>(need));
        const double w_half = w + 0.5 * dtau * a;
        prev2_ell = prev_ell;
        prev_ell = ell;
        ell += dtau * w_half;
        a = tau_acceleration(ell, grid, phys);
        w = w_half + 0.5 * dtau * a;
        tau += dtau;
        const double v_i = -w;
        const double E = quantum_energy(ell, grid, phys, v_i);
        drift = std::max(drift, std::abs(E - E0) / E0);
        if (prev_vi * v_i < 0.0) {
            crossings.push_back(tau - dtau * v_i / (v_i - prev_vi));
            // v_i crosses zero where |ell| peaks: refine by the parabola
            // through the last three positions.
            const double denom = prev2_ell - 2.0 * prev_ell + ell;
            double extremum = std::abs(prev_ell);
            if (denom != 0.0) {
                const double delta = 0.5 * (prev2_ell - ell) / denom;
                extremum = std::abs(prev_ell +
                                    0.25 * (ell - prev2_ell) * delta);
            }
            ell_turn = std::max(ell_turn, extremum);
        }
        prev_vi = v_i;
        if (step % opt.record_stride == 0)
            traj.states.push_back({tau, ell, v_i, E});
    }
    if (traj.states.back().tau != tau)
        traj.states.push_back({tau, ell, -w, quantum_energy(ell, grid, phys, -w)});

    traj.energy_drift = drift;
    if (drift > opt.drift_tol)
        throw NumericError("integrate_tau: energy drift exceeds tolerance; "
                           "reduce dtau",
                           drift, opt.drift_tol);

    // Same-direction crossings are one period apart.
    traj.period_first = crossings[2] - crossings[0];
    traj.period_last = crossings[need - 1] - crossings[need - 3];
    double sum = 0.0;
    int cnt = 0;
    for (int k = 0; k + 2 < need; ++k) {
        sum += crossings[k + 2] - crossings[k];
        ++cnt;
    }
    traj.period_estimate = sum / cnt;
    traj.ell_turn = ell_turn;
    return traj;
}

double TauTrajectory::ell_at(double tau) const {
    if (states.empty() || tau < states.front().tau || tau > states.back().tau)
        throw std::domain_error("TauTrajectory::ell_at: tau outside span");
    auto it = std::lower_bound(
        states.begin(), states.end(), tau,
        [](const TauState& s, double t) { return s.tau < t; });
    if (it == states.begin()) return it->ell;
    const TauState& hi = *it;
    const TauState& lo = *(it - 1);
    if (hi.tau == lo.tau) return hi.ell;
    const double t = (tau - lo.tau) / (hi.tau - lo.tau);
    return lo.ell + t * (hi.ell - lo.ell);
}

std::pair<double, double> harmonic_trajectory(double tau,
                                              const HarmonicSpec& spec) {
    return {-spec.A * std::sin(spec.omega * tau),
            spec.A * spec.omega * std::cos(spec.omega * tau)};
}

StandardZbw standard_zbw(const PhysicalParams& phys) {
    const double A = phys.hbar() / (2.0 * phys.m() * phys.gamma_o() * phys.c());
    const double omega =
        2.0 * phys.m() * phys.gamma_o() * phys.c() * phys.c() / phys.hbar();
    const double f = solve_f(2.0 / phys.gamma_o());
    return {HarmonicSpec{A, omega}, f};
}

double two_time_position(double t, double tau, const PhysicalParams& phys,
                         const HarmonicSpec& spec, double x0) {
    return x0 + phys.v_o() * t - harmonic_trajectory(tau, spec).first;
}

double two_time_position(double t, double tau, const PhysicalParams& phys,
                         const TauTrajectory& traj, double x0) {
    return x0 + phys.v_o() * t - traj.ell_at(tau);
}

UncertaintyProducts uncertainty_products(double f, const PhysicalParams& phys) {
    if (!(f > 0.0))
        throw std::domain_error("uncertainty_products: f must be positive");
    const double denom = shape_target(f) * phys.gamma_s();
    const double dx_dp = phys.hbar() / denom;
    const double dE_dt = std::numbers::pi * phys.hbar() / (2.0 * denom);
    return {dx_dp, dE_dt};
}

} // namespace zbw
