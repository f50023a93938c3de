#pragma once

#include <string>
#include <utility>
#include <vector>

#include "zbw/field.hpp"
#include "zbw/kinematics.hpp"
#include "zbw/profile.hpp"

namespace zbw {

/// Instantaneous state of the intrinsic motion. ell is the wave-frame
/// coordinate with d(ell)/dtau = -v_i; E_Q = V_Q(ell) + m gamma_o v_i^2 / 2
/// is conserved along a trajectory.
struct TauState {
    double tau;
    double ell;
    double v_i;
    double E_Q;
};

/// Sinusoidal description of the small-amplitude intrinsic motion:
/// ell(tau) = -A sin(omega tau), v_i(tau) = A omega cos(omega tau).
struct HarmonicSpec {
    double A;
    double omega;
};

struct TrajectoryOptions {
    double dtau = 0.0;        // 0 selects T_harmonic / 80000
    double drift_tol = 1e-8;  // relative energy drift ceiling
    int record_stride = 1;    // keep every k-th state
};

/// Integrated intrinsic trajectory plus conservation metadata. Immutable
/// after integration.
struct TauTrajectory {
    std::vector<TauState> states;
    double dtau = 0.0;
    std::string scheme;        // "velocity-verlet"
    double energy_drift = 0.0; // max |E(tau) - E(0)| / E(0) over all steps
    double period_estimate = 0.0;
    double period_first = 0.0; // first and last full-oscillation estimates
    double period_last = 0.0;
    double ell_turn = 0.0;     // refined turning amplitude
    double E_Q0 = 0.0;

    /// Linear interpolation of ell(tau) between recorded states.
    /// Throws std::domain_error outside the recorded span.
    double ell_at(double tau) const;
};

/// d^2 ell / dtau^2 = -(1/(m gamma_o)) dV_Q/dell, the restoring acceleration
/// of the intrinsic motion. Chain rule with closed-form dV_Q/dR and Rdot;
/// R(ell) interpolated from the grid. Zero at ell = 0, sign opposite to ell.
double tau_acceleration(double ell, const ProfileGrid& grid,
                        const PhysicalParams& phys);

/// Integrate the intrinsic motion from ell(0) = 0, v_i(0) = v_i0 for
/// n_periods full oscillations with a fixed-step velocity-Verlet scheme
/// (second order, time-reversible). Throws NumericError when the energy
/// drift exceeds opt.drift_tol, std::domain_error for v_i0 outside (0, c].
TauTrajectory integrate_tau(const ProfileGrid& grid, const PhysicalParams& phys,
                            double v_i0, int n_periods,
                            TrajectoryOptions opt = {});

/// One Verlet step of the state (exposed so reversibility can be exercised
/// directly); dtau may be negative.
TauState verlet_step(const TauState& s, double dtau, const ProfileGrid& grid,
                     const PhysicalParams& phys);

/// (ell, v_i) of the harmonic closed form at time tau.
std::pair<double, double> harmonic_trajectory(double tau,
                                              const HarmonicSpec& spec);

/// The textbook free-particle oscillation this model generalizes:
/// A = hbar / (2 m gamma_o c), omega = 2 m gamma_o c^2 / hbar, plus the
/// shape constant the profile needs to reproduce it, the root of
/// gamma_o f sqrt(2 (f + 2)) = 2.
struct StandardZbw {
    HarmonicSpec spec;
    double f;
};

StandardZbw standard_zbw(const PhysicalParams& phys);

/// Two-time position x(t, tau) = x0 + v_o t - ell(tau) for the free particle
/// (v_o constant). Harmonic overload accepts any tau; the trajectory
/// overload interpolates recorded states.
double two_time_position(double t, double tau, const PhysicalParams& phys,
                         const HarmonicSpec& spec, double x0 = 0.0);
double two_time_position(double t, double tau, const PhysicalParams& phys,
                         const TauTrajectory& traj, double x0 = 0.0);

/// Uncertainty products at the v_i_max = c convention:
/// dx_dp = hbar / (f sqrt(2 (f + 2)) gamma_s),
/// dE_dt = pi hbar / (2 f sqrt(2 (f + 2)) gamma_s).
/// The probe direction enters only through gamma_s of `phys`.
struct UncertaintyProducts {
    double dx_dp;
    double dE_dt;
};

UncertaintyProducts uncertainty_products(double f, const PhysicalParams& phys);

/// Angular frequency of the intrinsic oscillation for shape constant f.
double intrinsic_omega(double f, const PhysicalParams& phys);

} // namespace zbw
