#pragma once

#include <string>
#include <vector>

#include "zbw/kinematics.hpp"
#include "zbw/profile.hpp"

namespace zbw::nonrel {

/// The two stationary amplitude families of the non-relativistic free
/// particle: bounded |cos| waves (V_Q > 0) and diverging exponentials
/// (V_Q < 0). k > 0 is the magnitude of the curvature scale; the kind
/// carries the sign convention.
enum class Kind { Cosine, Exponential };

struct NonRelProfile {
    Kind kind;
    double k;    // curvature scale, positive
    double A;
    double B;    // exponential only
    double v;    // wave speed
    double m;
    double hbar;
    bool divergent; // true for the exponential family, always

    /// V_Q implied by k: +hbar^2 k / (2m) for cosine, negative for
    /// exponential.
    double V_Q() const;

    /// Amplitude R(x, t); the profile travels with speed v.
    double value(double x, double t) const;
};

/// Build a profile; throws std::domain_error for k <= 0 or m <= 0.
NonRelProfile nonrel_profile(Kind kind, double k, double A, double B, double v,
                             double m, double hbar = 1.0);

/// Residuals of the split Schroedinger system on a traveling profile with
/// phase S = p x - E t:
///  - vq_stddev/vq_mean: spread and mean of -(hbar^2/2m) R''/R from central
///    finite differences across the sample window (constancy check);
///  - hj_residual: dS/dt + (dS/dx)^2 / 2m + V_Q = -E + p^2/2m + V_Q;
///  - continuity_max: max |d(R^2)/dt + (p/m) d(R^2)/dx| over the window.
/// Sample points closer than 0.1/sqrt(k) to a cosine zero are excluded and
/// counted in n_excluded.
struct SplitResiduals {
    double vq_mean;
    double vq_stddev;
    double hj_residual;
    double continuity_max;
    int n_points;
    int n_excluded;
};

struct ResidualOptions {
    double x_lo = 0.0;
    double x_hi = 3.0;
    int n = 61;
    double t = 0.3;
    double fd_step = 1e-4; // in units of 1/sqrt(k)
};

SplitResiduals nonrel_split_residuals(const NonRelProfile& profile, double p,
                                      double E, ResidualOptions opt = {});

/// Verdict on the non-relativistic expansion of the square-root Hamiltonian
/// for a free particle. The correction term |lambda_r^2 Rddot / R| at the
/// origin equals f (f + 2); the expansion is declared invalid when it
/// reaches 0.1. The eq73_* fields spell out the energy split the expansion
/// would produce, for report output; vqm_ratio = f + 1/2 carries no hbar.
struct LimitVerdict {
    double correction_at_origin; // f (f + 2)
    double vqm_ratio;            // V_QM / (m gamma_o c^2) = f + 1/2
    bool expansion_valid;
    double eq73_rest;    // m c^2
    double eq73_kinetic; // m v_o^2 / 2
    double eq73_vq;      // -(hbar^2 / 2m) Rddot/R at the origin
};

LimitVerdict nonrel_limit_check(const ProfileParams& p,
                                const PhysicalParams& phys);

/// Demonstrations that the original guidance law admits no satisfactory
/// relativistic free-particle solution.
///
/// Part one: with v != 0 and Rdot != 0 the split relation
/// v Rdot (m gamma c^2 - H) = 0 is linear in H with nonzero slope, so the
/// unique root is H = m gamma c^2 (run at v = 0.5, Rdot = 1 per mass).
///
/// Part two: the variable-momentum consistency condition evaluated on a
/// |cos| test profile. Its hbar-carrying groups scale as 1/m^2 while the
/// final group 2 gamma^3 is mass-independent, so the sum has no root in m.
struct NogoTermRow {
    double m;
    double T1, T2, T3, T4;
    double hbar_sum; // T1 + T2 + T3
    double total;    // hbar_sum + T4
};

struct NogoEq27 {
    double v = 0.5;
    double Rdot = 1.0;
    std::vector<double> H_forced; // m gamma c^2 per mass
    bool confirmed = false;
};

struct NogoReport {
    NogoEq27 stationary;
    std::vector<NogoTermRow> rows;
    bool hbar_terms_decrease = false; // monotone, ~1/m^2 per decade
    bool last_term_constant = false;  // 2 gamma^3 equal across masses
    bool no_sign_change = false;      // total never crosses zero
    bool confirmed = false;           // all of the above
};

NogoReport nogo_checks(const std::vector<double>& masses);

std::string to_json(const LimitVerdict& verdict, int indent = 2);
std::string to_json(const NogoReport& report, int indent = 2);
std::string to_json(const SplitResiduals& residuals, int indent = 2);

} // namespace zbw::nonrel
