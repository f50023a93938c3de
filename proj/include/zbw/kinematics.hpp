#pragma once

#include <stdexcept>

namespace zbw {

/// Probe direction relative to the observed velocity: the projected speed
/// v_s = v_o cos(theta) and its Lorentz factor.
struct DirectionSpec {
    double theta;
    double v_s;
    double gamma_s;
};

/// Lorentz factor 1/sqrt(1 - v^2/c^2). Requires 0 <= v < c.
double lorentz_gamma(double v, double c);

/// Particle constants in natural units (m = hbar = c = 1 by default) plus
/// the derived factors everything downstream is parameterized by.
///
/// v_o = 0 is rejected: the model is singular in the static limit (the
/// observable-time equation degenerates and the intrinsic velocity freezes),
/// so callers must pass a strictly positive speed.
class PhysicalParams {
public:
    PhysicalParams(double v_o, double theta = 0.0, double m = 1.0,
                   double hbar = 1.0, double c = 1.0);

    double m() const noexcept { return m_; }
    double hbar() const noexcept { return hbar_; }
    double c() const noexcept { return c_; }
    double v_o() const noexcept { return v_o_; }
    double theta() const noexcept { return theta_; }

    double gamma_o() const noexcept { return gamma_o_; }
    double gamma_s() const noexcept { return dir_.gamma_s; }
    const DirectionSpec& direction() const noexcept { return dir_; }

    /// Reduced Compton length lambda_r = hbar / (m c gamma_o gamma_s).
    double lambda_r() const noexcept { return lambda_r_; }

    /// Observed momentum p_o = m gamma_o v_o.
    double p_o() const noexcept { return m_ * gamma_o_ * v_o_; }

    /// Rest-frame energy scale m gamma_o c^2 that all potentials are
    /// proportional to.
    double energy_scale() const noexcept { return m_ * gamma_o_ * c_ * c_; }

private:
    double m_, hbar_, c_, v_o_, theta_;
    double gamma_o_;
    DirectionSpec dir_;
    double lambda_r_;
};

/// v_s = v_o cos(theta) and gamma_s for the probe direction of `params`.
DirectionSpec direction_gamma(const PhysicalParams& params);

/// Same value as params.lambda_r(); kept as a free function so the formula
/// has a single home.
double reduced_compton(const PhysicalParams& params);

} // namespace zbw
