#pragma once

#include <vector>

#include "zbw/kinematics.hpp"
#include "zbw/numeric/interp.hpp"

namespace zbw {

/// Which side of the peak a derivative is taken on (sign of ell).
enum class Side { Plus, Minus };

/// Shape constants of the amplitude profile. The dimensionless constant
/// f = c1 / R_M^2 fixes everything about the shape; R_M and lambda_r only
/// scale it.
struct ProfileParams {
    double f;
    double R_M;
    double lambda_r;
    double c1; // f * R_M^2, stored for traceability

    static ProfileParams make(double f, double R_M = 1.0, double lambda_r = 1.0);
};

/// Forward map t -> t * sqrt(2 (t + 2)), strictly increasing on (0, inf).
double shape_target(double f);

/// Inverse of shape_target: the unique positive root of
/// f * sqrt(2 (f + 2)) = target. target must be positive.
double solve_f(double target, double abs_tol = 1e-12);

struct ProfileDerivs {
    double Rdot;
    double Rddot;
};

/// Closed-form first and second derivatives of the profile with respect to
/// ell, evaluated at amplitude R (0 < R <= R_M). The first derivative carries
/// sign - on the ell > 0 side and + on the ell < 0 side.
ProfileDerivs profile_derivatives(double R, Side side, const ProfileParams& p);

/// Quadratic peak approximation R ~= R_M (1 - f(f+2) ell^2 / (2 lambda_r^2)).
/// Valid only for |ell| well below lambda_r / sqrt(f(f+2)).
double small_ell_profile(double ell, const ProfileParams& p);

struct GridOptions {
    double rel_tol = 1e-10;  // relative tolerance on the ell quadrature
};

class ProfileGrid;
struct NormalizedProfile;
NormalizedProfile normalize_profile(const ProfileGrid& grid, double tail_tol);

/// Sampled amplitude profile R(ell) on ell >= 0.
///
/// Construction (see integrate_profile) parameterizes the profile by
/// u = sqrt(1 - R/R_M), uniform in u, and obtains ell(u) by quadrature; the
/// substitution removes the integrable endpoint singularity at the peak.
/// Evaluation uses a monotone cubic through the samples, built on an evenly
/// reflected extension so that the interpolant respects R(-ell) = R(ell) and
/// has zero slope at the origin. Immutable after construction.
class ProfileGrid {
public:
    const std::vector<double>& ell() const noexcept { return ell_; }
    const std::vector<double>& R() const noexcept { return R_; }
    const ProfileParams& params() const noexcept { return params_; }
    double r_floor() const noexcept { return r_floor_; }
    double ell_max() const noexcept { return ell_.back(); }
    double quadrature_error() const noexcept { return quad_error_; }

    /// Interpolated amplitude at ell; even reflection for ell < 0.
    /// Throws std::domain_error outside [-ell_max, ell_max].
    double R_at(double ell) const;

    /// Inverse map: the ell >= 0 at which the profile equals R.
    /// Throws std::domain_error for R outside [r_floor * R_M, R_M].
    double ell_at_R(double R) const;

private:
    friend ProfileGrid integrate_profile(const ProfileParams&, double, int,
                                         GridOptions);
    friend NormalizedProfile normalize_profile(const ProfileGrid&, double);
    ProfileGrid() = default;

    ProfileParams params_{};
    double r_floor_ = 0.0;
    double quad_error_ = 0.0;
    std::vector<double> u_, ell_, R_;
    num::MonotoneCubic R_of_ell_;  // on evenly reflected knots
    num::MonotoneCubic ell_of_u_;  // on oddly reflected knots
};

/// Solve the profile quadrature from R = R_M down to R = r_floor * R_M on a
/// grid of n_points samples uniform in u = sqrt(1 - R/R_M). ell(R_M) = 0 by
/// convention. Throws NumericError if the quadrature cannot reach the
/// requested tolerance.
ProfileGrid integrate_profile(const ProfileParams& p, double r_floor = 0.05,
                              int n_points = 4001, GridOptions opt = {});

/// Amplitude ratio at the oscillation turning point,
/// R_m / R_M = 1 / sqrt(1 + 1/(2f)).
double minimum_amplitude_ratio(double f);

struct ProfileExtremes {
    double R_m_ratio; // R_m / R_M
    double ell_M;     // ell at which the grid profile reaches R_m
};

/// Extremes of the profile: the closed-form amplitude ratio and the turning
/// location read off the quadrature grid (not from any printed approximation).
ProfileExtremes profile_extremes(const ProfileGrid& grid);

struct NormalizedProfile {
    ProfileGrid grid;     // rescaled copy; the input grid is left untouched
    double R_M;           // peak amplitude after normalization
    double tail_fraction; // estimated share of the R^2 integral beyond the grid
};

/// Rescale amplitudes so that the integral of R^2 over the grid's full even
/// domain [-ell_max, ell_max] equals one. Returns a rescaled copy. Throws
/// NumericError when the estimated tail of the integral beyond r_floor
/// exceeds tail_tol of the total.
NormalizedProfile normalize_profile(const ProfileGrid& grid,
                                    double tail_tol = 5e-3);

namespace detail {
/// Radicand of the first-integral slope, f (R_M^2/R^2 - 1) + 4 ln(R_M/R),
/// evaluated cancellation-free near the peak. r = R / R_M in (0, 1].
double slope_radicand(double r, double f);
/// Integrand factor g(u) = radicand / u^2 with u^2 = 1 - r; smooth on [0, 1),
/// g(0) = 2 (f + 2).
double g_of_u(double u, double f);
} // namespace detail

} // namespace zbw
