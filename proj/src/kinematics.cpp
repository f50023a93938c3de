#include "zbw/kinematics.hpp"

#include <cmath>

namespace zbw {

double lorentz_gamma(double v, double c) {
    if (!(c > 0.0)) throw std::domain_error("lorentz_gamma: c must be positive");
    if (!(v >= 0.0)) throw std::domain_error("lorentz_gamma: v must be non-negative");
    if (!(v < c)) throw std::domain_error("lorentz_gamma: v must be below c");
    const double b = v / c;
    return 1.0 / std::sqrt((1.0 - b) * (1.0 + b));
}

PhysicalParams::PhysicalParams(double v_o, double theta, double m, double hbar,
                               double c)
    : m_(m), hbar_(hbar), c_(c), v_o_(v_o), theta_(theta) {
    if (!(m > 0.0)) throw std::domain_error("PhysicalParams: m must be positive");
    if (!(hbar > 0.0)) throw std::domain_error("PhysicalParams: hbar must be positive");
    if (!(c > 0.0)) throw std::domain_error("PhysicalParams: c must be positive");
    if (v_o == 0.0)
        throw std::domain_error(
            "PhysicalParams: v_o = 0 is a singular configuration; "
            "the static limit is not a valid input");
    if (!(v_o > 0.0 && v_o < c))
        throw std::domain_error("PhysicalParams: v_o must satisfy 0 < v_o < c");
    if (!(theta >= 0.0 && theta <= std::acos(-1.0) / 2.0 + 1e-15))
        throw std::domain_error("PhysicalParams: theta must lie in [0, pi/2]");

    gamma_o_ = lorentz_gamma(v_o_, c_);
    const double v_s = v_o_ * std::cos(theta_);
    dir_ = DirectionSpec{theta_, v_s, lorentz_gamma(std::abs(v_s), c_)};
    lambda_r_ = hbar_ / (m_ * c_ * gamma_o_ * dir_.gamma_s);
}

DirectionSpec direction_gamma(const PhysicalParams& params) {
    return params.direction();
}

double reduced_compton(const PhysicalParams& params) {
    return params.lambda_r();
}

} // namespace zbw
