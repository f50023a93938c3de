#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "zbw/errors.hpp"

namespace zbw::num {

struct RootOptions {
    double abs_tol = 1e-12;
    int max_iter = 200;
};

/// Newton iteration safeguarded by bisection on a sign-changing bracket.
/// `f` must be continuous on [lo, hi] with f(lo) and f(hi) of opposite sign.
/// Falls back to a bisection step whenever the Newton update leaves the
/// current bracket or the derivative vanishes.
template <class F, class DF>
double find_root(F&& f, DF&& df, double lo, double hi, RootOptions opt = {}) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi))
        throw std::domain_error("find_root: bracket does not change sign");

    double x = 0.5 * (lo + hi);
    for (int it = 0; it < opt.max_iter; ++it) {
        double fx = f(x);
        if (fx == 0.0) return x;
        if (std::signbit(fx) == std::signbit(flo)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        double d = df(x);
        double step = (d != 0.0) ? fx / d : 0.0;
        double xn = x - step;
        if (d == 0.0 || xn <= lo || xn >= hi) {
            xn = 0.5 * (lo + hi); // bisect
        }
        if (std::abs(xn - x) <= opt.abs_tol) return xn;
        x = xn;
    }
    throw NumericError("find_root: no convergence", hi - lo, opt.abs_tol);
}

} // namespace zbw::num
