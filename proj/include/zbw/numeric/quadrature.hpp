#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "zbw/errors.hpp"

namespace zbw::num {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;   // accumulated error estimate
    long n_evals = 0;
    bool converged = true;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
inline constexpr double gk_nodes[8] = {
    0.000000000000000, 0.405845151377397, 0.741531185599394, 0.949107912342759,
    0.207784955007898, 0.586087235467691, 0.864864423359769, 0.991455371120813};
inline constexpr double g7_weights[8] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870,
    0.0, 0.0, 0.0, 0.0};
inline constexpr double k15_weights[8] = {
    0.209482141084728, 0.190350578064785, 0.140653259715525, 0.063092092629979,
    0.204432940075298, 0.169004726639267, 0.104790010322250, 0.022935322010529};

template <class F>
void gk15(F&& f, double a, double b, double& value, double& err, long& evals) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = f(mid);
    double g7 = g7_weights[0] * f0;
    double k15 = k15_weights[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * gk_nodes[i];
        const double fi = f(mid + dx) + f(mid - dx);
        g7 += g7_weights[i] * fi;
        k15 += k15_weights[i] * fi;
    }
    g7 *= half;
    k15 *= half;
    evals += 15;
    value = k15;
    // Standard QUADPACK-style error ramp: (200 |G7-K15|)^1.5.
    err = 200.0 * std::abs(g7 - k15);
    err = err * std::sqrt(err);
}

} // namespace detail

struct QuadOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-15;
    int max_depth = 32;
    long max_evals = 100000; // hard work budget; exceeding it ends refinement
};

/// Adaptive Gauss-Kronrod 7/15 with interval bisection. The integrand must be
/// finite on [a, b]; integrable endpoint singularities are the caller's job
/// to remove by substitution first.
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, QuadOptions opt = {}) {
    QuadResult out;
    if (a == b) return out;

    struct Seg {
        double a, b;
        int depth;
    };
    std::vector<Seg> stack{{a, b, 0}};
    bool ok = true;
    while (!stack.empty()) {
        const Seg s = stack.back();
        stack.pop_back();
        double v, e;
        detail::gk15(f, s.a, s.b, v, e, out.n_evals);
        const double local_tol =
            std::max(opt.abs_tol * std::abs(s.b - s.a) / std::abs(b - a),
                     opt.rel_tol * std::abs(v));
        if (e <= local_tol || s.depth >= opt.max_depth ||
            out.n_evals >= opt.max_evals) {
            if (e > local_tol) ok = false;
            out.value += v;
            out.error += e;
            continue;
        }
        const double mid = 0.5 * (s.a + s.b);
        stack.push_back({s.a, mid, s.depth + 1});
        stack.push_back({mid, s.b, s.depth + 1});
    }
    out.converged = ok;
    return out;
}

/// Convenience wrapper that throws when the requested tolerance was not met.
template <class F>
double integrate_or_throw(F&& f, double a, double b, QuadOptions opt = {}) {
    QuadResult r = integrate_adaptive(f, a, b, opt);
    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(r.value));
    if (!r.converged && r.error > tol)
        throw NumericError("quadrature did not converge", r.error, tol);
    return r.value;
}

} // namespace zbw::num
