#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "zbw/numeric/fornberg.hpp"

namespace zbw::num {

/// Monotonicity-preserving cubic Hermite interpolant.
///
/// Knot slopes are estimated with 5-point Fornberg stencils (4th order on
/// smooth data) and then passed through the Hyman filter: at a local
/// extremum of the data the slope is forced to zero, elsewhere it is clamped
/// to three times the smaller adjacent secant. On monotone smooth data the
/// clamp never engages and the full stencil accuracy is kept; near a data
/// extremum the interpolant cannot overshoot.
class MonotoneCubic {
public:
    MonotoneCubic() = default;

    MonotoneCubic(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw std::invalid_argument("MonotoneCubic: need >= 2 matching knots");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1]))
                throw std::invalid_argument("MonotoneCubic: abscissae must increase");
        d_.resize(n);

        // secants
        std::vector<double> s(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i)
            s[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);

        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t m = std::min<std::size_t>(n, 5);
            std::size_t lo = (i >= 2) ? i - 2 : 0;
            lo = std::min(lo, n - m);
            auto w = fd_weights(x_[i], std::span<const double>(x_.data() + lo, m), 1);
            double d = 0.0;
            for (std::size_t j = 0; j < m; ++j) d += w[1][j] * y_[lo + j];

            const double s_prev = (i > 0) ? s[i - 1] : s[0];
            const double s_next = (i + 1 < n) ? s[i] : s[n - 2];
            if (i > 0 && i + 1 < n && s_prev * s_next <= 0.0) {
                d = 0.0; // data extremum
            } else {
                const double lim = 3.0 * std::min(std::abs(s_prev), std::abs(s_next));
                d = std::copysign(std::min(std::abs(d), lim), d == 0.0 ? s_next : d);
            }
            d_[i] = d;
        }
    }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

    double operator()(double x) const {
        const std::size_t i = locate(x);
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        const double t2 = t * t;
        const double t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1;
        const double h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2;
        const double h11 = t3 - t2;
        return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
    }

    double derivative(double x) const {
        const std::size_t i = locate(x);
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        const double t2 = t * t;
        const double dh00 = (6 * t2 - 6 * t) / h;
        const double dh10 = 3 * t2 - 4 * t + 1;
        const double dh01 = (-6 * t2 + 6 * t) / h;
        const double dh11 = 3 * t2 - 2 * t;
        return dh00 * y_[i] + dh10 * d_[i] + dh01 * y_[i + 1] + dh11 * d_[i + 1];
    }

private:
    std::size_t locate(double x) const {
        if (!(x >= x_.front() && x <= x_.back()))
            throw std::domain_error("MonotoneCubic: evaluation outside knot range");
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - x_.begin());
        if (i > 0) --i;
        if (i + 1 >= x_.size()) i = x_.size() - 2;
        return i;
    }

    std::vector<double> x_, y_, d_;
};

} // namespace zbw::num
