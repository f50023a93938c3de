#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace zbw::num {

/// Fornberg finite-difference weights: given nodes x[0..n) and a point z,
/// returns w such that w[k][j] * f(x[j]) approximates the k-th derivative of
/// f at z, for k = 0..max_order. Works on arbitrarily spaced (distinct)
/// nodes; exact for polynomials of degree < n.
inline std::vector<std::vector<double>> fd_weights(double z,
                                                   std::span<const double> x,
                                                   int max_order) {
    const std::size_t n = x.size();
    std::vector<std::vector<double>> c(n, std::vector<double>(max_order + 1, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - z;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const int mn = static_cast<int>(std::min<std::size_t>(i, max_order));
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - z;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    // transpose to weights[k][j]
    std::vector<std::vector<double>> w(max_order + 1, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (int k = 0; k <= max_order; ++k)
            w[k][j] = c[j][k];
    return w;
}

} // namespace zbw::num
