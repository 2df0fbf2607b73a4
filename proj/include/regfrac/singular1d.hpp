#pragma once

#include <cstddef>
#include <vector>

namespace regfrac {

/// Behaviour of a sampled profile beyond one end of its grid: the affine
/// function limit + slope * z (slope = 0 gives the constant asymptotic state).
struct Extension {
    double limit = 0.0;
    double slope = 0.0;

    double operator()(double z) const { return limit + slope * z; }
};

/// Values on the uniform grid z_k = z0 + k h, k = 0..n-1, with prescribed
/// extensions to the left and right.
struct SampledProfile {
    double z0 = 0.0;
    double h = 1.0;
    std::vector<double> values;
    Extension left;
    Extension right;

    std::size_t size() const { return values.size(); }
    double node(long k) const { return z0 + static_cast<double>(k) * h; }
    /// Value at node index k, using the extensions for k outside [0, n).
    double at(long k) const {
        if (k < 0) return left(node(k));
        if (k >= static_cast<long>(values.size())) return right(node(k));
        return values[static_cast<std::size_t>(k)];
    }
};

/// Quadrature weights for the symmetrised principal value
///
///   int_0^inf (phi(x+z) + phi(x-z) - 2 phi(x)) / z^{1+2s} dz
///
/// on a grid of spacing h. With N(z) the numerator:
///   * [0, h): N(z) ~ N(h) (z/h)^2 (second-difference Taylor term), integrated exactly;
///   * [h, M h]: N linearly interpolated between nodes and integrated exactly
///     against z^{-1-2s} (product trapezoid rule), with the interpolation
///     overshoot on quadratics removed from the first weight so that the
///     rule is exact for N(z) = z^2;
///   * (M h, inf): N is constant (or affine) there and integrated analytically.
///
/// The result reads  sum_{m=1}^{M} w[m] (phi_{i+m} + phi_{i-m} - 2 phi_i) + tail terms.
struct FractionalWeights1D {
    double s = 0.5;
    double h = 1.0;
    std::size_t max_offset = 0;      ///< M
    std::vector<double> w;           ///< w[0] unused
    double tail = 0.0;               ///< int_{Mh}^inf z^{-1-2s} dz
    double tail_linear = 0.0;        ///< int_{Mh}^inf z^{-2s} dz (finite only for s > 1/2)

    static FractionalWeights1D build(double s, double h, std::size_t max_offset);

    /// sum_m w[m] + tail: the total weight multiplying -2 phi_i.
    double total() const;
};

/// c_norm * PV int (phi(x+z) + phi(x-z) - 2 phi(x)) / z^{1+2s} dz at node i.
/// Throws InvalidArgument if s is outside (0,1) or the profile has fewer than
/// five nodes.
double apply_singular_1d(const SampledProfile& profile, double s, std::size_t node, double c_norm = 1.0);

/// The same at every node, reusing one weight table.
std::vector<double> apply_singular_1d_all(const SampledProfile& profile, double s, double c_norm = 1.0);

/// Evaluation with a prebuilt weight table (max_offset must be >= size()-1).
double apply_singular_1d(const SampledProfile& profile, const FractionalWeights1D& weights, std::size_t node,
                         double c_norm = 1.0);

}  // namespace regfrac
