#include "regfrac/singular1d.hpp"

#include "regfrac/error.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <limits>

namespace regfrac {

namespace {

void check_order(double s) {
    if (!(s > 0.0 && s < 1.0)) throw InvalidArgument("apply_singular_1d: s must lie in (0,1)");
}

void check_profile(const SampledProfile& p) {
    if (p.size() < 5) throw InvalidArgument("apply_singular_1d: at least five nodes required");
    if (!(p.h > 0.0)) throw InvalidArgument("apply_singular_1d: spacing must be > 0");
}

}  // namespace

FractionalWeights1D FractionalWeights1D::build(double s, double h, std::size_t max_offset) {
    check_order(s);
    if (max_offset < 1) throw InvalidArgument("FractionalWeights1D: max_offset must be >= 1");
    using GL = boost::math::quadrature::gauss<double, 10>;

    FractionalWeights1D fw;
    fw.s = s;
    fw.h = h;
    fw.max_offset = max_offset;
    fw.w.assign(max_offset + 1, 0.0);

    const double p = 1.0 + 2.0 * s;
    double overshoot = 0.0;
    for (std::size_t m = 1; m < max_offset; ++m) {
        const double a = static_cast<double>(m);
        const double b = a + 1.0;
        const double left = GL::integrate([&](double t) { return (b - t) * std::pow(t, -p); }, a, b);
        const double right = GL::integrate([&](double t) { return (t - a) * std::pow(t, -p); }, a, b);
        overshoot += GL::integrate([&](double t) { return (t - a) * (b - t) * std::pow(t, -p); }, a, b);
        fw.w[m] += left;
        fw.w[m + 1] += right;
    }
    fw.w[1] += 1.0 / (2.0 - 2.0 * s) - overshoot;

    const double scale = std::pow(h, -2.0 * s);
    for (double& x : fw.w) x *= scale;
    const double M = static_cast<double>(max_offset);
    fw.tail = scale * std::pow(M, -2.0 * s) / (2.0 * s);
    fw.tail_linear = s > 0.5 ? std::pow(h, 1.0 - 2.0 * s) * std::pow(M, 1.0 - 2.0 * s) / (2.0 * s - 1.0)
                             : std::numeric_limits<double>::infinity();
    return fw;
}

double FractionalWeights1D::total() const {
    double sum = tail;
    for (std::size_t m = 1; m < w.size(); ++m) sum += w[m];
    return sum;
}

double apply_singular_1d(const SampledProfile& profile, const FractionalWeights1D& weights, std::size_t node,
                         double c_norm) {
    check_profile(profile);
    const std::size_t n = profile.size();
    if (node >= n) throw InvalidArgument("apply_singular_1d: node index out of range");
    if (weights.max_offset + 1 < n) throw InvalidArgument("apply_singular_1d: weight table too short");
    const auto i = static_cast<long>(node);
    const double phi = profile.values[node];
    const auto M = static_cast<long>(weights.max_offset);

    double sum = 0.0;
    for (long m = 1; m <= M; ++m) sum += weights.w[static_cast<std::size_t>(m)] * (profile.at(i + m) + profile.at(i - m) - 2.0 * phi);

    // Beyond M h both x + z and x - z lie in the extensions.
    const double x = profile.node(i);
    const double constant = profile.right.limit + profile.left.limit + (profile.right.slope + profile.left.slope) * x -
                            2.0 * phi;
    sum += weights.tail * constant;
    const double drift = profile.right.slope - profile.left.slope;
    if (drift != 0.0) {
        if (!std::isfinite(weights.tail_linear))
            throw InvalidArgument("apply_singular_1d: unequal extension slopes make the integral diverge for s <= 1/2");
        sum += weights.tail_linear * drift;
    }
    return c_norm * sum;
}

double apply_singular_1d(const SampledProfile& profile, double s, std::size_t node, double c_norm) {
    check_order(s);
    check_profile(profile);
    const auto fw = FractionalWeights1D::build(s, profile.h, profile.size() - 1);
    return apply_singular_1d(profile, fw, node, c_norm);
}

std::vector<double> apply_singular_1d_all(const SampledProfile& profile, double s, double c_norm) {
    check_order(s);
    check_profile(profile);
    const auto fw = FractionalWeights1D::build(s, profile.h, profile.size() - 1);
    std::vector<double> out(profile.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = apply_singular_1d(profile, fw, k, c_norm);
    return out;
}

}  // namespace regfrac
