#include "regfrac/error.hpp"
#include "regfrac/singular1d.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include <cmath>

using namespace regfrac;

namespace {

SampledProfile sample(double a, double b, double h, double (*phi)(double), Extension left, Extension right) {
    SampledProfile p;
    p.z0 = a;
    p.h = h;
    const auto n = static_cast<std::size_t>(std::llround((b - a) / h)) + 1;
    for (std::size_t k = 0; k < n; ++k) p.values.push_back(phi(a + k * h));
    p.left = left;
    p.right = right;
    return p;
}

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }
double logistic2(double z) {
    const double p = logistic(z);
    return p * (1 - p) * (1 - 2 * p);
}

// Symmetrised principal value of the exact function by tanh-sinh on (0,1]
// and exp-sinh on [1, inf).
double pv_oracle(double (*phi)(double), double (*phi2)(double), double x, double s) {
    auto g = [&](double z) {
        // second-order Taylor term where the difference quotient cancels
        if (z < 1e-4) return phi2(x) * std::pow(z, 1 - 2 * s);
        return (phi(x + z) + phi(x - z) - 2 * phi(x)) / std::pow(z, 1 + 2 * s); };
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    return ts.integrate(g, 0.0, 1.0) + es.integrate(g, 1.0, std::numeric_limits<double>::infinity());
}

}  // namespace

TEST(Singular1D, ConstantGivesZero) {
    SampledProfile p;
    p.z0 = -1;
    p.h = 0.1;
    p.values.assign(21, 0.5);
    p.left = {0.5, 0};
    p.right = {0.5, 0};
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(apply_singular_1d(p, 0.4, i), 0.0);
}

TEST(Singular1D, AffineDataGivesZero) {
    for (double s : {0.25, 0.5, 0.75}) {
        auto p = sample(-5, 5, 0.05, [](double z) { return z; }, {0.0, 1.0}, {0.0, 1.0});
        if (s > 0.5) {
            // the linear tail integral only converges for s > 1/2
            for (std::size_t i : {std::size_t{0}, std::size_t{100}, std::size_t{150}})
                EXPECT_NEAR(apply_singular_1d(p, s, i), 0.0, 1e-8) << "s=" << s;
        } else {
            EXPECT_NEAR(apply_singular_1d(p, s, 100), 0.0, 1e-8);
        }
    }
}

TEST(Singular1D, LogisticAgainstAdaptiveQuadrature) {
    auto p = sample(-40, 40, 0.01, logistic, {0.0, 0.0}, {1.0, 0.0});
    for (double s : {0.25, 0.5, 0.75}) {
        for (double x : {0.0, 1.3, -2.0}) {
            const auto node = static_cast<std::size_t>(std::llround((x + 40) / 0.01));
            const double oracle = pv_oracle(logistic, logistic2, x, s);
            EXPECT_NEAR(apply_singular_1d(p, s, node), oracle, 1e-5) << "s=" << s << " x=" << x;
        }
    }
}

TEST(Singular1D, ConvergesUnderRefinement) {
    const double oracle = pv_oracle(logistic, logistic2, 1.0, 0.5);
    double prev = 1e300;
    for (double h : {0.1, 0.05, 0.025}) {
        auto p = sample(-30, 30, h, logistic, {0.0, 0.0}, {1.0, 0.0});
        const auto node = static_cast<std::size_t>(std::llround(31.0 / h));
        const double err = std::abs(apply_singular_1d(p, 0.5, node) - oracle);
        EXPECT_LT(err, prev);
        prev = err;
    }
}

TEST(Singular1D, ReflectionSymmetry) {
    auto p = sample(-10, 10, 0.02, logistic, {0.0, 0.0}, {1.0, 0.0});
    SampledProfile q = p;  // q(z) = p(-z), limits swapped
    std::reverse(q.values.begin(), q.values.end());
    q.left = p.right;
    q.right = p.left;
    for (std::size_t i : {std::size_t{17}, std::size_t{500}, std::size_t{903}})
        EXPECT_NEAR(apply_singular_1d(q, 0.3, p.size() - 1 - i), apply_singular_1d(p, 0.3, i), 1e-10);
}

TEST(Singular1D, AllNodesMatchesSingleNode) {
    auto p = sample(-5, 5, 0.1, logistic, {0.0, 0.0}, {1.0, 0.0});
    auto all = apply_singular_1d_all(p, 0.6, 2.0);
    for (std::size_t i = 0; i < p.size(); i += 7) EXPECT_NEAR(all[i], apply_singular_1d(p, 0.6, i, 2.0), 1e-13);
}

TEST(Singular1D, Errors) {
    auto p = sample(-1, 1, 0.5, logistic, {0.0, 0.0}, {1.0, 0.0});
    EXPECT_THROW(apply_singular_1d(p, 1.0, 0), InvalidArgument);
    EXPECT_THROW(apply_singular_1d(p, 0.0, 0), InvalidArgument);
    p.values.resize(4);
    EXPECT_THROW(apply_singular_1d(p, 0.5, 0), InvalidArgument);
}
