#include "regfrac/reaction.hpp"

#include "regfrac/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace regfrac {

BistableSpec BistableSpec::cubic(double theta) {
    if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("cubic_bistable: theta must lie in (0,1)");
    BistableSpec b;
    b.kind_ = ReactionKind::Cubic;
    b.theta_ = theta;
    // f' is a downward parabola; extremes on [0,1] sit at the ends or the vertex.
    const double vertex = (1.0 + theta) / 3.0;
    b.lip_ = std::max({std::abs(b.fprime(0.0)), std::abs(b.fprime(1.0)), std::abs(b.fprime(vertex))});
    return b;
}

BistableSpec BistableSpec::tabulated(std::vector<double> u, std::vector<double> f) {
    if (u.size() < 4 || u.size() != f.size()) throw InvalidArgument("tabulated reaction: need >= 4 (u, f) samples");
    for (std::size_t i = 1; i < u.size(); ++i)
        if (!(u[i] > u[i - 1])) throw InvalidArgument("tabulated reaction: u samples must increase");
    if (u.front() > 0.0 || u.back() < 1.0) throw InvalidArgument("tabulated reaction: samples must cover [0,1]");
    BistableSpec b;
    b.kind_ = ReactionKind::Tabulated;
    b.u_ = std::move(u);
    b.f_ = std::move(f);
    b.finish_tabulated();
    return b;
}

void BistableSpec::finish_tabulated() {
    const std::size_t n = u_.size();
    df_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0)
            df_[i] = (f_[1] - f_[0]) / (u_[1] - u_[0]);
        else if (i + 1 == n)
            df_[i] = (f_[n - 1] - f_[n - 2]) / (u_[n - 1] - u_[n - 2]);
        else
            df_[i] = (f_[i + 1] - f_[i - 1]) / (u_[i + 1] - u_[i - 1]);
    }
    // theta: the sign change of f strictly inside (0, 1)
    theta_ = 0.5;
    const int K = 20000;
    for (int k = 1; k < K; ++k) {
        const double a = static_cast<double>(k) / K, b = static_cast<double>(k + 1) / K;
        if (f(a) < 0.0 && f(b) >= 0.0) {
            double lo = a, hi = b;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                (f(mid) < 0.0 ? lo : hi) = mid;
            }
            theta_ = 0.5 * (lo + hi);
            break;
        }
    }
    lip_ = 0.0;
    for (int k = 0; k <= K; ++k) lip_ = std::max(lip_, std::abs(fprime(static_cast<double>(k) / K)));
}

double BistableSpec::f(double u) const {
    if (kind_ == ReactionKind::Cubic) return u * (u - theta_) * (1.0 - u);
    if (u < 0.0) return f(0.0) + fprime(0.0) * u;
    if (u > 1.0) return f(1.0) + fprime(1.0) * (u - 1.0);
    auto it = std::upper_bound(u_.begin(), u_.end(), u);
    std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - u_.begin()), u_.size() - 1);
    std::size_t lo = hi - 1;
    const double dx = u_[hi] - u_[lo];
    const double t = (u - u_[lo]) / dx;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * f_[lo] + h10 * dx * df_[lo] + h01 * f_[hi] + h11 * dx * df_[hi];
}

double BistableSpec::fprime(double u) const {
    if (kind_ == ReactionKind::Cubic) return -3.0 * u * u + 2.0 * (1.0 + theta_) * u - theta_;
    if (u < 0.0) u = 0.0;
    if (u > 1.0) u = 1.0;
    auto it = std::upper_bound(u_.begin(), u_.end(), u);
    std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - u_.begin()), u_.size() - 1);
    std::size_t lo = hi - 1;
    const double dx = u_[hi] - u_[lo];
    const double t = (u - u_[lo]) / dx;
    const double d00 = 6 * t * t - 6 * t, d10 = 3 * t * t - 4 * t + 1;
    const double d01 = -6 * t * t + 6 * t, d11 = 3 * t * t - 2 * t;
    return (d00 * f_[lo] + d01 * f_[hi]) / dx + d10 * df_[lo] + d11 * df_[hi];
}

std::string ConditionReport::failures() const {
    std::string out;
    auto add = [&](bool ok, const char* name) {
        if (ok) return;
        if (!out.empty()) out += ", ";
        out += name;
    };
    add(roots, "f(0)=f(theta)=f(1)=0");
    add(negative_below, "f<0 in (0,theta)");
    add(positive_above, "f>0 in (theta,1)");
    add(fprime0_negative, "f'(0)<0");
    add(fprime_theta_positive, "f'(theta)>0");
    add(fprime1_negative, "f'(1)<0");
    add(integral_positive, "int_0^1 f>0");
    return out;
}

ConditionReport check_conditions(const BistableSpec& spec) {
    ConditionReport r;
    const double theta = spec.theta();
    r.roots = std::abs(spec.f(0.0)) <= 1e-12 && std::abs(spec.f(theta)) <= 1e-12 && std::abs(spec.f(1.0)) <= 1e-12;

    constexpr int kSamples = 10000;
    r.negative_below = true;
    r.positive_above = true;
    for (int k = 1; k <= kSamples; ++k) {
        const double t = static_cast<double>(k) / (kSamples + 1);
        if (!(spec.f(theta * t) < 0.0)) r.negative_below = false;
        if (!(spec.f(theta + (1.0 - theta) * t) > 0.0)) r.positive_above = false;
    }

    r.fprime0 = spec.fprime(0.0);
    r.fprime_theta = spec.fprime(theta);
    r.fprime1 = spec.fprime(1.0);
    r.fprime0_negative = r.fprime0 < 0.0;
    r.fprime_theta_positive = r.fprime_theta > 0.0;
    r.fprime1_negative = r.fprime1 < 0.0;

    r.integral = simpson([&](double u) { return spec.f(u); }, 0.0, 1.0, 10000);
    r.integral_positive = r.integral > 1e-10;
    return r;
}

DecayBound decay_near_one(const BistableSpec& spec, double c0, double upper) {
    if (!(c0 > 0.0 && c0 < 1.0)) throw InvalidArgument("decay_near_one: c0 must lie in (0,1)");
    constexpr int kSamples = 10000;
    double worst = -std::numeric_limits<double>::infinity();
    const double a = 1.0 - c0;
    for (int k = 0; k <= kSamples; ++k) worst = std::max(worst, spec.fprime(a + (upper - a) * k / kSamples));
    return DecayBound{c0, -worst};
}

}  // namespace regfrac
