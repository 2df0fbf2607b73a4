#include "regfrac/kernel.hpp"

#include "regfrac/error.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace regfrac {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw InvalidArgument(msg);
}

// Integral of r^{dim-1} J(r) over [a, b] where J is linear on [a, b].
double table_segment_moment(const RadialTable& t, int dim, double a, double b) {
    auto integrand = [&](double r) { return std::pow(r, dim - 1) * t(r); };
    return boost::math::quadrature::gauss<double, 8>::integrate(integrand, a, b);
}

}  // namespace

double RadialTable::operator()(double r) const {
    if (radius.empty() || r > radius.back() || r < 0.0) return 0.0;
    if (r <= radius.front()) return value.front();
    auto it = std::upper_bound(radius.begin(), radius.end(), r);
    const auto hi = static_cast<std::size_t>(it - radius.begin());
    if (hi >= radius.size()) return value.back();
    const std::size_t lo = hi - 1;
    const double w = (r - radius[lo]) / (radius[hi] - radius[lo]);
    return (1.0 - w) * value[lo] + w * value[hi];
}

KernelSpec make_kernel(KernelFamily family, double s, int dim, double delta, double c_norm) {
    require(family != KernelFamily::RadialTable, "make_kernel: use make_table_kernel for RadialTable");
    require(std::isfinite(s) && s > 0.0 && s < 1.0, "kernel: s must lie in (0,1), got " + std::to_string(s));
    require(dim >= 1, "kernel: dim must be >= 1");
    require(std::isfinite(delta) && delta >= 0.0, "kernel: delta must be >= 0");
    require(std::isfinite(c_norm) && c_norm > 0.0, "kernel: c_norm must be > 0");
    if (family == KernelFamily::SingularFractional)
        require(delta == 0.0, "kernel: singular family requires delta = 0");
    else
        require(delta > 0.0, "kernel: regularized family requires delta > 0");

    KernelSpec k;
    k.family_ = family;
    k.s_ = s;
    k.dim_ = dim;
    k.delta_ = delta;
    k.c_norm_ = c_norm;
    return k;
}

KernelSpec make_table_kernel(RadialTable table, int dim, double c_norm) {
    require(dim >= 1, "kernel: dim must be >= 1");
    require(std::isfinite(c_norm) && c_norm > 0.0, "kernel: c_norm must be > 0");
    require(table.radius.size() >= 2 && table.radius.size() == table.value.size(),
            "kernel: radial table needs at least two (radius, value) rows");
    require(table.radius.front() >= 0.0, "kernel: radial table radii must be >= 0");
    for (std::size_t i = 1; i < table.radius.size(); ++i)
        require(table.radius[i] > table.radius[i - 1], "kernel: radial table radii must be strictly increasing");
    for (double v : table.value) require(std::isfinite(v), "kernel: radial table values must be finite");

    KernelSpec k;
    k.family_ = KernelFamily::RadialTable;
    k.s_ = 0.0;
    k.dim_ = dim;
    k.delta_ = 0.0;
    k.c_norm_ = c_norm;
    k.table_ = std::move(table);
    return k;
}

KernelSpec with_cutoff(KernelSpec spec, double cutoff_radius) {
    require(cutoff_radius > 0.0, "kernel: cutoff_radius must be > 0");
    spec.cutoff_radius_ = cutoff_radius;
    return spec;
}

double KernelSpec::radial(double r) const {
    switch (family_) {
    case KernelFamily::RadialTable:
        return c_norm_ * table_(r);
    case KernelFamily::SingularFractional:
        if (r <= 0.0) throw InvalidArgument("kernel_eval: singular kernel evaluated at z = 0");
        [[fallthrough]];
    case KernelFamily::RegularizedFractional:
        return c_norm_ / (delta_ + std::pow(r, power()));
    }
    return 0.0;
}

double kernel_eval(const KernelSpec& spec, std::span<const double> z) {
    require(static_cast<int>(z.size()) == spec.dim(), "kernel_eval: dimension mismatch");
    double r2 = 0.0;
    for (double c : z) r2 += c * c;
    return spec.radial(std::sqrt(r2));
}

double unit_sphere_area(int dim) {
    require(dim >= 1, "unit_sphere_area: dim must be >= 1");
    const double n = dim;
    return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
}

double tail_mass(const KernelSpec& spec, double R) {
    const bool table = spec.family() == KernelFamily::RadialTable;
    require(std::isfinite(R) && (R > 0.0 || (table && R == 0.0)), "tail_mass: R must be > 0");
    const int n = spec.dim();
    const double area = unit_sphere_area(n);

    switch (spec.family()) {
    case KernelFamily::SingularFractional:
        return spec.c_norm() * area * std::pow(R, -2.0 * spec.s()) / (2.0 * spec.s());

    case KernelFamily::RegularizedFractional: {
        const double p = spec.power();
        const double delta = spec.delta();
        // r = R t:  R^{n-p} int_1^inf t^{n-1} / (delta R^{-p} + t^p) dt
        const double eps = delta / std::pow(R, p);
        auto integrand = [&](double t) { return std::pow(t, n - 1) / (eps + std::pow(t, p)); };
        boost::math::quadrature::exp_sinh<double> integrator;
        const double I = std::pow(R, n - p) *
                         integrator.integrate(integrand, 1.0, std::numeric_limits<double>::infinity(), 1e-13);
        return spec.c_norm() * area * I;
    }

    case KernelFamily::RadialTable: {
        const auto& t = spec.table();
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < t.radius.size(); ++i) {
            const double a = std::max(t.radius[i], R);
            const double b = t.radius[i + 1];
            if (b > a) sum += table_segment_moment(t, n, a, b);
        }
        return spec.c_norm() * area * sum;
    }
    }
    return 0.0;
}

double total_mass(const KernelSpec& spec) {
    const int n = spec.dim();
    switch (spec.family()) {
    case KernelFamily::SingularFractional:
        return std::numeric_limits<double>::infinity();
    case KernelFamily::RegularizedFractional: {
        // int_0^inf r^{n-1}/(delta + r^p) dr = delta^{n/p-1} (pi/p) / sin(n pi/p)
        const double p = spec.power();
        const double pi = std::numbers::pi;
        return spec.c_norm() * unit_sphere_area(n) * std::pow(spec.delta(), n / p - 1.0) * (pi / p) /
               std::sin(n * pi / p);
    }
    case KernelFamily::RadialTable: {
        const auto& t = spec.table();
        double sum = 0.0;
        if (t.radius.front() > 0.0)
            sum += t.value.front() * std::pow(t.radius.front(), n) / n;
        for (std::size_t i = 0; i + 1 < t.radius.size(); ++i)
            sum += table_segment_moment(t, n, t.radius[i], t.radius[i + 1]);
        return spec.c_norm() * unit_sphere_area(n) * sum;
    }
    }
    return 0.0;
}

RadialTable normalize_table_mass(RadialTable table, int dim) {
    const double mass = total_mass(make_table_kernel(table, dim, 1.0));
    require(mass > 0.0, "normalize_table_mass: table has non-positive mass");
    for (double& v : table.value) v /= mass;
    return table;
}

double standard_fractional_constant(int dim, double s) {
    require(s > 0.0 && s < 1.0, "standard_fractional_constant: s must lie in (0,1)");
    const double n = dim;
    return s * std::pow(4.0, s) * std::tgamma(n / 2.0 + s) /
           (std::pow(std::numbers::pi, n / 2.0) * std::tgamma(1.0 - s));
}

double planar_reduction_constant(int dim, double s) {
    require(dim >= 1, "planar_reduction_constant: dim must be >= 1");
    const double n = dim;
    return std::pow(std::numbers::pi, (n - 1.0) / 2.0) * std::tgamma(s + 0.5) / std::tgamma(s + n / 2.0);
}

}  // namespace regfrac
