#pragma once

#include <limits>
#include <span>
#include <vector>

namespace regfrac {

enum class KernelFamily {
    SingularFractional,     ///< c / |z|^{n+2s}
    RegularizedFractional,  ///< c / (delta + |z|^{n+2s})
    RadialTable,            ///< c * J(|z|), J piecewise linear, compact support
};

/// Radial profile J(r) sampled at increasing radii; linear in between, zero
/// beyond the last radius.
struct RadialTable {
    std::vector<double> radius;
    std::vector<double> value;

    double support_radius() const { return radius.empty() ? 0.0 : radius.back(); }
    double operator()(double r) const;
};

/// Immutable description of a radial interaction kernel.
///
/// The fractional families evaluate c_norm/(delta + |z|^{dim+2s}); delta == 0
/// is the singular kernel. RadialTable covers integrable kernels with compact
/// support (unit mass, positive on an annulus).
class KernelSpec {
public:
    static constexpr double kInfinity = std::numeric_limits<double>::infinity();

    KernelFamily family() const { return family_; }
    double s() const { return s_; }
    int dim() const { return dim_; }
    double delta() const { return delta_; }
    double c_norm() const { return c_norm_; }
    double cutoff_radius() const { return cutoff_radius_; }
    const RadialTable& table() const { return table_; }

    bool is_fractional() const { return family_ != KernelFamily::RadialTable; }
    bool is_singular() const { return family_ == KernelFamily::SingularFractional; }

    /// Exponent dim + 2s of the power law.
    double power() const { return dim_ + 2.0 * s_; }

    /// Kernel as a function of the radius |z|.
    double radial(double r) const;

    friend KernelSpec make_kernel(KernelFamily, double, int, double, double);
    friend KernelSpec make_table_kernel(RadialTable, int, double);
    friend KernelSpec with_cutoff(KernelSpec, double);

private:
    KernelSpec() = default;

    KernelFamily family_ = KernelFamily::RegularizedFractional;
    double s_ = 0.5;
    int dim_ = 2;
    double delta_ = 0.0;
    double c_norm_ = 1.0;
    double cutoff_radius_ = kInfinity;
    RadialTable table_;
};

/// Validated fractional kernel. Throws InvalidArgument when s is outside
/// (0,1), dim < 1, c_norm <= 0, or delta does not match the family.
KernelSpec make_kernel(KernelFamily family, double s, int dim, double delta, double c_norm = 1.0);

/// Integrable radial kernel from a table; `s` is unused for this family.
KernelSpec make_table_kernel(RadialTable table, int dim, double c_norm = 1.0);

/// Copy of `spec` with a finite cutoff radius.
KernelSpec with_cutoff(KernelSpec spec, double cutoff_radius);

/// Radial table with the given shape rescaled so that the kernel has unit
/// mass over R^dim.
RadialTable normalize_table_mass(RadialTable table, int dim);

/// Kernel value at the displacement z (size must equal spec.dim()).
double kernel_eval(const KernelSpec& spec, std::span<const double> z);

/// Mass of the kernel outside the ball of radius R.
double tail_mass(const KernelSpec& spec, double R);

/// Total mass over R^dim; finite only for RadialTable kernels.
double total_mass(const KernelSpec& spec);

/// Surface measure of the unit sphere S^{dim-1} (2 for dim=1, 2*pi for dim=2).
double unit_sphere_area(int dim);

/// The classical normalisation C_{n,s} = s 4^s Gamma(n/2+s) / (pi^{n/2} Gamma(1-s)),
/// available for callers who want the fractional Laplacian with symbol |xi|^{2s}.
double standard_fractional_constant(int dim, double s);

/// Integral of |(t, w)|^{-(dim+2s)} over w in R^{dim-1}, divided by |t|^{-(1+2s)}.
/// Multiplying a dim-dimensional singular kernel's constant by this gives the
/// constant of the one-dimensional kernel seen by planar functions.
double planar_reduction_constant(int dim, double s);

}  // namespace regfrac
