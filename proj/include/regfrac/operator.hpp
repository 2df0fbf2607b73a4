#pragma once

#include "regfrac/grid.hpp"
#include "regfrac/kernel.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace regfrac {

/// How the integral over R^2 \ K beyond the computational box is closed.
enum class Closure {
    /// u equals Field::farfield() outside the box; each cell receives the tail
    /// weight tail_mass(kernel, distance to the nearest box face). This counts
    /// the whole complement of the inscribed ball, so it slightly overweights
    /// the region outside the box near corners.
    FarField,
    /// Test mode: the box is a torus, displacements use the minimum image and
    /// there is no tail.
    Periodic,
};

/// Per-cell tail weights (zero for Periodic).
std::vector<double> tail_weights(const Grid2D& grid, const KernelSpec& kernel, Closure closure);

/// Reference O(N^2) evaluation of the discrete regional operator
///
///   (L u)_i = h^2 sum_{j exterior, j != i} k(x_i - x_j) (u_j - u_i) + T_i (u_inf - u_i)
///
/// at every exterior cell (obstacle cells of the result are zero). Only
/// kernels that are bounded at the origin are admitted on 2-D grids.
std::vector<double> apply_bruteforce(const Field& field, const KernelSpec& kernel,
                                     Closure closure = Closure::FarField);

/// Precomputed transform data for the fast evaluation path: the kernel's
/// spectrum on the zero-padded box, the per-cell free-space and obstacle
/// weight sums, and the tail weights. Immutable after construction; apply()
/// may be called concurrently.
class RegionalOperator {
public:
    RegionalOperator(GridPtr grid, KernelSpec kernel, Closure closure = Closure::FarField);
    ~RegionalOperator();
    RegionalOperator(const RegionalOperator&) = delete;
    RegionalOperator& operator=(const RegionalOperator&) = delete;

    const Grid2D& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    const KernelSpec& kernel() const { return kernel_; }
    Closure closure() const { return closure_; }

    /// Fast path: free-space convolution of the whole box by FFT with the
    /// obstacle cells zeroed (which removes their contribution), minus u_i
    /// times the exterior weight sum, plus the tail term.
    void apply(std::span<const double> u, double farfield, std::span<double> out) const;
    std::vector<double> apply(const Field& field) const;

    /// Interaction weight h^2 k between cells displaced by (dcol, drow).
    double weight(int dcol, int drow) const;
    /// sum_{j exterior, j != i} h^2 k(x_i - x_j)
    double row_weight(std::size_t i) const { return row_weight_[i]; }
    double tail_weight(std::size_t i) const { return tail_[i]; }
    /// max over exterior cells of row_weight + tail_weight.
    double lambda_max() const { return lambda_max_; }

private:
    struct Fft;

    GridPtr grid_;
    KernelSpec kernel_;
    Closure closure_;
    int padded_ = 0;
    std::vector<double> kernel_real_;   // padded_ x padded_, wrapped offsets
    std::vector<double> row_weight_;
    std::vector<double> tail_;
    double lambda_max_ = 0.0;
    bool nonneg_weights_ = true;
    std::unique_ptr<Fft> fft_;
};

/// apply_fast(field, plan): throws InvalidArgument if the plan was built for
/// a different grid.
std::vector<double> apply_fast(const Field& field, const RegionalOperator& plan);

struct WeightReport {
    bool nonnegative = true;
    double min_weight = 0.0;
    double max_weight = 0.0;
    double min_tail = 0.0;
    double max_tail = 0.0;
    std::optional<double> offending_radius;  ///< radius of the first negative weight found
    std::string summary() const;
};

/// Scans every interaction weight h^2 k(x_i - x_j) on the grid and every tail
/// weight; nonnegativity is what makes the discrete comparison principle hold.
WeightReport operator_weights_nonneg(const Grid2D& grid, const KernelSpec& kernel,
                                     Closure closure = Closure::FarField);

}  // namespace regfrac
