#pragma once

#include "regfrac/geometry.hpp"
#include "regfrac/grid.hpp"
#include "regfrac/kernel.hpp"
#include "regfrac/reaction.hpp"
#include "regfrac/singular1d.hpp"

#include <optional>
#include <string>
#include <vector>

namespace regfrac {

/// Front (c, phi) of  -c phi' + c_norm D^s phi + f(phi) = 0,  phi(-inf) = 0,
/// phi(+inf) = 1, on the uniform grid z_k = -Z + k h. Outside [-Z, Z] the
/// profile is taken equal to its limits.
struct WaveProfile {
    double s = 0.5;
    double c_norm = 1.0;
    double speed_c = 0.0;
    double z0 = 0.0;
    double h = 0.0;
    std::vector<double> phi;
    double residual_norm = 0.0;  ///< front_residual of this profile
    bool monotone = false;
    int phase1_steps = 0;
    int newton_steps = 0;

    std::size_t size() const { return phi.size(); }
    double node(std::size_t k) const { return z0 + static_cast<double>(k) * h; }
    double halfwidth() const { return -z0; }
    /// Linear interpolation, limits 0 / 1 beyond the grid.
    double operator()(double z) const;
    /// Centred-difference derivative at a node (ghost values 0 / 1).
    double derivative(std::size_t k) const;
    SampledProfile sampled() const;
};

struct WaveOptions {
    double c_norm = 1.0;
    /// Initial guess: 1/(1+exp(-(z - shift)/width)) with speed c_guess.
    double initial_width = 1.0;
    double initial_shift = 0.0;
    double c_guess = 0.0;
    /// Near-field band of the preconditioner.
    int band = 64;
    double newton_tol = 1e-10;  ///< target max-norm residual
    int max_steps = 200;
    double phase1_speed_tol = 1e-8;  ///< |dc| per unit pseudo-time that ends phase 1
};

/// Phase 1: implicit co-moving pseudo-time evolution with the frame speed
/// fixed by the phase condition phi(0) = 1/2, using growing pseudo-time steps.
/// Phase 2: Newton polish on the same bordered system. Linear systems are
/// solved by GMRES preconditioned with a banded LU of the near-field part.
///
/// Requires an odd node count (z = 0 is a node) and a reaction with the
/// bistable sign structure (the sign of its integral is free). Throws
/// NumericalFailure with the best residual reached when the budget runs out.
WaveProfile solve_front(const BistableSpec& reaction, double s, double Z, int n_nodes,
                        const WaveOptions& options = {});

/// max over interior nodes of |-c phi' + c_norm D^s phi + f(phi)|, with phi'
/// by centred differences and D^s from apply_singular_1d with limits 0 / 1.
double front_residual(const WaveProfile& profile, const BistableSpec& reaction);

/// 1-D constant seen by planar functions x -> phi(x.e - r) under a 2-D
/// fractional kernel: c_norm(kernel) * planar_reduction_constant(2, s).
double planar_wave_cnorm(const KernelSpec& kernel);

struct PlanarReport {
    double min_value = 0.0;     ///< min over exterior cells of H_e of L phi_{e,r} + f(phi_{e,r})
    double lower_bound = 0.0;   ///< c * min over those cells of phi'(x.e - r)
    double min_correction = 0.0;  ///< min of the obstacle term (>= 0 by monotonicity)
    std::size_t argmin = 0;
    std::size_t cells = 0;
    HalfSpace halfspace;
};

/// Evaluates L phi_{e,r} + f(phi_{e,r}) on the exterior cells of H_e = {x.e > offset}
/// by splitting L into its free-space part (the planar reduction of the
/// kernel, evaluated on the 1-D front grid) and the obstacle term
/// -h^2 sum_{j in K} k(x_i - x_j)(phi_{e,r}(x_j) - phi_{e,r}(x_i)).
/// `offset` defaults to max over obstacle cells and the obstacle itself of x.e.
/// Throws HypothesisViolation when the obstacle meets H_e, when the profile is
/// not monotone, or when the profile was not computed for this kernel's
/// planar constant; InvalidArgument when some x.e - r leaves the front grid.
PlanarReport planar_subsolution_check(const WaveProfile& profile, Vec2 e, double r, const Grid2D& grid,
                                      const Obstacle& obstacle, const KernelSpec& kernel,
                                      const BistableSpec& reaction, std::optional<double> offset = std::nullopt);

}  // namespace regfrac
