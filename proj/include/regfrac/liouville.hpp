#pragma once

#include "regfrac/evolution.hpp"
#include "regfrac/travelling_wave.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace regfrac {

/// Outcome of the sliding scan r* = inf{ r : phi(x.e - r) <= u(x) on the grid }.
struct SlideResult {
    bool below_grid = false;  ///< ordering already holds at the bottom of the scan range
    bool above_range = false; ///< ordering fails even at the top of the scan range
    double r_star = 0.0;      ///< meaningful when neither flag is set
    double r_min = 0.0;       ///< scanned range
    double r_max = 0.0;
    std::string describe() const;
};

/// Bisection over r in [-3L, 3L] (L the box half-width) on the predicate
/// phi(x.e - r) <= u(x) + tol_slide at every exterior cell.
SlideResult sliding_r_star(const Field& u, const WaveProfile& profile, Vec2 e, double tol_slide = 1e-9);

/// Smallest r on a grid-spaced scan with phi(max_x x.e - r) <= min u, after
/// which the ordering phi_r <= u holds pointwise (verified). Throws
/// HypothesisViolation when min u <= 0.
double claim_r0_exists(const Field& u, const WaveProfile& profile, Vec2 e);

struct WeakMaxInstanceResult {
    bool hypotheses_ok = false;  ///< super/sub signs, u >= 1 - c0 on H, ordering on H^c \ K
    double min_gap = 0.0;        ///< min over cells and comparison steps of u - v
    std::size_t worst_cell = 0;
    Vec2 worst_location;
    bool corrupted = false;
    HalfSpace halfspace;
    bool ordered() const { return min_gap >= -1e-12; }
};

struct WeakMaxReport {
    int instances = 0;
    int passed = 0;    ///< hypotheses hold and v <= u everywhere
    int detected = 0;  ///< corrupted instances whose violation was found
    double min_gap = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
    std::optional<Vec2> violation;  ///< first violating cell found
    std::vector<WeakMaxInstanceResult> results;
    bool pass() const { return passed == instances; }
};

/// Random instances of the comparison lemma on a half-space H with K in the
/// complement of H: u a supersolution with u >= 1 - c0 on H, v a subsolution,
/// v <= u on H^c \ K, far fields ordered. Both are then evolved with the
/// H^c data frozen, and v <= u is checked at every step. With corrupt = true
/// each instance gets one cell of H^c where v > u (negative control).
/// Throws HypothesisViolation for negative operator weights or a reaction
/// without the decay condition near 1.
WeakMaxReport discrete_weak_max_test(const KernelSpec& kernel, const GridPtr& grid, const Obstacle& obstacle,
                                     const BistableSpec& reaction, int n_random, std::uint64_t seed = 1,
                                     bool corrupt = false);

enum class StrongMaxOutcome { IdenticallyEqual, TouchingForbidden };

struct StrongMaxReport {
    StrongMaxOutcome outcome = StrongMaxOutcome::IdenticallyEqual;
    std::size_t touching_cell = 0;
    std::size_t component_cells = 0;
    double max_gap = 0.0;          ///< max of u - v over the connected component
    double residual_gap = 0.0;     ///< (L v + f(v)) - (L u + f(u)) at the touching cell
    std::string describe() const;
};

/// Discrete shadow of the strong maximum principle on the closed half-space:
/// finds the cell where u - v is smallest (must be <= 1e-10), collects the
/// half-space cells connected to it through positive weights, and reports
/// whether u - v vanishes there (within 1e-9). Throws InvalidArgument when
/// v <= u fails or no touching point exists.
StrongMaxReport discrete_strong_max_probe(const Field& u, const Field& v, const HalfSpace& halfspace,
                                          const RegionalOperator& op, const BistableSpec& reaction);

struct LiouvilleOptions {
    double tol_one = 0.05;
    bool allow_nonconvex = false;
    std::vector<Vec2> directions{{1.0, 0.0}, {0.0, 1.0}, {0.70710678118654752, 0.70710678118654752}};
    int max_test_instances = 4;
    std::uint64_t seed = 1;
    /// Front grid for the sliding family. 0 picks a half-width that keeps
    /// every x.e - r of the sliding scan on the front grid.
    double wave_halfwidth = 0.0;
    double wave_h = 0.02;
};

struct LiouvilleReport {
    double steady_min = 0.0;
    double gamma_observed = 0.0;  ///< min of u over the trajectory at t > 0
    bool steady_reached = false;
    double final_residual = 0.0;
    double final_time = 0.0;
    std::vector<Vec2> directions;
    std::vector<SlideResult> slides;  ///< empty for integrable kernels
    bool sliding_run = false;
    double wave_speed = 0.0;
    bool maxprinciple_pass = false;
    WeakMaxReport maxprinciple;
    bool convexity_certified = false;
    double tol_one = 0.05;

    bool steady_ok() const { return steady_min >= 1.0 - tol_one; }
    bool sliding_ok() const;
    /// The numerical pillars: steady state ~ 1, gamma > 0, sliding below grid,
    /// comparison tests.
    bool pass() const { return steady_ok() && gamma_observed > 0.0 && sliding_ok() && maxprinciple_pass; }
    /// pass() on a convex obstacle; exploratory runs never certify.
    bool certified() const { return pass() && convexity_certified; }
    std::string r_star_summary() const;
};

/// Runs the obstacle problem to steady state with far field 1 and checks the
/// Liouville conclusion. Refuses non-convex obstacles unless allow_nonconvex
/// (the report is then non-certifying); throws NumericalFailure if no steady
/// state is reached by t_end.
LiouvilleReport check_liouville(const SimConfig& config, const LiouvilleOptions& options = {});
LiouvilleReport check_liouville(const SimConfig& config, const Trajectory& trajectory, const LiouvilleOptions& options);

}  // namespace regfrac
