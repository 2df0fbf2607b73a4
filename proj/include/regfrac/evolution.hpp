#pragma once

#include "regfrac/geometry.hpp"
#include "regfrac/grid.hpp"
#include "regfrac/kernel.hpp"
#include "regfrac/operator.hpp"
#include "regfrac/reaction.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace regfrac {

enum class InitialKind {
    HeavisideHalfPlane,  ///< 1 where x.direction < offset, else 0
    Constant,            ///< u0 = value everywhere
    Custom,              ///< values supplied cell by cell
};

struct InitialCondition {
    InitialKind kind = InitialKind::HeavisideHalfPlane;
    Vec2 direction{1.0, 0.0};
    double offset = 0.0;
    double value = 0.0;
    std::vector<double> custom;  ///< row-major, one value per cell
    std::string custom_path;     ///< where custom came from (reporting only)
};

Field make_initial(const InitialCondition& ic, GridPtr grid, double farfield);

struct SimConfig {
    double halfwidth = 20.0;
    int n_cells = 128;
    std::optional<Obstacle> obstacle;
    KernelSpec kernel = make_kernel(KernelFamily::RegularizedFractional, 0.5, 2, 0.01);
    BistableSpec reaction = BistableSpec::cubic(0.1);
    double t_end = 280.0;
    std::vector<double> snapshot_times{0, 40, 80, 120, 160, 200, 240, 280};
    std::optional<double> dt;  ///< nullopt: stable_dt
    double steady_tol = 1e-6;
    InitialCondition initial;
    /// Farfield value 1 (the Liouville setting) instead of 0.
    bool liouville_closure = false;

    double farfield() const { return liouville_closure ? 1.0 : 0.0; }
    GridPtr make_grid() const;
    /// Throws InvalidArgument naming the offending parameter.
    void validate() const;
};

struct Snapshot {
    double time = 0.0;
    Field field;
};

struct Trajectory {
    std::vector<Snapshot> snapshots;
    std::vector<double> times;        ///< time after each accepted step, times[0] = 0
    std::vector<double> min_history;  ///< min over exterior cells, aligned with times
    std::vector<double> max_history;
    std::vector<double> residual_history;  ///< ||L u + f(u)|| at the state times[k]
    double dt = 0.0;
    double final_residual = 0.0;
    bool reached_steady = false;
    std::optional<Field> final_field;
};

/// 0.9 / (Lambda_max + lip), Lambda_max = max_i (row weight + tail weight).
/// Throws HypothesisViolation if the operator has negative weights.
double stable_dt(const RegionalOperator& op, const BistableSpec& reaction);
double stable_dt(const GridPtr& grid, const KernelSpec& kernel, const BistableSpec& reaction);

/// Explicit Euler integrator bound to one operator and reaction.
class Evolver {
public:
    Evolver(std::shared_ptr<const RegionalOperator> op, BistableSpec reaction);

    const RegionalOperator& op() const { return *op_; }
    const BistableSpec& reaction() const { return reaction_; }
    double stable_dt() const { return stable_dt_; }

    /// u <- u + dt (L u + f(u)) on exterior cells. Returns ||L u + f(u)||_inf
    /// of the state before the step. Throws InvalidArgument when dt exceeds the
    /// stable step and NumericalFailure on non-finite values.
    double step(Field& u, double dt) const;
    Field step_copy(const Field& u, double dt) const;

    /// ||L u + f(u)||_inf over exterior cells.
    double residual(const Field& u) const;

private:
    std::shared_ptr<const RegionalOperator> op_;
    BistableSpec reaction_;
    double stable_dt_ = 0.0;
};

/// Integrates to t_end or until the residual drops below steady_tol.
/// Snapshots are taken at the completed step nearest each requested time;
/// after an early steady stop the remaining requested times receive the
/// final state. Every step asserts 0 <= u <= 1 (NumericalFailure otherwise).
Trajectory simulate(const SimConfig& config);
Trajectory simulate(const SimConfig& config, const Evolver& evolver, Field initial);

}  // namespace regfrac
