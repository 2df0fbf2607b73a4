#include "regfrac/evolution.hpp"

#include "regfrac/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace regfrac {

Field make_initial(const InitialCondition& ic, GridPtr grid, double farfield) {
    Field u(grid, farfield);
    switch (ic.kind) {
    case InitialKind::HeavisideHalfPlane:
        for (std::size_t i : grid->exterior_cells()) u[i] = dot(grid->center(i), ic.direction) < ic.offset ? 1.0 : 0.0;
        break;
    case InitialKind::Constant:
        for (std::size_t i : grid->exterior_cells()) u[i] = ic.value;
        break;
    case InitialKind::Custom:
        if (ic.custom.size() != grid->size()) {
            std::ostringstream msg;
            msg << "initial: custom field has " << ic.custom.size() << " values, grid has " << grid->size();
            throw InvalidArgument(msg.str());
        }
        for (std::size_t i : grid->exterior_cells()) u[i] = ic.custom[i];
        break;
    }
    return u;
}

GridPtr SimConfig::make_grid() const {
    if (obstacle) return std::make_shared<Grid2D>(Grid2D::with_obstacle(halfwidth, n_cells, *obstacle));
    return std::make_shared<Grid2D>(Grid2D::empty_box(halfwidth, n_cells));
}

void SimConfig::validate() const {
    auto fail = [](const std::string& key, const std::string& why) { throw InvalidArgument(key + ": " + why); };
    if (!(halfwidth > 0.0)) fail("grid.halfwidth", "must be > 0");
    if (n_cells < 4) fail("grid.n_cells", "must be >= 4");
    if (kernel.dim() != 2) fail("kernel", "2-D runs need a 2-D kernel");
    if (kernel.is_singular()) fail("kernel.family", "the singular kernel is not admitted on 2-D grids");
    if (!(t_end > 0.0)) fail("time.t_end", "must be > 0");
    if (dt && !(*dt > 0.0)) fail("time.dt", "must be > 0");
    if (!(steady_tol > 0.0)) fail("time.steady_tol", "must be > 0");
    for (std::size_t k = 0; k < snapshot_times.size(); ++k) {
        const double t = snapshot_times[k];
        if (t < 0.0 || t > t_end) fail("time.snapshots", "time " + std::to_string(t) + " outside [0, t_end]");
        if (k > 0 && !(t > snapshot_times[k - 1])) fail("time.snapshots", "times must be strictly increasing");
    }
    if (initial.kind == InitialKind::Constant && !(initial.value >= 0.0 && initial.value <= 1.0))
        fail("initial.value", "must lie in [0,1]");
    if (initial.kind == InitialKind::HeavisideHalfPlane && norm(initial.direction) == 0.0)
        fail("initial.direction", "must be nonzero");
    if (initial.kind == InitialKind::Custom)
        for (double v : initial.custom)
            if (!(v >= 0.0 && v <= 1.0)) fail("initial.file", "custom values must lie in [0,1]");
}

double stable_dt(const RegionalOperator& op, const BistableSpec& reaction) {
    auto rep = operator_weights_nonneg(op.grid(), op.kernel(), op.closure());
    if (!rep.nonnegative) throw HypothesisViolation("stable_dt: " + rep.summary());
    return 0.9 / (op.lambda_max() + reaction.lip_bound());
}

double stable_dt(const GridPtr& grid, const KernelSpec& kernel, const BistableSpec& reaction) {
    RegionalOperator op(grid, kernel);
    return stable_dt(op, reaction);
}

Evolver::Evolver(std::shared_ptr<const RegionalOperator> op, BistableSpec reaction)
    : op_(std::move(op)), reaction_(std::move(reaction)) {
    if (!op_) throw InvalidArgument("evolver: null operator");
    stable_dt_ = regfrac::stable_dt(*op_, reaction_);
}

double Evolver::step(Field& u, double dt) const {
    if (!(dt > 0.0) || dt > stable_dt_ * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "step: dt = " << dt << " violates the stability bound " << stable_dt_;
        throw InvalidArgument(msg.str());
    }
    const auto& grid = op_->grid();
    std::vector<double> Lu(grid.size());
    op_->apply(u.values(), u.farfield(), Lu);
    double res = 0.0;
    auto vals = u.values();
    for (std::size_t i : grid.exterior_cells()) {
        const double r = Lu[i] + reaction_.f(vals[i]);
        res = std::max(res, std::abs(r));
        vals[i] += dt * r;
        if (!std::isfinite(vals[i])) {
            Vec2 x = grid.center(i);
            std::ostringstream msg;
            msg << "step: non-finite value at cell " << i << " (" << x.x << ", " << x.y << ")";
            throw NumericalFailure(msg.str());
        }
    }
    return res;
}

Field Evolver::step_copy(const Field& u, double dt) const {
    Field v = u;
    step(v, dt);
    return v;
}

double Evolver::residual(const Field& u) const {
    const auto& grid = op_->grid();
    std::vector<double> Lu(grid.size());
    op_->apply(u.values(), u.farfield(), Lu);
    double res = 0.0;
    for (std::size_t i : grid.exterior_cells()) res = std::max(res, std::abs(Lu[i] + reaction_.f(u[i])));
    return res;
}

Trajectory simulate(const SimConfig& config) {
    config.validate();
    auto grid = config.make_grid();
    auto op = std::make_shared<const RegionalOperator>(grid, config.kernel);
    Evolver ev(op, config.reaction);
    return simulate(config, ev, make_initial(config.initial, grid, config.farfield()));
}

Trajectory simulate(const SimConfig& config, const Evolver& evolver, Field u) {
    if (!(u.grid() == evolver.op().grid())) throw InvalidArgument("simulate: initial field is on a different grid");
    Trajectory tr;
    tr.dt = config.dt.value_or(evolver.stable_dt());
    const double dt = tr.dt;
    const double t_end = config.t_end;

    auto check_range = [&](const Field& f, double t) {
        const double lo = f.min(), hi = f.max();
        if (!(lo >= 0.0 && hi <= 1.0)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "simulate: invariant region [0,1] left at t = " << t << " (min " << lo << ", max " << hi << ")";
            throw NumericalFailure(msg.str());
        }
        tr.min_history.push_back(lo);
        tr.max_history.push_back(hi);
    };

    std::size_t next_snap = 0;
    auto take_snapshots = [&](double t, bool last) {
        while (next_snap < config.snapshot_times.size()) {
            const double want = config.snapshot_times[next_snap];
            // nearest completed step: take it once the next step would be farther away
            if (!last && t + 0.5 * dt <= want) break;
            tr.snapshots.push_back({last && tr.reached_steady ? std::max(t, want) : t, u});
            ++next_snap;
        }
    };

    double t = 0.0;
    tr.times.push_back(t);
    check_range(u, t);
    take_snapshots(t, false);
    while (t < t_end * (1.0 - 1e-14)) {
        const double h = std::min(dt, t_end - t);
        const double res = evolver.step(u, h);
        tr.residual_history.push_back(res);
        t += h;
        tr.times.push_back(t);
        check_range(u, t);
        // res belongs to the state before the step; the step itself is kept
        if (res < config.steady_tol) {
            tr.reached_steady = true;
            break;
        }
        take_snapshots(t, false);
    }
    tr.residual_history.resize(tr.times.size(), 0.0);
    tr.final_residual = evolver.residual(u);
    tr.residual_history.back() = tr.final_residual;
    take_snapshots(t, true);
    tr.final_field = u;
    return tr;
}

}  // namespace regfrac
