#include "regfrac/liouville.hpp"

#include "regfrac/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>
#include <sstream>

namespace regfrac {

namespace {

bool ordered_below(const Field& u, const WaveProfile& phi, Vec2 e, double r, double tol) {
    const auto& g = u.grid();
    for (std::size_t i : g.exterior_cells())
        if (phi(dot(g.center(i), e) - r) > u[i] + tol) return false;
    return true;
}

double grid_halfwidth(const Field& u) { return u.grid().halfwidth(); }

Vec2 unit(Vec2 e) {
    const double n = norm(e);
    if (!(n > 0.0)) throw InvalidArgument("direction must be nonzero");
    return (1.0 / n) * e;
}

}  // namespace

std::string SlideResult::describe() const {
    std::ostringstream out;
    if (below_grid)
        out << "below-grid";
    else if (above_range)
        out << "above-range (> " << r_max << ")";
    else
        out << r_star;
    return out.str();
}

SlideResult sliding_r_star(const Field& u, const WaveProfile& profile, Vec2 e, double tol_slide) {
    e = unit(e);
    const double L = u.grid().halfwidth();
    SlideResult res;
    res.r_min = -3.0 * L;
    res.r_max = 3.0 * L;
    if (ordered_below(u, profile, e, res.r_min, tol_slide)) {
        res.below_grid = true;
        res.r_star = res.r_min;
        return res;
    }
    if (!ordered_below(u, profile, e, res.r_max, tol_slide)) {
        res.above_range = true;
        res.r_star = res.r_max;
        return res;
    }
    double lo = res.r_min, hi = res.r_max;  // predicate false at lo, true at hi
    while (hi - lo > 1e-3 * u.grid().h()) {
        const double mid = 0.5 * (lo + hi);
        (ordered_below(u, profile, e, mid, tol_slide) ? hi : lo) = mid;
    }
    res.r_star = hi;
    return res;
}

double claim_r0_exists(const Field& u, const WaveProfile& profile, Vec2 e) {
    e = unit(e);
    const double umin = u.min();
    if (!(umin > 0.0)) throw HypothesisViolation("claim_r0_exists: min u must be > 0");
    const auto& g = u.grid();
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i : g.exterior_cells()) top = std::max(top, dot(g.center(i), e));
    const double L = g.halfwidth();
    const double step = g.h();
    // beyond r = top + Z the front is 0 on the whole grid, so the scan terminates
    const double r_end = top + profile.halfwidth() + step;
    double r = -3.0 * L;
    while (r < r_end && profile(top - r) > umin) r += step;
    if (!ordered_below(u, profile, e, r, 0.0))
        throw NumericalFailure("claim_r0_exists: ordering check failed at the returned r0");
    return r;
}

// ---------------------------------------------------------------------------

namespace {

struct FrozenStepper {
    const RegionalOperator& op;
    const BistableSpec& f;
    double dt;
    const std::vector<std::uint8_t>& active;  // cells updated (H)
    mutable std::vector<double> Lu;

    // Returns the max of L u + f(u) over active cells before the step.
    double residual(const Field& u, double* lo, double* hi) const {
        Lu.resize(u.grid().size());
        op.apply(u.values(), u.farfield(), Lu);
        double mn = std::numeric_limits<double>::infinity(), mx = -mn;
        for (std::size_t i : u.grid().exterior_cells()) {
            if (!active[i]) continue;
            Lu[i] += f.f(u[i]);
            mn = std::min(mn, Lu[i]);
            mx = std::max(mx, Lu[i]);
        }
        if (lo) *lo = mn;
        if (hi) *hi = mx;
        return mx;
    }
    void step(Field& u) const {
        residual(u, nullptr, nullptr);
        for (std::size_t i : u.grid().exterior_cells())
            if (active[i]) u[i] += dt * Lu[i];
    }
};

}  // namespace

WeakMaxReport discrete_weak_max_test(const KernelSpec& kernel, const GridPtr& grid, const Obstacle& given,
                                     const BistableSpec& reaction, int n_random, std::uint64_t seed, bool corrupt) {
    // For a non-convex K the half-spaces are built against the hull of its
    // cells, which still leaves K in the complement.
    Obstacle obstacle = given;
    if (!is_convex(given)) {
        std::vector<Vec2> pts;
        for (std::size_t j : grid->obstacle_cells()) pts.push_back(grid->center(j));
        auto hull = convex_hull(pts);
        if (hull.size() < 3) throw HypothesisViolation("discrete_weak_max_test: obstacle hull is degenerate");
        obstacle = Obstacle::polygon(hull);
    }
    auto weights = operator_weights_nonneg(*grid, kernel);
    if (!weights.nonnegative) throw HypothesisViolation("discrete_weak_max_test: " + weights.summary());
    const DecayBound decay = decay_near_one(reaction);
    if (!decay.holds()) throw HypothesisViolation("discrete_weak_max_test: f' <= -c1 fails near 1");

    RegionalOperator op(grid, kernel);
    const double dt = stable_dt(op, reaction);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);

    const BoundingBox bb = obstacle.bounding_box();
    const Vec2 centre = 0.5 * (bb.lo + bb.hi);
    const double radius = 0.5 * norm(bb.hi - bb.lo);
    const double L = grid->halfwidth();

    WeakMaxReport rep;
    rep.c0 = decay.c0;
    rep.c1 = decay.c1;
    rep.min_gap = std::numeric_limits<double>::infinity();

    for (int inst = 0; inst < n_random; ++inst) {
        // half-space through a random exterior point, K on the far side
        HalfSpace H;
        std::vector<std::uint8_t> inH(grid->size(), 0);
        std::size_t nH = 0, nHc = 0;
        for (int attempt = 0;; ++attempt) {
            if (attempt > 1000) throw NumericalFailure("discrete_weak_max_test: could not place a half-space");
            const double ang = 2.0 * std::numbers::pi * U(rng);
            const double dist = radius + grid->h() + U(rng) * 0.5 * (L - radius);
            const Vec2 x0 = centre + dist * Vec2{std::cos(ang), std::sin(ang)};
            if (std::abs(x0.x) >= L || std::abs(x0.y) >= L || contains(obstacle, x0)) continue;
            H = separating_halfspace(obstacle, x0);
            nH = nHc = 0;
            for (std::size_t i : grid->exterior_cells()) {
                inH[i] = H.contains(grid->center(i)) ? 1 : 0;
                (inH[i] ? nH : nHc) += 1;
            }
            if (nH > 0 && nHc > 0) break;
        }
        const std::vector<std::uint8_t>& active = inH;
        FrozenStepper stepper{op, reaction, dt, active, {}};

        // data on H^c \ K: g_v <= g_u, equal on a random subset
        Field u(grid, 1.0), v(grid, U(rng));
        for (std::size_t i : grid->exterior_cells()) {
            if (inH[i]) {
                u[i] = 1.0;
                v[i] = 0.0;
            } else {
                u[i] = U(rng);
                v[i] = U(rng) < 0.3 ? u[i] : u[i] * U(rng);
            }
        }
        // u: decreasing iterates from 1 are supersolutions; stop before leaving [1 - c0, 1] on H
        for (int k = 0; k < 400; ++k) {
            Field next = u;
            stepper.step(next);
            double mn = 1.0;
            for (std::size_t i : grid->exterior_cells())
                if (inH[i]) mn = std::min(mn, next[i]);
            if (mn < 1.0 - decay.c0) break;
            u = std::move(next);
        }
        // v: increasing iterates from 0 are subsolutions
        for (int k = 0; k < 400; ++k) stepper.step(v);

        WeakMaxInstanceResult res;
        res.halfspace = H;
        res.corrupted = corrupt;
        if (corrupt) {
            std::vector<std::size_t> cand;
            for (std::size_t i : grid->exterior_cells())
                if (!inH[i] && u[i] < 0.9) cand.push_back(i);
            const std::size_t j = cand[rng() % cand.size()];
            v[j] = u[j] + 0.5 * (1.0 - u[j]);
        }

        // hypotheses
        double lo_u, hi_u, lo_v, hi_v;
        stepper.residual(u, &lo_u, &hi_u);
        stepper.residual(v, &lo_v, &hi_v);
        bool ok = hi_u <= 1e-12 && lo_v >= -1e-12 && v.farfield() <= u.farfield();
        for (std::size_t i : grid->exterior_cells()) {
            if (inH[i] && u[i] < 1.0 - decay.c0) ok = false;
            if (!inH[i] && v[i] > u[i]) ok = false;
        }
        res.hypotheses_ok = ok;

        // comparison run
        res.min_gap = std::numeric_limits<double>::infinity();
        for (int k = 0; k <= 200; ++k) {
            for (std::size_t i : grid->exterior_cells()) {
                const double gap = u[i] - v[i];
                if (gap < res.min_gap) {
                    res.min_gap = gap;
                    res.worst_cell = i;
                }
            }
            if (k < 200) {
                stepper.step(u);
                stepper.step(v);
            }
        }
        res.worst_location = grid->center(res.worst_cell);

        ++rep.instances;
        if (res.hypotheses_ok && res.ordered()) ++rep.passed;
        if (corrupt && !res.ordered()) ++rep.detected;
        if (!res.ordered() && !rep.violation) rep.violation = res.worst_location;
        rep.min_gap = std::min(rep.min_gap, res.min_gap);
        rep.results.push_back(res);
    }
    return rep;
}

std::string StrongMaxReport::describe() const {
    std::ostringstream out;
    if (outcome == StrongMaxOutcome::IdenticallyEqual)
        out << "identically equal on " << component_cells << " connected cells";
    else
        out << "contradiction: touching forbidden (max gap " << max_gap << ", residual gap " << residual_gap << ")";
    return out.str();
}

StrongMaxReport discrete_strong_max_probe(const Field& u, const Field& v, const HalfSpace& halfspace,
                                          const RegionalOperator& op, const BistableSpec& reaction) {
    const auto& g = u.grid();
    if (!(g == v.grid()) || !(g == op.grid())) throw InvalidArgument("discrete_strong_max_probe: grid mismatch");
    for (std::size_t i : g.exterior_cells())
        if (v[i] > u[i] + 1e-12) throw InvalidArgument("discrete_strong_max_probe: v <= u does not hold");

    auto in_closed = [&](std::size_t i) { return dot(g.center(i), halfspace.e) >= halfspace.offset; };
    StrongMaxReport rep;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i : g.exterior_cells()) {
        if (!in_closed(i)) continue;
        if (u[i] - v[i] < best) {
            best = u[i] - v[i];
            rep.touching_cell = i;
        }
    }
    if (!(best <= 1e-10)) throw InvalidArgument("discrete_strong_max_probe: no touching point in the half-space");

    // breadth-first search through positive weights inside the closed half-space
    const int n = g.n_cells();
    std::vector<std::uint8_t> seen(g.size(), 0);
    std::vector<std::size_t> cells;
    for (std::size_t i : g.exterior_cells())
        if (in_closed(i)) cells.push_back(i);
    std::deque<std::size_t> queue{rep.touching_cell};
    seen[rep.touching_cell] = 1;
    while (!queue.empty()) {
        const std::size_t i = queue.front();
        queue.pop_front();
        ++rep.component_cells;
        rep.max_gap = std::max(rep.max_gap, u[i] - v[i]);
        const int ri = static_cast<int>(i) / n, ci = static_cast<int>(i) % n;
        for (std::size_t j : cells) {
            if (seen[j]) continue;
            const int rj = static_cast<int>(j) / n, cj = static_cast<int>(j) % n;
            if (op.weight(cj - ci, rj - ri) > 0.0) {
                seen[j] = 1;
                queue.push_back(j);
            }
        }
    }
    std::vector<double> Lu(g.size()), Lv(g.size());
    op.apply(u.values(), u.farfield(), Lu);
    op.apply(v.values(), v.farfield(), Lv);
    const std::size_t t = rep.touching_cell;
    rep.residual_gap = (Lv[t] + reaction.f(v[t])) - (Lu[t] + reaction.f(u[t]));
    rep.outcome = rep.max_gap <= 1e-9 ? StrongMaxOutcome::IdenticallyEqual : StrongMaxOutcome::TouchingForbidden;
    return rep;
}

// ---------------------------------------------------------------------------

bool LiouvilleReport::sliding_ok() const {
    if (!sliding_run) return true;
    return std::all_of(slides.begin(), slides.end(), [](const SlideResult& s) { return s.below_grid; });
}

std::string LiouvilleReport::r_star_summary() const {
    if (!sliding_run) return "not run (integrable kernel)";
    std::ostringstream out;
    for (std::size_t k = 0; k < slides.size(); ++k) {
        if (k) out << "; ";
        out << "e=(" << directions[k].x << "," << directions[k].y << "): " << slides[k].describe();
    }
    return out.str();
}

LiouvilleReport check_liouville(const SimConfig& config, const LiouvilleOptions& options) {
    config.validate();
    if (!config.liouville_closure) throw InvalidArgument("check_liouville: requires the far-field closure u = 1");
    if (config.obstacle && !is_convex(*config.obstacle) && !options.allow_nonconvex)
        throw HypothesisViolation("check_liouville: obstacle is not convex (pass allow_nonconvex for an exploratory run)");
    const auto cond = check_conditions(config.reaction);
    if (!cond.pass()) throw HypothesisViolation("check_liouville: reaction fails " + cond.failures());
    auto tr = simulate(config);
    return check_liouville(config, tr, options);
}

LiouvilleReport check_liouville(const SimConfig& config, const Trajectory& tr, const LiouvilleOptions& options) {
    if (!tr.final_field) throw InvalidArgument("check_liouville: trajectory has no final field");
    if (!tr.reached_steady) {
        std::ostringstream msg;
        msg << "check_liouville: no steady state by t_end = " << config.t_end << " (residual " << tr.final_residual
            << ", steady_tol " << config.steady_tol << ")";
        throw NumericalFailure(msg.str());
    }
    LiouvilleReport rep;
    rep.tol_one = options.tol_one;
    rep.convexity_certified = !config.obstacle || is_convex(*config.obstacle);
    const Field& u = *tr.final_field;
    rep.steady_min = u.min();
    rep.steady_reached = tr.reached_steady;
    rep.final_residual = tr.final_residual;
    rep.final_time = tr.times.back();
    rep.gamma_observed = 1.0;
    for (std::size_t k = 1; k < tr.min_history.size(); ++k) rep.gamma_observed = std::min(rep.gamma_observed, tr.min_history[k]);
    if (tr.min_history.size() == 1) rep.gamma_observed = tr.min_history[0];

    rep.directions = options.directions;
    if (config.kernel.is_fractional()) {
        WaveOptions wopt;
        wopt.c_norm = planar_wave_cnorm(config.kernel);
        double Z = options.wave_halfwidth;
        if (Z <= 0.0) Z = std::max(60.0, std::ceil((3.0 + std::numbers::sqrt2) * grid_halfwidth(u) + 5.0));
        const int n = 2 * static_cast<int>(std::lround(Z / options.wave_h)) + 1;
        const auto front = solve_front(config.reaction, config.kernel.s(), Z, n, wopt);
        rep.wave_speed = front.speed_c;
        for (Vec2 e : options.directions) rep.slides.push_back(sliding_r_star(u, front, e));
        rep.sliding_run = true;
    }

    auto grid = u.grid_ptr();
    // without an obstacle a small disk stands in for the separation step
    const Obstacle obstacle = config.obstacle ? *config.obstacle : Obstacle::disk({0.0, 0.0}, grid->h());
    rep.maxprinciple = discrete_weak_max_test(config.kernel, grid, obstacle, config.reaction,
                                              options.max_test_instances, options.seed);
    rep.maxprinciple_pass = rep.maxprinciple.pass();
    return rep;
}

}  // namespace regfrac
