// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes.

#include "regfrac/config.hpp"
#include "regfrac/liouville.hpp"
#include "regfrac/operator.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>

using namespace regfrac;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Field random_field(const GridPtr& g, std::mt19937_64& rng, double farfield) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Field u(g, farfield);
    for (std::size_t i : g->exterior_cells()) u[i] = U(rng);
    return u;
}

KernelSpec reg(double s, double c_norm = 1.0) {
    return make_kernel(KernelFamily::RegularizedFractional, s, 2, 0.01, c_norm);
}

// The figure run is shared by criteria 1, 6 and 7.
struct Fig1 {
    RunConfig rc;
    Trajectory tr;
    double seconds = 0.0;
};

const Fig1& fig1() {
    static const Fig1 run = [] {
        Fig1 r;
        const auto t0 = Clock::now();
        r.rc = load_config(REGFRAC_CONFIG_DIR "/fig1.cfg");
        r.tr = simulate(r.rc.sim);
        r.seconds = seconds_since(t0);
        return r;
    }();
    return run;
}

Verdict c1_figure() {
    const auto& f = fig1();
    const auto& c = f.rc.sim;
    if (c.kernel.delta() != 0.01 || c.kernel.s() != 0.5 || c.reaction.theta() != 0.1 || c.n_cells != 128 ||
        c.initial.kind != InitialKind::HeavisideHalfPlane || !c.obstacle)
        return {false, "fig1.cfg does not describe the figure setup"};
    const auto& last = f.tr.snapshots.back();
    const double m = last.field.min();
    bool monotone = true;
    const auto& h = f.tr.min_history;
    for (std::size_t k = 1; k < h.size(); ++k)
        if (h[k - 1] > c.reaction.theta() && h[k] < h[k - 1]) monotone = false;
    const bool ok = std::abs(last.time - 280.0) < 1e-9 && m >= 0.95 && monotone && f.seconds <= 600.0;
    return {ok, fmt("min u(t=%g) = %.6f (>= 0.95), min-history %s after min > theta, %.1f s (<= 600 s); steady at "
                    "t = %.2f",
                    last.time, m, monotone ? "nondecreasing" : "DECREASES", f.seconds, f.tr.times.back())};
}

Verdict c2_oracle() {
    const auto t0 = Clock::now();
    auto g = std::make_shared<const Grid2D>(Grid2D::with_obstacle(4.0, 32, Obstacle::disk({0.125, 0.125}, 0.3)));
    if (g->obstacle_cells().size() != 5) return {false, "obstacle does not cover 5 cells"};
    const auto k = reg(0.5);
    RegionalOperator op(g, k);
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Field u = random_field(g, rng, trial % 2 ? 1.0 : 0.0);
        const auto fast = apply_fast(u, op);
        const auto ref = apply_bruteforce(u, k);
        double scale = 0.0;
        for (std::size_t i : g->exterior_cells()) scale = std::max(scale, std::abs(ref[i]));
        for (std::size_t i : g->exterior_cells()) worst = std::max(worst, std::abs(fast[i] - ref[i]) / scale);
    }
    const double t = seconds_since(t0);
    return {worst <= 1e-10 && t <= 10.0,
            fmt("20 fields, 32^2, 5-cell obstacle: max rel. deviation %.2e (<= 1e-10), %.2f s (<= 10 s)", worst, t)};
}

Verdict c3_constants() {
    auto g = std::make_shared<const Grid2D>(Grid2D::with_obstacle(4.0, 64, Obstacle::disk({0.4, -0.3}, 1.1)));
    double worst = 0.0;
    for (double s : {0.25, 0.5, 0.75}) {
        RegionalOperator op(g, reg(s));
        for (double c : {0.0, 0.37, 1.0}) {
            const auto Lu = op.apply(Field::constant(g, c, c));
            for (std::size_t i : g->exterior_cells()) worst = std::max(worst, std::abs(Lu[i]) / op.lambda_max());
        }
    }
    // relative to the operator scale: a few ulps of the diagonal
    return {worst <= 1e-14, fmt("64^2, s in {0.25,0.5,0.75}, c in {0,0.37,1}: max |L c| / Lambda = %.2e "
                                "(<= 1e-14)",
                                worst)};
}

Verdict c4_invariant() {
    auto g = std::make_shared<const Grid2D>(Grid2D::with_obstacle(4.0, 32, Obstacle::disk({0.3, -0.2}, 1.0)));
    auto op = std::make_shared<const RegionalOperator>(g, reg(0.5));
    Evolver ev(op, BistableSpec::cubic(0.1));
    std::mt19937_64 rng(99);
    double lo = 1.0, hi = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        Field u = random_field(g, rng, trial % 2);
        for (int n = 0; n < 1000; ++n) {
            ev.step(u, ev.stable_dt());
            lo = std::min(lo, u.min());
            hi = std::max(hi, u.max());
        }
    }
    const bool ok = lo >= 0.0 && hi <= 1.0;
    return {ok, fmt("10 x 1000 steps at dt = %.4g, no clipping: min %.17g, max %.17g", ev.stable_dt(), lo, hi)};
}

Verdict c5_wave() {
    constexpr double Z = 60.0, h = 0.02;
    const int n = 2 * static_cast<int>(std::lround(Z / h)) + 1;
    double worst_time = 0.0;
    auto solve = [&](double theta, int nodes) {
        const auto t0 = Clock::now();
        auto w = solve_front(BistableSpec::cubic(theta), 0.5, Z, nodes);
        worst_time = std::max(worst_time, seconds_since(t0));
        return w;
    };
    const auto a = solve(0.1, n);
    const auto b = solve(0.9, n);
    const auto m = solve(0.5, n);
    const auto fine = solve(0.1, 2 * n - 1);
    const double anti = std::abs(a.speed_c + b.speed_c);
    const double refine = std::abs(fine.speed_c - a.speed_c) / std::abs(a.speed_c);
    const bool ok = a.residual_norm <= 1e-6 && a.monotone && a.speed_c > 0.0 && anti <= 1e-3 &&
                    std::abs(m.speed_c) <= 1e-4 && refine <= 0.01 && worst_time <= 120.0;
    return {ok, fmt("c(0.1) = %.6f, residual %.1e, %s; |c(0.1)+c(0.9)| = %.1e; |c(0.5)| = %.1e; h/2 change %.3f%%; "
                    "slowest solve %.1f s",
                    a.speed_c, a.residual_norm, a.monotone ? "monotone" : "NOT monotone", anti,
                    std::abs(m.speed_c), 100 * refine, worst_time)};
}

const WaveProfile& planar_front(double Z) {
    static std::map<double, WaveProfile> cache;
    auto it = cache.find(Z);
    if (it == cache.end()) {
        WaveOptions opt;
        opt.c_norm = planar_wave_cnorm(fig1().rc.sim.kernel);
        const int n = 2 * static_cast<int>(std::lround(Z / 0.02)) + 1;
        it = cache.emplace(Z, solve_front(fig1().rc.sim.reaction, 0.5, Z, n, opt)).first;
    }
    return it->second;
}

Verdict c6_planar() {
    const auto& c = fig1().rc.sim;
    const auto grid = c.make_grid();
    const auto& w = planar_front(60.0);
    std::ostringstream d;
    bool ok = true;
    for (double r : {-5.0, 0.0, 5.0}) {
        const auto rep = planar_subsolution_check(w, {1.0, 0.0}, r, *grid, *c.obstacle, c.kernel, c.reaction);
        ok = ok && rep.min_value > 0.0;
        d << fmt("r=%g: min %.3e over %zu cells; ", r, rep.min_value, rep.cells);
    }
    d << "disk of Fig. 1 setup, H_e = {x > 1}";
    return {ok, d.str()};
}

Verdict c7_sliding() {
    const auto& f = fig1();
    if (!f.tr.final_field) return {false, "no final field"};
    const double L = f.rc.sim.halfwidth;
    const auto& w = planar_front(std::max(60.0, std::ceil((3.0 + std::sqrt(2.0)) * L + 5.0)));
    std::ostringstream d;
    bool ok = true;
    for (Vec2 e : {Vec2{1, 0}, Vec2{0, 1}, Vec2{std::sqrt(0.5), std::sqrt(0.5)}}) {
        const auto s = sliding_r_star(*f.tr.final_field, w, e);
        ok = ok && s.below_grid;
        d << fmt("e=(%.3f,%.3f): %s; ", e.x, e.y, s.describe().c_str());
    }
    d << fmt("front on [-%g, %g]", w.halfwidth(), w.halfwidth());
    return {ok, d.str()};
}

Verdict c8_comparison() {
    const Obstacle disk = Obstacle::disk({0.3, -0.2}, 1.0);
    auto g = std::make_shared<const Grid2D>(Grid2D::with_obstacle(4.0, 32, disk));
    const auto f = BistableSpec::cubic(0.1);
    // hat profile on [0, 1.5], unit mass: nonnegative, radial, positive on an annulus
    const auto table =
        make_table_kernel(normalize_table_mass({{0.0, 0.5, 1.0, 1.5}, {0.0, 1.0, 1.0, 0.0}}, 2), 2);
    std::vector<std::pair<std::string, KernelSpec>> kernels{
        {"s=0.25", reg(0.25)}, {"s=0.5", reg(0.5)}, {"s=0.75", reg(0.75)}, {"table", table}};
    std::ostringstream d;
    bool ok = true;
    for (const auto& [name, k] : kernels) {
        const auto clean = discrete_weak_max_test(k, g, disk, f, 20, 8);
        const auto bad = discrete_weak_max_test(k, g, disk, f, 20, 8, true);
        ok = ok && clean.passed == 20 && bad.detected == 20;
        d << fmt("%s %d/20 detected %d/20; ", name.c_str(), clean.passed, bad.detected);
    }
    return {ok, d.str()};
}

Verdict c9_conditions() {
    std::ostringstream d;
    bool ok = true;
    for (double theta : {0.1, 0.25, 0.4}) {
        const auto r = check_conditions(BistableSpec::cubic(theta));
        const double err = std::abs(r.integral - (1 - 2 * theta) / 12);
        ok = ok && r.pass() && err <= 1e-10;
        d << fmt("%g pass=%d |int err|=%.0e; ", theta, r.pass(), err);
    }
    for (double theta : {0.5, 0.7}) {
        const auto r = check_conditions(BistableSpec::cubic(theta));
        ok = ok && !r.pass() && !r.integral_positive;
        d << fmt("%g fails on %s; ", theta, r.failures().c_str());
    }
    return {ok, d.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"figure-reproduction", c1_figure},   {"operator-oracle", c2_oracle},
        {"constant-annihilation", c3_constants}, {"invariant-region", c4_invariant},
        {"travelling-wave", c5_wave},         {"planar-subsolution", c6_planar},
        {"sliding-below-grid", c7_sliding},   {"comparison-principles", c8_comparison},
        {"bistable-certification", c9_conditions},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Verdict v;
        try {
            v = criteria[k].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        while (!v.detail.empty() && (v.detail.back() == ' ' || v.detail.back() == ';')) v.detail.pop_back();
        std::printf("%s %zu %s: %s\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
