#include "regfrac/error.hpp"
#include "regfrac/evolution.hpp"
#include "regfrac/operator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace regfrac;

namespace {

GridPtr disk_grid(double L, int n, Vec2 c = {0.0, 0.0}, double r = 1.0) {
    return std::make_shared<const Grid2D>(Grid2D::with_obstacle(L, n, Obstacle::disk(c, r)));
}

KernelSpec reg(double s, double c_norm = 1.0) {
    return make_kernel(KernelFamily::RegularizedFractional, s, 2, 0.01, c_norm);
}

// max_i h^2 sum_{j ext, j != i} k(x_i - x_j) + T_i, summed directly
double lambda_oracle(const Grid2D& g, const KernelSpec& k) {
    const auto T = tail_weights(g, k, Closure::FarField);
    const double h2 = g.h() * g.h();
    double best = 0.0;
    for (std::size_t i : g.exterior_cells()) {
        double sum = T[i];
        for (std::size_t j : g.exterior_cells())
            if (j != i) sum += h2 * k.radial(norm(g.center(i) - g.center(j)));
        best = std::max(best, sum);
    }
    return best;
}

Field random_field(const GridPtr& g, std::mt19937_64& rng, double farfield) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Field u(g, farfield);
    for (std::size_t i : g->exterior_cells()) u[i] = U(rng);
    return u;
}

}  // namespace

TEST(Evolution, StableStepFromDirectWeightSum) {
    auto g = disk_grid(4.0, 32);
    auto k = reg(0.5);
    auto f = BistableSpec::cubic(0.1);
    RegionalOperator op(g, k);
    const double lam = lambda_oracle(*g, k);
    EXPECT_NEAR(op.lambda_max(), lam, 1e-10 * lam);
    const double dt = stable_dt(op, f);
    EXPECT_GT(dt, 0.0);
    EXPECT_LE(dt * (lam + f.lip_bound()), 0.9 * (1 + 1e-12));
}

TEST(Evolution, LambdaScalesWithNormalisation) {
    auto g = disk_grid(4.0, 32);
    RegionalOperator a(g, reg(0.5, 1.0)), b(g, reg(0.5, 2.0));
    EXPECT_NEAR(b.lambda_max(), 2 * a.lambda_max(), 1e-12 * a.lambda_max());
}

TEST(Evolution, ConstantStatesAreFixedPoints) {
    auto g = disk_grid(4.0, 32);
    auto op = std::make_shared<const RegionalOperator>(g, reg(0.5));
    Evolver ev(op, BistableSpec::cubic(0.1));
    for (double c : {0.0, 0.1, 1.0}) {
        Field u = Field::constant(g, c, c);
        EXPECT_LE(ev.residual(u), 1e-13) << c;
        ev.step(u, ev.stable_dt());
        for (std::size_t i : g->exterior_cells()) ASSERT_NEAR(u[i], c, 1e-13);
    }
}

TEST(Evolution, PerturbationAboveThetaGrows) {
    auto g = disk_grid(4.0, 32);
    auto op = std::make_shared<const RegionalOperator>(g, reg(0.5));
    Evolver ev(op, BistableSpec::cubic(0.1));
    Field u = Field::constant(g, 0.1 + 1e-3, 0.1 + 1e-3);
    double prev = u.min();
    for (int n = 0; n < 5; ++n) {
        ev.step(u, ev.stable_dt());
        EXPECT_GT(u.min(), prev);
        prev = u.min();
    }
}

TEST(Evolution, HeavisideResidualIsPositive) {
    auto g = disk_grid(4.0, 32);
    auto op = std::make_shared<const RegionalOperator>(g, reg(0.5));
    Evolver ev(op, BistableSpec::cubic(0.1));
    InitialCondition ic;
    ic.offset = -2.0;
    EXPECT_GT(ev.residual(make_initial(ic, g, 0.0)), 0.05);
}

TEST(Evolution, InvariantRegionWithoutClipping) {
    auto g = disk_grid(4.0, 32, {0.5, 0.3}, 1.2);
    auto op = std::make_shared<const RegionalOperator>(g, reg(0.25));
    Evolver ev(op, BistableSpec::cubic(0.3));
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 4; ++trial) {
        Field u = random_field(g, rng, trial % 2);
        for (int n = 0; n < 150; ++n) {
            ev.step(u, ev.stable_dt());
            ASSERT_GE(u.min(), 0.0);
            ASSERT_LE(u.max(), 1.0);
        }
    }
}

TEST(Evolution, StepRejectsUnstableDt) {
    auto g = disk_grid(4.0, 16);
    auto op = std::make_shared<const RegionalOperator>(g, reg(0.5));
    Evolver ev(op, BistableSpec::cubic(0.1));
    Field u = Field::constant(g, 0.5, 0.5);
    EXPECT_THROW(ev.step(u, 1.01 * ev.stable_dt()), InvalidArgument);
    EXPECT_THROW(ev.step(u, 0.0), InvalidArgument);
}

TEST(Evolution, SimulateConstantOneIsSteadyAtOnce) {
    SimConfig c;
    c.halfwidth = 4;
    c.n_cells = 16;
    c.obstacle = Obstacle::disk({0, 0}, 1);
    c.liouville_closure = true;
    c.initial.kind = InitialKind::Constant;
    c.initial.value = 1.0;
    c.t_end = 10;
    c.snapshot_times = {0, 5, 10};
    auto tr = simulate(c);
    EXPECT_TRUE(tr.reached_steady);
    EXPECT_EQ(tr.times.size(), 2u);
    ASSERT_EQ(tr.snapshots.size(), 3u);
    EXPECT_EQ(tr.snapshots[2].time, 10.0);
    EXPECT_EQ(tr.snapshots[2].field.min(), 1.0);
}

TEST(Evolution, SimulateZeroStaysZero) {
    SimConfig c;
    c.halfwidth = 4;
    c.n_cells = 16;
    c.initial.kind = InitialKind::Constant;
    c.initial.value = 0.0;
    c.t_end = 3;
    c.snapshot_times = {0, 3};
    auto tr = simulate(c);
    EXPECT_TRUE(tr.reached_steady);
    for (double m : tr.max_history) ASSERT_EQ(m, 0.0);
    ASSERT_EQ(tr.snapshots.size(), 2u);
    EXPECT_EQ(tr.snapshots[1].field.max(), 0.0);
}

TEST(Evolution, SnapshotsAtNearestStep) {
    SimConfig c;
    c.halfwidth = 4;
    c.n_cells = 16;
    c.obstacle = Obstacle::disk({0, 0}, 1);
    c.initial.offset = -1;
    c.t_end = 1.0;
    c.dt = 0.02;
    c.steady_tol = 1e-300;
    c.snapshot_times = {0, 0.5, 1.0};
    auto tr = simulate(c);
    ASSERT_EQ(tr.snapshots.size(), 3u);
    EXPECT_EQ(tr.snapshots[0].time, 0.0);
    EXPECT_LE(std::abs(tr.snapshots[1].time - 0.5), 0.01 + 1e-12);
    EXPECT_NEAR(tr.snapshots[2].time, 1.0, 1e-12);
}

TEST(Evolution, ValidationMessagesNameKeys) {
    SimConfig c;
    c.snapshot_times = {0, 300};
    try {
        c.validate();
        FAIL();
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("time.snapshots"), std::string::npos);
    }
    SimConfig d;
    d.initial.kind = InitialKind::Custom;
    d.initial.custom = std::vector<double>(4, 0.5);
    d.n_cells = 8;
    d.halfwidth = 2;
    d.t_end = 1;
    d.snapshot_times = {0};
    EXPECT_THROW(simulate(d), InvalidArgument);
}
