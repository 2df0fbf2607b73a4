#include "regfrac/error.hpp"
#include "regfrac/liouville.hpp"
#include "regfrac/operator.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace regfrac;

namespace {

const WaveProfile& front() {
    static const WaveProfile w = solve_front(BistableSpec::cubic(0.1), 0.5, 30.0, 601);
    return w;
}

GridPtr box(double L = 4.0, int n = 32) { return std::make_shared<const Grid2D>(Grid2D::empty_box(L, n)); }

Field planar(const GridPtr& g, const WaveProfile& w, Vec2 e, double r) {
    Field u(g, 0.0);
    for (std::size_t i : g->exterior_cells()) u[i] = w(dot(g->center(i), e) - r);
    return u;
}

KernelSpec hat_table_kernel() {
    RadialTable t{{0.0, 0.5, 1.0, 1.5}, {0.0, 1.0, 1.0, 0.0}};
    return make_table_kernel(normalize_table_mass(t, 2), 2);
}

}  // namespace

TEST(Sliding, ConstantOneIsBelowGrid) {
    auto g = box();
    for (Vec2 e : {Vec2{1, 0}, Vec2{0, 1}, Vec2{std::sqrt(0.5), std::sqrt(0.5)}}) {
        const auto r = sliding_r_star(Field::constant(g, 1.0, 1.0), front(), e);
        EXPECT_TRUE(r.below_grid);
        EXPECT_EQ(r.describe(), "below-grid");
        EXPECT_DOUBLE_EQ(r.r_min, -12.0);
    }
}

TEST(Sliding, RecoversTheShiftOfAPlanarField) {
    auto g = box();
    const auto u = planar(g, front(), {1, 0}, 5.0);
    const auto r = sliding_r_star(u, front(), {1, 0});
    ASSERT_FALSE(r.below_grid || r.above_range);
    EXPECT_LE(std::abs(r.r_star - 5.0), g->h());
}

TEST(Sliding, RaisingUNeverRaisesTheEstimate) {
    auto g = box();
    auto u = planar(g, front(), {0, 1}, 2.0);
    const double before = sliding_r_star(u, front(), {0, 1}).r_star;
    for (std::size_t i : g->exterior_cells()) u[i] = std::min(1.0, u[i] + 0.1 * (1.0 - u[i]));
    const auto after = sliding_r_star(u, front(), {0, 1});
    EXPECT_TRUE(after.below_grid || after.r_star <= before + 1e-9);
}

TEST(Sliding, InitialTranslateExists) {
    auto g = box();
    Field u(g, 1.0);
    for (std::size_t i : g->exterior_cells()) u[i] = 0.3 + 0.7 * std::exp(-norm(g->center(i)));
    const double r0 = claim_r0_exists(u, front(), {1, 0});
    for (std::size_t i : g->exterior_cells()) ASSERT_LE(front()(g->center(i).x - r0), u[i]);

    const double r1 = claim_r0_exists(Field::constant(g, 1.0, 1.0), front(), {1, 0});
    EXPECT_DOUBLE_EQ(r1, -12.0);

    u[g->exterior_cells()[7]] = 0.0;
    EXPECT_THROW(claim_r0_exists(u, front(), {1, 0}), HypothesisViolation);
}

class WeakMax : public ::testing::Test {
protected:
    Obstacle disk = Obstacle::disk({0.3, -0.2}, 1.0);
    GridPtr grid = std::make_shared<const Grid2D>(Grid2D::with_obstacle(4.0, 32, disk));
    BistableSpec f = BistableSpec::cubic(0.1);
};

TEST_F(WeakMax, RandomInstancesStayOrdered) {
    auto k = make_kernel(KernelFamily::RegularizedFractional, 0.5, 2, 0.01);
    const auto rep = discrete_weak_max_test(k, grid, disk, f, 10, 21);
    EXPECT_EQ(rep.instances, 10);
    EXPECT_TRUE(rep.pass());
    EXPECT_GE(rep.min_gap, -1e-12);
    EXPECT_GT(rep.c0, 0.0);
    EXPECT_GT(rep.c1, 0.0);
    for (const auto& r : rep.results) {
        EXPECT_TRUE(r.hypotheses_ok);
        // K lies in the complement of H
        for (std::size_t j : grid->obstacle_cells()) EXPECT_FALSE(r.halfspace.contains(grid->center(j)));
    }
}

TEST_F(WeakMax, TableKernel) {
    const auto rep = discrete_weak_max_test(hat_table_kernel(), grid, disk, f, 10, 22);
    EXPECT_TRUE(rep.pass());
}

TEST_F(WeakMax, CorruptionIsDetectedAndLocated) {
    auto k = make_kernel(KernelFamily::RegularizedFractional, 0.75, 2, 0.01);
    const auto rep = discrete_weak_max_test(k, grid, disk, f, 10, 23, true);
    EXPECT_EQ(rep.detected, 10);
    ASSERT_TRUE(rep.violation.has_value());
    EXPECT_TRUE(contains(Obstacle::disk({0, 0}, 100), *rep.violation));
    EXPECT_LT(rep.min_gap, 0.0);
}

TEST_F(WeakMax, NegativeWeightsRefused) {
    RadialTable t{{0.0, 0.5, 1.0}, {1.0, -0.5, 0.0}};
    EXPECT_THROW(discrete_weak_max_test(make_table_kernel(t, 2), grid, disk, f, 2), HypothesisViolation);
}

TEST(StrongMax, EqualFieldsAreIdentical) {
    auto g = box(4.0, 16);
    RegionalOperator op(g, make_kernel(KernelFamily::RegularizedFractional, 0.5, 2, 0.01));
    const Field u = Field::constant(g, 0.7, 0.7);
    const auto rep = discrete_strong_max_probe(u, u, {{1, 0}, 0.0}, op, BistableSpec::cubic(0.1));
    EXPECT_EQ(rep.outcome, StrongMaxOutcome::IdenticallyEqual);
    EXPECT_GT(rep.component_cells, 100u);
}

TEST(StrongMax, TouchingAtOneCellIsForbidden) {
    auto g = box(4.0, 16);
    RegionalOperator op(g, make_kernel(KernelFamily::RegularizedFractional, 0.5, 2, 0.01));
    const Field v = planar(g, front(), {1, 0}, 1.0);
    Field u = v;
    const std::size_t touch = g->box().index(8, 12);
    for (std::size_t i : g->exterior_cells())
        if (i != touch) u[i] = v[i] + 0.05 * (1.0 - v[i]);
    const auto rep = discrete_strong_max_probe(u, v, {{1, 0}, 0.0}, op, BistableSpec::cubic(0.1));
    EXPECT_EQ(rep.outcome, StrongMaxOutcome::TouchingForbidden);
    EXPECT_EQ(rep.touching_cell, touch);
    EXPECT_GT(rep.max_gap, 0.0);
    EXPECT_NE(rep.describe().find("touching forbidden"), std::string::npos);
}

TEST(StrongMax, NoTouchingPointIsAnError) {
    auto g = box(4.0, 16);
    RegionalOperator op(g, make_kernel(KernelFamily::RegularizedFractional, 0.5, 2, 0.01));
    const Field v = Field::constant(g, 0.2, 0.2);
    const Field u = Field::constant(g, 0.3, 0.3);
    EXPECT_THROW(discrete_strong_max_probe(u, v, {{1, 0}, 0.0}, op, BistableSpec::cubic(0.1)), InvalidArgument);
    EXPECT_THROW(discrete_strong_max_probe(v, u, {{1, 0}, 0.0}, op, BistableSpec::cubic(0.1)), InvalidArgument);
}

namespace {

SimConfig small_config() {
    SimConfig c;
    c.halfwidth = 4;
    c.n_cells = 32;
    c.obstacle = Obstacle::disk({0, 0}, 1);
    c.liouville_closure = true;
    c.t_end = 60;
    c.snapshot_times = {0, 60};
    c.initial.offset = -1;
    return c;
}

}  // namespace

TEST(CheckLiouville, ConstantOnePassesTrivially) {
    auto c = small_config();
    c.initial.kind = InitialKind::Constant;
    c.initial.value = 1.0;
    const auto rep = check_liouville(c);
    EXPECT_EQ(rep.steady_min, 1.0);
    EXPECT_TRUE(rep.certified());
}

TEST(CheckLiouville, SmallInvasionCertifies) {
    const auto rep = check_liouville(small_config());
    EXPECT_TRUE(rep.steady_ok());
    EXPECT_GT(rep.gamma_observed, 0.0);
    EXPECT_LE(rep.gamma_observed, rep.steady_min);
    EXPECT_TRUE(rep.sliding_ok()) << rep.r_star_summary();
    EXPECT_TRUE(rep.maxprinciple_pass);
    EXPECT_TRUE(rep.certified());
}

TEST(CheckLiouville, HypothesisGates) {
    auto c = small_config();
    c.obstacle = Obstacle::polygon({{-1, -1}, {1, -1}, {1, 1}, {0.8, 1}, {0.8, -0.8}, {-1, -0.8}});
    EXPECT_THROW(check_liouville(c), HypothesisViolation);

    LiouvilleOptions opt;
    opt.allow_nonconvex = true;
    const auto rep = check_liouville(c, opt);
    EXPECT_FALSE(rep.convexity_certified);
    EXPECT_FALSE(rep.certified());

    auto d = small_config();
    d.reaction = BistableSpec::cubic(0.6);
    EXPECT_THROW(check_liouville(d), HypothesisViolation);

    auto e = small_config();
    e.liouville_closure = false;
    EXPECT_THROW(check_liouville(e), InvalidArgument);

    auto s = small_config();
    s.t_end = 0.05;
    s.snapshot_times = {0};
    EXPECT_THROW(check_liouville(s), NumericalFailure);
}
