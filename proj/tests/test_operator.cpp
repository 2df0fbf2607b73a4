#include "regfrac/error.hpp"
#include "regfrac/operator.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace regfrac;

namespace {

KernelSpec reg(double s, double delta = 0.01) { return make_kernel(KernelFamily::RegularizedFractional, s, 2, delta); }

GridPtr five_cell_grid() {
    // cell centres sit at odd multiples of h/2 = 0.125: the disk covers one
    // centre cell and its four axial neighbours
    return std::make_shared<Grid2D>(Grid2D::with_obstacle(4.0, 32, Obstacle::disk({0.125, 0.125}, 0.3)));
}

Field random_field(GridPtr g, std::mt19937& rng, double farfield) {
    std::uniform_real_distribution<double> U(0, 1);
    Field f(g, farfield);
    for (auto i : g->exterior_cells()) f[i] = U(rng);
    return f;
}

double max_rel_dev(const std::vector<double>& a, const std::vector<double>& b) {
    double scale = 0, dev = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        scale = std::max(scale, std::abs(b[i]));
        dev = std::max(dev, std::abs(a[i] - b[i]));
    }
    return dev / scale;
}

}  // namespace

TEST(Operator, FiveCellObstacle) { EXPECT_EQ(five_cell_grid()->obstacle_cells().size(), 5u); }

TEST(Operator, ConstantsAreAnnihilated) {
    for (double s : {0.25, 0.5, 0.75}) {
        auto g = std::make_shared<Grid2D>(Grid2D::with_obstacle(8.0, 64, Obstacle::disk({0, 0}, 1.0)));
        RegionalOperator op(g, reg(s));
        auto out = op.apply(Field::constant(g, 0.37, 0.37));
        for (double v : out) EXPECT_LE(std::abs(v), 1e-13);
    }
    auto g = five_cell_grid();
    auto bf = apply_bruteforce(Field::constant(g, 0.8, 0.8), reg(0.5));
    for (double v : bf) EXPECT_LE(std::abs(v), 1e-12);
}

TEST(Operator, FastMatchesBruteForce) {
    auto g = five_cell_grid();
    std::mt19937 rng(11);
    for (double s : {0.25, 0.5, 0.75}) {
        RegionalOperator op(g, reg(s));
        for (int k = 0; k < 7; ++k) {
            auto f = random_field(g, rng, k % 2 ? 1.0 : 0.0);
            EXPECT_LE(max_rel_dev(apply_fast(f, op), apply_bruteforce(f, reg(s))), 1e-10);
        }
    }
}

TEST(Operator, FastMatchesBruteForcePeriodicAndTable) {
    auto g = five_cell_grid();
    std::mt19937 rng(5);
    RegionalOperator per(g, reg(0.5), Closure::Periodic);
    auto f = random_field(g, rng, 0.0);
    EXPECT_LE(max_rel_dev(per.apply(f), apply_bruteforce(f, reg(0.5), Closure::Periodic)), 1e-10);

    auto table = make_table_kernel(normalize_table_mass({{0.0, 0.5, 1.0, 1.5}, {0.0, 1.0, 1.0, 0.0}}, 2), 2);
    RegionalOperator tab(g, table);
    EXPECT_LE(max_rel_dev(tab.apply(f), apply_bruteforce(f, table)), 1e-10);
}

TEST(Operator, EmptyObstacleMatchesBruteForce) {
    auto g = std::make_shared<Grid2D>(Grid2D::empty_box(3.0, 24));
    std::mt19937 rng(2);
    RegionalOperator op(g, reg(0.5));
    auto f = random_field(g, rng, 0.5);
    EXPECT_LE(max_rel_dev(op.apply(f), apply_bruteforce(f, reg(0.5))), 1e-10);
}

TEST(Operator, HalfPlaneIndicatorIsAntisymmetric) {
    auto g = std::make_shared<Grid2D>(Grid2D::empty_box(2.0, 16));
    Field f(g, 0.5);
    for (std::size_t i = 0; i < g->size(); ++i) f[i] = g->center(i).x < 0 ? 1.0 : 0.0;
    auto out = apply_bruteforce(f, reg(0.5));
    const int n = g->n_cells();
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            double a = out[g->box().index(r, c)], b = out[g->box().index(r, n - 1 - c)];
            EXPECT_NEAR(a, -b, 1e-10);
        }
}

TEST(Operator, SingleBumpExpansion) {
    auto g = five_cell_grid();
    auto k = reg(0.5);
    const std::size_t bump = g->box().index(3, 20);
    Field f(g, 0.0);
    f[bump] = 1.0;
    auto out = apply_bruteforce(f, k);
    const double h = g->h();
    Vec2 xb = g->center(bump);
    double expected = 0;
    for (auto j : g->exterior_cells()) {
        if (j == bump) continue;
        Vec2 d = xb - g->center(j);
        expected -= h * h * k.radial(norm(d));
    }
    const double L = g->halfwidth();
    const double dist = std::min({L - xb.x, L + xb.x, L - xb.y, L + xb.y});
    expected -= tail_mass(k, dist);
    EXPECT_NEAR(out[bump], expected, 1e-12 * std::abs(expected));
    // neighbours see +h^2 k
    const std::size_t nb = g->box().index(3, 21);
    EXPECT_NEAR(out[nb], h * h * k.radial(h), 1e-12);
}

TEST(Operator, ComparisonStructureAtTouchingPoint) {
    auto g = five_cell_grid();
    RegionalOperator op(g, reg(0.75));
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> U(0, 1);
    const auto& ext = g->exterior_cells();
    for (int k = 0; k < 20; ++k) {
        Field u = random_field(g, rng, 0.5);
        Field v = u;
        for (auto i : ext) v[i] = std::min(1.0, u[i] + 0.3 * U(rng));
        const std::size_t touch = ext[rng() % ext.size()];
        v[touch] = u[touch];
        auto Lu = op.apply(u), Lv = op.apply(v);
        EXPECT_LE(Lu[touch], Lv[touch] + 1e-12);
    }
}

TEST(Operator, PeriodicModeIsSelfAdjoint) {
    auto g = std::make_shared<Grid2D>(Grid2D::empty_box(2.0, 32));
    RegionalOperator op(g, reg(0.5), Closure::Periodic);
    std::mt19937 rng(4);
    auto u = random_field(g, rng, 0.0), v = random_field(g, rng, 0.0);
    auto Lu = op.apply(u), Lv = op.apply(v);
    double a = 0, b = 0, scale = 0;
    for (std::size_t i = 0; i < g->size(); ++i) {
        a += v[i] * Lu[i];
        b += u[i] * Lv[i];
        scale += std::abs(v[i] * Lu[i]);
    }
    EXPECT_NEAR(a, b, 1e-9 * scale);
}

TEST(Operator, PeriodicTranslationCommutes) {
    auto g = std::make_shared<Grid2D>(Grid2D::empty_box(2.0, 16));
    RegionalOperator op(g, reg(0.5), Closure::Periodic);
    std::mt19937 rng(8);
    auto u = random_field(g, rng, 0.0);
    Field shifted(g, 0.0);
    const int n = 16;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) shifted[g->box().index(r, (c + 1) % n)] = u[g->box().index(r, c)];
    auto Lu = op.apply(u), Ls = op.apply(shifted);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            EXPECT_NEAR(Ls[g->box().index(r, (c + 1) % n)], Lu[g->box().index(r, c)], 1e-11);
}

TEST(Operator, WeightReports) {
    auto g = std::make_shared<Grid2D>(Grid2D::empty_box(4.0, 64));
    auto rep = operator_weights_nonneg(*g, reg(0.5));
    EXPECT_TRUE(rep.nonnegative);
    EXPECT_GT(rep.min_weight, 0.0);
    EXPECT_GE(rep.max_weight, rep.min_weight);
    EXPECT_FALSE(rep.offending_radius.has_value());

    auto bad = make_table_kernel({{0.0, 0.5, 1.0, 1.5}, {1.0, -0.5, 1.0, 0.0}}, 2);
    auto rb = operator_weights_nonneg(*g, bad);
    EXPECT_FALSE(rb.nonnegative);
    ASSERT_TRUE(rb.offending_radius.has_value());
    EXPECT_LT(bad.radial(*rb.offending_radius), 0.0);
}

TEST(Operator, Errors) {
    auto g = five_cell_grid();
    Field f(g, 0.0);
    EXPECT_THROW(apply_bruteforce(f, make_kernel(KernelFamily::SingularFractional, 0.5, 2, 0.0)), InvalidArgument);
    RegionalOperator op(g, reg(0.5));
    Field other(std::make_shared<Grid2D>(Grid2D::empty_box(4.0, 32)), 0.0);
    EXPECT_THROW(apply_fast(other, op), InvalidArgument);
}

TEST(Operator, LambdaMaxIsLargestRowSum) {
    auto g = five_cell_grid();
    RegionalOperator op(g, reg(0.5));
    double lam = 0;
    for (auto i : g->exterior_cells()) lam = std::max(lam, op.row_weight(i) + op.tail_weight(i));
    EXPECT_DOUBLE_EQ(op.lambda_max(), lam);
    // doubling c_norm doubles every weight
    RegionalOperator op2(g, make_kernel(KernelFamily::RegularizedFractional, 0.5, 2, 0.01, 2.0));
    EXPECT_NEAR(op2.lambda_max(), 2 * lam, 1e-12 * lam);
}
