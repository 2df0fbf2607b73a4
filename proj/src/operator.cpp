#include "regfrac/operator.hpp"

#include "fftw_planner.hpp"

#include "regfrac/error.hpp"
#include "regfrac/parallel.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <mutex>

namespace regfrac {

namespace {

void require_admissible(const KernelSpec& kernel) {
    if (kernel.dim() != 2) throw InvalidArgument("regional operator: kernel dimension must be 2 on a 2-D grid");
    if (kernel.is_singular())
        throw InvalidArgument("regional operator: singular kernels are not admitted on 2-D grids; "
                              "use the regularized family (delta > 0)");
}

// Displacement between cell centres in units of h, respecting the closure.
int wrap_offset(int d, int n, Closure closure) {
    if (closure == Closure::FarField) return d;
    int m = ((d % n) + n) % n;
    return std::min(m, n - m);
}

double kernel_at(const KernelSpec& kernel, double dx, double dy) {
    const std::array<double, 2> z{dx, dy};
    const double r = std::hypot(dx, dy);
    if (r > kernel.cutoff_radius()) return 0.0;
    return kernel_eval(kernel, z);
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};
using RealBuf = std::unique_ptr<double[], FftwFree>;
using CplxBuf = std::unique_ptr<fftw_complex[], FftwFree>;

}  // namespace

struct RegionalOperator::Fft {
    int P = 0;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    CplxBuf kernel_hat;

    std::size_t real_size() const { return static_cast<std::size_t>(P) * P; }
    std::size_t cplx_size() const { return static_cast<std::size_t>(P) * (P / 2 + 1); }

    ~Fft() {
        std::lock_guard lock(detail::fftw_planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
    }
};

std::vector<double> tail_weights(const Grid2D& grid, const KernelSpec& kernel, Closure closure) {
    std::vector<double> tail(grid.size(), 0.0);
    if (closure == Closure::Periodic) return tail;
    const double L = grid.halfwidth();
    // Only a handful of distinct face distances exist; cache them.
    const int n = grid.n_cells();
    std::vector<double> by_layer(static_cast<std::size_t>((n + 1) / 2), -1.0);
    for (std::size_t i : grid.exterior_cells()) {
        const Vec2 x = grid.center(i);
        const double d = L - std::max(std::abs(x.x), std::abs(x.y));
        const auto layer = static_cast<std::size_t>(std::lround(d / grid.h() - 0.5));
        if (layer < by_layer.size()) {
            if (by_layer[layer] < 0.0) by_layer[layer] = tail_mass(kernel, d);
            tail[i] = by_layer[layer];
        } else {
            tail[i] = tail_mass(kernel, d);
        }
    }
    return tail;
}

std::vector<double> apply_bruteforce(const Field& field, const KernelSpec& kernel, Closure closure) {
    require_admissible(kernel);
    const Grid2D& grid = field.grid();
    const auto& ext = grid.exterior_cells();
    const auto u = field.values();
    const double h2 = grid.h() * grid.h();
    const int n = grid.n_cells();
    const auto tail = tail_weights(grid, kernel, closure);
    const double u_inf = field.farfield();

    std::vector<double> out(grid.size(), 0.0);
    parallel_for(ext.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t a = b; a < e; ++a) {
            const std::size_t i = ext[a];
            const int ri = static_cast<int>(i / n), ci = static_cast<int>(i % n);
            double sum = 0.0;
            for (std::size_t j : ext) {
                if (j == i) continue;
                const int rj = static_cast<int>(j / n), cj = static_cast<int>(j % n);
                const double dx = wrap_offset(cj - ci, n, closure) * grid.h();
                const double dy = wrap_offset(rj - ri, n, closure) * grid.h();
                sum += h2 * kernel_at(kernel, dx, dy) * (u[j] - u[i]);
            }
            out[i] = sum + tail[i] * (u_inf - u[i]);
        }
    });
    return out;
}

RegionalOperator::RegionalOperator(GridPtr grid, KernelSpec kernel, Closure closure)
    : grid_(std::move(grid)), kernel_(std::move(kernel)), closure_(closure) {
    if (!grid_) throw InvalidArgument("regional operator: null grid");
    require_admissible(kernel_);
    const int n = grid_->n_cells();
    const double h = grid_->h();
    const int P = closure_ == Closure::FarField ? 2 * n : n;
    padded_ = P;

    kernel_real_.assign(static_cast<std::size_t>(P) * P, 0.0);
    auto signed_offset = [&](int a) {
        if (closure_ == Closure::Periodic) return std::min(a, n - a);
        return a < n ? a : a - P;  // a == n is never reached by in-box pairs
    };
    for (int a = 0; a < P; ++a) {
        for (int b = 0; b < P; ++b) {
            if (a == 0 && b == 0) continue;
            if (closure_ == Closure::FarField && (a == n || b == n)) continue;
            const double dy = signed_offset(a) * h;
            const double dx = signed_offset(b) * h;
            kernel_real_[static_cast<std::size_t>(a) * P + b] = h * h * kernel_at(kernel_, dx, dy);
        }
    }

    nonneg_weights_ = std::all_of(kernel_real_.begin(), kernel_real_.end(), [](double w) { return w >= 0.0; });

    fft_ = std::make_unique<Fft>();
    fft_->P = P;
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        RealBuf r(fftw_alloc_real(fft_->real_size()));
        CplxBuf c(fftw_alloc_complex(fft_->cplx_size()));
        fft_->forward = fftw_plan_dft_r2c_2d(P, P, r.get(), c.get(), FFTW_ESTIMATE);
        fft_->backward = fftw_plan_dft_c2r_2d(P, P, c.get(), r.get(), FFTW_ESTIMATE);
    }
    if (!fft_->forward || !fft_->backward) throw NumericalFailure("regional operator: FFT planning failed");
    {
        RealBuf r(fftw_alloc_real(fft_->real_size()));
        std::copy(kernel_real_.begin(), kernel_real_.end(), r.get());
        fft_->kernel_hat.reset(fftw_alloc_complex(fft_->cplx_size()));
        fftw_execute_dft_r2c(fft_->forward, r.get(), fft_->kernel_hat.get());
    }

    // Free-space weight of each cell: convolution of the kernel with the
    // indicator of the box; the obstacle part is then removed directly.
    std::vector<double> ones(grid_->size(), 1.0);
    std::vector<double> free_sum(grid_->size(), 0.0);
    {
        RealBuf r(fftw_alloc_real(fft_->real_size()));
        CplxBuf c(fftw_alloc_complex(fft_->cplx_size()));
        std::fill(r.get(), r.get() + fft_->real_size(), 0.0);
        for (int row = 0; row < n; ++row)
            for (int col = 0; col < n; ++col) r[static_cast<std::size_t>(row) * P + col] = 1.0;
        fftw_execute_dft_r2c(fft_->forward, r.get(), c.get());
        for (std::size_t k = 0; k < fft_->cplx_size(); ++k) {
            const std::complex<double> a(c[k][0], c[k][1]);
            const std::complex<double> kh(fft_->kernel_hat[k][0], fft_->kernel_hat[k][1]);
            const auto prod = a * kh;
            c[k][0] = prod.real();
            c[k][1] = prod.imag();
        }
        fftw_execute_dft_c2r(fft_->backward, c.get(), r.get());
        const double scale = 1.0 / (static_cast<double>(P) * P);
        for (int row = 0; row < n; ++row)
            for (int col = 0; col < n; ++col)
                free_sum[grid_->box().index(row, col)] = r[static_cast<std::size_t>(row) * P + col] * scale;
    }

    tail_ = tail_weights(*grid_, kernel_, closure_);
    row_weight_.assign(grid_->size(), 0.0);
    const auto& obst = grid_->obstacle_cells();
    for (std::size_t i : grid_->exterior_cells()) {
        const int ri = static_cast<int>(i / n), ci = static_cast<int>(i % n);
        double ob = 0.0;
        for (std::size_t j : obst) ob += weight(static_cast<int>(j % n) - ci, static_cast<int>(j / n) - ri);
        row_weight_[i] = free_sum[i] - ob;
        lambda_max_ = std::max(lambda_max_, row_weight_[i] + tail_[i]);
    }
}

RegionalOperator::~RegionalOperator() = default;

double RegionalOperator::weight(int dcol, int drow) const {
    const int P = padded_;
    const auto a = static_cast<std::size_t>(((drow % P) + P) % P);
    const auto b = static_cast<std::size_t>(((dcol % P) + P) % P);
    return kernel_real_[a * static_cast<std::size_t>(P) + b];
}

void RegionalOperator::apply(std::span<const double> u, double farfield, std::span<double> out) const {
    const Grid2D& g = *grid_;
    if (u.size() != g.size() || out.size() != g.size())
        throw InvalidArgument("regional operator: field size does not match the plan's grid");
    const int n = g.n_cells();
    const int P = padded_;

    RealBuf r(fftw_alloc_real(fft_->real_size()));
    CplxBuf c(fftw_alloc_complex(fft_->cplx_size()));
    // Obstacle cells enter the transform as zeros, which removes their
    // contribution from the free-space sum exactly.
    std::fill(r.get(), r.get() + fft_->real_size(), 0.0);
    const auto mask = g.mask();
    for (int row = 0; row < n; ++row)
        for (int col = 0; col < n; ++col) {
            const std::size_t idx = g.box().index(row, col);
            r[static_cast<std::size_t>(row) * P + col] = mask[idx] ? u[idx] : 0.0;
        }
    fftw_execute_dft_r2c(fft_->forward, r.get(), c.get());
    for (std::size_t k = 0; k < fft_->cplx_size(); ++k) {
        const double ar = c[k][0], ai = c[k][1];
        const double br = fft_->kernel_hat[k][0], bi = fft_->kernel_hat[k][1];
        c[k][0] = ar * br - ai * bi;
        c[k][1] = ar * bi + ai * br;
    }
    fftw_execute_dft_c2r(fft_->backward, c.get(), r.get());
    const double scale = 1.0 / (static_cast<double>(P) * P);

    double umin = std::numeric_limits<double>::infinity();
    double umax = -umin;
    for (std::size_t i : g.exterior_cells()) {
        umin = std::min(umin, u[i]);
        umax = std::max(umax, u[i]);
    }

    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i : g.exterior_cells()) {
        const int ri = static_cast<int>(i / n), ci = static_cast<int>(i % n);
        double s = r[static_cast<std::size_t>(ri) * P + ci] * scale;
        // The exact exterior sum is a nonnegative combination of exterior
        // values with total weight W_i; transform round-off may not be.
        const double W = row_weight_[i];
        if (nonneg_weights_) s = std::clamp(s, W * umin, W * umax);
        out[i] = s - W * u[i] + tail_[i] * (farfield - u[i]);
    }
}

std::vector<double> RegionalOperator::apply(const Field& field) const {
    std::vector<double> out(grid_->size(), 0.0);
    apply(field.values(), field.farfield(), out);
    return out;
}

std::vector<double> apply_fast(const Field& field, const RegionalOperator& plan) {
    if (!(field.grid() == plan.grid()))
        throw InvalidArgument("apply_fast: plan was built for a different grid");
    return plan.apply(field);
}

std::string WeightReport::summary() const {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: weights in [%.6e, %.6e], tail weights in [%.6e, %.6e]",
                  nonnegative ? "nonnegative" : "NEGATIVE", min_weight, max_weight, min_tail, max_tail);
    std::string s = buf;
    if (offending_radius) {
        std::snprintf(buf, sizeof buf, "; first negative weight at radius %.6g", *offending_radius);
        s += buf;
    }
    return s;
}

WeightReport operator_weights_nonneg(const Grid2D& grid, const KernelSpec& kernel, Closure closure) {
    WeightReport rep;
    const int n = grid.n_cells();
    const double h = grid.h();
    rep.min_weight = std::numeric_limits<double>::infinity();
    rep.max_weight = -rep.min_weight;
    // Every pair of cells is displaced by (dx, dy) with |dx|, |dy| < n.
    for (int dy = 0; dy < n; ++dy) {
        for (int dx = 0; dx < n; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const double x = wrap_offset(dx, n, closure) * h;
            const double y = wrap_offset(dy, n, closure) * h;
            const double w = h * h * kernel_at(kernel, x, y);
            rep.min_weight = std::min(rep.min_weight, w);
            rep.max_weight = std::max(rep.max_weight, w);
            if (w < 0.0 && (!rep.offending_radius || std::hypot(x, y) < *rep.offending_radius)) {
                rep.nonnegative = false;
                rep.offending_radius = std::hypot(x, y);
            }
        }
    }
    if (n == 1) rep.min_weight = rep.max_weight = 0.0;
    const auto tail = tail_weights(grid, kernel, closure);
    rep.min_tail = std::numeric_limits<double>::infinity();
    rep.max_tail = -rep.min_tail;
    for (std::size_t i : grid.exterior_cells()) {
        rep.min_tail = std::min(rep.min_tail, tail[i]);
        rep.max_tail = std::max(rep.max_tail, tail[i]);
        if (tail[i] < 0.0) rep.nonnegative = false;
    }
    return rep;
}

}  // namespace regfrac
