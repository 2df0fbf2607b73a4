#include "regfrac/travelling_wave.hpp"

#include "fftw_planner.hpp"

#include "regfrac/error.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <sstream>

namespace regfrac {

namespace {

using Vec = Eigen::VectorXd;

// y = T x with T_ij = w[|i-j|] (i != j), by circulant embedding.
class SymmetricToeplitz {
public:
    SymmetricToeplitz(const std::vector<double>& w, std::size_t n) : n_(n), p_(2 * n) {
        const std::size_t nc = p_ / 2 + 1;
        in_ = fftw_alloc_real(p_);
        out_ = fftw_alloc_complex(nc);
        {
            std::lock_guard lock(detail::fftw_planner_mutex());
            fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(p_), in_, out_, FFTW_ESTIMATE);
            bwd_ = fftw_plan_dft_c2r_1d(static_cast<int>(p_), out_, in_, FFTW_ESTIMATE);
        }
        std::fill(in_, in_ + p_, 0.0);
        for (std::size_t m = 1; m < n; ++m) {
            in_[m] = w[m];
            in_[p_ - m] = w[m];
        }
        fftw_execute(fwd_);
        spectrum_.resize(nc);
        for (std::size_t k = 0; k < nc; ++k) spectrum_[k] = {out_[k][0] / p_, out_[k][1] / p_};
    }
    ~SymmetricToeplitz() {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(in_);
        fftw_free(out_);
    }
    SymmetricToeplitz(const SymmetricToeplitz&) = delete;
    SymmetricToeplitz& operator=(const SymmetricToeplitz&) = delete;

    void apply(const double* x, double* y) const {
        std::copy(x, x + n_, in_);
        std::fill(in_ + n_, in_ + p_, 0.0);
        fftw_execute(fwd_);
        for (std::size_t k = 0; k < spectrum_.size(); ++k) {
            std::complex<double> v(out_[k][0], out_[k][1]);
            v *= spectrum_[k];
            out_[k][0] = v.real();
            out_[k][1] = v.imag();
        }
        fftw_execute(bwd_);
        std::copy(in_, in_ + n_, y);
    }

private:
    std::size_t n_, p_;
    double* in_ = nullptr;
    fftw_complex* out_ = nullptr;
    fftw_plan fwd_ = nullptr, bwd_ = nullptr;
    std::vector<std::complex<double>> spectrum_;
};

// The bordered front system in unknowns (phi_0..phi_{N-1}, c):
//   F_i = -c (phi_{i+1} - phi_{i-1}) / 2h + c_norm D^s phi_i + f(phi_i),
//   F_N = phi_mid - 1/2.
class FrontSystem {
public:
    FrontSystem(const BistableSpec& f, double s, double h, std::size_t n, double c_norm)
        : f_(f), h_(h), n_(n), mid_((n - 1) / 2), c_norm_(c_norm),
          weights_(FractionalWeights1D::build(s, h, n - 1)), toeplitz_(weights_.w, n) {
        // b_i: contribution of the limits 0 (left) and 1 (right) beyond the grid
        std::vector<double> suffix(n + 2, 0.0);
        for (std::size_t m = n - 1; m >= 1; --m) suffix[m] = suffix[m + 1] + weights_.w[m];
        b_.resize(n);
        for (std::size_t i = 0; i < n; ++i) b_[i] = suffix[n - i] + weights_.tail;
        diag_ = -2.0 * weights_.total();
    }

    std::size_t n() const { return n_; }
    std::size_t mid() const { return mid_; }
    const FractionalWeights1D& weights() const { return weights_; }

    Vec residual(const Vec& x) const {
        const double c = x[n_];
        Vec F(n_ + 1);
        toeplitz_.apply(x.data(), F.data());
        for (std::size_t i = 0; i < n_; ++i) {
            const double frac = c_norm_ * (F[i] + diag_ * x[i] + b_[i]);
            F[i] = -c * slope(x, i) + frac + f_.f(x[i]);
        }
        F[n_] = x[mid_] - 0.5;
        return F;
    }

    // Centred differences inside; one-sided inward differences at the two end
    // nodes, where a centred stencil would see the jump to the limit values.
    double slope(const Vec& x, std::size_t i) const {
        if (i == 0) return (x[1] - x[0]) / h_;
        if (i + 1 == n_) return (x[i] - x[i - 1]) / h_;
        return (x[i + 1] - x[i - 1]) / (2 * h_);
    }

    // (J - sigma P) v at the state x, P = identity on the phi block.
    Vec jacobian_apply(const Vec& x, const Vec& v, double sigma) const {
        const double c = x[n_];
        Vec y(n_ + 1);
        toeplitz_.apply(v.data(), y.data());
        for (std::size_t i = 0; i < n_; ++i) {
            y[i] = c_norm_ * (y[i] + diag_ * v[i]) - c * slope(v, i) + (f_.fprime(x[i]) - sigma) * v[i] -
                   v[n_] * slope(x, i);
        }
        y[n_] = v[mid_];
        return y;
    }

    Eigen::SparseMatrix<double> banded_jacobian(const Vec& x, double sigma, int band) const {
        const double c = x[n_];
        std::vector<Eigen::Triplet<double>> t;
        const auto N = static_cast<long>(n_);
        t.reserve(n_ * (2 * band + 3) + n_ + 1);
        for (long i = 0; i < N; ++i) {
            for (long m = 1; m <= band && m < N; ++m) {
                const double w = c_norm_ * weights_.w[static_cast<std::size_t>(m)];
                if (i - m >= 0) t.emplace_back(i, i - m, w);
                if (i + m < N) t.emplace_back(i, i + m, w);
            }
            double diag = c_norm_ * diag_ + f_.fprime(x[i]) - sigma;
            // advection stencil, matching slope()
            if (i == 0) {
                diag += c / h_;
                t.emplace_back(i, 1, -c / h_);
            } else if (i + 1 == N) {
                diag -= c / h_;
                t.emplace_back(i, i - 1, c / h_);
            } else {
                t.emplace_back(i, i - 1, c / (2 * h_));
                t.emplace_back(i, i + 1, -c / (2 * h_));
            }
            t.emplace_back(i, i, diag);
            t.emplace_back(i, N, -slope(x, static_cast<std::size_t>(i)));
        }
        t.emplace_back(N, static_cast<long>(mid_), 1.0);
        Eigen::SparseMatrix<double> J(N + 1, N + 1);
        J.setFromTriplets(t.begin(), t.end());
        J.makeCompressed();
        return J;
    }

private:
    const BistableSpec& f_;
    double h_;
    std::size_t n_, mid_;
    double c_norm_;
    FractionalWeights1D weights_;
    SymmetricToeplitz toeplitz_;
    std::vector<double> b_;
    double diag_ = 0.0;
};

// Matrix-free operator and preconditioner in the form Eigen's gmres expects.
struct JacobianOp {
    const FrontSystem* sys;
    const Vec* x;
    double sigma;
    Eigen::Index rows() const { return static_cast<Eigen::Index>(sys->n() + 1); }
    Eigen::Index cols() const { return rows(); }
    Vec operator*(const Vec& v) const { return sys->jacobian_apply(*x, v, sigma); }
};

struct BandedPreconditioner {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    Vec solve(const Vec& r) const { return lu.solve(r); }
};

double max_abs(const Vec& v) { return v.lpNorm<Eigen::Infinity>(); }

}  // namespace

double WaveProfile::operator()(double z) const {
    if (phi.empty()) return 0.0;
    const double t = (z - z0) / h;
    if (t < 0.0) return 0.0;
    const double last = static_cast<double>(phi.size() - 1);
    if (t > last) return 1.0;
    const auto k = std::min(static_cast<std::size_t>(t), phi.size() - 2);
    const double w = t - static_cast<double>(k);
    return (1.0 - w) * phi[k] + w * phi[k + 1];
}

double WaveProfile::derivative(std::size_t k) const {
    const double left = k == 0 ? 0.0 : phi[k - 1];
    const double right = k + 1 == phi.size() ? 1.0 : phi[k + 1];
    return (right - left) / (2 * h);
}

SampledProfile WaveProfile::sampled() const {
    SampledProfile p;
    p.z0 = z0;
    p.h = h;
    p.values = phi;
    p.left = {0.0, 0.0};
    p.right = {1.0, 0.0};
    return p;
}

WaveProfile solve_front(const BistableSpec& reaction, double s, double Z, int n_nodes, const WaveOptions& opt) {
    if (!(s > 0.0 && s < 1.0)) throw InvalidArgument("solve_front: s must lie in (0,1)");
    if (!(Z > 0.0)) throw InvalidArgument("solve_front: Z must be > 0");
    if (n_nodes < 5 || n_nodes % 2 == 0) throw InvalidArgument("solve_front: n_nodes must be odd and >= 5");
    {
        auto rep = check_conditions(reaction);
        if (!(rep.roots && rep.negative_below && rep.positive_above && rep.fprime0_negative &&
              rep.fprime_theta_positive && rep.fprime1_negative))
            throw HypothesisViolation("solve_front: reaction is not bistable (" + rep.failures() + ")");
    }

    const auto N = static_cast<std::size_t>(n_nodes);
    const double h = 2.0 * Z / (n_nodes - 1);
    FrontSystem sys(reaction, s, h, N, opt.c_norm);

    Vec x(N + 1);
    for (std::size_t k = 0; k < N; ++k) {
        const double z = -Z + static_cast<double>(k) * h;
        x[k] = 1.0 / (1.0 + std::exp(-(z - opt.initial_shift) / opt.initial_width));
    }
    x[N] = opt.c_guess;

    WaveProfile out;
    out.s = s;
    out.c_norm = opt.c_norm;
    out.z0 = -Z;
    out.h = h;

    Vec F = sys.residual(x);
    double fnorm = max_abs(F);
    double best = fnorm;
    double dtau = 1.0;
    bool phase1 = true;

    for (int step = 0; step < opt.max_steps; ++step) {
        if (!phase1 && fnorm <= opt.newton_tol) break;
        const double sigma = phase1 ? 1.0 / dtau : 0.0;

        BandedPreconditioner pre;
        pre.lu.compute(sys.banded_jacobian(x, sigma, opt.band));
        if (pre.lu.info() != Eigen::Success) throw NumericalFailure("solve_front: preconditioner factorisation failed");
        JacobianOp J{&sys, &x, sigma};
        Vec rhs = -F;
        Vec dx = pre.solve(rhs);
        Eigen::Index iters = 400;
        double tol = 1e-12;
        Eigen::internal::gmres(J, rhs, dx, pre, iters, Eigen::Index{60}, tol);

        if (phase1) {
            x += dx;
            ++out.phase1_steps;
            const double old = fnorm;
            F = sys.residual(x);
            fnorm = max_abs(F);
            const double speed_rate = std::abs(dx[N]) / dtau;
            // switched evolution relaxation: grow the pseudo-time step as the residual falls
            dtau = std::min(1e12, dtau * std::clamp(old / fnorm, 0.5, 4.0));
            if (speed_rate < opt.phase1_speed_tol || fnorm < 1e-4) phase1 = false;
        } else {
            // damped Newton step
            double lambda = 1.0;
            Vec trial = x + dx;
            Vec Ft = sys.residual(trial);
            while (max_abs(Ft) > fnorm && lambda > 1.0 / 64) {
                lambda *= 0.5;
                trial = x + lambda * dx;
                Ft = sys.residual(trial);
            }
            x = trial;
            F = Ft;
            fnorm = max_abs(F);
            ++out.newton_steps;
        }
        best = std::min(best, fnorm);
        if (!std::isfinite(fnorm)) throw NumericalFailure("solve_front: iteration diverged");
    }
    if (fnorm > opt.newton_tol) {
        std::ostringstream msg;
        msg << "solve_front: residual " << fnorm << " above tolerance " << opt.newton_tol << " after "
            << out.phase1_steps << " pseudo-time and " << out.newton_steps << " Newton steps (best " << best
            << ", c = " << x[N] << ")";
        throw NumericalFailure(msg.str());
    }

    out.phi.assign(x.data(), x.data() + N);
    out.speed_c = x[N];
    out.monotone = std::is_sorted(out.phi.begin(), out.phi.end());
    out.residual_norm = front_residual(out, reaction);
    return out;
}

double front_residual(const WaveProfile& profile, const BistableSpec& reaction) {
    const auto frac = apply_singular_1d_all(profile.sampled(), profile.s, profile.c_norm);
    double r = 0.0;
    for (std::size_t k = 1; k + 1 < profile.size(); ++k) {
        const double v = -profile.speed_c * profile.derivative(k) + frac[k] + reaction.f(profile.phi[k]);
        r = std::max(r, std::abs(v));
    }
    return r;
}

double planar_wave_cnorm(const KernelSpec& kernel) {
    if (!kernel.is_fractional() || kernel.dim() != 2)
        throw InvalidArgument("planar_wave_cnorm: needs a 2-D fractional kernel");
    return kernel.c_norm() * planar_reduction_constant(2, kernel.s());
}

PlanarReport planar_subsolution_check(const WaveProfile& profile, Vec2 e, double r, const Grid2D& grid,
                                      const Obstacle& obstacle, const KernelSpec& kernel,
                                      const BistableSpec& reaction, std::optional<double> offset) {
    if (std::abs(norm(e) - 1.0) > 1e-12) throw InvalidArgument("planar_subsolution_check: e must be a unit vector");
    if (!profile.monotone || !std::is_sorted(profile.phi.begin(), profile.phi.end()))
        throw HypothesisViolation("planar_subsolution_check: profile is not monotone");
    if (!is_convex(obstacle)) throw HypothesisViolation("planar_subsolution_check: obstacle is not convex");
    const double cn = planar_wave_cnorm(kernel);
    if (std::abs(profile.c_norm - cn) > 1e-12 * cn || std::abs(profile.s - kernel.s()) > 1e-15)
        throw HypothesisViolation("planar_subsolution_check: front was not computed for this kernel's planar constant");

    double off = support(obstacle, e);
    for (std::size_t j : grid.obstacle_cells()) off = std::max(off, dot(grid.center(j), e));
    if (offset) {
        if (*offset < off) throw HypothesisViolation("planar_subsolution_check: obstacle meets the half-space H_e");
        off = *offset;
    }

    // free-space part on the front grid: c_norm D^s phi + f(phi)
    const auto frac = apply_singular_1d_all(profile.sampled(), profile.s, profile.c_norm);
    std::vector<double> free(profile.size());
    for (std::size_t k = 0; k < profile.size(); ++k) free[k] = frac[k] + reaction.f(profile.phi[k]);
    auto interp = [&](const std::vector<double>& v, double z) {
        const double t = (z - profile.z0) / profile.h;
        const auto k = std::min(static_cast<std::size_t>(t), profile.size() - 2);
        const double w = t - static_cast<double>(k);
        return (1.0 - w) * v[k] + w * v[k + 1];
    };
    std::vector<double> dphi(profile.size());
    for (std::size_t k = 0; k < profile.size(); ++k) dphi[k] = profile.derivative(k);

    const double Z = profile.halfwidth();
    const double h2 = grid.h() * grid.h();
    PlanarReport rep;
    rep.halfspace = {e, off};
    rep.min_value = std::numeric_limits<double>::infinity();
    rep.lower_bound = std::numeric_limits<double>::infinity();
    rep.min_correction = std::numeric_limits<double>::infinity();
    for (std::size_t i : grid.exterior_cells()) {
        const Vec2 x = grid.center(i);
        if (!(dot(x, e) > off)) continue;
        const double zi = dot(x, e) - r;
        if (std::abs(zi) > Z) {
            std::ostringstream msg;
            msg << "planar_subsolution_check: x.e - r = " << zi << " leaves the front grid [-" << Z << ", " << Z << "]";
            throw InvalidArgument(msg.str());
        }
        const double phi_i = profile(zi);
        double corr = 0.0;
        for (std::size_t j : grid.obstacle_cells()) {
            const Vec2 d = x - grid.center(j);
            const double z[2] = {d.x, d.y};
            corr -= h2 * kernel_eval(kernel, z) * (profile(dot(grid.center(j), e) - r) - phi_i);
        }
        const double value = interp(free, zi) + corr;
        ++rep.cells;
        rep.min_correction = std::min(rep.min_correction, corr);
        rep.lower_bound = std::min(rep.lower_bound, profile.speed_c * interp(dphi, zi));
        if (value < rep.min_value) {
            rep.min_value = value;
            rep.argmin = i;
        }
    }
    if (rep.cells == 0) throw InvalidArgument("planar_subsolution_check: no exterior cell lies in H_e");
    return rep;
}

}  // namespace regfrac
