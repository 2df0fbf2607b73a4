#pragma once

#include <string>
#include <vector>

namespace regfrac {

enum class ReactionKind { Cubic, Tabulated };

/// Bistable nonlinearity f with zeros 0 < theta < 1.
///
/// The cubic f(u) = u (u - theta)(1 - u) is used on the whole real line. A
/// tabulated f is a C^1 cubic Hermite interpolant of (u, f(u)) samples
/// covering [0, 1], extended linearly with slopes f'(0) and f'(1).
class BistableSpec {
public:
    static BistableSpec cubic(double theta);
    static BistableSpec tabulated(std::vector<double> u, std::vector<double> f);

    ReactionKind kind() const { return kind_; }
    double theta() const { return theta_; }
    /// Lipschitz bound of f on [0, 1].
    double lip_bound() const { return lip_; }

    double f(double u) const;
    double fprime(double u) const;

private:
    BistableSpec() = default;
    void finish_tabulated();

    ReactionKind kind_ = ReactionKind::Cubic;
    double theta_ = 0.5;
    double lip_ = 0.0;
    std::vector<double> u_;
    std::vector<double> f_;
    std::vector<double> df_;
};

inline double eval_f(const BistableSpec& spec, double u) { return spec.f(u); }
inline double eval_f_prime(const BistableSpec& spec, double u) { return spec.fprime(u); }

/// Clause-by-clause certification of the bistable structure.
struct ConditionReport {
    bool roots = false;             ///< f(0) = f(theta) = f(1) = 0 within 1e-12
    bool negative_below = false;    ///< f < 0 on (0, theta), dense sampling
    bool positive_above = false;    ///< f > 0 on (theta, 1), dense sampling
    bool fprime0_negative = false;  ///< f'(0) < 0
    bool fprime_theta_positive = false;
    bool fprime1_negative = false;  ///< f'(1) < 0
    bool integral_positive = false; ///< int_0^1 f > 1e-10
    double integral = 0.0;
    double fprime0 = 0.0;
    double fprime_theta = 0.0;
    double fprime1 = 0.0;

    bool pass() const {
        return roots && negative_below && positive_above && fprime0_negative && fprime_theta_positive &&
               fprime1_negative && integral_positive;
    }
    /// Names of failing clauses, comma separated ("" when all pass).
    std::string failures() const;
};

ConditionReport check_conditions(const BistableSpec& spec);

/// Constants in  f' <= -c1  on [1 - c0, upper]; holds iff c1 > 0.
struct DecayBound {
    double c0 = 0.0;
    double c1 = 0.0;
    bool holds() const { return c1 > 0.0; }
};

DecayBound decay_near_one(const BistableSpec& spec, double c0 = 0.1, double upper = 1.5);

/// Composite Simpson rule with an even number of panels.
template <class F>
double simpson(F&& f, double a, double b, int panels) {
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int k = 1; k < panels; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    return sum * h / 3.0;
}

}  // namespace regfrac
