#ifndef CONJPHASE_SPACES_HPP
#define CONJPHASE_SPACES_HPP

#include <utility>
#include <variant>
#include <vector>

#include "conjphase/core.hpp"
#include "conjphase/recon.hpp"

namespace conjphase {

/// sin(pi t) / (pi t), with sinc(0) = 1.
double sinc(double t);

/// Band-limited signal f(x) = sum_n c_n sinc(2B(x - x0) - n); c_n = f(x0 + n/(2B)).
struct PWSignal {
    double bandwidth = 0.5;
    double x0 = 0.0;
    ComplexVector coeffs;

    double grid_step() const { return 0.5 / bandwidth; }
    double grid_point(Index n) const { return x0 + static_cast<double>(n) * grid_step(); }
};

PWSignal make_pw_signal(double bandwidth, double x0, ComplexVector coeffs);

Complex pw_eval(const PWSignal& s, double x);

/// Hat max(1 - |x - 1|, 0), supported on [0, 2].
struct HatShifted {};
/// Cardinal B-spline of polynomial degree `degree`, supported on [0, degree + 1];
/// degree 1 coincides with HatShifted.
struct BSpline {
    int degree = 1;
};
/// Piecewise-linear interpolation of `values` sampled at start + j * step;
/// zero outside the table.
struct TabulatedGenerator {
    double start = 0.0;
    double step = 1.0;
    std::vector<double> values;
};
using Generator = std::variant<HatShifted, BSpline, TabulatedGenerator>;

double generator_eval(const Generator& phi, double x);
/// Closed support [a, b] of the generator.
std::pair<double, double> generator_support(const Generator& phi);

/// f(x) = sum_n c_n phi(x - n).
struct SISignal {
    Generator generator = HatShifted{};
    ComplexVector coeffs;
};

Complex si_eval(const SISignal& s, double x);

/// Strictly increasing, finite list of sample locations.
class SamplingSet {
public:
    SamplingSet() = default;
    explicit SamplingSet(std::vector<double> points);

    const std::vector<double>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }

private:
    std::vector<double> points_;
};

/// Half-integer grid {j/2} strictly inside the support of `s`.
SamplingSet half_integer_grid(const SISignal& s);

/// Samples f(x_j) placed at logical indices 0 .. |X|-1.
ComplexVector sample(const SISignal& s, const SamplingSet& x);

/// Inequivalent pair with coefficients (1, i, 1) and (-1, i, 1) on indices 0..2:
/// identical |f(x)| everywhere, yet not equivalent.
std::pair<SISignal, SISignal> counterexample_pair();

/// Sequences |f(n/(4B))| and |f(n/(4B) + c) - f(n/(4B))| for n in [first, first + size).
struct FourBSamples {
    Index first = 0;
    std::vector<double> abs;
    std::vector<double> rel;
};

/// Covers the coefficient support widened by `guard` Nyquist steps on each side.
FourBSamples pw_sample_scheme_4B(const PWSignal& s, double c, Index guard = 64);

/// Adjacent recursion on the grid x0 + n/(2B), then the WSK assembly.
PWSignal pw_recover_adjacent(const StructuredSamples& samples, double bandwidth, double x0,
                             const RecoveryOptions& options = {});

/// Two-reference recovery of the sample vector on X (indices 0 .. |X|-1).
Recovery si_recover_two_reference(const StructuredSamples& samples, const RecoveryOptions& options = {});

struct CoefficientFit {
    ComplexVector coeffs;
    double residual = 0.0;
};

/// Least-squares coefficients on [lo, hi) reproducing `samples` on X.
CoefficientFit si_refit_coefficients(const Generator& phi, const SamplingSet& x, const ComplexVector& samples,
                                     Index lo, Index hi);

/// WSK-interpolates |f|^2 from its rate-4B samples over the support +- guard
/// and returns the largest deviation from |f(x)|^2 on a `grid_step` grid over
/// the coefficient support. `peak` receives max |f(x)|^2 on that grid.
double pw_magnitude_interp_check(const PWSignal& s, double grid_step, Index guard, double* peak = nullptr);

}  // namespace conjphase

#endif  // CONJPHASE_SPACES_HPP
