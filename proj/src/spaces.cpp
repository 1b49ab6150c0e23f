#include "conjphase/spaces.hpp"

#include <numbers>

#include <Eigen/QR>

namespace conjphase {

double sinc(double t) {
    if (t == 0.0) return 1.0;
    const double pt = std::numbers::pi * t;
    return std::sin(pt) / pt;
}

PWSignal make_pw_signal(double bandwidth, double x0, ComplexVector coeffs) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
        throw Error(ErrorKind::InvalidArgument, "bandwidth must be positive");
    if (!std::isfinite(x0)) throw Error(ErrorKind::InvalidArgument, "offset must be finite");
    return PWSignal{bandwidth, x0, std::move(coeffs)};
}

Complex pw_eval(const PWSignal& s, double x) {
    const double t = 2.0 * s.bandwidth * (x - s.x0);
    Complex sum(0.0);
    for (Index n = s.coeffs.lo(); n < s.coeffs.hi(); ++n) sum += s.coeffs[n] * sinc(t - static_cast<double>(n));
    return sum;
}

namespace {

double bspline(int degree, double x) {
    if (degree == 0) return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0;
    if (x <= 0.0 || x >= degree + 1.0) return 0.0;
    return (x * bspline(degree - 1, x) + (degree + 1.0 - x) * bspline(degree - 1, x - 1.0)) / degree;
}

}  // namespace

double generator_eval(const Generator& phi, double x) {
    return std::visit(
        [x](const auto& g) -> double {
            using G = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<G, HatShifted>) {
                return std::max(1.0 - std::abs(x - 1.0), 0.0);
            } else if constexpr (std::is_same_v<G, BSpline>) {
                return bspline(g.degree, x);
            } else {
                if (g.values.empty()) return 0.0;
                const double u = (x - g.start) / g.step;
                if (u < 0.0 || u > static_cast<double>(g.values.size() - 1)) return 0.0;
                const auto j = static_cast<std::size_t>(std::floor(u));
                if (j + 1 >= g.values.size()) return g.values.back();
                const double t = u - static_cast<double>(j);
                return (1.0 - t) * g.values[j] + t * g.values[j + 1];
            }
        },
        phi);
}

std::pair<double, double> generator_support(const Generator& phi) {
    return std::visit(
        [](const auto& g) -> std::pair<double, double> {
            using G = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<G, HatShifted>) {
                return {0.0, 2.0};
            } else if constexpr (std::is_same_v<G, BSpline>) {
                return {0.0, g.degree + 1.0};
            } else {
                const double len = g.values.empty() ? 0.0 : g.step * static_cast<double>(g.values.size() - 1);
                return {g.start, g.start + len};
            }
        },
        phi);
}

Complex si_eval(const SISignal& s, double x) {
    const auto [a, b] = generator_support(s.generator);
    const Index lo = std::max(s.coeffs.lo(), static_cast<Index>(std::floor(x - b)));
    const Index hi = std::min(s.coeffs.hi(), static_cast<Index>(std::ceil(x - a)) + 1);
    Complex sum(0.0);
    for (Index n = lo; n < hi; ++n) sum += s.coeffs[n] * generator_eval(s.generator, x - static_cast<double>(n));
    return sum;
}

SamplingSet::SamplingSet(std::vector<double> points) : points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i])) throw Error(ErrorKind::InvalidArgument, "non-finite sample point");
        if (i > 0 && !(points_[i] > points_[i - 1]))
            throw Error(ErrorKind::InvalidArgument, "sample points must be strictly increasing");
    }
}

SamplingSet half_integer_grid(const SISignal& s) {
    if (s.coeffs.empty()) return {};
    const auto [a, b] = generator_support(s.generator);
    const double left = static_cast<double>(s.coeffs.lo()) + a;
    const double right = static_cast<double>(s.coeffs.hi() - 1) + b;
    std::vector<double> pts;
    for (auto j = static_cast<Index>(std::floor(2.0 * left)) + 1; j < static_cast<Index>(std::ceil(2.0 * right)); ++j)
        pts.push_back(0.5 * static_cast<double>(j));
    return SamplingSet(std::move(pts));
}

ComplexVector sample(const SISignal& s, const SamplingSet& x) {
    ComplexVector out = ComplexVector::zeros(0, static_cast<Index>(x.size()));
    for (std::size_t j = 0; j < x.size(); ++j) out.at(static_cast<Index>(j)) = si_eval(s, x.points()[j]);
    return out;
}

std::pair<SISignal, SISignal> counterexample_pair() {
    const Complex i(0.0, 1.0);
    SISignal f{HatShifted{}, ComplexVector(0, {Complex(1.0), i, Complex(1.0)})};
    SISignal g{HatShifted{}, ComplexVector(0, {Complex(-1.0), i, Complex(1.0)})};
    return {f, g};
}

namespace {

std::pair<Index, Index> four_b_window(const PWSignal& s, Index guard) {
    const double lo_x = s.grid_point(s.coeffs.lo() - guard);
    const double hi_x = s.grid_point(s.coeffs.hi() - 1 + guard);
    const double rate = 4.0 * s.bandwidth;
    return {static_cast<Index>(std::floor(rate * lo_x)), static_cast<Index>(std::ceil(rate * hi_x)) + 1};
}

}  // namespace

FourBSamples pw_sample_scheme_4B(const PWSignal& s, double c, Index guard) {
    if (!(c > 0.0) || c > s.grid_step() * (1.0 + 1e-15))
        throw Error(ErrorKind::InvalidArgument, "shift c must lie in (0, 1/(2B)]");
    FourBSamples out;
    if (s.coeffs.empty()) return out;
    const auto [first, last] = four_b_window(s, guard);
    out.first = first;
    for (Index n = first; n < last; ++n) {
        const double x = static_cast<double>(n) / (4.0 * s.bandwidth);
        const Complex fx = pw_eval(s, x);
        out.abs.push_back(std::abs(fx));
        out.rel.push_back(std::abs(pw_eval(s, x + c) - fx));
    }
    return out;
}

PWSignal pw_recover_adjacent(const StructuredSamples& samples, double bandwidth, double x0,
                             const RecoveryOptions& options) {
    Recovery r = algorithm1(samples, options);
    return make_pw_signal(bandwidth, x0, std::move(r.signal));
}

Recovery si_recover_two_reference(const StructuredSamples& samples, const RecoveryOptions& options) {
    return algorithm2(samples, options);
}

CoefficientFit si_refit_coefficients(const Generator& phi, const SamplingSet& x, const ComplexVector& samples,
                                     Index lo, Index hi) {
    if (static_cast<Index>(x.size()) != samples.size())
        throw Error(ErrorKind::GridMismatch, "sample count does not match the sampling set");
    const Index rows = samples.size();
    const Index cols = hi - lo;
    if (cols <= 0) throw Error(ErrorKind::InvalidArgument, "empty coefficient range");
    Eigen::MatrixXcd design = Eigen::MatrixXcd::Zero(rows, cols);
    for (Index j = 0; j < rows; ++j)
        for (Index n = 0; n < cols; ++n)
            design(j, n) = generator_eval(phi, x.points()[static_cast<std::size_t>(j)] - static_cast<double>(lo + n));
    const Eigen::VectorXcd rhs = samples.values();
    const Eigen::VectorXcd c = design.colPivHouseholderQr().solve(rhs);
    return {ComplexVector(lo, c), (design * c - rhs).norm()};
}

double pw_magnitude_interp_check(const PWSignal& s, double grid_step, Index guard, double* peak) {
    if (peak) *peak = 0.0;
    if (s.coeffs.empty()) return 0.0;
    if (!(grid_step > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid step must be positive");
    const auto [first, last] = four_b_window(s, guard);
    const double rate = 4.0 * s.bandwidth;
    std::vector<double> sq;
    sq.reserve(static_cast<std::size_t>(last - first));
    for (Index n = first; n < last; ++n) sq.push_back(std::norm(pw_eval(s, static_cast<double>(n) / rate)));

    const double a = s.grid_point(s.coeffs.lo());
    const double b = s.grid_point(s.coeffs.hi() - 1);
    double worst = 0.0;
    double top = 0.0;
    const auto steps = static_cast<Index>(std::floor((b - a) / grid_step + 1e-9));
    for (Index k = 0; k <= steps; ++k) {
        const double x = a + static_cast<double>(k) * grid_step;
        double interp = 0.0;
        for (Index n = first; n < last; ++n)
            interp += sq[static_cast<std::size_t>(n - first)] * sinc(rate * x - static_cast<double>(n));
        const double direct = std::norm(pw_eval(s, x));
        top = std::max(top, direct);
        worst = std::max(worst, std::abs(interp - direct));
    }
    if (peak) *peak = top;
    return worst;
}

}  // namespace conjphase
