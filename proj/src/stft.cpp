#include "conjphase/stft.hpp"

#include <Eigen/SVD>

namespace conjphase {

namespace {

void require_same_band(const PWSignal& s, const Window& w) {
    if (std::abs(s.bandwidth - w.bandwidth) > 1e-12 * std::max(s.bandwidth, w.bandwidth))
        throw Error(ErrorKind::BandwidthMismatch, "signal and window bandwidths differ");
}

}  // namespace

Window make_window(const RealVector& coeffs, double bandwidth) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
        throw Error(ErrorKind::InvalidArgument, "window bandwidth must be positive");
    Index lo = coeffs.lo();
    Index hi = coeffs.hi();
    while (lo < hi && coeffs[lo] == 0.0) ++lo;
    while (hi > lo && coeffs[hi - 1] == 0.0) --hi;
    if (lo == hi) throw Error(ErrorKind::InvalidArgument, "window coefficients are all zero");
    return Window{restrict_to(coeffs, lo, hi), bandwidth};
}

double window_eval(const Window& w, double x) {
    const double t = 2.0 * w.bandwidth * x;
    double sum = 0.0;
    for (Index m = w.coeffs.lo(); m < w.coeffs.hi(); ++m) sum += w.coeffs[m] * sinc(t - static_cast<double>(m));
    return sum;
}

ComplexVector stft0_measure(const PWSignal& s, const Window& w) {
    require_same_band(s, w);
    if (s.coeffs.empty() || w.coeffs.empty()) return {};
    const Index lo = s.coeffs.lo() - (w.coeffs.hi() - 1);
    const Index hi = s.coeffs.hi() - w.coeffs.lo();
    const double scale = 1.0 / (2.0 * s.bandwidth);
    ComplexVector h = ComplexVector::zeros(lo, hi - lo);
    for (Index n = lo; n < hi; ++n) {
        Complex acc(0.0);
        for (Index m = w.coeffs.lo(); m < w.coeffs.hi(); ++m) acc += s.coeffs[n + m] * w.coeffs[m];
        h.at(n) = scale * acc;
    }
    return h;
}

ComplexVector shifted_window_measure(const PWSignal& s, const Window& w, int shift_steps) {
    if (shift_steps != 1 && shift_steps != 2)
        throw Error(ErrorKind::InvalidArgument, "shift must be one or two grid steps");
    const ComplexVector h = stft0_measure(s, w);
    if (h.empty()) return {};
    ComplexVector out = ComplexVector::zeros(h.lo() - shift_steps, h.size() + shift_steps);
    for (Index n = out.lo(); n < out.hi(); ++n) out.at(n) = h[n + shift_steps] - h[n];
    return out;
}

StructuredSamples stft_structured_samples(const PWSignal& s, const Window& w) {
    const ComplexVector h = stft0_measure(s, w);
    const ComplexVector d1 = shifted_window_measure(s, w, 1);
    const ComplexVector d2 = shifted_window_measure(s, w, 2);
    StructuredSamples out;
    out.scheme = Scheme::adjacent12();
    out.abs = RealVector(h.lo(), h.values().cwiseAbs());
    out.rel1 = RealVector::zeros(h.lo(), std::max<Index>(0, h.size() - 1));
    out.rel2 = RealVector::zeros(h.lo(), std::max<Index>(0, h.size() - 2));
    for (Index n = h.lo(); n + 1 < h.hi(); ++n) out.rel1.at(n) = std::abs(d1[n]);
    for (Index n = h.lo(); n + 2 < h.hi(); ++n) out.rel2.at(n) = std::abs(d2[n]);
    return out;
}

StftRecovery stft_recover(const StructuredSamples& h_samples, const Window& w, double x0,
                          const RecoveryOptions& options) {
    if (w.coeffs.empty()) throw Error(ErrorKind::InvalidArgument, "empty window");
    Recovery hr = algorithm1(h_samples, options);

    const ComplexVector& h = hr.signal;
    const Index c_lo = h.lo() + (w.coeffs.hi() - 1);
    const Index c_hi = h.hi() + w.coeffs.lo();
    if (c_hi <= c_lo) throw Error(ErrorKind::InvalidArgument, "correlation window shorter than the window");
    const Index rows = h.size();
    const Index cols = c_hi - c_lo;

    const double scale = 1.0 / (2.0 * w.bandwidth);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) a(r, c) = scale * w.coeffs[(c_lo + c) - (h.lo() + r)];

    Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    StftRecovery out;
    out.min_singular_value = sv[sv.size() - 1];
    if (!(out.min_singular_value >= options.tol * sv[0]))
        throw Error(ErrorKind::IllConditionedWindow, "correlation matrix is numerically rank deficient",
                    std::nullopt, out.min_singular_value);

    const Eigen::VectorXcd rhs = h.values();
    const Eigen::VectorXd re = svd.solve(rhs.real());
    const Eigen::VectorXd im = svd.solve(rhs.imag());
    Eigen::VectorXcd c(cols);
    c.real() = re;
    c.imag() = im;
    out.deconvolution_residual = (a.cast<Complex>() * c - rhs).norm();
    out.correlation = hr.signal;
    out.report = std::move(hr.report);
    out.report.notes.emplace_back("deconvolved through the banded correlation matrix");
    out.signal = make_pw_signal(w.bandwidth, x0, ComplexVector(c_lo, std::move(c)));
    return out;
}

}  // namespace conjphase
