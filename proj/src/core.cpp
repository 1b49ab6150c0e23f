#include "conjphase/core.hpp"

namespace conjphase {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::InfeasibleMagnitudes: return "InfeasibleMagnitudes";
        case ErrorKind::HypothesisFailed: return "HypothesisFailed";
        case ErrorKind::NumericallySingular: return "NumericallySingular";
        case ErrorKind::ReferenceCollinear: return "ReferenceCollinear";
        case ErrorKind::AdjacentCollinear: return "AdjacentCollinear";
        case ErrorKind::ZeroSample: return "ZeroSample";
        case ErrorKind::BadReference: return "BadReference";
        case ErrorKind::BandwidthMismatch: return "BandwidthMismatch";
        case ErrorKind::IllConditionedWindow: return "IllConditionedWindow";
        case ErrorKind::InconsistentMeasurements: return "InconsistentMeasurements";
        case ErrorKind::GridMismatch: return "GridMismatch";
    }
    return "Unknown";
}

double wrap_phase(double angle) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::fmod(angle, two_pi);
    if (w < 0) w += two_pi;
    // fmod can return exactly two_pi after the correction above for tiny negatives.
    return w >= two_pi ? 0.0 : w;
}

namespace {

// Unit rotation u minimising ||a - u b||, i.e. u = ip / |ip| with ip = <a, b>.
Complex best_rotation(const Complex& ip) {
    const double m = std::abs(ip);
    return m > 0 ? ip / m : Complex(1.0, 0.0);
}

// ||a - u b|| summed directly; the closed form via norms loses half the digits.
double residual_norm(const ComplexVector& a, const ComplexVector& b, const Complex& u) {
    if (a.empty() && b.empty()) return 0.0;
    const Index lo = a.empty() ? b.lo() : (b.empty() ? a.lo() : std::min(a.lo(), b.lo()));
    const Index hi = a.empty() ? b.hi() : (b.empty() ? a.hi() : std::max(a.hi(), b.hi()));
    double s = 0.0;
    for (Index n = lo; n < hi; ++n) s += std::norm(a[n] - u * b[n]);
    return std::sqrt(s);
}

}  // namespace

double dist_unimodular(const ComplexVector& a, const ComplexVector& b) {
    return residual_norm(a, b, best_rotation(inner(a, b)));
}

// Phase convention: Identity means b ~ e^{i phase} a, Conjugation means
// b ~ e^{i phase} conj(a).
Equivalence dist_conj(const ComplexVector& a, const ComplexVector& b) {
    const ComplexVector cb = conj(b);
    const Complex ip_id = inner(a, b);
    const Complex ip_cj = inner(a, cb);
    const double d_id = residual_norm(a, b, best_rotation(ip_id));
    const double d_cj = residual_norm(a, cb, best_rotation(ip_cj));

    Equivalence e;
    if (d_cj < d_id) {
        e.distance = d_cj;
        e.branch.kind = BranchKind::Conjugation;
        // conj(b) ~ u a  =>  b ~ conj(u) conj(a); u = <conj b, a>/|.| = conj(ip_cj)/|.|
        e.branch.phase = std::abs(ip_cj) > 0 ? wrap_phase(std::arg(ip_cj)) : 0.0;
    } else {
        e.distance = d_id;
        e.branch.kind = BranchKind::Identity;
        e.branch.phase = std::abs(ip_id) > 0 ? wrap_phase(-std::arg(ip_id)) : 0.0;
    }
    return e;
}

}  // namespace conjphase
