#ifndef CONJPHASE_RECON_HPP
#define CONJPHASE_RECON_HPP

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conjphase/core.hpp"
#include "conjphase/graph.hpp"
#include "conjphase/measure.hpp"
#include "conjphase/polish.hpp"

namespace conjphase {

enum class SchemeKind { Adjacent12, TwoReference };

struct Scheme {
    SchemeKind kind = SchemeKind::Adjacent12;
    Index ref_k = 0;
    Index ref_l = 0;

    static Scheme adjacent12() { return {}; }
    static Scheme two_reference(Index k, Index l) { return {SchemeKind::TwoReference, k, l}; }

    friend bool operator==(const Scheme&, const Scheme&) = default;
};

/// Structured phaseless samples on an index window [lo, hi).
///
/// Adjacent12:      rel1[n] = |f_{n+1} - f_n| on [lo, hi-1),
///                  rel2[n] = |f_{n+2} - f_n| on [lo, hi-2).
/// TwoReference:    rel1[n] = |f_n - f_k|, rel2[n] = |f_n - f_l| on [lo, hi).
struct StructuredSamples {
    Scheme scheme;
    RealVector abs;
    RealVector rel1;
    RealVector rel2;

    Index lo() const { return abs.lo(); }
    Index hi() const { return abs.hi(); }

    /// Index-range consistency, non-negativity and triangle feasibility.
    void validate(double tol = kDefaultTolerance) const;

    /// The measurement graph these samples live on, and the same data keyed by edge.
    SimpleGraph graph() const;
    MeasurementSet to_measurement_set() const;

    friend bool operator==(const StructuredSamples&, const StructuredSamples&) = default;
};

StructuredSamples make_adjacent12_samples(const ComplexVector& f);
StructuredSamples make_two_reference_samples(const ComplexVector& f, Index k, Index l);

/// Drops leading/trailing samples with |f_n| <= tol * max|f| from an
/// Adjacent12 set. Returns the input unchanged if nothing is trimmed.
StructuredSamples trim_zero_margins(const StructuredSamples& s, double tol = kDefaultTolerance);

struct RecoveryReport {
    /// Recovery cannot see the truth, so this stays Identity/0 unless a caller
    /// fills it from a comparison.
    EquivalenceBranch branch;
    /// Largest absolute deviation between measured and reproduced magnitudes.
    double residual = 0.0;
    /// Smallest |det| / (|g_a||g_b|) over the 2x2 solves, i.e. the sine of the
    /// angle between the two anchors used.
    double min_determinant = std::numeric_limits<double>::infinity();
    double max_revisit_discrepancy = 0.0;
    std::optional<std::pair<Index, Index>> seed;
    std::vector<Index> order;
    std::vector<std::string> notes;
};

struct Recovery {
    ComplexVector signal;
    RecoveryReport report;
};

struct RealRecovery {
    RealVector signal;
    RecoveryReport report;
};

struct RecoveryOptions {
    double tol = kDefaultTolerance;
    /// Gauss-Newton polish of the sequential recursion (see polish.hpp).
    bool polish = true;
    PolishOptions polish_options;
};

/// Solves Re(g conj a) = ra, Re(g conj b) = rb for g. `det` receives
/// Re a Im b - Im a Re b.
Complex solve_from_pair(const Complex& a, double ra, const Complex& b, double rb, double& det);

/// First two anchor values: g_first = |f_first|, g_second = r/|f_first| + i sqrt(|f_second|^2 - (r/|f_first|)^2)
/// with the radicand clamped at zero when it is above -tol * scale.
std::pair<Complex, Complex> initial_pair(double abs_first, double abs_second, double rel, double tol);

/// Rotates `g` so g[anchor] is real positive and conjugates it if Im g[second] < 0.
void normalize_branch(ComplexVector& g, Index anchor, Index second);

/// Recovers x in C^3 from |x_i| and |x_i - x_j| for pairs (1,2), (1,3), (2,3).
ComplexVector solve_c3(const std::array<double, 3>& abs, const std::array<double, 3>& rels,
                       double tol = kDefaultTolerance);

/// Adjacent recursion: g_0 = |f_0|, g_1 from the initializer, then each g_n from
/// its two previously recovered neighbours, forward and then backward.
Recovery algorithm1(const StructuredSamples& s, const RecoveryOptions& options = {});

/// Two-reference recovery: every g_n from the closed-form 2x2 inverse on (g_k, g_l).
Recovery algorithm2(const StructuredSamples& s, const RecoveryOptions& options = {});

/// Real signals from |f_n| and |f_{n+1} - f_n|: consecutive signs from
/// f_n f_{n+1} = (|f_n|^2 + |f_{n+1}|^2 - |f_{n+1} - f_n|^2) / 2.
RealRecovery sign_propagate(const RealVector& abs, const RealVector& rel1, double tol = kDefaultTolerance);

}  // namespace conjphase

#endif  // CONJPHASE_RECON_HPP
