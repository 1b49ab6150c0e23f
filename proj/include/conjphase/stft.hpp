#ifndef CONJPHASE_STFT_HPP
#define CONJPHASE_STFT_HPP

#include "conjphase/core.hpp"
#include "conjphase/recon.hpp"
#include "conjphase/spaces.hpp"

namespace conjphase {

/// Real band-limited window psi(x) = sum_m d_m sinc(2B x - m).
struct Window {
    RealVector coeffs;
    double bandwidth = 0.5;
};

/// Validates bandwidth and that some coefficient is nonzero; trims zero ends.
Window make_window(const RealVector& coeffs, double bandwidth);

double window_eval(const Window& w, double x);

/// h_n = (f * psi#)(x0 + n/(2B)) = (1/(2B)) sum_m c_{n+m} d_m, the time-domain
/// STFT at frequency zero sampled on the signal grid.
ComplexVector stft0_measure(const PWSignal& s, const Window& w);

/// h(n + shift_steps) - h(n), the zero-frequency STFT with window
/// psi(. - shift_steps/(2B)) - psi. shift_steps must be 1 or 2.
ComplexVector shifted_window_measure(const PWSignal& s, const Window& w, int shift_steps);

/// |h|, |h(n+1) - h(n)|, |h(n+2) - h(n)| on the support of h, taken from the
/// three window measurements.
StructuredSamples stft_structured_samples(const PWSignal& s, const Window& w);

struct StftRecovery {
    PWSignal signal;
    /// Correlation samples recovered by the adjacent recursion.
    ComplexVector correlation;
    RecoveryReport report;
    double deconvolution_residual = 0.0;
    double min_singular_value = 0.0;
};

/// Adjacent recursion on the correlation magnitudes, then least-squares
/// deconvolution through the banded correlation matrix.
StftRecovery stft_recover(const StructuredSamples& h_samples, const Window& w, double x0,
                          const RecoveryOptions& options = {});

}  // namespace conjphase

#endif  // CONJPHASE_STFT_HPP
