#ifndef CONJPHASE_POLISH_HPP
#define CONJPHASE_POLISH_HPP

#include <map>
#include <span>

#include "conjphase/core.hpp"
#include "conjphase/graph.hpp"
#include "conjphase/measure.hpp"

namespace conjphase {

struct PolishOptions {
    int max_iterations = 6;
    /// Polish every `every` newly recovered vertices...
    int every = 8;
    /// ...re-solving the most recent `window` of them with the rest held fixed.
    int window = 24;
};

/// Gauss-Newton refinement of `values` at the `free` vertices against the
/// squared-magnitude constraints |g_v|^2 = |f_v|^2 and |g_u - g_v|^2 = |f_u - f_v|^2
/// on every graph edge touching a free vertex whose other end already has a value.
/// When no fixed vertex anchors the free set, Im g_{free[0]} = 0 pins the
/// global rotation. Steps that increase the residual are rejected.
void polish(const SimpleGraph& graph, const MeasurementSet& data, std::map<Index, Complex>& values,
            std::span<const Index> free, int max_iterations = 6);

/// Largest |measured - reproduced| over all vertex and edge magnitudes of `data`.
double measurement_residual(const MeasurementSet& data, const std::map<Index, Complex>& values);
double measurement_residual(const MeasurementSet& data, const ComplexVector& values);

}  // namespace conjphase

#endif  // CONJPHASE_POLISH_HPP
