#ifndef CONJPHASE_MEASURE_HPP
#define CONJPHASE_MEASURE_HPP

#include <map>

#include "conjphase/core.hpp"
#include "conjphase/graph.hpp"

namespace conjphase {

/// Phaseless data on a graph: |f_n| per vertex and |f_n - f_m| per edge.
struct MeasurementSet {
    std::map<Index, double> vertex_mags;
    std::map<Edge, double> edge_mags;

    double vertex(Index n) const;
    double edge(Index a, Index b) const;
    bool has_vertex(Index n) const { return vertex_mags.contains(n); }
    bool has_edge(Index a, Index b) const { return edge_mags.contains(Edge(a, b)); }

    /// Throws InvalidArgument for dangling edges or negative/non-finite values and
    /// InfeasibleMagnitudes when an edge violates the triangle inequality.
    void validate(double tol = kDefaultTolerance) const;

    friend bool operator==(const MeasurementSet&, const MeasurementSet&) = default;
};

/// Forward model on a graph; out-of-range vertices read the signal as zero.
MeasurementSet measure(const ComplexVector& signal, const SimpleGraph& graph);

/// Throws InfeasibleMagnitudes unless | |f_n|-|f_m| | <= |f_n-f_m| <= |f_n|+|f_m|
/// up to tol * max(1, |f_n|+|f_m|).
void check_feasible(double mag_n, double mag_m, double mag_diff, double tol = kDefaultTolerance);

/// Re(f_n conj f_m) = (|f_n|^2 + |f_m|^2 - |f_n - f_m|^2) / 2 by polarization.
double rel_real_inner(double mag_n, double mag_m, double mag_diff, double tol = kDefaultTolerance);

/// |f_n||f_m| - |Re(f_n conj f_m)|, i.e. the Cauchy-Schwarz gap. Zero for
/// collinear pairs; no feasibility check.
double noncollinearity_margin(double mag_n, double mag_m, double mag_diff);

/// True iff the gap exceeds tol |f_n||f_m|, which certifies Im(f_n conj f_m) != 0.
bool is_noncollinear(double mag_n, double mag_m, double mag_diff, double tol = kDefaultTolerance);

}  // namespace conjphase

#endif  // CONJPHASE_MEASURE_HPP
