#include "conjphase/measure.hpp"

#include <string>

namespace conjphase {

double MeasurementSet::vertex(Index n) const {
    auto it = vertex_mags.find(n);
    if (it == vertex_mags.end())
        throw Error(ErrorKind::InvalidArgument, "no magnitude for vertex " + std::to_string(n), n);
    return it->second;
}

double MeasurementSet::edge(Index a, Index b) const {
    auto it = edge_mags.find(Edge(a, b));
    if (it == edge_mags.end())
        throw Error(ErrorKind::InvalidArgument,
                    "no relative magnitude for edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
    return it->second;
}

void MeasurementSet::validate(double tol) const {
    for (const auto& [v, m] : vertex_mags)
        if (!(m >= 0.0) || !std::isfinite(m))
            throw Error(ErrorKind::InvalidArgument, "bad vertex magnitude at " + std::to_string(v), v);
    for (const auto& [e, d] : edge_mags) {
        if (!has_vertex(e.first) || !has_vertex(e.second))
            throw Error(ErrorKind::InvalidArgument, "edge endpoint without vertex magnitude");
        if (!(d >= 0.0) || !std::isfinite(d))
            throw Error(ErrorKind::InvalidArgument, "bad edge magnitude");
        check_feasible(vertex(e.first), vertex(e.second), d, tol);
    }
}

MeasurementSet measure(const ComplexVector& signal, const SimpleGraph& graph) {
    MeasurementSet m;
    for (Index v : graph.vertices()) m.vertex_mags[v] = std::abs(signal[v]);
    for (const Edge& e : graph.edges()) m.edge_mags[e] = std::abs(signal[e.first] - signal[e.second]);
    return m;
}

void check_feasible(double mag_n, double mag_m, double mag_diff, double tol) {
    const double slack = tol * std::max(1.0, mag_n + mag_m);
    if (mag_diff > mag_n + mag_m + slack || mag_diff < std::abs(mag_n - mag_m) - slack)
        throw Error(ErrorKind::InfeasibleMagnitudes,
                    "magnitudes (" + std::to_string(mag_n) + ", " + std::to_string(mag_m) + ", " +
                        std::to_string(mag_diff) + ") violate the triangle inequality",
                    std::nullopt, mag_diff);
}

double rel_real_inner(double mag_n, double mag_m, double mag_diff, double tol) {
    check_feasible(mag_n, mag_m, mag_diff, tol);
    return 0.5 * (mag_n * mag_n + mag_m * mag_m - mag_diff * mag_diff);
}

double noncollinearity_margin(double mag_n, double mag_m, double mag_diff) {
    const double r = 0.5 * (mag_n * mag_n + mag_m * mag_m - mag_diff * mag_diff);
    return mag_n * mag_m - std::abs(r);
}

bool is_noncollinear(double mag_n, double mag_m, double mag_diff, double tol) {
    const double scale = mag_n * mag_m;
    if (!(scale > 0.0)) return false;
    return noncollinearity_margin(mag_n, mag_m, mag_diff) > tol * scale;
}

}  // namespace conjphase
