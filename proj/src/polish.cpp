#include "conjphase/polish.hpp"

#include <unordered_map>
#include <vector>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace conjphase {

namespace {

struct Constraint {
    Index u;
    Index v;  // == u for a vertex magnitude
    double target_sq;
};

double sum_sq_residual(const std::vector<Constraint>& rows, const std::map<Index, Complex>& values) {
    double s = 0.0;
    for (const Constraint& c : rows) {
        const Complex gu = values.at(c.u);
        const double r = (c.u == c.v ? std::norm(gu) : std::norm(gu - values.at(c.v))) - c.target_sq;
        s += r * r;
    }
    return s;
}

}  // namespace

void polish(const SimpleGraph& graph, const MeasurementSet& data, std::map<Index, Complex>& values,
            std::span<const Index> free, int max_iterations) {
    if (free.empty()) return;

    std::unordered_map<Index, Index> column;
    for (Index v : free)
        if (values.contains(v)) column.emplace(v, static_cast<Index>(column.size()));
    if (column.empty()) return;
    const Index n_free = static_cast<Index>(column.size());

    std::vector<Constraint> rows;
    bool anchored = false;
    double scale = 0.0;
    for (const auto& [v, _] : column) {
        const double a = data.vertex(v);
        scale = std::max(scale, a);
        rows.push_back({v, v, a * a});
        for (Index w : graph.neighbors(v)) {
            if (!values.contains(w) || !data.has_edge(v, w)) continue;
            const bool w_free = column.contains(w);
            if (w_free && w < v) continue;  // each free-free edge once
            if (!w_free) anchored = true;
            const double d = data.edge(v, w);
            rows.push_back({v, w, d * d});
        }
    }
    if (!(scale > 0.0)) return;
    const Index gauge_col = column.at(free.front());

    for (int it = 0; it < max_iterations; ++it) {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(rows.size() * 4 + 1);
        Eigen::VectorXd res(static_cast<Index>(rows.size()) + (anchored ? 0 : 1));
        Index r = 0;
        for (const Constraint& c : rows) {
            const Complex gu = values.at(c.u);
            const Index cu = column.at(c.u);
            if (c.u == c.v) {
                res[r] = std::norm(gu) - c.target_sq;
                trips.emplace_back(r, cu, 2.0 * gu.real());
                trips.emplace_back(r, n_free + cu, 2.0 * gu.imag());
            } else {
                const Complex diff = gu - values.at(c.v);
                res[r] = std::norm(diff) - c.target_sq;
                trips.emplace_back(r, cu, 2.0 * diff.real());
                trips.emplace_back(r, n_free + cu, 2.0 * diff.imag());
                if (auto cv = column.find(c.v); cv != column.end()) {
                    trips.emplace_back(r, cv->second, -2.0 * diff.real());
                    trips.emplace_back(r, n_free + cv->second, -2.0 * diff.imag());
                }
            }
            ++r;
        }
        if (!anchored) {
            res[r] = scale * values.at(free.front()).imag();
            trips.emplace_back(r, n_free + gauge_col, scale);
        }

        Eigen::SparseMatrix<double> jac(res.size(), 2 * n_free);
        jac.setFromTriplets(trips.begin(), trips.end());
        Eigen::SparseMatrix<double> normal = jac.transpose() * jac;
        const double damping = 1e-13 * normal.diagonal().maxCoeff() + 1e-300;
        for (Index k = 0; k < normal.cols(); ++k) normal.coeffRef(k, k) += damping;

        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(normal);
        if (solver.info() != Eigen::Success) return;
        const Eigen::VectorXd step = solver.solve(-(jac.transpose() * res));
        if (solver.info() != Eigen::Success || !step.allFinite()) return;

        const double before = sum_sq_residual(rows, values);
        std::map<Index, Complex> trial = values;
        for (const auto& [v, col] : column) trial[v] += Complex(step[col], step[n_free + col]);
        const double after = sum_sq_residual(rows, trial);
        if (!(after <= before)) return;
        values.swap(trial);
        if (step.lpNorm<Eigen::Infinity>() <= 1e-15 * scale) return;
    }
}

double measurement_residual(const MeasurementSet& data, const std::map<Index, Complex>& values) {
    auto value = [&](Index v) {
        auto it = values.find(v);
        return it == values.end() ? Complex(0.0) : it->second;
    };
    double worst = 0.0;
    for (const auto& [v, a] : data.vertex_mags) worst = std::max(worst, std::abs(std::abs(value(v)) - a));
    for (const auto& [e, d] : data.edge_mags)
        worst = std::max(worst, std::abs(std::abs(value(e.first) - value(e.second)) - d));
    return worst;
}

double measurement_residual(const MeasurementSet& data, const ComplexVector& values) {
    double worst = 0.0;
    for (const auto& [v, a] : data.vertex_mags) worst = std::max(worst, std::abs(std::abs(values[v]) - a));
    for (const auto& [e, d] : data.edge_mags)
        worst = std::max(worst, std::abs(std::abs(values[e.first] - values[e.second]) - d));
    return worst;
}

}  // namespace conjphase
