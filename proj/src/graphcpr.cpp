#include "conjphase/graphcpr.hpp"

#include <algorithm>
#include <deque>
#include <iterator>
#include <map>
#include <sstream>

namespace conjphase {

std::vector<std::vector<std::size_t>> TriangleGraph::adjacency() const {
    std::vector<std::vector<std::size_t>> adj(nodes.size());
    for (const TriangleLink& l : links) {
        adj[l.a].push_back(l.b);
        adj[l.b].push_back(l.a);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
}

std::vector<std::vector<std::size_t>> TriangleGraph::components() const {
    const auto adj = adjacency();
    std::vector<bool> seen(nodes.size(), false);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t s = 0; s < nodes.size(); ++s) {
        if (seen[s]) continue;
        std::vector<std::size_t> comp;
        std::deque<std::size_t> queue{s};
        seen[s] = true;
        while (!queue.empty()) {
            const std::size_t u = queue.front();
            queue.pop_front();
            comp.push_back(u);
            for (std::size_t v : adj[u])
                if (!seen[v]) {
                    seen[v] = true;
                    queue.push_back(v);
                }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

std::vector<TriangleNode> enumerate_triangles(const SimpleGraph& g) {
    std::vector<TriangleNode> out;
    for (Index u : g.vertices()) {
        const auto& nu = g.neighbors(u);
        for (auto iv = nu.upper_bound(u); iv != nu.end(); ++iv) {
            const Index v = *iv;
            const auto& nv = g.neighbors(v);
            std::vector<Index> common;
            std::set_intersection(nu.upper_bound(v), nu.end(), nv.upper_bound(v), nv.end(),
                                  std::back_inserter(common));
            for (Index w : common) out.push_back(TriangleNode{{u, v, w}});
        }
    }
    return out;
}

TriangleGraph build_gf(const SimpleGraph& g, const MeasurementSet& m, double tol) {
    TriangleGraph gf;
    gf.nodes = enumerate_triangles(g);
    std::map<Edge, std::vector<std::size_t>> by_edge;
    for (std::size_t t = 0; t < gf.nodes.size(); ++t) {
        const auto& v = gf.nodes[t].verts;
        by_edge[Edge(v[0], v[1])].push_back(t);
        by_edge[Edge(v[0], v[2])].push_back(t);
        by_edge[Edge(v[1], v[2])].push_back(t);
    }
    for (const auto& [e, tris] : by_edge) {
        if (tris.size() < 2) continue;
        if (!is_noncollinear(m.vertex(e.first), m.vertex(e.second), m.edge(e.first, e.second), tol)) continue;
        for (std::size_t i = 0; i < tris.size(); ++i)
            for (std::size_t j = i + 1; j < tris.size(); ++j) gf.links.push_back({tris[i], tris[j], e});
    }
    std::sort(gf.links.begin(), gf.links.end());
    return gf;
}

Diagnosis check_hypothesis(const SimpleGraph& g, const TriangleGraph& gf) {
    std::set<Index> covered;
    for (const auto& t : gf.nodes) covered.insert(t.verts.begin(), t.verts.end());
    UncoveredVertices uncovered;
    for (Index v : g.vertices())
        if (!covered.contains(v)) uncovered.vertices.insert(v);
    if (!uncovered.vertices.empty()) return uncovered;
    auto comps = gf.components();
    if (comps.size() > 1) return Disconnected{std::move(comps)};
    return HypothesisOk{};
}

bool is_ok(const Diagnosis& d) { return std::holds_alternative<HypothesisOk>(d); }

std::string describe(const Diagnosis& d) {
    std::ostringstream os;
    if (const auto* u = std::get_if<UncoveredVertices>(&d)) {
        os << "vertices outside every triangle:";
        for (Index v : u->vertices) os << ' ' << v;
    } else if (const auto* c = std::get_if<Disconnected>(&d)) {
        os << "triangle graph has " << c->components.size() << " components";
    } else {
        os << "ok";
    }
    return os.str();
}

Recovery propagate_recover(const SimpleGraph& g, const MeasurementSet& m, const RecoveryOptions& options) {
    const double tol = options.tol;
    for (Index v : g.vertices()) (void)m.vertex(v);
    for (const Edge& e : g.edges()) (void)m.edge(e.first, e.second);
    m.validate(tol);

    const TriangleGraph gf = build_gf(g, m, tol);
    const Diagnosis diag = check_hypothesis(g, gf);
    if (!is_ok(diag)) throw Error(ErrorKind::HypothesisFailed, describe(diag));
    if (gf.nodes.empty()) throw Error(ErrorKind::HypothesisFailed, "graph has no triangles");

    auto margin = [&](const Edge& e) {
        return noncollinearity_margin(m.vertex(e.first), m.vertex(e.second), m.edge(e.first, e.second));
    };

    // Seed: the link whose shared edge has the largest margin, first on ties.
    std::size_t seed_tri = 0;
    std::optional<Edge> seed;
    for (const TriangleLink& l : gf.links)
        if (!seed || margin(l.shared) > margin(*seed)) {
            seed = l.shared;
            seed_tri = l.a;
        }
    if (!seed && gf.nodes.size() == 1) {
        const auto& v = gf.nodes.front().verts;
        for (const Edge& e : {Edge(v[0], v[1]), Edge(v[0], v[2]), Edge(v[1], v[2])}) {
            if (!is_noncollinear(m.vertex(e.first), m.vertex(e.second), m.edge(e.first, e.second), tol)) continue;
            if (!seed || margin(e) > margin(*seed)) seed = e;
        }
    }
    if (!seed) throw Error(ErrorKind::HypothesisFailed, "no non-collinear edge to seed propagation");

    Recovery out;
    RecoveryReport& report = out.report;
    std::map<Index, Complex> values;
    const Index sn = seed->first;
    const Index sm = seed->second;
    const auto [gn, gm] = initial_pair(m.vertex(sn), m.vertex(sm), m.edge(sn, sm), tol);
    values[sn] = gn;
    values[sm] = gm;
    report.seed = std::make_pair(sn, sm);
    report.order = {sn, sm};
    report.min_determinant = std::abs(gm.imag()) / std::abs(gm);

    auto r = [&](Index a, Index b) { return rel_real_inner(m.vertex(a), m.vertex(b), m.edge(a, b), tol); };
    int since_polish = 0;
    auto solve_vertex = [&](Index w, Index i, Index j) {
        double det = 0.0;
        const Complex v = solve_from_pair(values.at(i), r(w, i), values.at(j), r(w, j), det);
        const double normalized = std::abs(det) / (std::abs(values.at(i)) * std::abs(values.at(j)));
        if (!(normalized >= tol))
            throw Error(ErrorKind::NumericallySingular, "2x2 system for vertex " + std::to_string(w) + " is singular",
                        w, det);
        report.min_determinant = std::min(report.min_determinant, normalized);
        if (auto it = values.find(w); it != values.end()) {
            report.max_revisit_discrepancy = std::max(report.max_revisit_discrepancy, std::abs(it->second - v));
            return;
        }
        values[w] = v;
        report.order.push_back(w);
        if (options.polish && options.polish_options.every > 0 && ++since_polish >= options.polish_options.every) {
            since_polish = 0;
            const auto w_len = std::min<std::size_t>(report.order.size(),
                                                     static_cast<std::size_t>(std::max(options.polish_options.window, 1)));
            std::vector<Index> free(report.order.end() - static_cast<std::ptrdiff_t>(w_len), report.order.end());
            polish(g, m, values, free, options.polish_options.max_iterations);
        }
    };

    const auto third = [](const TriangleNode& t, const Edge& e) {
        for (Index v : t.verts)
            if (v != e.first && v != e.second) return v;
        return t.verts[0];
    };

    solve_vertex(third(gf.nodes[seed_tri], *seed), sn, sm);
    const auto adj = gf.adjacency();
    std::map<std::pair<std::size_t, std::size_t>, Edge> shared;
    for (const TriangleLink& l : gf.links) {
        shared[{l.a, l.b}] = l.shared;
        shared[{l.b, l.a}] = l.shared;
    }
    std::vector<bool> visited(gf.nodes.size(), false);
    std::deque<std::size_t> queue{seed_tri};
    visited[seed_tri] = true;
    while (!queue.empty()) {
        const std::size_t t = queue.front();
        queue.pop_front();
        for (std::size_t u : adj[t]) {
            if (visited[u]) continue;
            visited[u] = true;
            const Edge& e = shared.at({t, u});
            solve_vertex(third(gf.nodes[u], e), e.first, e.second);
            queue.push_back(u);
        }
    }

    for (Index v : g.vertices())
        if (!values.contains(v))
            throw Error(ErrorKind::HypothesisFailed, "propagation cannot reach vertex " + std::to_string(v), v);

    if (options.polish) {
        polish(g, m, values, report.order, options.polish_options.max_iterations);
        report.notes.emplace_back("propagation polished by windowed Gauss-Newton");
    }

    const Index lo = values.begin()->first;
    const Index hi = values.rbegin()->first + 1;
    ComplexVector gvec = ComplexVector::zeros(lo, hi - lo);
    for (const auto& [v, z] : values) gvec.at(v) = z;
    normalize_branch(gvec, sn, sm);

    report.residual = measurement_residual(m, gvec);
    double scale = 0.0;
    for (const auto& [_, a] : m.vertex_mags) scale = std::max(scale, a);
    if (report.residual > std::sqrt(tol) * std::max(scale, 1e-300))
        throw Error(ErrorKind::InconsistentMeasurements, "recovered signal does not reproduce the measurements",
                    std::nullopt, report.residual);
    out.signal = std::move(gvec);
    return out;
}

SimpleGraph build_two_reference_graph(Index n_vertices, Index ref_k, Index ref_l, Index first_id) {
    if (ref_k == ref_l) throw Error(ErrorKind::BadReference, "reference vertices must differ", ref_k);
    const Index last = first_id + n_vertices - 1;
    if (ref_k < first_id || ref_k > last || ref_l < first_id || ref_l > last)
        throw Error(ErrorKind::BadReference, "reference vertex out of range");
    SimpleGraph g;
    for (Index v = first_id; v <= last; ++v) g.add_vertex(v);
    for (Index v = first_id; v <= last; ++v) {
        if (v != ref_k) g.add_edge(v, ref_k);
        if (v != ref_l) g.add_edge(v, ref_l);
    }
    return g;
}

SimpleGraph build_circulant_graph(Index n_vertices, const std::set<Index>& offsets, Index first_id) {
    if (n_vertices < 0) throw Error(ErrorKind::InvalidArgument, "negative vertex count");
    SimpleGraph g;
    for (Index i = 0; i < n_vertices; ++i) g.add_vertex(first_id + i);
    for (Index i = 0; i < n_vertices; ++i)
        for (Index q : offsets) {
            const Index j = ((i + q) % n_vertices + n_vertices) % n_vertices;
            if (j != i) g.add_edge(first_id + i, first_id + j);
        }
    return g;
}

}  // namespace conjphase
