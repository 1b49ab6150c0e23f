#ifndef CONJPHASE_GRAPHCPR_HPP
#define CONJPHASE_GRAPHCPR_HPP

#include <array>
#include <set>
#include <variant>
#include <vector>

#include "conjphase/graph.hpp"
#include "conjphase/measure.hpp"
#include "conjphase/recon.hpp"

namespace conjphase {

/// A 3-clique of the measurement graph, vertices ascending.
struct TriangleNode {
    std::array<Index, 3> verts{};

    friend auto operator<=>(const TriangleNode&, const TriangleNode&) = default;
};

/// Two triangles joined through a shared non-collinear edge.
struct TriangleLink {
    std::size_t a = 0;
    std::size_t b = 0;
    Edge shared;

    friend auto operator<=>(const TriangleLink&, const TriangleLink&) = default;
};

/// Derived graph G_f: triangles of the measurement graph as nodes, links
/// between triangles sharing an edge whose endpoints are non-collinear.
struct TriangleGraph {
    std::vector<TriangleNode> nodes;
    std::vector<TriangleLink> links;

    std::vector<std::vector<std::size_t>> adjacency() const;
    /// Connected components as sorted lists of node indices.
    std::vector<std::vector<std::size_t>> components() const;
};

std::vector<TriangleNode> enumerate_triangles(const SimpleGraph& g);

TriangleGraph build_gf(const SimpleGraph& g, const MeasurementSet& m, double tol = kDefaultTolerance);

struct HypothesisOk {};
struct UncoveredVertices {
    std::set<Index> vertices;
};
struct Disconnected {
    std::vector<std::vector<std::size_t>> components;
};
using Diagnosis = std::variant<HypothesisOk, UncoveredVertices, Disconnected>;

/// Every vertex in some triangle, and G_f connected.
Diagnosis check_hypothesis(const SimpleGraph& g, const TriangleGraph& gf);
bool is_ok(const Diagnosis& d);
std::string describe(const Diagnosis& d);

/// Phase propagation over G_f. Seeds the best-conditioned shared edge
/// (n, m) with g_n = |f_n| > 0 and Im g_m >= 0, then visits triangles in BFS
/// order fixing each new vertex from the shared edge's two endpoints.
Recovery propagate_recover(const SimpleGraph& g, const MeasurementSet& m, const RecoveryOptions& options = {});

/// Every vertex joined to both references, plus the edge (k, l). Vertices are
/// first_id .. first_id + n_vertices - 1.
SimpleGraph build_two_reference_graph(Index n_vertices, Index ref_k, Index ref_l, Index first_id = 1);

/// Edges (n, n +- q mod n_vertices) for q in offsets. Vertices as above.
SimpleGraph build_circulant_graph(Index n_vertices, const std::set<Index>& offsets, Index first_id = 1);

}  // namespace conjphase

#endif  // CONJPHASE_GRAPHCPR_HPP
