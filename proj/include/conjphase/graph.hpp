#ifndef CONJPHASE_GRAPH_HPP
#define CONJPHASE_GRAPH_HPP

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "conjphase/core.hpp"

namespace conjphase {

/// Unordered vertex pair, stored with first < second.
struct Edge {
    Index first = 0;
    Index second = 0;

    Edge() = default;
    Edge(Index a, Index b) : first(std::min(a, b)), second(std::max(a, b)) {}

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph on integer vertex ids.
class SimpleGraph {
public:
    SimpleGraph() = default;
    SimpleGraph(std::vector<Index> vertices, const std::vector<Edge>& edges);

    void add_vertex(Index v);
    /// Adds both endpoints if missing. Self-loops throw; duplicates are ignored.
    void add_edge(Index a, Index b);

    bool has_vertex(Index v) const { return adjacency_.contains(v); }
    bool has_edge(Index a, Index b) const;

    std::vector<Index> vertices() const;
    std::vector<Edge> edges() const;
    const std::set<Index>& neighbors(Index v) const;

    std::size_t vertex_count() const { return adjacency_.size(); }
    std::size_t edge_count() const { return edge_count_; }

private:
    std::map<Index, std::set<Index>> adjacency_;
    std::size_t edge_count_ = 0;
};

/// Vertices 0..n-1 (shifted by first_id) with every pair adjacent.
SimpleGraph complete_graph(Index n_vertices, Index first_id = 0);

}  // namespace conjphase

#endif  // CONJPHASE_GRAPH_HPP
