#include "conjphase/graph.hpp"

#include <string>

namespace conjphase {

SimpleGraph::SimpleGraph(std::vector<Index> vertices, const std::vector<Edge>& edges) {
    for (Index v : vertices) add_vertex(v);
    for (const Edge& e : edges) {
        if (!has_vertex(e.first) || !has_vertex(e.second))
            throw Error(ErrorKind::InvalidArgument, "edge endpoint is not a listed vertex");
        add_edge(e.first, e.second);
    }
}

void SimpleGraph::add_vertex(Index v) { adjacency_.try_emplace(v); }

void SimpleGraph::add_edge(Index a, Index b) {
    if (a == b) throw Error(ErrorKind::InvalidArgument, "self-loop at vertex " + std::to_string(a), a);
    add_vertex(a);
    add_vertex(b);
    if (adjacency_[a].insert(b).second) {
        adjacency_[b].insert(a);
        ++edge_count_;
    }
}

bool SimpleGraph::has_edge(Index a, Index b) const {
    auto it = adjacency_.find(a);
    return it != adjacency_.end() && it->second.contains(b);
}

std::vector<Index> SimpleGraph::vertices() const {
    std::vector<Index> out;
    out.reserve(adjacency_.size());
    for (const auto& [v, _] : adjacency_) out.push_back(v);
    return out;
}

std::vector<Edge> SimpleGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (const auto& [v, nbrs] : adjacency_)
        for (auto it = nbrs.upper_bound(v); it != nbrs.end(); ++it) out.emplace_back(v, *it);
    return out;
}

const std::set<Index>& SimpleGraph::neighbors(Index v) const {
    auto it = adjacency_.find(v);
    if (it == adjacency_.end())
        throw Error(ErrorKind::InvalidArgument, "unknown vertex " + std::to_string(v), v);
    return it->second;
}

SimpleGraph complete_graph(Index n_vertices, Index first_id) {
    SimpleGraph g;
    for (Index i = 0; i < n_vertices; ++i) g.add_vertex(first_id + i);
    for (Index i = 0; i < n_vertices; ++i)
        for (Index j = i + 1; j < n_vertices; ++j) g.add_edge(first_id + i, first_id + j);
    return g;
}

}  // namespace conjphase
