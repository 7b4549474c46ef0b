#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace hbsim {

// Undirected router-level graph. All HB placement and distance math runs on
// this structure; hop counts are unweighted shortest paths.
//
// Invariants (checked by validate()):
//  * adjacency is symmetric, with no self-loops and no duplicate edges
//  * the graph is connected — construction keeps only the largest connected
//    component and renumbers its nodes densely as 0..node_count()-1
//
// A Topology is immutable after construction and safe to share across
// threads.
class Topology {
public:
    // Preferential-attachment generator (heavy-tailed degree distribution).
    // Starts from a path of max(edges_per_new_node, 2) nodes; every later
    // node attaches `edges_per_new_node` edges to distinct existing nodes
    // picked proportionally to current degree, retrying duplicates.
    // Edge count is therefore (m0 - 1) + (n - m0) * m with m0 = max(m, 2).
    static Topology generate_power_law(std::uint32_t n_routers,
                                       std::uint32_t edges_per_new_node,
                                       std::uint64_t seed);

    // Parses "u v" pairs, one per line. Lines starting with '#' and blank
    // lines are ignored. Node ids must fit in 32 bits and u != v. Keeps the
    // largest connected component (ties go to the component containing the
    // smallest original id) and renumbers nodes densely in ascending
    // original-id order. Duplicate edges collapse.
    static Topology load_edge_list(std::string_view text);
    static Topology load_edge_list_file(const std::string& path);

    // Direct construction from an edge set over node ids < n_nodes.
    // Self-loops are dropped, duplicates collapse, and the largest connected
    // component is extracted as above. Isolated nodes count as components of
    // size one, so from_edges(1, {}) is the single-node topology.
    static Topology from_edges(std::uint32_t n_nodes,
                               const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);

    std::uint32_t node_count() const { return node_count_; }
    std::uint64_t edge_count() const { return adjacency_.size() / 2; }
    std::uint32_t degree(std::uint32_t node) const;
    std::span<const std::uint32_t> neighbors(std::uint32_t node) const;

    // Shortest-path hops from `source` to every node, by breadth-first
    // search. `dist` is resized to node_count(); passing the same buffer to
    // successive calls avoids reallocation.
    void bfs_distances(std::uint32_t source, std::vector<std::uint32_t>& dist) const;

    std::uint32_t hop_count(std::uint32_t a, std::uint32_t b) const;

    // The k candidates closest to `source`, ascending by hops with ties
    // broken by ascending node id. Candidates must not contain `source`.
    // Returns all candidates when fewer than k are given.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> nearest_k(
        std::uint32_t source, std::span<const std::uint32_t> candidates, std::size_t k) const;

    // Minimum eccentricity over `sample_size` distinct source nodes sampled
    // uniformly (one BFS each). A sample covering every node yields the
    // exact radius; smaller samples can only overestimate it.
    std::uint32_t estimate_radius(std::uint32_t sample_size, std::uint64_t seed) const;

    // Throws std::runtime_error on any structural invariant violation.
    void validate() const;

    // Edge-list text in the load_edge_list format, one "u v" per line with
    // u < v, in ascending order.
    void write_edge_list(std::ostream& out) const;

private:
    Topology() = default;

    std::uint32_t node_count_ = 0;
    std::vector<std::uint64_t> offsets_;    // CSR row offsets, size node_count_+1
    std::vector<std::uint32_t> adjacency_;  // concatenated sorted neighbor lists
};

}  // namespace hbsim
