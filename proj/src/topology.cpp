#include "hbsim/topology.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hbsim/rng.hpp"

namespace hbsim {

namespace {

constexpr std::uint32_t kUnvisited = 0xFFFFFFFFu;

std::string line_error(std::size_t line_no, const std::string& message) {
    return "edge list line " + std::to_string(line_no) + ": " + message;
}

}  // namespace

Topology Topology::generate_power_law(std::uint32_t n_routers, std::uint32_t edges_per_new_node,
                                      std::uint64_t seed) {
    const std::uint32_t m = edges_per_new_node;
    if (m < 1) {
        throw std::invalid_argument("generate_power_law: edges_per_new_node must be >= 1");
    }
    if (static_cast<std::uint64_t>(n_routers) < static_cast<std::uint64_t>(m) + 1) {
        throw std::invalid_argument(
            "generate_power_law: n_routers must be >= edges_per_new_node + 1");
    }

    const std::uint32_t seed_nodes = std::max(m, 2u);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve((seed_nodes - 1) + static_cast<std::size_t>(n_routers - seed_nodes) * m);

    // endpoint_pool holds one entry per unit of degree; sampling it uniformly
    // is sampling nodes proportionally to degree.
    std::vector<std::uint32_t> endpoint_pool;
    endpoint_pool.reserve(2 * edges.capacity());

    for (std::uint32_t v = 1; v < seed_nodes; ++v) {
        edges.emplace_back(v - 1, v);
        endpoint_pool.push_back(v - 1);
        endpoint_pool.push_back(v);
    }

    Rng rng(seed);
    std::vector<std::uint32_t> targets;
    targets.reserve(m);
    for (std::uint32_t v = seed_nodes; v < n_routers; ++v) {
        targets.clear();
        while (targets.size() < m) {
            const std::uint32_t candidate = endpoint_pool[rng.below(endpoint_pool.size())];
            if (std::find(targets.begin(), targets.end(), candidate) == targets.end()) {
                targets.push_back(candidate);
            }
        }
        for (const std::uint32_t target : targets) {
            edges.emplace_back(target, v);
            endpoint_pool.push_back(target);
            endpoint_pool.push_back(v);
        }
    }

    return from_edges(n_routers, edges);
}

Topology Topology::load_edge_list(std::string_view text) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<std::uint32_t> ids;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }

        const std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string_view::npos || line[first] == '#') {
            continue;
        }

        std::uint64_t values[2];
        std::size_t cursor = first;
        for (int i = 0; i < 2; ++i) {
            if (i == 1) {
                cursor = line.find_first_not_of(" \t", cursor);
                if (cursor == std::string_view::npos) {
                    throw std::runtime_error(line_error(line_no, "expected two node ids"));
                }
            }
            const auto [ptr, ec] =
                std::from_chars(line.data() + cursor, line.data() + line.size(), values[i]);
            if (ec != std::errc{}) {
                throw std::runtime_error(line_error(line_no, "expected unsigned integer"));
            }
            cursor = static_cast<std::size_t>(ptr - line.data());
        }
        if (line.find_first_not_of(" \t", cursor) != std::string_view::npos) {
            throw std::runtime_error(line_error(line_no, "trailing characters after edge"));
        }
        if (values[0] > 0xFFFFFFFFull || values[1] > 0xFFFFFFFFull) {
            throw std::runtime_error(line_error(line_no, "node id does not fit in 32 bits"));
        }
        if (values[0] == values[1]) {
            throw std::runtime_error(line_error(line_no, "self-loop is not allowed"));
        }
        const auto u = static_cast<std::uint32_t>(values[0]);
        const auto v = static_cast<std::uint32_t>(values[1]);
        edges.emplace_back(u, v);
        ids.push_back(u);
        ids.push_back(v);
    }

    if (edges.empty()) {
        throw std::runtime_error("edge list contains no edges");
    }

    // Compact arbitrary 32-bit ids to 0..k-1 in ascending original order, so
    // the final dense renumbering stays ordered by original id.
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    const auto compact = [&ids](std::uint32_t original) {
        return static_cast<std::uint32_t>(
            std::lower_bound(ids.begin(), ids.end(), original) - ids.begin());
    };
    for (auto& [u, v] : edges) {
        u = compact(u);
        v = compact(v);
    }

    return from_edges(static_cast<std::uint32_t>(ids.size()), edges);
}

Topology Topology::load_edge_list_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open edge list file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_edge_list(buffer.str());
}

Topology Topology::from_edges(std::uint32_t n_nodes,
                              const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    if (n_nodes == 0) {
        throw std::invalid_argument("from_edges: n_nodes must be >= 1");
    }

    std::vector<std::vector<std::uint32_t>> adj(n_nodes);
    for (const auto& [u, v] : edges) {
        if (u >= n_nodes || v >= n_nodes) {
            throw std::invalid_argument("from_edges: edge endpoint out of range");
        }
        if (u == v) {
            continue;
        }
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }

    // Find the largest connected component; scanning sources in ascending id
    // order means a size tie is won by the component holding the smallest id.
    std::vector<std::uint32_t> component(n_nodes, kUnvisited);
    std::vector<std::uint32_t> queue;
    std::uint32_t best_component = 0;
    std::uint64_t best_size = 0;
    std::uint32_t component_count = 0;
    for (std::uint32_t start = 0; start < n_nodes; ++start) {
        if (component[start] != kUnvisited) {
            continue;
        }
        const std::uint32_t id = component_count++;
        queue.clear();
        queue.push_back(start);
        component[start] = id;
        std::uint64_t size = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::uint32_t node = queue[head];
            ++size;
            for (const std::uint32_t next : adj[node]) {
                if (component[next] == kUnvisited) {
                    component[next] = id;
                    queue.push_back(next);
                }
            }
        }
        if (size > best_size) {
            best_size = size;
            best_component = id;
        }
    }

    // Dense renumbering of the kept component, ascending by original id.
    std::vector<std::uint32_t> new_id(n_nodes, kUnvisited);
    std::uint32_t next_id = 0;
    for (std::uint32_t node = 0; node < n_nodes; ++node) {
        if (component[node] == best_component) {
            new_id[node] = next_id++;
        }
    }

    Topology topo;
    topo.node_count_ = next_id;
    topo.offsets_.assign(static_cast<std::size_t>(next_id) + 1, 0);
    for (std::uint32_t node = 0; node < n_nodes; ++node) {
        if (new_id[node] != kUnvisited) {
            topo.offsets_[new_id[node] + 1] = adj[node].size();
        }
    }
    for (std::size_t i = 1; i < topo.offsets_.size(); ++i) {
        topo.offsets_[i] += topo.offsets_[i - 1];
    }
    topo.adjacency_.resize(topo.offsets_.back());
    for (std::uint32_t node = 0; node < n_nodes; ++node) {
        if (new_id[node] == kUnvisited) {
            continue;
        }
        std::uint64_t cursor = topo.offsets_[new_id[node]];
        for (const std::uint32_t next : adj[node]) {
            topo.adjacency_[cursor++] = new_id[next];
        }
        // renumbering is monotone, so each list stays sorted
    }
    return topo;
}

std::uint32_t Topology::degree(std::uint32_t node) const {
    if (node >= node_count_) {
        throw std::invalid_argument("degree: invalid node id");
    }
    return static_cast<std::uint32_t>(offsets_[node + 1] - offsets_[node]);
}

std::span<const std::uint32_t> Topology::neighbors(std::uint32_t node) const {
    if (node >= node_count_) {
        throw std::invalid_argument("neighbors: invalid node id");
    }
    return {adjacency_.data() + offsets_[node], adjacency_.data() + offsets_[node + 1]};
}

void Topology::bfs_distances(std::uint32_t source, std::vector<std::uint32_t>& dist) const {
    if (source >= node_count_) {
        throw std::invalid_argument("bfs_distances: invalid node id");
    }
    dist.assign(node_count_, kUnvisited);
    dist[source] = 0;
    std::vector<std::uint32_t> queue;
    queue.reserve(node_count_);
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::uint32_t node = queue[head];
        const std::uint32_t next_dist = dist[node] + 1;
        for (const std::uint32_t next : neighbors(node)) {
            if (dist[next] == kUnvisited) {
                dist[next] = next_dist;
                queue.push_back(next);
            }
        }
    }
}

std::uint32_t Topology::hop_count(std::uint32_t a, std::uint32_t b) const {
    if (a >= node_count_ || b >= node_count_) {
        throw std::invalid_argument("hop_count: invalid node id");
    }
    if (a == b) {
        return 0;
    }
    std::vector<std::uint32_t> dist(node_count_, kUnvisited);
    dist[a] = 0;
    std::vector<std::uint32_t> queue;
    queue.push_back(a);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::uint32_t node = queue[head];
        const std::uint32_t next_dist = dist[node] + 1;
        for (const std::uint32_t next : neighbors(node)) {
            if (dist[next] == kUnvisited) {
                if (next == b) {
                    return next_dist;
                }
                dist[next] = next_dist;
                queue.push_back(next);
            }
        }
    }
    // unreachable in a connected graph
    throw std::runtime_error("hop_count: target not reachable");
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> Topology::nearest_k(
    std::uint32_t source, std::span<const std::uint32_t> candidates, std::size_t k) const {
    if (source >= node_count_) {
        throw std::invalid_argument("nearest_k: invalid source node");
    }
    for (const std::uint32_t candidate : candidates) {
        if (candidate >= node_count_) {
            throw std::invalid_argument("nearest_k: invalid candidate node");
        }
        if (candidate == source) {
            throw std::invalid_argument("nearest_k: candidates must exclude the source");
        }
    }

    std::vector<std::uint32_t> dist;
    bfs_distances(source, dist);

    std::vector<std::pair<std::uint32_t, std::uint32_t>> ranked;  // (hops, node)
    ranked.reserve(candidates.size());
    for (const std::uint32_t candidate : candidates) {
        ranked.emplace_back(dist[candidate], candidate);
    }
    const std::size_t take = std::min(k, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + take, ranked.end());

    std::vector<std::pair<std::uint32_t, std::uint32_t>> result;
    result.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        result.emplace_back(ranked[i].second, ranked[i].first);
    }
    return result;
}

std::uint32_t Topology::estimate_radius(std::uint32_t sample_size, std::uint64_t seed) const {
    if (sample_size == 0) {
        throw std::invalid_argument("estimate_radius: sample_size must be >= 1");
    }

    std::vector<std::uint32_t> sources(node_count_);
    std::iota(sources.begin(), sources.end(), 0u);
    if (sample_size < node_count_) {
        // partial Fisher-Yates: the first sample_size slots become the sample
        Rng rng(seed);
        for (std::uint32_t i = 0; i < sample_size; ++i) {
            const std::uint64_t j = i + rng.below(node_count_ - i);
            std::swap(sources[i], sources[j]);
        }
        sources.resize(sample_size);
    }

    std::uint32_t radius = kUnvisited;
    std::vector<std::uint32_t> dist;
    for (const std::uint32_t source : sources) {
        bfs_distances(source, dist);
        const std::uint32_t eccentricity = *std::max_element(dist.begin(), dist.end());
        radius = std::min(radius, eccentricity);
    }
    return radius;
}

void Topology::validate() const {
    if (node_count_ == 0) {
        throw std::runtime_error("topology invariant: empty graph");
    }
    if (offsets_.size() != static_cast<std::size_t>(node_count_) + 1 || offsets_.front() != 0 ||
        offsets_.back() != adjacency_.size()) {
        throw std::runtime_error("topology invariant: inconsistent CSR offsets");
    }
    for (std::uint32_t node = 0; node < node_count_; ++node) {
        const auto list = neighbors(node);
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (list[i] >= node_count_) {
                throw std::runtime_error("topology invariant: neighbor id out of range");
            }
            if (list[i] == node) {
                throw std::runtime_error("topology invariant: self-loop");
            }
            if (i > 0 && list[i] <= list[i - 1]) {
                throw std::runtime_error("topology invariant: adjacency not sorted unique");
            }
            const auto back = neighbors(list[i]);
            if (!std::binary_search(back.begin(), back.end(), node)) {
                throw std::runtime_error("topology invariant: asymmetric edge");
            }
        }
    }
    std::vector<std::uint32_t> dist;
    bfs_distances(0, dist);
    for (const std::uint32_t d : dist) {
        if (d == kUnvisited) {
            throw std::runtime_error("topology invariant: graph not connected");
        }
    }
}

void Topology::write_edge_list(std::ostream& out) const {
    for (std::uint32_t node = 0; node < node_count_; ++node) {
        for (const std::uint32_t next : neighbors(node)) {
            if (node < next) {
                out << node << ' ' << next << '\n';
            }
        }
    }
}

}  // namespace hbsim
