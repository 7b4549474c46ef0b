// Test topologies shared between suites.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "hbsim/topology.hpp"

namespace fixtures {

// Regional router map: a small power-law core, long transit paths out of it,
// and a power-law access cluster at the end of each path. Peers in other
// regions sit beyond the core-centred radius, so fetching from them can cost
// more than going to the origin — the structure behind the cost trade-off.
// Real router-level maps share this core-and-stub-region shape; a plain
// preferential-attachment graph at desk scale does not (its distances all
// collapse below the radius).
inline hbsim::Topology regional_topology(std::uint32_t core_n, std::uint32_t regions,
                                         std::uint32_t path_len, std::uint32_t cluster_n,
                                         std::uint64_t seed) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    const hbsim::Topology core = hbsim::Topology::generate_power_law(core_n, 2, seed);
    for (std::uint32_t v = 0; v < core_n; ++v) {
        for (const std::uint32_t u : core.neighbors(v)) {
            if (v < u) {
                edges.emplace_back(v, u);
            }
        }
    }
    std::uint32_t next = core_n;
    for (std::uint32_t r = 0; r < regions; ++r) {
        std::uint32_t anchor = r % core_n;
        for (std::uint32_t i = 0; i < path_len; ++i) {
            edges.emplace_back(anchor, next);
            anchor = next++;
        }
        const hbsim::Topology cluster =
            hbsim::Topology::generate_power_law(cluster_n, 2, seed + 1000 + r);
        const std::uint32_t base = next;
        for (std::uint32_t v = 0; v < cluster_n; ++v) {
            for (const std::uint32_t u : cluster.neighbors(v)) {
                if (v < u) {
                    edges.emplace_back(base + v, base + u);
                }
            }
        }
        edges.emplace_back(anchor, base);  // path end joins the cluster
        next = base + cluster_n;
    }
    return hbsim::Topology::from_edges(next, edges);
}

// Writes the standard desk-scale regional map to a temp file and returns the
// path; run configs point their file topology at it.
inline std::string write_regional_map(const std::string& filename) {
    const hbsim::Topology topo = regional_topology(40, 4, 20, 200, 7);
    const auto path = std::filesystem::temp_directory_path() / filename;
    std::ofstream out(path, std::ios::binary);
    topo.write_edge_list(out);
    return path.string();
}

}  // namespace fixtures
