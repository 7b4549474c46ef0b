#include "hbsim/overlay.hpp"

#include <algorithm>
#include <stdexcept>

#include "hbsim/rng.hpp"

namespace hbsim {

LruCache::LruCache(std::uint32_t capacity) : capacity_(capacity) {
    if (capacity < 1) {
        throw std::invalid_argument("LruCache: capacity must be >= 1");
    }
}

bool LruCache::lookup(std::uint32_t video) {
    const auto it = index_.find(video);
    if (it == index_.end()) {
        return false;
    }
    order_.splice(order_.begin(), order_, it->second);
    return true;
}

std::optional<std::uint32_t> LruCache::insert(std::uint32_t video) {
    const auto it = index_.find(video);
    if (it != index_.end()) {
        order_.splice(order_.begin(), order_, it->second);
        return std::nullopt;
    }
    std::optional<std::uint32_t> evicted;
    if (order_.size() == capacity_) {
        evicted = order_.back();
        index_.erase(order_.back());
        order_.pop_back();
    }
    order_.push_front(video);
    index_[video] = order_.begin();
    return evicted;
}

std::vector<std::uint32_t> LruCache::entries() const {
    return {order_.begin(), order_.end()};
}

std::vector<HomeBox> place_homeboxes(const Topology& topo, std::uint32_t n_homeboxes,
                                     std::uint32_t cache_capacity, std::uint64_t seed) {
    if (n_homeboxes < 1) {
        throw std::invalid_argument("place_homeboxes: n_homeboxes must be >= 1");
    }
    if (topo.node_count() < 1) {
        throw std::invalid_argument("place_homeboxes: empty topology");
    }

    Rng rng(seed);
    std::vector<HomeBox> homeboxes;
    homeboxes.reserve(n_homeboxes);
    for (std::uint32_t id = 0; id < n_homeboxes; ++id) {
        homeboxes.push_back(HomeBox{
            .id = id,
            .router = rng.below_u32(topo.node_count()),
            .cache = LruCache(cache_capacity),
            .neighbors = {},
            .resources = {},
        });
    }
    return homeboxes;
}

void build_neighbor_lists(const Topology& topo, std::vector<HomeBox>& homeboxes,
                          std::uint32_t degree) {
    const std::size_t n = homeboxes.size();
    if (degree == 0) {
        for (auto& hb : homeboxes) {
            hb.neighbors.clear();
        }
        return;
    }

    // One BFS per distinct attachment router serves every HB on that router.
    std::vector<std::uint32_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = static_cast<std::uint32_t>(i);
    }
    std::sort(order.begin(), order.end(), [&homeboxes](std::uint32_t a, std::uint32_t b) {
        return homeboxes[a].router < homeboxes[b].router;
    });

    std::vector<std::uint32_t> dist;
    std::vector<std::pair<std::uint64_t, std::uint32_t>> ranked;  // ((hops << 32) | id, id)
    ranked.reserve(n);
    std::size_t group_start = 0;
    while (group_start < n) {
        const std::uint32_t router = homeboxes[order[group_start]].router;
        std::size_t group_end = group_start;
        while (group_end < n && homeboxes[order[group_end]].router == router) {
            ++group_end;
        }
        topo.bfs_distances(router, dist);

        for (std::size_t g = group_start; g < group_end; ++g) {
            HomeBox& hb = homeboxes[order[g]];
            ranked.clear();
            for (const HomeBox& other : homeboxes) {
                if (other.id == hb.id) {
                    continue;
                }
                const std::uint64_t key =
                    (static_cast<std::uint64_t>(dist[other.router]) << 32) | other.id;
                ranked.emplace_back(key, other.id);
            }
            const std::size_t take = std::min<std::size_t>(degree, ranked.size());
            std::partial_sort(ranked.begin(), ranked.begin() + take, ranked.end());
            hb.neighbors.clear();
            hb.neighbors.reserve(take);
            for (std::size_t i = 0; i < take; ++i) {
                hb.neighbors.push_back(Neighbor{
                    .homebox = ranked[i].second,
                    .hops = static_cast<std::uint32_t>(ranked[i].first >> 32),
                });
            }
        }
        group_start = group_end;
    }
}

DistanceVector distance_vector(const Topology& topo, const HomeBox& a, const HomeBox& b,
                               MetricsProfile profile, std::uint64_t seed) {
    DistanceVector vec;
    vec.hops = static_cast<double>(topo.hop_count(a.router, b.router));
    if (profile == MetricsProfile::kSynthetic) {
        Rng rng(derive_stream(derive_stream(seed, a.id), b.id));
        vec.delay_us = vec.hops * (50.0 + 450.0 * rng.unit_double());
        vec.loss = 0.05 * rng.unit_double();
        vec.jitter_us = 200.0 * rng.unit_double();
        vec.duplicates = 0.01 * rng.unit_double();
    }
    return vec;
}

std::vector<std::uint32_t> rank_peers(std::span<const std::uint32_t> candidates,
                                      std::span<const DistanceVector> vectors,
                                      const std::array<double, 5>& weights) {
    if (vectors.size() != candidates.size()) {
        throw std::invalid_argument("rank_peers: one distance vector per candidate required");
    }
    bool any_positive = false;
    for (const double w : weights) {
        if (w < 0.0) {
            throw std::invalid_argument("rank_peers: weights must be non-negative");
        }
        any_positive = any_positive || w > 0.0;
    }
    if (!any_positive) {
        throw std::invalid_argument("rank_peers: weights must not all be zero");
    }

    std::vector<std::pair<double, std::uint32_t>> scored;
    scored.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const DistanceVector& v = vectors[i];
        const double score = weights[0] * v.hops + weights[1] * v.delay_us + weights[2] * v.loss +
                             weights[3] * v.jitter_us + weights[4] * v.duplicates;
        scored.emplace_back(score, candidates[i]);
    }
    std::sort(scored.begin(), scored.end());

    std::vector<std::uint32_t> result;
    result.reserve(scored.size());
    for (const auto& [score, id] : scored) {
        result.push_back(id);
    }
    return result;
}

std::vector<std::uint32_t> filter_overloaded(const std::vector<HomeBox>& homeboxes,
                                             std::span<const std::uint32_t> candidates,
                                             double cpu_threshold, double access_threshold) {
    if (cpu_threshold < 0.0 || cpu_threshold > 1.0 || access_threshold < 0.0 ||
        access_threshold > 1.0) {
        throw std::invalid_argument("filter_overloaded: thresholds must be within [0, 1]");
    }
    std::vector<std::uint32_t> kept;
    kept.reserve(candidates.size());
    for (const std::uint32_t id : candidates) {
        const ResourceMetrics& res = homeboxes.at(id).resources;
        if (res.cpu_utilization <= cpu_threshold && res.access_utilization <= access_threshold) {
            kept.push_back(id);
        }
    }
    if (kept.empty() && !candidates.empty()) {
        return {candidates.begin(), candidates.end()};
    }
    return kept;
}

}  // namespace hbsim
