#pragma once

#include <array>
#include <cstdint>
#include <list>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "hbsim/topology.hpp"

namespace hbsim {

// Least-recently-used video cache. Entries are unique video ids kept in
// recency order; a hit refreshes recency, inserting into a full cache evicts
// exactly the least-recently-touched entry.
class LruCache {
public:
    explicit LruCache(std::uint32_t capacity);

    std::uint32_t capacity() const { return capacity_; }
    std::size_t size() const { return order_.size(); }

    // Hit test with LRU side effect: a hit moves the video to most-recent
    // position, a miss leaves the cache untouched.
    bool lookup(std::uint32_t video);

    // Pure membership test, no recency update.
    bool contains(std::uint32_t video) const { return index_.count(video) != 0; }

    // Puts the video at most-recent position. Re-inserting a resident video
    // only refreshes recency. Returns the evicted video id, if any.
    std::optional<std::uint32_t> insert(std::uint32_t video);

    // Most-recent first; test hook.
    std::vector<std::uint32_t> entries() const;

private:
    std::uint32_t capacity_;
    std::list<std::uint32_t> order_;  // front = most recent
    std::unordered_map<std::uint32_t, std::list<std::uint32_t>::iterator> index_;
};

// The network cost 5-tuple between two endpoints. The default simulation
// profile fills hops only; the synthetic profile adds seed-deterministic
// pseudo-measurements for the remaining components.
struct DistanceVector {
    double hops = 0.0;           // c1: hops traversed
    double delay_us = 0.0;       // c2: average one-way delay, microseconds
    double loss = 0.0;           // c3: average packet loss, fraction of packets
    double jitter_us = 0.0;      // c4: average jitter, microseconds
    double duplicates = 0.0;     // c5: duplicate packets received, fraction
};

struct ResourceMetrics {
    double cpu_utilization = 0.0;       // fraction of CPU busy, 0..1
    double access_capacity_mbps = 100.0;  // nominal access interface maximum
    double access_utilization = 0.0;    // fraction of the maximum in use, 0..1
};

struct Neighbor {
    std::uint32_t homebox = 0;
    std::uint32_t hops = 0;
};

// Overlay node: a residential gateway attached to one router, with its own
// LRU cache and a fixed list of nearest peer HBs.
struct HomeBox {
    std::uint32_t id = 0;
    std::uint32_t router = 0;
    LruCache cache;
    std::vector<Neighbor> neighbors;  // ascending (hops, id); no self; size min(d, n-1)
    ResourceMetrics resources;
};

// Uniform random attachment (with replacement — HBs may share a router).
// Caches are created empty with the given capacity; neighbor lists are left
// unset.
std::vector<HomeBox> place_homeboxes(const Topology& topo, std::uint32_t n_homeboxes,
                                     std::uint32_t cache_capacity, std::uint64_t seed);

// Gives every HB its `degree` nearest peers by attachment-router hop count,
// ties broken by ascending HB id. Selection is directed: each HB picks
// independently, so a may list b without b listing a.
void build_neighbor_lists(const Topology& topo, std::vector<HomeBox>& homeboxes,
                          std::uint32_t degree);

enum class MetricsProfile {
    kHopsOnly,    // c2..c5 = 0; the evaluation profile
    kSynthetic,   // c2..c5 drawn deterministically from the seed
};

DistanceVector distance_vector(const Topology& topo, const HomeBox& a, const HomeBox& b,
                               MetricsProfile profile = MetricsProfile::kHopsOnly,
                               std::uint64_t seed = 0);

// Sorts candidate HB ids ascending by the weighted sum of their distance
// vector components, ties broken by ascending id. Weights must be
// non-negative and not all zero.
std::vector<std::uint32_t> rank_peers(std::span<const std::uint32_t> candidates,
                                      std::span<const DistanceVector> vectors,
                                      const std::array<double, 5>& weights);

// Drops candidates whose CPU or access utilization exceeds its threshold.
// If that would leave nothing, the original list is returned unchanged:
// a loaded peer still beats no peer at all.
std::vector<std::uint32_t> filter_overloaded(const std::vector<HomeBox>& homeboxes,
                                             std::span<const std::uint32_t> candidates,
                                             double cpu_threshold, double access_threshold);

}  // namespace hbsim
