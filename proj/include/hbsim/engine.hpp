#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "hbsim/overlay.hpp"
#include "hbsim/topology.hpp"
#include "hbsim/workload.hpp"

namespace hbsim {

struct SimConfig;

enum class ServeKind { kLocal, kPeering, kMiss };

// How one request was satisfied. hops is 0 for a local hit, the neighbor-list
// hop count for a peering hit, and the configured h_miss for an origin miss.
struct ServeOutcome {
    ServeKind kind = ServeKind::kMiss;
    std::optional<std::uint32_t> server;  // serving HB, peering hits only
    double hops = 0.0;

    bool operator==(const ServeOutcome&) const = default;
};

struct OutcomeRecord {
    std::uint64_t sequence = 0;
    std::uint32_t requester = 0;
    std::uint32_t video = 0;
    ServeKind kind = ServeKind::kMiss;
    std::optional<std::uint32_t> server;
    double hops = 0.0;

    bool operator==(const OutcomeRecord&) const = default;
};

// Counters over the measured (post-warmup) request window plus the ratios
// and cost derived from them by finalize().
struct RunMetrics {
    std::uint64_t n_requests = 0;
    std::uint64_t n_local = 0;
    std::uint64_t n_peering = 0;
    std::uint64_t n_miss = 0;
    std::uint64_t sum_peering_hops = 0;
    double h_miss = 0.0;

    // derived
    double r_local = 0.0;
    double r_peering = 0.0;
    double r_miss = 0.0;    // defined as 1 - r_local - r_peering so the three
                            // ratios always sum to exactly 1.0
    double h_peering = 0.0; // mean hops over peering hits, 0 when there are none
    double avg_cost = 0.0;  // r_peering*h_peering + r_miss*h_miss (local cost is 0)

    void finalize();

    bool operator==(const RunMetrics&) const = default;
};

// Average delivery cost per request in hops; the same expression finalize()
// stores in avg_cost, recomputed from the ratio and hop fields.
double overall_cost(const RunMetrics& metrics);

enum class PushStrategy { kRandom, kTopDegree };

// One simulation run's mutable state: the HB set with caches and neighbor
// lists over an immutable topology. Requests must be served from a single
// thread; run independent Simulations for parallelism.
class Simulation {
public:
    Simulation(const Topology& topo, std::vector<HomeBox> homeboxes, std::uint32_t catalog_size,
               double h_miss, const std::array<double, 5>& rank_weights = {1, 0, 0, 0, 0},
               double cpu_threshold = 1.0, double access_threshold = 1.0);

    // Three-tier resolution: local cache, then the (optionally
    // resource-filtered) neighbor list in ascending hop order, then the
    // origin. Both peering hits and misses cache the video at the requester;
    // a peering hit also refreshes the serving peer's LRU recency.
    ServeOutcome serve_request(const Request& request);

    // Seeds `video` into k HB caches picked by the strategy: uniformly
    // without replacement, or the k HBs on the highest-degree routers (ties
    // by ascending HB id). Returns the seeded HB ids in selection order.
    std::vector<std::uint32_t> push_content(std::uint32_t video, std::uint32_t k,
                                            PushStrategy strategy, std::uint64_t seed);

    const std::vector<HomeBox>& homeboxes() const { return homeboxes_; }
    const Topology& topology() const { return topo_; }
    double h_miss() const { return h_miss_; }

private:
    const Neighbor* pick_peer(const HomeBox& requester, std::uint32_t video) const;

    const Topology& topo_;
    std::vector<HomeBox> homeboxes_;
    std::uint32_t catalog_size_;
    double h_miss_;
    std::array<double, 5> rank_weights_;
    double cpu_threshold_;
    double access_threshold_;
    bool nearest_holder_fast_path_;
};

struct RunResult {
    RunMetrics metrics;
    // Per-request log, populated only when the config asks for it. Includes
    // warmup rows; metrics cover rows with sequence >= warmup_requests.
    std::vector<OutcomeRecord> trace;
    std::uint64_t warmup_requests = 0;
};

// Executes a full run: topology, placement, neighbor lists, optional push,
// then exactly n_requests served in sequence. Identical configs produce
// identical results, bit for bit.
RunResult run(const SimConfig& config);

}  // namespace hbsim
