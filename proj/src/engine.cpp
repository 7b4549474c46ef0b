#include "hbsim/engine.hpp"

#include <algorithm>
#include <stdexcept>

#include "hbsim/config.hpp"
#include "hbsim/rng.hpp"

namespace hbsim {

namespace {

// Sources sampled when estimating the graph radius for the default h_miss.
constexpr std::uint32_t kRadiusSampleSize = 32;

}  // namespace

void RunMetrics::finalize() {
    if (n_requests == 0) {
        r_local = r_peering = r_miss = h_peering = avg_cost = 0.0;
        return;
    }
    r_local = static_cast<double>(n_local) / static_cast<double>(n_requests);
    r_peering = static_cast<double>(n_peering) / static_cast<double>(n_requests);
    r_miss = 1.0 - r_local - r_peering;
    h_peering = n_peering == 0
                    ? 0.0
                    : static_cast<double>(sum_peering_hops) / static_cast<double>(n_peering);
    avg_cost = overall_cost(*this);
}

double overall_cost(const RunMetrics& metrics) {
    if (metrics.n_requests == 0) {
        throw std::invalid_argument("overall_cost: empty run");
    }
    return metrics.r_peering * metrics.h_peering + metrics.r_miss * metrics.h_miss;
}

Simulation::Simulation(const Topology& topo, std::vector<HomeBox> homeboxes,
                       std::uint32_t catalog_size, double h_miss,
                       const std::array<double, 5>& rank_weights, double cpu_threshold,
                       double access_threshold)
    : topo_(topo),
      homeboxes_(std::move(homeboxes)),
      catalog_size_(catalog_size),
      h_miss_(h_miss),
      rank_weights_(rank_weights),
      cpu_threshold_(cpu_threshold),
      access_threshold_(access_threshold) {
    if (homeboxes_.empty()) {
        throw std::invalid_argument("Simulation: no homeboxes");
    }
    if (catalog_size_ == 0) {
        throw std::invalid_argument("Simulation: empty catalog");
    }
    if (!(h_miss_ >= 0.0)) {
        throw std::invalid_argument("Simulation: h_miss must be non-negative");
    }
    // Default weights plus disabled thresholds reduce peer selection to
    // "nearest holder in neighbor-list order"; serve_request then skips the
    // filtering/ranking machinery without changing the outcome.
    nearest_holder_fast_path_ = rank_weights_ == std::array<double, 5>{1, 0, 0, 0, 0} &&
                                cpu_threshold_ >= 1.0 && access_threshold_ >= 1.0;
}

const Neighbor* Simulation::pick_peer(const HomeBox& requester, std::uint32_t video) const {
    if (nearest_holder_fast_path_) {
        for (const Neighbor& nb : requester.neighbors) {
            if (homeboxes_[nb.homebox].cache.contains(video)) {
                return &nb;
            }
        }
        return nullptr;
    }

    std::vector<std::uint32_t> ids;
    ids.reserve(requester.neighbors.size());
    for (const Neighbor& nb : requester.neighbors) {
        ids.push_back(nb.homebox);
    }
    const std::vector<std::uint32_t> admitted =
        filter_overloaded(homeboxes_, ids, cpu_threshold_, access_threshold_);

    std::vector<std::uint32_t> holders;
    std::vector<DistanceVector> vectors;
    for (const std::uint32_t id : admitted) {
        if (!homeboxes_[id].cache.contains(video)) {
            continue;
        }
        holders.push_back(id);
        const auto entry = std::find_if(requester.neighbors.begin(), requester.neighbors.end(),
                                        [id](const Neighbor& nb) { return nb.homebox == id; });
        DistanceVector vec;
        vec.hops = static_cast<double>(entry->hops);
        vectors.push_back(vec);
    }
    if (holders.empty()) {
        return nullptr;
    }
    const std::vector<std::uint32_t> ranked = rank_peers(holders, vectors, rank_weights_);
    const auto chosen = std::find_if(requester.neighbors.begin(), requester.neighbors.end(),
                                     [&ranked](const Neighbor& nb) { return nb.homebox == ranked.front(); });
    return &*chosen;
}

ServeOutcome Simulation::serve_request(const Request& request) {
    if (request.requester >= homeboxes_.size()) {
        throw std::invalid_argument("serve_request: invalid requester id");
    }
    if (request.video >= catalog_size_) {
        throw std::invalid_argument("serve_request: invalid video id");
    }

    HomeBox& requester = homeboxes_[request.requester];
    if (requester.cache.lookup(request.video)) {
        return ServeOutcome{.kind = ServeKind::kLocal, .server = std::nullopt, .hops = 0.0};
    }

    if (const Neighbor* peer = pick_peer(requester, request.video)) {
        homeboxes_[peer->homebox].cache.lookup(request.video);  // serving is a use
        requester.cache.insert(request.video);                  // cache-on-fetch
        return ServeOutcome{.kind = ServeKind::kPeering,
                            .server = peer->homebox,
                            .hops = static_cast<double>(peer->hops)};
    }

    requester.cache.insert(request.video);  // cache-on-fetch from the origin
    return ServeOutcome{.kind = ServeKind::kMiss, .server = std::nullopt, .hops = h_miss_};
}

std::vector<std::uint32_t> Simulation::push_content(std::uint32_t video, std::uint32_t k,
                                                    PushStrategy strategy, std::uint64_t seed) {
    if (video >= catalog_size_) {
        throw std::invalid_argument("push_content: invalid video id");
    }
    if (k > homeboxes_.size()) {
        throw std::invalid_argument("push_content: k exceeds the homebox count");
    }

    std::vector<std::uint32_t> selected;
    selected.reserve(k);
    if (strategy == PushStrategy::kRandom) {
        std::vector<std::uint32_t> ids(homeboxes_.size());
        for (std::size_t i = 0; i < ids.size(); ++i) {
            ids[i] = static_cast<std::uint32_t>(i);
        }
        Rng rng(seed);
        for (std::uint32_t i = 0; i < k; ++i) {
            const std::uint64_t j = i + rng.below(ids.size() - i);
            std::swap(ids[i], ids[j]);
            selected.push_back(ids[i]);
        }
    } else {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> by_degree;  // (degree, id)
        by_degree.reserve(homeboxes_.size());
        for (const HomeBox& hb : homeboxes_) {
            by_degree.emplace_back(topo_.degree(hb.router), hb.id);
        }
        std::sort(by_degree.begin(), by_degree.end(),
                  [](const auto& a, const auto& b) {
                      return a.first != b.first ? a.first > b.first : a.second < b.second;
                  });
        for (std::uint32_t i = 0; i < k; ++i) {
            selected.push_back(by_degree[i].second);
        }
    }

    for (const std::uint32_t id : selected) {
        homeboxes_[id].cache.insert(video);
    }
    return selected;
}

RunResult run(const SimConfig& config) {
    config.validate();

    Topology topo =
        config.topology.kind == TopologySource::Kind::kGenerated
            ? Topology::generate_power_law(config.topology.n_routers,
                                           config.topology.edges_per_new_node,
                                           derive_stream(config.seed, stream_tag::kTopology))
            : Topology::load_edge_list_file(config.topology.path);

    const PopularityModel model =
        config.popularity.kind == PopularitySpec::Kind::kZipf
            ? PopularityModel::zipf(config.catalog_size, config.popularity.alpha)
            : PopularityModel::load_counts_file(config.popularity.path);
    const std::uint32_t catalog_size = model.catalog_size();

    std::vector<HomeBox> homeboxes = place_homeboxes(
        topo, config.n_hbs, config.cache_size, derive_stream(config.seed, stream_tag::kPlacement));
    build_neighbor_lists(topo, homeboxes, config.degree);

    const double h_miss =
        config.h_miss_override.value_or(static_cast<double>(topo.estimate_radius(
            kRadiusSampleSize, derive_stream(config.seed, stream_tag::kRadius))));

    Simulation sim(topo, std::move(homeboxes), catalog_size, h_miss, config.rank_weights,
                   config.cpu_threshold, config.access_threshold);

    if (config.push.has_value()) {
        const std::uint64_t push_root = derive_stream(config.seed, stream_tag::kPush);
        for (const std::uint32_t video : config.push->videos) {
            sim.push_content(video, config.push->k, config.push->strategy,
                             derive_stream(push_root, video));
        }
    }

    RequestGenerator generator(model, config.n_hbs,
                               derive_stream(config.seed, stream_tag::kWorkload));

    RunResult result;
    result.warmup_requests =
        static_cast<std::uint64_t>(config.warmup_fraction * static_cast<double>(config.n_requests));
    if (config.log_outcomes) {
        result.trace.reserve(config.n_requests);
    }

    RunMetrics& metrics = result.metrics;
    metrics.h_miss = h_miss;
    for (std::uint64_t i = 0; i < config.n_requests; ++i) {
        const Request request = generator.next();
        const ServeOutcome outcome = sim.serve_request(request);
        if (i >= result.warmup_requests) {
            ++metrics.n_requests;
            switch (outcome.kind) {
                case ServeKind::kLocal:
                    ++metrics.n_local;
                    break;
                case ServeKind::kPeering:
                    ++metrics.n_peering;
                    metrics.sum_peering_hops += static_cast<std::uint64_t>(outcome.hops);
                    break;
                case ServeKind::kMiss:
                    ++metrics.n_miss;
                    break;
            }
        }
        if (config.log_outcomes) {
            result.trace.push_back(OutcomeRecord{
                .sequence = request.sequence,
                .requester = request.requester,
                .video = request.video,
                .kind = outcome.kind,
                .server = outcome.server,
                .hops = outcome.hops,
            });
        }
    }
    metrics.finalize();
    return result;
}

}  // namespace hbsim
