// Acceptance suite: one pass/fail line per criterion, exit code 0 only when
// everything holds. Each criterion states its own scale and tolerances in
// code; runtimes are checked where a bound applies.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hbsim/config.hpp"
#include "hbsim/engine.hpp"
#include "hbsim/overlay.hpp"
#include "hbsim/rng.hpp"
#include "hbsim/sweep.hpp"
#include "hbsim/topology.hpp"
#include "hbsim/workload.hpp"

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"

using namespace hbsim;

namespace {

struct Checker {
    std::vector<std::string> failures;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            failures.push_back(what);
        }
    }
    void note(const std::string& line) { notes.push_back(line); }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---- shared fixtures -------------------------------------------------------

// Degree-trend base: the scale pinned by the hit-ratio criterion.
SimConfig trend_base() {
    SimConfig config;
    config.seed = 20240801;
    config.topology = {.kind = TopologySource::Kind::kGenerated,
                       .n_routers = 8000,
                       .edges_per_new_node = 2,
                       .path = ""};
    config.n_hbs = 1000;
    config.catalog_size = 500;
    config.popularity = {.kind = PopularitySpec::Kind::kZipf, .alpha = 0.8, .path = ""};
    config.cache_size = 10;
    config.n_requests = 500'000;
    return config;
}

struct TrendPoint {
    RunMetrics metrics;
    double seconds = 0.0;
};

// One run per degree with the seed held fixed: topology, placement and the
// request stream are identical across points, only the neighbor lists change.
std::map<std::uint32_t, TrendPoint> degree_scan(const SimConfig& base,
                                                const std::vector<std::uint32_t>& degrees) {
    std::map<std::uint32_t, TrendPoint> points;
    for (const std::uint32_t d : degrees) {
        SimConfig config = base;
        config.degree = d;
        const auto start = std::chrono::steady_clock::now();
        points[d] = TrendPoint{.metrics = run(config).metrics, .seconds = seconds_since(start)};
    }
    return points;
}

// ---- criteria --------------------------------------------------------------

void criterion_lru_oracle(Checker& check) {
    const auto start = std::chrono::steady_clock::now();
    for (const std::uint32_t capacity : {1u, 2u, 4u, 8u}) {
        LruCache cache(capacity);
        oracle::ReferenceLru reference(capacity);
        Rng rng(555 + capacity);
        for (int op = 0; op < 10'000; ++op) {
            const auto video = static_cast<std::uint32_t>(rng.below(24));
            if (rng.below(2) == 0) {
                const bool hit = cache.lookup(video);
                const bool expected = reference.lookup(video);
                check.require(hit == expected, "lookup trace diverged at capacity " +
                                                   std::to_string(capacity));
            } else {
                const auto evicted = cache.insert(video);
                const auto expected = reference.insert(video);
                check.require(evicted == expected, "evict trace diverged at capacity " +
                                                       std::to_string(capacity));
            }
        }
        check.require(cache.entries() == reference.entries(),
                      "final recency order diverged at capacity " + std::to_string(capacity));
    }
    const double elapsed = seconds_since(start);
    check.note("4 capacities x 10000 ops in " + format_double(elapsed) + "s");
    check.require(elapsed < 1.0, "runtime bound (1 s) exceeded");
}

void criterion_distance_oracle(Checker& check) {
    const auto start = std::chrono::steady_clock::now();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const auto n = static_cast<std::uint32_t>(4 + rng.below(47));  // up to 50 nodes
        const auto m = static_cast<std::uint32_t>(1 + rng.below(3));
        const Topology topo = Topology::generate_power_law(n, std::min(m, n - 1), rng.next_u64());
        const auto dist = oracle::floyd_warshall(topo);
        for (std::uint32_t a = 0; a < n; ++a) {
            for (std::uint32_t b = 0; b < n; ++b) {
                if (topo.hop_count(a, b) != dist[a][b]) {
                    check.require(false, "hop_count mismatch on graph seed " +
                                             std::to_string(seed));
                    a = b = n;  // stop scanning this graph
                    break;
                }
            }
        }
        check.require(topo.estimate_radius(topo.node_count(), seed) ==
                          oracle::radius_from_all_pairs(dist),
                      "full-sample radius mismatch on graph seed " + std::to_string(seed));
    }
    const double elapsed = seconds_since(start);
    check.note("20 graphs, all pairs + radius in " + format_double(elapsed) + "s");
    check.require(elapsed < 5.0, "runtime bound (5 s) exceeded");
}

void check_identities(Checker& check, const RunMetrics& m, const std::string& label) {
    check.require(m.n_local + m.n_peering + m.n_miss == m.n_requests,
                  label + ": counts do not partition N");
    check.require(m.r_local + m.r_peering + m.r_miss == 1.0,
                  label + ": ratios do not sum to exactly 1");
    check.require(m.avg_cost == overall_cost(m),
                  label + ": avg_cost does not recompute from the row");
}

void criterion_accounting(Checker& check) {
    SimConfig config;
    config.seed = 31337;
    config.topology = {.kind = TopologySource::Kind::kGenerated,
                       .n_routers = 1500,
                       .edges_per_new_node = 2,
                       .path = ""};
    config.n_hbs = 250;
    config.catalog_size = 150;
    config.degree = 12;
    config.cache_size = 8;
    config.n_requests = 40'000;
    config.h_miss_override = 5.5;
    config.log_outcomes = true;

    const RunResult logged = run(config);
    check_identities(check, logged.metrics, "logged run");

    double trace_sum = 0.0;
    for (const OutcomeRecord& rec : logged.trace) {
        trace_sum += rec.hops;
    }
    const double trace_mean = trace_sum / static_cast<double>(logged.trace.size());
    check.require(std::fabs(logged.metrics.avg_cost - trace_mean) <= 1e-12,
                  "avg_cost differs from the trace mean");
    check.note("avg_cost " + format_double(logged.metrics.avg_cost) + ", trace mean " +
               format_double(trace_mean));

    SimConfig no_peers = config;
    no_peers.degree = 0;
    no_peers.log_outcomes = false;
    no_peers.h_miss_override.reset();
    check_identities(check, run(no_peers).metrics, "degree-zero run");

    // identities must also survive the emitted CSV text
    SweepSpec spec;
    spec.base = config;
    spec.base.log_outcomes = false;
    spec.axis = SweepAxis::kDegree;
    spec.values = {6, 12};
    spec.repetitions = 2;
    const std::string csv = results_csv(run_sweep(spec, 2));
    const SweepTable parsed = parse_results_csv(csv);
    check.require(parsed.rows.size() == 4, "sweep row count");
    for (const SweepRow& row : parsed.rows) {
        check_identities(check, row.metrics, "csv row axis=" + std::to_string(row.axis_value));
    }
}

void criterion_degenerate(Checker& check) {
    const auto start = std::chrono::steady_clock::now();

    SimConfig config;
    config.seed = 4242;
    config.topology = {.kind = TopologySource::Kind::kGenerated,
                       .n_routers = 2000,
                       .edges_per_new_node = 2,
                       .path = ""};
    config.n_hbs = 200;
    config.catalog_size = 100;
    config.n_requests = 50'000;

    SimConfig no_peers = config;
    no_peers.degree = 0;
    no_peers.cache_size = 10;
    const RunMetrics d0 = run(no_peers).metrics;
    check.require(d0.r_peering == 0.0, "degree 0 produced peering hits");
    check.require(d0.n_peering == 0, "degree 0 produced peering counts");

    SimConfig full = config;
    full.degree = 25;
    full.cache_size = config.catalog_size;  // s >= c: no evictions ever
    full.warmup_fraction = 0.5;
    const RunMetrics warm = run(full).metrics;
    check.require(warm.r_miss < 0.01, "post-warmup miss ratio " + format_double(warm.r_miss) +
                                          " >= 0.01");
    check.note("s>=c post-warmup miss ratio " + format_double(warm.r_miss));

    const double elapsed = seconds_since(start);
    check.note("both runs in " + format_double(elapsed) + "s");
    check.require(elapsed < 5.0, "runtime bound (5 s) exceeded");
}

void criterion_hit_ratio_trend(Checker& check,
                               const std::map<std::uint32_t, TrendPoint>& points) {
    double elapsed = 0.0;
    std::vector<double> totals;
    for (const std::uint32_t d : {5u, 10u, 20u, 40u}) {
        const TrendPoint& p = points.at(d);
        totals.push_back(p.metrics.r_local + p.metrics.r_peering);
        elapsed += p.seconds;
        check.note("d=" + std::to_string(d) + " total hit " + format_double(totals.back()));
    }
    for (std::size_t i = 1; i < totals.size(); ++i) {
        check.require(totals[i] >= totals[i - 1], "total hit ratio decreased along d");
    }
    check.require(totals.back() - totals.front() >= 0.15,
                  "hit-ratio spread " + format_double(totals.back() - totals.front()) +
                      " < 0.15");
    check.note("4 runs of N=500000 in " + format_double(elapsed) + "s");
    check.require(elapsed < 60.0, "runtime bound (60 s) exceeded");
}

void criterion_network_awareness(Checker& check,
                                 const std::map<std::uint32_t, TrendPoint>& points) {
    double previous = -1.0;
    for (const std::uint32_t d : {5u, 10u, 20u, 40u}) {
        const double h = points.at(d).metrics.h_peering;
        check.note("d=" + std::to_string(d) + " h_peering " + format_double(h));
        check.require(h >= previous, "h_peering decreased along d");
        previous = h;
    }
}

void criterion_interior_minimum(Checker& check, const std::string& map_path) {
    SimConfig config;
    config.seed = 20240801;
    config.topology = {.kind = TopologySource::Kind::kFile,
                       .n_routers = 0,
                       .edges_per_new_node = 0,
                       .path = map_path};
    config.n_hbs = 100;
    config.catalog_size = 500;
    config.cache_size = 10;
    config.n_requests = 200'000;
    // h_miss stays at its default: the topology's estimated radius

    const std::vector<std::uint32_t> degrees{5, 10, 15, 20, 25, 30, 40, 50, 60};
    const auto points = degree_scan(config, degrees);

    double min_cost = points.at(degrees.front()).metrics.avg_cost;
    std::uint32_t argmin = degrees.front();
    for (const std::uint32_t d : degrees) {
        const double cost = points.at(d).metrics.avg_cost;
        check.note("d=" + std::to_string(d) + " avg_cost " + format_double(cost));
        if (cost < min_cost) {
            min_cost = cost;
            argmin = d;
        }
    }
    const double first = points.at(degrees.front()).metrics.avg_cost;
    const double last = points.at(degrees.back()).metrics.avg_cost;
    check.require(argmin != degrees.front() && argmin != degrees.back(),
                  "argmin " + std::to_string(argmin) + " is not interior");
    check.require(min_cost < first && min_cost < last, "minimum does not beat both endpoints");
    check.note("argmin degree " + std::to_string(argmin) + ", cost " + format_double(min_cost) +
               " vs endpoints " + format_double(first) + " / " + format_double(last));
    check.note("h_miss (estimated radius) " +
               format_double(points.at(degrees.front()).metrics.h_miss));
}

void criterion_determinism(Checker& check) {
    SweepSpec spec;
    spec.base.seed = 99;
    spec.base.topology = {.kind = TopologySource::Kind::kGenerated,
                          .n_routers = 1200,
                          .edges_per_new_node = 2,
                          .path = ""};
    spec.base.n_hbs = 150;
    spec.base.catalog_size = 120;
    spec.base.cache_size = 6;
    spec.base.n_requests = 30'000;
    spec.axis = SweepAxis::kDegree;
    spec.values = {4, 8, 16};
    spec.repetitions = 2;

    const std::string serial = results_csv(run_sweep(spec, 1));
    const std::string parallel = results_csv(run_sweep(spec, 8));
    const std::string again = results_csv(run_sweep(spec, 8));
    check.require(serial == parallel, "results differ between 1 and 8 workers");
    check.require(parallel == again, "repeated 8-worker sweep is not reproducible");
    check.note(std::to_string(spec.values.size() * spec.repetitions) +
               " rows byte-identical across worker counts");
}

void criterion_push(Checker& check) {
    SimConfig config;
    config.seed = 777;
    config.topology = {.kind = TopologySource::Kind::kGenerated,
                       .n_routers = 2000,
                       .edges_per_new_node = 2,
                       .path = ""};
    config.n_hbs = 500;
    config.catalog_size = 100;
    config.degree = 25;
    config.cache_size = 10;
    config.n_requests = 50'000;
    config.log_outcomes = true;

    const auto misses_of_top_video = [](const RunResult& result) {
        std::uint64_t count = 0;
        for (const OutcomeRecord& rec : result.trace) {
            if (rec.kind == ServeKind::kMiss && rec.video == 0) {
                ++count;
            }
        }
        return count;
    };

    const std::uint64_t unpushed = misses_of_top_video(run(config));
    config.push = PushSpec{.videos = {0},
                           .k = config.n_hbs / 10,
                           .strategy = PushStrategy::kTopDegree};
    const std::uint64_t pushed = misses_of_top_video(run(config));
    check.note("origin misses of the top video: " + std::to_string(unpushed) +
               " unpushed, " + std::to_string(pushed) + " pushed");
    check.require(pushed < unpushed, "push did not strictly reduce origin misses");
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<void(Checker&)> body;
    };

    // shared degree scan for the two trend criteria (fixed seed, d varies)
    std::map<std::uint32_t, TrendPoint> trend_points;
    const auto ensure_trend = [&trend_points] {
        if (trend_points.empty()) {
            trend_points = degree_scan(trend_base(), {5, 10, 20, 40});
        }
    };
    std::string regional_map_path;

    const std::vector<Criterion> criteria{
        {1, "lru-oracle-equivalence", criterion_lru_oracle},
        {2, "distance-oracle", criterion_distance_oracle},
        {3, "accounting-identities", criterion_accounting},
        {4, "degenerate-contracts", criterion_degenerate},
        {5, "hit-ratio-trend",
         [&](Checker& check) {
             ensure_trend();
             criterion_hit_ratio_trend(check, trend_points);
         }},
        {6, "network-awareness-trend",
         [&](Checker& check) {
             ensure_trend();
             criterion_network_awareness(check, trend_points);
         }},
        {7, "interior-cost-minimum",
         [&](Checker& check) {
             if (regional_map_path.empty()) {
                 regional_map_path = fixtures::write_regional_map("hbsim_acceptance_regional_map.txt");
             }
             criterion_interior_minimum(check, regional_map_path);
         }},
        {8, "determinism-and-parallel-safety", criterion_determinism},
        {9, "push-efficacy", criterion_push},
    };

    int failed = 0;
    for (const Criterion& criterion : criteria) {
        Checker check;
        const auto start = std::chrono::steady_clock::now();
        try {
            criterion.body(check);
        } catch (const std::exception& e) {
            check.require(false, std::string("exception: ") + e.what());
        }
        const double elapsed = seconds_since(start);
        const bool ok = check.failures.empty();
        failed += ok ? 0 : 1;
        std::printf("[%s] %d %s (%.2fs)\n", ok ? "PASS" : "FAIL", criterion.id, criterion.name,
                    elapsed);
        for (const std::string& line : check.notes) {
            std::printf("         %s\n", line.c_str());
        }
        for (const std::string& line : check.failures) {
            std::printf("    !    %s\n", line.c_str());
        }
    }

    std::printf("%zu criteria, %zu passed, %d failed\n", criteria.size(),
                criteria.size() - failed, failed);
    return failed == 0 ? 0 : 1;
}
