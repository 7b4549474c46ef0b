#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hbsim/engine.hpp"

namespace hbsim {

struct TopologySource {
    enum class Kind { kGenerated, kFile };
    Kind kind = Kind::kGenerated;
    std::uint32_t n_routers = 47000;
    std::uint32_t edges_per_new_node = 3;
    std::string path;

    bool operator==(const TopologySource&) const = default;
};

struct PopularitySpec {
    enum class Kind { kZipf, kEmpirical };
    Kind kind = Kind::kZipf;
    double alpha = 0.8;
    std::string path;

    bool operator==(const PopularitySpec&) const = default;
};

struct PushSpec {
    std::vector<std::uint32_t> videos;
    std::uint32_t k = 0;
    PushStrategy strategy = PushStrategy::kRandom;

    bool operator==(const PushSpec&) const = default;
};

// Full description of one simulation run. Every randomized phase derives its
// own stream from `seed` (see rng.hpp), so a SimConfig value pins the result
// exactly.
struct SimConfig {
    std::uint64_t seed = 1;
    TopologySource topology;
    std::uint32_t n_hbs = 5000;
    std::uint32_t catalog_size = 500;
    PopularitySpec popularity;
    std::uint32_t degree = 25;
    std::uint32_t cache_size = 10;
    std::uint64_t n_requests = 1'000'000;
    double warmup_fraction = 0.0;   // floor(warmup_fraction * n_requests) requests
                                    // run unmeasured before counters start
    std::optional<double> h_miss_override;  // default: estimated topology radius
    std::array<double, 5> rank_weights{1, 0, 0, 0, 0};
    double cpu_threshold = 1.0;     // 1.0 disables resource-based filtering
    double access_threshold = 1.0;
    std::optional<PushSpec> push;
    bool log_outcomes = false;

    // Throws std::invalid_argument naming the violated invariant.
    void validate() const;

    bool operator==(const SimConfig&) const = default;
};

// Parses a JSON configuration document. An empty document yields all
// defaults; unknown or ill-typed keys raise errors naming the key path.
SimConfig parse_config(std::string_view text);
SimConfig load_config_file(const std::string& path);

// Canonical JSON form; parse(serialize(c)) == c.
std::string serialize_config(const SimConfig& config);

enum class SweepAxis { kDegree, kCacheSize };

const char* axis_name(SweepAxis axis);

// A one-dimensional parameter sweep: the base config rerun at each axis
// value, `repetitions` times with distinct derived seeds.
struct SweepSpec {
    SimConfig base;
    SweepAxis axis = SweepAxis::kDegree;
    std::vector<std::uint64_t> values;  // strictly ascending
    std::uint32_t repetitions = 1;

    void validate() const;

    bool operator==(const SweepSpec&) const = default;
};

SweepSpec parse_sweep(std::string_view text);
SweepSpec load_sweep_file(const std::string& path);
std::string serialize_sweep(const SweepSpec& spec);

}  // namespace hbsim
