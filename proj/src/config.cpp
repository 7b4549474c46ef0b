#include "hbsim/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hbsim {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw std::runtime_error("config key '" + path + "': " + message);
}

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) {
        fail(path, "expected an object");
    }
}

void reject_unknown_keys(const json& j, const std::string& path,
                         std::initializer_list<const char*> known) {
    for (const auto& [key, value] : j.items()) {
        if (std::find_if(known.begin(), known.end(),
                         [&key](const char* k) { return key == k; }) == known.end()) {
            fail(path.empty() ? key : path + "." + key, "unknown key");
        }
    }
}

std::uint64_t get_u64(const json& j, const std::string& path) {
    if (!j.is_number_unsigned()) {
        fail(path, "expected a non-negative integer");
    }
    return j.get<std::uint64_t>();
}

std::uint32_t get_u32(const json& j, const std::string& path) {
    const std::uint64_t value = get_u64(j, path);
    if (value > 0xFFFFFFFFull) {
        fail(path, "value does not fit in 32 bits");
    }
    return static_cast<std::uint32_t>(value);
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) {
        fail(path, "expected a number");
    }
    return j.get<double>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) {
        fail(path, "expected a string");
    }
    return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) {
        fail(path, "expected a boolean");
    }
    return j.get<bool>();
}

TopologySource parse_topology(const json& j) {
    expect_object(j, "topology");
    TopologySource source;
    const std::string type = j.contains("type") ? get_string(j.at("type"), "topology.type")
                                                : std::string("generated");
    if (type == "generated") {
        reject_unknown_keys(j, "topology", {"type", "n_routers", "edges_per_new_node"});
        source.kind = TopologySource::Kind::kGenerated;
        if (j.contains("n_routers")) {
            source.n_routers = get_u32(j.at("n_routers"), "topology.n_routers");
        }
        if (j.contains("edges_per_new_node")) {
            source.edges_per_new_node =
                get_u32(j.at("edges_per_new_node"), "topology.edges_per_new_node");
        }
    } else if (type == "file") {
        reject_unknown_keys(j, "topology", {"type", "path"});
        source.kind = TopologySource::Kind::kFile;
        if (!j.contains("path")) {
            fail("topology.path", "required for file topologies");
        }
        source.path = get_string(j.at("path"), "topology.path");
    } else {
        fail("topology.type", "expected \"generated\" or \"file\"");
    }
    return source;
}

PopularitySpec parse_popularity(const json& j) {
    expect_object(j, "popularity");
    PopularitySpec spec;
    const std::string type =
        j.contains("type") ? get_string(j.at("type"), "popularity.type") : std::string("zipf");
    if (type == "zipf") {
        reject_unknown_keys(j, "popularity", {"type", "alpha"});
        spec.kind = PopularitySpec::Kind::kZipf;
        if (j.contains("alpha")) {
            spec.alpha = get_number(j.at("alpha"), "popularity.alpha");
        }
    } else if (type == "empirical") {
        reject_unknown_keys(j, "popularity", {"type", "path"});
        spec.kind = PopularitySpec::Kind::kEmpirical;
        if (!j.contains("path")) {
            fail("popularity.path", "required for empirical popularity");
        }
        spec.path = get_string(j.at("path"), "popularity.path");
    } else {
        fail("popularity.type", "expected \"zipf\" or \"empirical\"");
    }
    return spec;
}

PushSpec parse_push(const json& j) {
    expect_object(j, "push");
    reject_unknown_keys(j, "push", {"videos", "k", "strategy"});
    PushSpec push;
    if (!j.contains("videos") || !j.at("videos").is_array()) {
        fail("push.videos", "expected an array of video ids");
    }
    for (std::size_t i = 0; i < j.at("videos").size(); ++i) {
        push.videos.push_back(
            get_u32(j.at("videos")[i], "push.videos[" + std::to_string(i) + "]"));
    }
    if (!j.contains("k")) {
        fail("push.k", "required");
    }
    push.k = get_u32(j.at("k"), "push.k");
    const std::string strategy = j.contains("strategy")
                                     ? get_string(j.at("strategy"), "push.strategy")
                                     : std::string("random");
    if (strategy == "random") {
        push.strategy = PushStrategy::kRandom;
    } else if (strategy == "top-degree") {
        push.strategy = PushStrategy::kTopDegree;
    } else {
        fail("push.strategy", "expected \"random\" or \"top-degree\"");
    }
    return push;
}

json parse_document(std::string_view text) {
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return json::object();  // empty document = all defaults
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("config parse error: ") + e.what());
    }
}

SimConfig config_from_json(const json& j) {
    expect_object(j, "<root>");
    reject_unknown_keys(j, "",
                        {"seed", "topology", "n_hbs", "catalog_size", "popularity", "degree",
                         "cache_size", "n_requests", "warmup_fraction", "h_miss_override",
                         "rank_weights", "resource_thresholds", "push", "log_outcomes"});

    SimConfig config;
    if (j.contains("seed")) {
        config.seed = get_u64(j.at("seed"), "seed");
    }
    if (j.contains("topology")) {
        config.topology = parse_topology(j.at("topology"));
    }
    if (j.contains("n_hbs")) {
        config.n_hbs = get_u32(j.at("n_hbs"), "n_hbs");
    }
    if (j.contains("catalog_size")) {
        config.catalog_size = get_u32(j.at("catalog_size"), "catalog_size");
    }
    if (j.contains("popularity")) {
        config.popularity = parse_popularity(j.at("popularity"));
    }
    if (j.contains("degree")) {
        config.degree = get_u32(j.at("degree"), "degree");
    }
    if (j.contains("cache_size")) {
        config.cache_size = get_u32(j.at("cache_size"), "cache_size");
    }
    if (j.contains("n_requests")) {
        config.n_requests = get_u64(j.at("n_requests"), "n_requests");
    }
    if (j.contains("warmup_fraction")) {
        config.warmup_fraction = get_number(j.at("warmup_fraction"), "warmup_fraction");
    }
    if (j.contains("h_miss_override") && !j.at("h_miss_override").is_null()) {
        config.h_miss_override = get_number(j.at("h_miss_override"), "h_miss_override");
    }
    if (j.contains("rank_weights")) {
        const json& weights = j.at("rank_weights");
        if (!weights.is_array() || weights.size() != 5) {
            fail("rank_weights", "expected an array of 5 numbers");
        }
        for (std::size_t i = 0; i < 5; ++i) {
            config.rank_weights[i] =
                get_number(weights[i], "rank_weights[" + std::to_string(i) + "]");
        }
    }
    if (j.contains("resource_thresholds")) {
        const json& thresholds = j.at("resource_thresholds");
        expect_object(thresholds, "resource_thresholds");
        reject_unknown_keys(thresholds, "resource_thresholds", {"cpu", "access"});
        if (thresholds.contains("cpu")) {
            config.cpu_threshold = get_number(thresholds.at("cpu"), "resource_thresholds.cpu");
        }
        if (thresholds.contains("access")) {
            config.access_threshold =
                get_number(thresholds.at("access"), "resource_thresholds.access");
        }
    }
    if (j.contains("push") && !j.at("push").is_null()) {
        config.push = parse_push(j.at("push"));
    }
    if (j.contains("log_outcomes")) {
        config.log_outcomes = get_bool(j.at("log_outcomes"), "log_outcomes");
    }

    config.validate();
    return config;
}

ordered_json config_to_json(const SimConfig& config) {
    ordered_json j;
    j["seed"] = config.seed;
    if (config.topology.kind == TopologySource::Kind::kGenerated) {
        j["topology"] = {{"type", "generated"},
                         {"n_routers", config.topology.n_routers},
                         {"edges_per_new_node", config.topology.edges_per_new_node}};
    } else {
        j["topology"] = {{"type", "file"}, {"path", config.topology.path}};
    }
    j["n_hbs"] = config.n_hbs;
    j["catalog_size"] = config.catalog_size;
    if (config.popularity.kind == PopularitySpec::Kind::kZipf) {
        j["popularity"] = {{"type", "zipf"}, {"alpha", config.popularity.alpha}};
    } else {
        j["popularity"] = {{"type", "empirical"}, {"path", config.popularity.path}};
    }
    j["degree"] = config.degree;
    j["cache_size"] = config.cache_size;
    j["n_requests"] = config.n_requests;
    j["warmup_fraction"] = config.warmup_fraction;
    if (config.h_miss_override.has_value()) {
        j["h_miss_override"] = *config.h_miss_override;
    } else {
        j["h_miss_override"] = nullptr;
    }
    j["rank_weights"] = config.rank_weights;
    j["resource_thresholds"] = {{"cpu", config.cpu_threshold},
                                {"access", config.access_threshold}};
    if (config.push.has_value()) {
        j["push"] = {{"videos", config.push->videos},
                     {"k", config.push->k},
                     {"strategy",
                      config.push->strategy == PushStrategy::kRandom ? "random" : "top-degree"}};
    } else {
        j["push"] = nullptr;
    }
    j["log_outcomes"] = config.log_outcomes;
    return j;
}

}  // namespace

void SimConfig::validate() const {
    const auto check = [](bool ok, const char* message) {
        if (!ok) {
            throw std::invalid_argument(std::string("config: ") + message);
        }
    };
    check(n_hbs >= 1, "n_hbs must be >= 1");
    check(catalog_size >= 1, "catalog_size must be >= 1");
    check(degree < n_hbs, "degree must be < n_hbs");
    check(cache_size >= 1, "cache_size must be >= 1");
    check(n_requests >= 1, "n_requests must be >= 1");
    check(warmup_fraction >= 0.0 && warmup_fraction < 1.0, "warmup_fraction must be in [0, 1)");
    if (h_miss_override.has_value()) {
        check(*h_miss_override > 0.0, "h_miss_override must be positive");
    }
    bool any_weight = false;
    for (const double w : rank_weights) {
        check(w >= 0.0, "rank_weights must be non-negative");
        any_weight = any_weight || w > 0.0;
    }
    check(any_weight, "rank_weights must not all be zero");
    check(cpu_threshold >= 0.0 && cpu_threshold <= 1.0,
          "resource_thresholds.cpu must be in [0, 1]");
    check(access_threshold >= 0.0 && access_threshold <= 1.0,
          "resource_thresholds.access must be in [0, 1]");
    if (topology.kind == TopologySource::Kind::kGenerated) {
        check(topology.edges_per_new_node >= 1, "topology.edges_per_new_node must be >= 1");
        check(static_cast<std::uint64_t>(topology.n_routers) >=
                  static_cast<std::uint64_t>(topology.edges_per_new_node) + 1,
              "topology.n_routers must be >= edges_per_new_node + 1");
    } else {
        check(!topology.path.empty(), "topology.path must not be empty");
    }
    if (popularity.kind == PopularitySpec::Kind::kZipf) {
        check(popularity.alpha >= 0.0, "popularity.alpha must be non-negative");
    } else {
        check(!popularity.path.empty(), "popularity.path must not be empty");
    }
    if (push.has_value()) {
        check(!push->videos.empty(), "push.videos must not be empty");
        check(push->k <= n_hbs, "push.k must be <= n_hbs");
    }
}

SimConfig parse_config(std::string_view text) {
    return config_from_json(parse_document(text));
}

SimConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string serialize_config(const SimConfig& config) {
    return config_to_json(config).dump(2) + "\n";
}

const char* axis_name(SweepAxis axis) {
    return axis == SweepAxis::kDegree ? "degree" : "cache_size";
}

void SweepSpec::validate() const {
    base.validate();
    if (values.empty()) {
        throw std::invalid_argument("sweep: values must not be empty");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] > 0xFFFFFFFFull) {
            throw std::invalid_argument("sweep: axis value does not fit in 32 bits");
        }
        if (i > 0 && values[i] <= values[i - 1]) {
            throw std::invalid_argument("sweep: values must be strictly ascending");
        }
    }
    if (repetitions < 1) {
        throw std::invalid_argument("sweep: repetitions must be >= 1");
    }
}

SweepSpec parse_sweep(std::string_view text) {
    const json j = parse_document(text);
    expect_object(j, "<root>");
    reject_unknown_keys(j, "", {"base", "axis", "values", "repetitions"});

    SweepSpec spec;
    if (j.contains("base")) {
        spec.base = config_from_json(j.at("base"));
    }
    if (j.contains("axis")) {
        const std::string axis = get_string(j.at("axis"), "axis");
        if (axis == "degree") {
            spec.axis = SweepAxis::kDegree;
        } else if (axis == "cache_size") {
            spec.axis = SweepAxis::kCacheSize;
        } else {
            fail("axis", "expected \"degree\" or \"cache_size\"");
        }
    }
    if (!j.contains("values") || !j.at("values").is_array()) {
        fail("values", "expected an array of axis values");
    }
    for (std::size_t i = 0; i < j.at("values").size(); ++i) {
        spec.values.push_back(get_u64(j.at("values")[i], "values[" + std::to_string(i) + "]"));
    }
    if (j.contains("repetitions")) {
        spec.repetitions = get_u32(j.at("repetitions"), "repetitions");
    }
    spec.validate();
    return spec;
}

SweepSpec load_sweep_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open sweep file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_sweep(buffer.str());
}

std::string serialize_sweep(const SweepSpec& spec) {
    ordered_json j;
    j["base"] = config_to_json(spec.base);
    j["axis"] = axis_name(spec.axis);
    j["values"] = spec.values;
    j["repetitions"] = spec.repetitions;
    return j.dump(2) + "\n";
}

}  // namespace hbsim
