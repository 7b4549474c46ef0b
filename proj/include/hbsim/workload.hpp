#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hbsim/rng.hpp"

namespace hbsim {

// Per-video request probabilities over a catalog, sorted non-increasing so
// video 0 is always the most popular title.
struct PopularityModel {
    std::vector<double> probabilities;

    std::uint32_t catalog_size() const { return static_cast<std::uint32_t>(probabilities.size()); }

    // Zipf: probabilities[i] = (i+1)^-alpha / sum_{j=1..c} j^-alpha.
    // alpha = 0 degenerates to the uniform distribution.
    static PopularityModel zipf(std::uint32_t catalog_size, double alpha);

    // Empirical popularity from raw request counts: zero-count entries are
    // dropped, the rest sorted descending and normalized.
    static PopularityModel from_counts(std::span<const std::uint64_t> counts);

    // Counts file: one non-negative integer per line, '#' comments ignored.
    static PopularityModel load_counts(std::string_view text);
    static PopularityModel load_counts_file(const std::string& path);

    // Throws std::runtime_error if the distribution invariants are broken
    // (normalization, positivity, non-increasing order).
    void validate() const;
};

struct Request {
    std::uint64_t sequence = 0;
    std::uint32_t requester = 0;
    std::uint32_t video = 0;
};

// Draws the randomized request stream: requester uniform over HB ids, video
// by inverse-CDF over the popularity model. Each call draws the requester
// first, then the video, so streams are reproducible from the seed alone.
class RequestGenerator {
public:
    RequestGenerator(const PopularityModel& model, std::uint32_t n_homeboxes, std::uint64_t seed);

    Request next();

private:
    std::vector<double> cdf_;
    std::uint32_t n_homeboxes_;
    std::uint64_t sequence_ = 0;
    Rng rng_;
};

}  // namespace hbsim
