#include "hbsim/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hbsim {

PopularityModel PopularityModel::zipf(std::uint32_t catalog_size, double alpha) {
    if (catalog_size < 1) {
        throw std::invalid_argument("zipf: catalog_size must be >= 1");
    }
    if (!(alpha >= 0.0)) {
        throw std::invalid_argument("zipf: alpha must be non-negative");
    }

    // Sum the harmonic normalizer in extended precision; the per-video
    // probabilities are then rounded to double once.
    long double normalizer = 0.0L;
    for (std::uint32_t j = 1; j <= catalog_size; ++j) {
        normalizer += powl(static_cast<long double>(j), -static_cast<long double>(alpha));
    }

    PopularityModel model;
    model.probabilities.reserve(catalog_size);
    for (std::uint32_t i = 0; i < catalog_size; ++i) {
        const long double p =
            powl(static_cast<long double>(i + 1), -static_cast<long double>(alpha)) / normalizer;
        model.probabilities.push_back(static_cast<double>(p));
    }
    return model;
}

PopularityModel PopularityModel::from_counts(std::span<const std::uint64_t> counts) {
    std::vector<std::uint64_t> positive;
    positive.reserve(counts.size());
    long double total = 0.0L;
    for (const std::uint64_t count : counts) {
        if (count > 0) {
            positive.push_back(count);
            total += static_cast<long double>(count);
        }
    }
    if (positive.empty()) {
        throw std::invalid_argument("from_counts: at least one count must be positive");
    }
    std::sort(positive.begin(), positive.end(), std::greater<>());

    PopularityModel model;
    model.probabilities.reserve(positive.size());
    for (const std::uint64_t count : positive) {
        model.probabilities.push_back(static_cast<double>(count / total));
    }
    return model;
}

PopularityModel PopularityModel::load_counts(std::string_view text) {
    std::vector<std::uint64_t> counts;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        const std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string_view::npos || line[first] == '#') {
            continue;
        }
        std::uint64_t value = 0;
        const auto [ptr, ec] =
            std::from_chars(line.data() + first, line.data() + line.size(), value);
        if (ec != std::errc{} ||
            line.find_first_not_of(" \t", static_cast<std::size_t>(ptr - line.data())) !=
                std::string_view::npos) {
            throw std::runtime_error("counts file line " + std::to_string(line_no) +
                                     ": expected a non-negative integer");
        }
        counts.push_back(value);
    }
    return from_counts(counts);
}

PopularityModel PopularityModel::load_counts_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open counts file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_counts(buffer.str());
}

void PopularityModel::validate() const {
    if (probabilities.empty()) {
        throw std::runtime_error("popularity invariant: empty catalog");
    }
    long double sum = 0.0L;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        if (!(probabilities[i] > 0.0)) {
            throw std::runtime_error("popularity invariant: non-positive probability");
        }
        if (i > 0 && probabilities[i] > probabilities[i - 1]) {
            throw std::runtime_error("popularity invariant: probabilities not non-increasing");
        }
        sum += probabilities[i];
    }
    if (fabsl(sum - 1.0L) > 1e-9L) {
        throw std::runtime_error("popularity invariant: probabilities do not sum to 1");
    }
}

RequestGenerator::RequestGenerator(const PopularityModel& model, std::uint32_t n_homeboxes,
                                   std::uint64_t seed)
    : n_homeboxes_(n_homeboxes), rng_(seed) {
    if (n_homeboxes < 1) {
        throw std::invalid_argument("RequestGenerator: n_homeboxes must be >= 1");
    }
    if (model.probabilities.empty()) {
        throw std::invalid_argument("RequestGenerator: empty popularity model");
    }
    cdf_.reserve(model.probabilities.size());
    double running = 0.0;
    for (const double p : model.probabilities) {
        running += p;
        cdf_.push_back(running);
    }
}

Request RequestGenerator::next() {
    Request request;
    request.sequence = sequence_++;
    request.requester = rng_.below_u32(n_homeboxes_);
    const double u = rng_.unit_double();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    // rounding can leave cdf_.back() a hair under 1; clamp into the catalog
    request.video = static_cast<std::uint32_t>(
        std::min<std::ptrdiff_t>(it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
    return request;
}

}  // namespace hbsim
