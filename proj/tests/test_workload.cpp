#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "hbsim/workload.hpp"

#include "support/oracles.hpp"

using hbsim::PopularityModel;
using hbsim::Request;
using hbsim::RequestGenerator;

TEST_CASE("zipf degenerate cases") {
    const PopularityModel two = PopularityModel::zipf(2, 1.0);
    REQUIRE(two.catalog_size() == 2);
    CHECK(two.probabilities[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(two.probabilities[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    const PopularityModel uniform = PopularityModel::zipf(5, 0.0);
    for (const double p : uniform.probabilities) {
        CHECK(p == doctest::Approx(0.2).epsilon(1e-14));
    }
    uniform.validate();
}

TEST_CASE("zipf head probability matches an extended-precision sum") {
    // independent oracle: Kahan-compensated harmonic sum in long double
    const std::uint32_t c = 500;
    const double alpha = 0.8;
    long double sum = 0.0L;
    long double compensation = 0.0L;
    for (std::uint32_t j = 1; j <= c; ++j) {
        const long double term =
            powl(static_cast<long double>(j), -static_cast<long double>(alpha)) - compensation;
        const long double next = sum + term;
        compensation = (next - sum) - term;
        sum = next;
    }
    const double expected_head = static_cast<double>(1.0L / sum);

    const PopularityModel model = PopularityModel::zipf(c, alpha);
    CHECK(std::fabs(model.probabilities[0] - expected_head) <= 1e-12);
    model.validate();
}

TEST_CASE("zipf rejects bad parameters") {
    CHECK_THROWS_AS(PopularityModel::zipf(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PopularityModel::zipf(10, -0.1), std::invalid_argument);
}

TEST_CASE("a larger exponent concentrates more mass on the top video") {
    const double p1 = PopularityModel::zipf(100, 1.2).probabilities[0];
    const double p2 = PopularityModel::zipf(100, 0.6).probabilities[0];
    CHECK(p1 > p2);
}

TEST_CASE("empirical counts") {
    SUBCASE("normalization") {
        const std::vector<std::uint64_t> counts{3, 1};
        const PopularityModel m = PopularityModel::from_counts(counts);
        REQUIRE(m.catalog_size() == 2);
        CHECK(m.probabilities[0] == doctest::Approx(0.75).epsilon(1e-14));
        CHECK(m.probabilities[1] == doctest::Approx(0.25).epsilon(1e-14));
    }
    SUBCASE("counts are re-sorted descending") {
        const std::vector<std::uint64_t> counts{1, 3};
        const PopularityModel m = PopularityModel::from_counts(counts);
        CHECK(m.probabilities[0] == doctest::Approx(0.75).epsilon(1e-14));
    }
    SUBCASE("zero counts are dropped") {
        const std::vector<std::uint64_t> counts{5, 0, 5};
        const PopularityModel m = PopularityModel::from_counts(counts);
        REQUIRE(m.catalog_size() == 2);
        CHECK(m.probabilities[0] == doctest::Approx(0.5).epsilon(1e-14));
        m.validate();
    }
    SUBCASE("all-zero input is rejected") {
        const std::vector<std::uint64_t> counts{0, 0};
        CHECK_THROWS_AS(PopularityModel::from_counts(counts), std::invalid_argument);
    }
    SUBCASE("counts file parsing") {
        const PopularityModel m = PopularityModel::load_counts("# popularity\n10\n0\n30\n");
        REQUIRE(m.catalog_size() == 2);
        CHECK(m.probabilities[0] == doctest::Approx(0.75).epsilon(1e-14));
        CHECK_THROWS_WITH_AS(PopularityModel::load_counts("10\nbad\n"),
                             doctest::Contains("line 2"), std::runtime_error);
    }
}

TEST_CASE("request generation degenerate cases") {
    SUBCASE("single-video catalog always yields video 0") {
        RequestGenerator gen(PopularityModel::zipf(1, 1.0), 10, 42);
        for (int i = 0; i < 100; ++i) {
            CHECK(gen.next().video == 0);
        }
    }
    SUBCASE("single HB always requests") {
        RequestGenerator gen(PopularityModel::zipf(10, 1.0), 1, 42);
        for (int i = 0; i < 100; ++i) {
            CHECK(gen.next().requester == 0);
        }
    }
    SUBCASE("sequence increments from zero") {
        RequestGenerator gen(PopularityModel::zipf(10, 1.0), 4, 42);
        for (std::uint64_t i = 0; i < 50; ++i) {
            CHECK(gen.next().sequence == i);
        }
    }
}

TEST_CASE("request streams are deterministic and in range") {
    const PopularityModel model = PopularityModel::zipf(37, 0.7);
    RequestGenerator a(model, 11, 9001);
    RequestGenerator b(model, 11, 9001);
    for (int i = 0; i < 5000; ++i) {
        const Request ra = a.next();
        const Request rb = b.next();
        CHECK(ra.requester == rb.requester);
        CHECK(ra.video == rb.video);
        REQUIRE(ra.video < 37);
        REQUIRE(ra.requester < 11);
    }
}

TEST_CASE("sampled frequencies match the model (chi-square)") {
    const std::uint32_t c = 10;
    const std::uint32_t n_hbs = 8;
    const std::uint64_t samples = 1'000'000;
    const PopularityModel model = PopularityModel::zipf(c, 1.0);
    RequestGenerator gen(model, n_hbs, 20240105);

    std::vector<std::uint64_t> video_counts(c, 0);
    std::vector<std::uint64_t> requester_counts(n_hbs, 0);
    for (std::uint64_t i = 0; i < samples; ++i) {
        const Request r = gen.next();
        ++video_counts[r.video];
        ++requester_counts[r.requester];
    }

    CHECK(oracle::chi_square(video_counts, model.probabilities, samples) <
          oracle::chi_square_critical(c - 1));
    const std::vector<double> uniform(n_hbs, 1.0 / n_hbs);
    CHECK(oracle::chi_square(requester_counts, uniform, samples) <
          oracle::chi_square_critical(n_hbs - 1));
}
