#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "ccshare/errors.hpp"
#include "ccshare/experiments.hpp"
#include "ccshare/statistics.hpp"

using namespace ccshare;

TEST_CASE("bin index uses half-open upper-inclusive bins") {
    CHECK(bin_index(0.005, 0.01) == 0);
    CHECK(bin_index(0.01, 0.01) == 0);
    CHECK(bin_index(0.0100001, 0.01) == 1);
    CHECK(bin_index(0.07, 0.01) == 6);
    CHECK(bin_index(0.3, 0.1) == 2);
    CHECK(bin_index(0.0, 0.01) == -1);
    CHECK(bin_index(-0.005, 0.01) == -1);
}

TEST_CASE("histogram examples") {
    const std::vector<double> v{0.005, 0.015};
    const auto h = build_histogram(v, 0.01);
    const auto bins = h.bins();
    REQUIRE(bins.size() == 2);
    CHECK(bins[0].count == 1);
    CHECK(bins[1].count == 1);
    CHECK(bins[0].fraction == 0.5);
    CHECK(bins[1].fraction == 0.5);
    CHECK(bins[0].lower == 0.0);
    CHECK(bins[1].upper == doctest::Approx(0.02));

    try {
        build_histogram(std::vector<double>{}, 0.01);
        FAIL("expected DataError");
    } catch (const DataError &e) {
        CHECK(std::string(e.what()).find("no samples") != std::string::npos);
    }

    const std::vector<double> bad{0.1, 0.2, std::numeric_limits<double>::quiet_NaN()};
    try {
        build_histogram(bad, 0.01);
        FAIL("expected DataError");
    } catch (const DataError &e) {
        CHECK(std::string(e.what()).find("sample 2") != std::string::npos);
    }
}

TEST_CASE("histogram emits empty interior bins and fractions sum to one") {
    std::mt19937_64 engine(5);
    std::gamma_distribution<double> g(2.0, 0.2);
    std::vector<double> v(5000);
    for (auto &x : v) x = g(engine);
    v.push_back(3.0);
    const auto h = build_histogram(v, 0.01);
    const auto bins = h.bins();
    std::uint64_t total = 0;
    double fraction = 0.0;
    for (std::size_t i = 0; i < bins.size(); ++i) {
        total += bins[i].count;
        fraction += bins[i].fraction;
        if (i > 0) CHECK(std::abs(bins[i].lower - bins[i - 1].upper) < 1e-12);
    }
    CHECK(total == v.size());
    CHECK(std::abs(fraction - 1.0) < 1e-12);
    CHECK(bins.back().count == 1);
    CHECK(bins[bins.size() - 2].count == 0);
}

TEST_CASE("histogram merge is count-additive") {
    Histogram a(0.05), b(0.05), all(0.05);
    for (int i = 0; i < 300; ++i) {
        const double x = std::fmod(i * 0.0137, 1.3);
        (i % 3 ? a : b).add(x, static_cast<std::uint64_t>(i));
        all.add(x, static_cast<std::uint64_t>(i));
    }
    a.merge(b);
    REQUIRE(a.bins().size() == all.bins().size());
    for (std::size_t i = 0; i < a.bins().size(); ++i) CHECK(a.bins()[i].count == all.bins()[i].count);
    CHECK(a.total() == 300);
    CHECK_THROWS_AS(a.merge(Histogram(0.1)), DataError);
}

TEST_CASE("summary examples") {
    const std::vector<double> ones{1, 1, 1};
    const auto s = summarize(ones);
    CHECK(s.mean == 1.0);
    CHECK(s.sd == 0.0);
    CHECK(s.max == 1.0);
    CHECK(s.min == 1.0);
    CHECK(s.count == 3);
    CHECK_THROWS_AS(summarize(std::vector<double>{1.0}), DataError);

    const std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
    const auto t = summarize(v);
    CHECK(t.mean == 5.0);
    CHECK(t.sd == doctest::Approx(2.0).epsilon(1e-14)); // population sd
}

TEST_CASE("summary is permutation-invariant and merge-consistent") {
    std::mt19937_64 engine(9);
    std::normal_distribution<double> g(0.5, 0.3);
    std::vector<double> v(100'000);
    for (auto &x : v) x = g(engine);
    const auto batch = summarize(v);

    auto shuffled = v;
    std::shuffle(shuffled.begin(), shuffled.end(), engine);
    const auto perm = summarize(shuffled);
    CHECK(std::abs(perm.mean - batch.mean) < 1e-12);
    CHECK(std::abs(perm.sd - batch.sd) < 1e-12);

    std::vector<SummaryAccumulator> parts(7);
    for (std::size_t i = 0; i < v.size(); ++i) parts[i % 7].add(v[i]);
    SummaryAccumulator merged;
    for (const auto &p : parts) merged.merge(p);
    const auto streamed = merged.result();
    CHECK(std::abs(streamed.mean - batch.mean) < 1e-9);
    CHECK(std::abs(streamed.sd - batch.sd) < 1e-9);
    CHECK(streamed.max == batch.max);
    CHECK(streamed.min == batch.min);
    CHECK(streamed.count == batch.count);

    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    CHECK(std::abs(batch.mean - mean) < 1e-12);
}

TEST_CASE("compensated sum keeps small terms") {
    CompensatedSum s;
    s.add(1e16);
    for (int i = 0; i < 1000; ++i) s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 1000.0);
}

TEST_CASE("conditional profile examples") {
    const std::vector<double> c{0.05, 0.15};
    const std::vector<double> t{1, 2};
    const auto p = conditional_profile(c, t, 0.1);
    REQUIRE(p.bins.size() == 2);
    CHECK(*p.bins[0].target_avg == 1.0);
    CHECK(*p.bins[1].target_avg == 2.0);
    CHECK_THROWS_AS(conditional_profile(c, std::vector<double>{1.0}, 0.1), DataError);

    const std::vector<double> gap_c{0.05, 0.35, 0.36};
    const std::vector<double> gap_t{1, 3, 5};
    const auto g = conditional_profile(gap_c, gap_t, 0.1);
    REQUIRE(g.bins.size() == 4);
    CHECK(g.bins[1].count == 0);
    CHECK_FALSE(g.bins[1].target_avg.has_value());
    CHECK(*g.bins[3].target_avg == 4.0);
    CHECK(*g.bins[3].target_max == 5.0);
}

TEST_CASE("profile max is never below avg and counts add up") {
    std::mt19937_64 engine(13);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    std::vector<double> c(2000), t(2000);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = u(engine), t[i] = u(engine) * c[i];
    const auto p = conditional_profile(c, t, 0.1);
    std::uint64_t total = 0;
    for (const auto &b : p.bins) {
        total += b.count;
        if (b.count > 0) CHECK(*b.target_max >= *b.target_avg);
    }
    CHECK(total == c.size());
}

TEST_CASE("nonnegative fraction") {
    const std::vector<double> v{-1, 0, 1};
    CHECK(nonnegative_fraction(v) == doctest::Approx(200.0 / 3.0));
    CHECK_THROWS_AS(nonnegative_fraction(std::vector<double>{}), DataError);
}

TEST_CASE("monogamous percentage of local work at three qubits") {
    const auto records = generate_records(3, 10'000, 1, {MeasureSet{Measure::local_work}, false, {}}, 0);
    std::vector<double> delta;
    for (const auto &r : records) delta.push_back(r.delta_clw);
    CHECK(std::abs(nonnegative_fraction(delta) - 7.154) < 1.0);
}
