#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "kinebench/dsp.hpp"
#include "kinebench/error.hpp"

#include "common.hpp"

using namespace kinebench;
using kbtest::series;
using kbtest::series_with_mask;

namespace {

double variance(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size());
}

// independent oracle: sort the whole clamped window and pick the middle
double brute_force_median_at(const std::vector<double>& v, std::ptrdiff_t i, int window) {
    std::vector<double> w;
    const auto n = static_cast<std::ptrdiff_t>(v.size());
    for (std::ptrdiff_t k = i - window / 2; k <= i + window / 2; ++k)
        w.push_back(v[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k, 0, n - 1))]);
    std::sort(w.begin(), w.end());
    return w[w.size() / 2];
}

} // namespace

TEST_CASE("interpolate_gaps") {
    SUBCASE("linear midpoint") {
        auto s = series_with_mask({10, 0, 20}, {1, 0, 1});
        auto out = dsp::interpolate_gaps(s);
        CHECK(out.values == std::vector<double>{10, 15, 20});
        CHECK(out.all_valid());
    }
    SUBCASE("all-valid input unchanged") {
        auto s = series({3.25, -1.5, 7.75});
        auto out = dsp::interpolate_gaps(s);
        CHECK(out.values == s.values);
    }
    SUBCASE("leading/trailing gaps take the nearest valid value") {
        auto s = series_with_mask({0, 0, 7, 0}, {0, 0, 1, 0});
        auto out = dsp::interpolate_gaps(s);
        CHECK(out.values == std::vector<double>{7, 7, 7, 7});
    }
    SUBCASE("longer interior gap") {
        auto s = series_with_mask({0, 0, 0, 12}, {1, 0, 0, 1});
        auto out = dsp::interpolate_gaps(s);
        CHECK(out.values[1] == doctest::Approx(4.0));
        CHECK(out.values[2] == doctest::Approx(8.0));
    }
    SUBCASE("no valid sample -> EmptySignal") {
        auto s = series_with_mask({1, 2}, {0, 0});
        CHECK_THROWS_AS(dsp::interpolate_gaps(s), EmptySignal);
    }
    SUBCASE("valid samples are never modified") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0, 180);
        std::bernoulli_distribution drop(0.3);
        std::vector<double> vals(200);
        std::vector<std::uint8_t> mask(200);
        bool any = false;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            vals[i] = u(rng);
            mask[i] = drop(rng) ? 0 : 1;
            any |= mask[i] != 0;
        }
        if (!any) mask[0] = 1;
        auto s = series_with_mask(vals, mask);
        auto out = dsp::interpolate_gaps(s);
        for (std::size_t i = 0; i < vals.size(); ++i)
            if (mask[i]) CHECK(out.values[i] == vals[i]);
    }
}

TEST_CASE("median_filter") {
    SUBCASE("constants pass through") {
        auto out = dsp::median_filter(series(std::vector<double>(20, 4.5)), 5);
        for (double v : out.values) CHECK(v == 4.5);
    }
    SUBCASE("single impulse removed") {
        auto out = dsp::median_filter(series({0, 0, 100, 0, 0}), 5);
        CHECK(out.values == std::vector<double>{0, 0, 0, 0, 0});
    }
    SUBCASE("random signal matches brute-force oracle") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0, 180);
        std::vector<double> vals(50);
        for (auto& v : vals) v = u(rng);
        for (int window : {1, 3, 5, 9}) {
            auto out = dsp::median_filter(series(vals), window);
            for (std::size_t i = 0; i < vals.size(); ++i)
                CHECK(out.values[i] ==
                      brute_force_median_at(vals, static_cast<std::ptrdiff_t>(i), window));
        }
    }
    SUBCASE("output values are a subset of input values") {
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> u(0, 180);
        std::vector<double> vals(40);
        for (auto& v : vals) v = u(rng);
        auto out = dsp::median_filter(series(vals), 7);
        for (double v : out.values)
            CHECK(std::find(vals.begin(), vals.end(), v) != vals.end());
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(dsp::median_filter(series({1, 2, 3}), 4), EvenWindow);
        CHECK_THROWS_AS(dsp::median_filter(series({1, 2, 3}), 5), WindowTooLarge);
    }
}

TEST_CASE("moving_average") {
    SUBCASE("constants pass through") {
        auto out = dsp::moving_average(series(std::vector<double>(20, -2.5)), 5);
        for (double v : out.values) CHECK(v == doctest::Approx(-2.5).epsilon(1e-15));
    }
    SUBCASE("replicate padding example") {
        auto out = dsp::moving_average(series({0, 3, 0}), 3);
        CHECK(out.values[0] == doctest::Approx(1.0));
        CHECK(out.values[1] == doctest::Approx(1.0));
        CHECK(out.values[2] == doctest::Approx(1.0));
    }
    SUBCASE("white noise variance shrinks") {
        std::mt19937_64 rng(21);
        std::normal_distribution<double> g(0.0, 1.0);
        std::vector<double> vals(500);
        for (auto& v : vals) v = g(rng);
        auto out = dsp::moving_average(series(vals), 5);
        CHECK(variance(out.values) < variance(vals));
    }
    SUBCASE("output stays within input min/max") {
        std::mt19937_64 rng(22);
        std::uniform_real_distribution<double> u(-50, 50);
        std::vector<double> vals(100);
        for (auto& v : vals) v = u(rng);
        const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
        for (int window : {2, 3, 4, 5, 8}) {
            auto out = dsp::moving_average(series(vals), window);
            for (double v : out.values) {
                CHECK(v >= *mn - 1e-12);
                CHECK(v <= *mx + 1e-12);
            }
        }
    }
    SUBCASE("length preserved") {
        auto out = dsp::moving_average(series({1, 2, 3, 4}), 2);
        CHECK(out.size() == 4);
    }
    SUBCASE("window larger than signal") {
        CHECK_THROWS_AS(dsp::moving_average(series({1, 2}), 3), WindowTooLarge);
    }
}

TEST_CASE("resample") {
    SUBCASE("constant 50 Hz -> 30 Hz") {
        auto s = series(std::vector<double>(100, 6.5), 50.0);
        auto out = dsp::resample(s, 30.0);
        CHECK(out.sample_rate_hz == 30.0);
        for (double v : out.values) CHECK(v == 6.5);
        // span 99/50 = 1.98 s -> floor(1.98*30)+1 = 60 samples
        CHECK(out.size() == 60);
    }
    SUBCASE("affine signals reproduce exactly") {
        std::vector<double> ramp(100);
        for (std::size_t i = 0; i < ramp.size(); ++i)
            ramp[i] = 2.0 * static_cast<double>(i) / 50.0; // theta(t) = 2t
        auto out = dsp::resample(series(ramp, 50.0), 30.0);
        for (std::size_t k = 0; k < out.size(); ++k)
            CHECK(out.values[k] ==
                  doctest::Approx(2.0 * static_cast<double>(k) / 30.0).epsilon(1e-12));
    }
    SUBCASE("1 Hz sine within 0.002 of analytic") {
        const double rate = 50.0;
        std::vector<double> vals(501); // 10 s inclusive
        for (std::size_t i = 0; i < vals.size(); ++i)
            vals[i] = std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / rate);
        auto out = dsp::resample(series(vals, rate), 30.0);
        REQUIRE(out.size() == 301);
        for (std::size_t k = 0; k < out.size(); ++k) {
            const double t = static_cast<double>(k) / 30.0;
            CHECK(std::abs(out.values[k] - std::sin(2.0 * std::numbers::pi * t)) < 0.002);
        }
    }
    SUBCASE("grid is uniform at the target rate") {
        auto out = dsp::resample(series(std::vector<double>(11, 0.0), 50.0), 30.0);
        CHECK(out.sample_rate_hz == 30.0);
    }
}

TEST_CASE("mean_remove") {
    SUBCASE("hand example") {
        auto out = dsp::mean_remove(series({1, 2, 3}));
        CHECK(out.values[0] == doctest::Approx(-1.0).epsilon(1e-15));
        CHECK(out.values[1] == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(out.values[2] == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("idempotent") {
        auto once = dsp::mean_remove(series({5, 9, -2, 4}));
        auto twice = dsp::mean_remove(once);
        for (std::size_t i = 0; i < once.size(); ++i)
            CHECK(std::abs(twice.values[i] - once.values[i]) < 1e-12);
    }
    SUBCASE("shift equivariance") {
        std::vector<double> base{4, 8, 15, 16, 23, 42};
        std::vector<double> shifted = base;
        for (auto& v : shifted) v += 177.5;
        auto a = dsp::mean_remove(series(base));
        auto b = dsp::mean_remove(series(shifted));
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
    }
    SUBCASE("output mean below 1e-9 on random signals") {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> u(0, 180);
        std::vector<double> vals(5000);
        for (auto& v : vals) v = u(rng);
        auto out = dsp::mean_remove(series(vals));
        double mean = 0.0;
        for (double v : out.values) mean += v;
        mean /= static_cast<double>(out.size());
        CHECK(std::abs(mean) < 1e-9);
    }
    SUBCASE("empty -> EmptySignal") {
        CHECK_THROWS_AS(dsp::mean_remove(series({})), EmptySignal);
    }
}

TEST_CASE("filter config validation") {
    dsp::FilterConfig ok;
    CHECK_NOTHROW(ok.validate());
    dsp::FilterConfig even{4, 5, 30.0};
    CHECK_THROWS_AS(even.validate(), Error);
    dsp::FilterConfig bad_rate{5, 5, 0.0};
    CHECK_THROWS_AS(bad_rate.validate(), Error);
}
