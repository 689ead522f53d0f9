#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "optomech/constants.hpp"
#include "optomech/rng.hpp"
#include "optomech/spectral.hpp"
#include "support.hpp"

using namespace optomech;
using namespace testing_support;

namespace {

std::vector<double> sine_at_bin(std::size_t n, std::size_t bin, double amplitude = 1.0)
{
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = amplitude * std::sin(kTwoPi * static_cast<double>(bin * i) / static_cast<double>(n));
    return x;
}

std::vector<double> noise(std::size_t n, std::uint64_t seed, double sigma = 1.0, double mean = 0.0)
{
    RandomStream rng(seed);
    std::vector<double> x(n);
    for (double& v : x)
        v = mean + sigma * rng.normal();
    return x;
}

bool has_label(const MixingProduct& p, int j, int k)
{
    return std::find(p.labels.begin(), p.labels.end(), std::pair{j, k}) != p.labels.end();
}

} // namespace

TEST_SUITE("spectral") {

TEST_CASE("sine at a bin centre lands in one bin with half its squared amplitude")
{
    const std::size_t n = 1024;
    const double fs = 1024.0;
    const auto x = sine_at_bin(n, 37);
    const auto spec = estimate_psd(x, fs, {n, Window::rect, 0.0});
    REQUIRE(spec.size() == n / 2 + 1);
    CHECK(spec.n_averages == 1);
    CHECK(spec.bin_width() == doctest::Approx(1.0));
    CHECK(band_power(spec, 37.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    for (std::size_t k = 0; k < spec.size(); ++k)
        if (k != 37)
            CHECK(spec.psd[k] * spec.bin_width() < 1e-10 * 0.5);
}

TEST_CASE("white noise gives a flat PSD of level sigma^2 / f_Nyquist")
{
    const double sigma = 0.7;
    const double fs = 1000.0;
    const auto x = noise(65 * 512, 3, sigma);
    const auto spec = estimate_psd(x, fs, {1024, Window::hann, 0.5});
    CHECK(spec.n_averages >= 64);
    double mean = 0.0;
    for (std::size_t k = 1; k + 1 < spec.size(); ++k)
        mean += spec.psd[k];
    mean /= static_cast<double>(spec.size() - 2);
    CHECK(std::abs(mean / (sigma * sigma / (fs / 2.0)) - 1.0) < 0.05);
}

TEST_CASE("zero trace gives a zero PSD")
{
    const std::vector<double> x(4096, 0.0);
    const auto spec = estimate_psd(x, 1.0, {512, Window::hann, 0.5});
    for (double v : spec.psd)
        CHECK(v == 0.0);
}

TEST_CASE("Parseval holds for a single rect segment")
{
    for (std::size_t n : {std::size_t{1000}, std::size_t{1024}, std::size_t{777}}) {
        const auto x = noise(n, n, 2.0, 0.3);
        const auto spec = estimate_psd(x, 50.0, {n, Window::rect, 0.0});
        CHECK(rel_close(total_power(spec), mean_square(x), 1e-9));
        CHECK(rel_close(band_power(spec, 0.5 * spec.freqs.back(), spec.freqs.back() + spec.bin_width()), mean_square(x), 1e-9));

        std::vector<double> centred = x;
        double m = 0.0;
        for (double v : x)
            m += v;
        m /= static_cast<double>(n);
        for (double& v : centred)
            v -= m;
        const auto s2 = estimate_psd(centred, 50.0, {n, Window::rect, 0.0});
        CHECK(rel_close(total_power(s2, false), variance(x), 1e-9));
    }
}

TEST_CASE("Hann window metadata")
{
    const auto x = noise(8192, 1);
    const auto spec = estimate_psd(x, 8192.0, {1024, Window::hann, 0.5});
    CHECK(spec.resolution_bw == doctest::Approx(1.5 * spec.bin_width()).epsilon(1e-12));
    CHECK(spec.n_averages == 15);
}

TEST_CASE("Hann-windowed band power is independent of window placement")
{
    // A sine between bins: the window spreads it, band power still recovers A^2/2.
    const double fs = 1000.0;
    std::vector<double> x(1 << 16);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = 3.0 * std::cos(kTwoPi * 123.4567 * static_cast<double>(i) / fs + 0.4);
    const auto spec = estimate_psd(x, fs, {2048, Window::hann, 0.5});
    CHECK(band_power(spec, 123.4567, 20.0) == doctest::Approx(4.5).epsilon(1e-3));
}

TEST_CASE("band power is additive and guarded")
{
    const auto x = noise(4096, 8);
    const auto spec = estimate_psd(x, 100.0, {256, Window::hann, 0.5});
    const double whole = band_power(spec, 20.0, 10.0);
    const double left = band_power(spec, 16.1, 2.2);
    const double right = band_power(spec, 21.1, 7.8);
    CHECK(rel_close(left + right, whole, 1e-12));
    CHECK(rel_close(band_power(spec, 25.0, 50.0 + spec.bin_width()), total_power(spec), 1e-12));
    CHECK(band_power(spec, 10.0, 0.0) == 0.0);
    CHECK_THROWS_AS(band_power(spec, 49.0, 5.0), std::out_of_range);
    CHECK_THROWS_AS(band_power(spec, 0.0, 5.0), std::out_of_range);
}

TEST_CASE("an empty band of a zero-padded sine holds almost no power")
{
    // Zero padding truncates the sine, so the rect window leaks a sinc^2 tail; 260 bins away
    // it carries ~1/(pi^2 260^2) per bin of the peak power.
    auto x = sine_at_bin(512, 20);
    x.resize(1024, 0.0);
    const auto spec = estimate_psd(x, 1024.0, {1024, Window::rect, 0.0});
    const double peak = band_power(spec, 40.0, 10.0);
    CHECK(peak == doctest::Approx(0.25).epsilon(0.01));
    CHECK(band_power(spec, 300.0, 40.0) < 1e-5 * peak);
}

TEST_CASE("estimate_psd rejects bad input")
{
    const std::vector<double> empty;
    CHECK_THROWS(estimate_psd(empty, 1.0, {}));
    const std::vector<double> few(10, 1.0);
    CHECK_THROWS(estimate_psd(few, 1.0, {16, Window::rect, 0.0}));
    CHECK_THROWS(estimate_psd(few, 0.0, {8, Window::rect, 0.0}));
    CHECK_THROWS(estimate_psd(few, 1.0, {8, Window::rect, 1.0}));
}

TEST_CASE("segment length helper")
{
    CHECK(segment_length_for(1000.0, 10.0) == 512);
    CHECK(segment_length_for(1024.0, 16.0, 4.0) == 256);
}

TEST_CASE("peak bands stop at the midpoint to neighbours")
{
    const std::size_t n = 4096;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / 4096.0;
        x[i] = std::cos(kTwoPi * 100.0 * t) + 0.5 * std::cos(kTwoPi * 110.0 * t);
    }
    const auto spec = estimate_psd(x, 4096.0, {n, Window::rect, 0.0});
    const std::vector<double> centers{100.0, 110.0};
    const auto p = peak_band_powers(spec, centers, 5.0, centers);
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(p[1] == doctest::Approx(0.125).epsilon(1e-9));
}

TEST_CASE("mixing frequencies of equal tones")
{
    const double f = 3.3e6;
    const auto mix = mixing_frequencies(f, f, 2);
    REQUIRE(mix.size() == 3);
    CHECK(mix[0].freq == 0.0);
    CHECK(has_label(mix[0], 1, -1));
    CHECK(mix[1].freq == f);
    CHECK(has_label(mix[1], 1, 0));
    CHECK(has_label(mix[1], 0, 1));
    CHECK(mix[1].order() == 1);
    CHECK(mix[2].freq == 2.0 * f);
    CHECK(has_label(mix[2], 1, 1));
    CHECK(has_label(mix[2], 2, 0));
}

TEST_CASE("mixing frequencies of the two device modes")
{
    const double f1 = 3.3e6;
    const double f2 = 3.32e6;
    const auto mix9 = mixing_frequencies(f1, f2, 9);
    const auto it = std::find_if(mix9.begin(), mix9.end(), [&](const MixingProduct& p) { return has_label(p, 5, -4); });
    REQUIRE(it != mix9.end());
    CHECK(it->freq == doctest::Approx(5.0 * f1 - 4.0 * f2));
    CHECK(std::is_sorted(mix9.begin(), mix9.end(), [](const auto& a, const auto& b) { return a.freq < b.freq; }));

    const auto mix10 = mixing_frequencies(f1, f2, 10);
    std::set<int> orders_near_sum;
    for (const auto& p : mix10) {
        if (std::abs(p.freq - (f1 + f2)) <= 0.11e6) {
            for (const auto& [j, k] : p.labels)
                orders_near_sum.insert(j + std::abs(k));
        }
    }
    for (int order : {2, 4, 6, 8, 10})
        CHECK(orders_near_sum.contains(order));
    CHECK(std::any_of(mix10.begin(), mix10.end(), [](const auto& p) { return has_label(p, 6, -4); }));

    for (const auto& p : mix10)
        for (const auto& [j, k] : p.labels) {
            CHECK(j >= 0);
            CHECK(j + std::abs(k) >= 1);
            CHECK(j + std::abs(k) <= 10);
        }
    CHECK_THROWS(mixing_frequencies(0.0, 1.0, 3));
    CHECK_THROWS(mixing_frequencies(1.0, 1.0, 0));
}

TEST_CASE("mixing frequencies are symmetric under swapping the tones")
{
    for (int order : {1, 3, 7}) {
        const auto a = mixing_frequencies(1.0e6, 1.37e6, order);
        const auto b = mixing_frequencies(1.37e6, 1.0e6, order);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].freq == doctest::Approx(b[i].freq).epsilon(1e-14));
            CHECK(a[i].order() == b[i].order());
            CHECK(a[i].labels.size() == b[i].labels.size());
        }
    }
}

}
