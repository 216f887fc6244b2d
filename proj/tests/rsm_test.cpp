#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "voroseg/errors.hpp"
#include "voroseg/proximal_merge.hpp"
#include "voroseg/region_split_merge.hpp"
#include "test_util.hpp"

using namespace voroseg;

namespace {

Histogram impulse(int bin, double mass) {
    Histogram h;
    h.bins[bin] = mass;
    return h;
}

double total_mass(const Histogram& h) {
    return std::accumulate(h.bins.begin(), h.bins.end(), 0.0);
}

// Direct scan for rise-then-not-rise turning points, treating the bin
// before 0 as empty; written independently of the library walk.
std::vector<int> oracle_peaks(const Histogram& h, double min_ratio) {
    const double tallest = *std::max_element(h.bins.begin(), h.bins.end());
    std::vector<int> peaks;
    for (int i = 0; i <= 254; ++i) {
        const double before = i == 0 ? 0.0 : h.bins[i - 1];
        const bool rising_in = h.bins[i] > before;
        const bool not_rising_out = h.bins[i + 1] <= h.bins[i];
        if (rising_in && not_rising_out && h.bins[i] >= min_ratio * tallest)
            peaks.push_back(i);
    }
    return peaks;
}

std::vector<int> oracle_valleys(const Histogram& h, const std::vector<int>& peaks) {
    std::vector<int> valleys;
    for (std::size_t p = 0; p + 1 < peaks.size(); ++p) {
        int arg = -1;
        for (int i = peaks[p] + 1; i <= peaks[p + 1] - 1; ++i)
            if (arg < 0 || h.bins[i] < h.bins[arg]) arg = i;
        valleys.push_back(arg);
    }
    return valleys;
}

// Exhaustive cell-assignment oracle: rebuilds the per-channel valley set
// with the scans above, then places every pixel into its cell directly.
std::vector<std::vector<std::uint32_t>> oracle_cells(
    const std::vector<FeatureVector>& pixels, const RsmConfig& config) {
    std::array<std::vector<int>, 3> valleys;
    for (int c = 0; c < 3; ++c) {
        Histogram h;
        for (const FeatureVector& p : pixels) {
            const int bin = std::clamp<int>(
                static_cast<int>(std::llround(p[c])), 0, 255);
            h.bins[bin] += 1.0;
        }
        const Histogram smooth = smooth_histogram(h, config.span);
        valleys[c] = oracle_valleys(smooth, oracle_peaks(smooth, config.peak_min_ratio));
    }
    std::map<std::array<int, 3>, std::vector<std::uint32_t>> cells;
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        std::array<int, 3> key{};
        for (int c = 0; c < 3; ++c) {
            const int bin = std::clamp<int>(
                static_cast<int>(std::llround(pixels[i][c])), 0, 255);
            int interval = 0;
            for (int v : valleys[c])
                if (bin >= v) ++interval;
            key[c] = interval;
        }
        cells[key].push_back(static_cast<std::uint32_t>(i));
    }
    std::vector<std::vector<std::uint32_t>> out;
    for (auto& [key, members] : cells) out.push_back(std::move(members));
    return out;
}

} // namespace

TEST_CASE("channel histograms count rounded values") {
    std::vector<FeatureVector> pixels = {{100, 0, 0}, {100, 5, 0}, {100, 9, 0}};
    const Histogram h = channel_histogram(pixels, Channel::R);
    CHECK(h.bins[100] == 3.0);
    CHECK(total_mass(h) == 3.0);

    std::vector<FeatureVector> edge = {{0, 0, 0}, {255, 0, 0}};
    const Histogram he = channel_histogram(edge, Channel::R);
    CHECK(he.bins[0] == 1.0);
    CHECK(he.bins[255] == 1.0);

    std::mt19937 rng(2);
    const auto random_pixels = testutil::random_features(rng, 1000);
    CHECK(total_mass(channel_histogram(random_pixels, Channel::G)) == 1000.0);

    CHECK_THROWS_AS(channel_histogram({}, Channel::B), EmptyInputError);
}

TEST_CASE("smoothing a constant histogram is the identity") {
    Histogram h;
    h.bins.fill(4.25);
    const Histogram s = smooth_histogram(h, 5);
    for (int i = 0; i < 256; ++i) CHECK(s.bins[i] == doctest::Approx(4.25));
}

TEST_CASE("smoothing an impulse spreads a span-wide plateau") {
    const Histogram s = smooth_histogram(impulse(128, 5.0), 5);
    for (int i = 126; i <= 130; ++i) CHECK(s.bins[i] == doctest::Approx(1.0));
    CHECK(s.bins[125] == 0.0);
    CHECK(s.bins[131] == 0.0);
}

TEST_CASE("the window shrinks at the edges") {
    const Histogram s = smooth_histogram(impulse(0, 3.0), 5);
    CHECK(s.bins[0] == doctest::Approx(1.0));  // window {0,1,2}
    CHECK(s.bins[1] == doctest::Approx(0.75)); // window {0..3}
    CHECK(s.bins[2] == doctest::Approx(0.6));  // window {0..4}
    CHECK(s.bins[3] == 0.0);
}

TEST_CASE("span one is the identity and smoothing is linear") {
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> mass(0.0, 50.0);
    Histogram a, b;
    for (int i = 0; i < 256; ++i) {
        a.bins[i] = mass(rng);
        b.bins[i] = mass(rng);
    }
    const Histogram id = smooth_histogram(a, 1);
    for (int i = 0; i < 256; ++i) CHECK(id.bins[i] == doctest::Approx(a.bins[i]));

    Histogram sum;
    for (int i = 0; i < 256; ++i) sum.bins[i] = a.bins[i] + 2.0 * b.bins[i];
    const Histogram lhs = smooth_histogram(sum, 7);
    const Histogram sa = smooth_histogram(a, 7);
    const Histogram sb = smooth_histogram(b, 7);
    for (int i = 0; i < 256; ++i)
        CHECK(lhs.bins[i] == doctest::Approx(sa.bins[i] + 2.0 * sb.bins[i]));
}

TEST_CASE("monotone increasing histograms have no peaks") {
    Histogram h;
    for (int i = 0; i < 256; ++i) h.bins[i] = i + 1.0;
    CHECK(find_peaks(h, RsmConfig{}).empty());
}

TEST_CASE("a triangular bump peaks at its apex") {
    Histogram h;
    for (int i = 80; i <= 100; ++i) h.bins[i] = i - 79.0;
    for (int i = 101; i <= 120; ++i) h.bins[i] = 121.0 - i;
    const auto peaks = find_peaks(h, RsmConfig{});
    CHECK(peaks == std::vector<int>{100});
    CHECK(peaks == oracle_peaks(h, RsmConfig{}.peak_min_ratio));
}

TEST_CASE("plateaus report their leftmost bin") {
    Histogram h;
    h.bins[40] = 1.0;
    h.bins[41] = 3.0;
    h.bins[42] = 3.0;
    h.bins[43] = 3.0;
    h.bins[44] = 1.0;
    const auto peaks = find_peaks(h, RsmConfig{});
    CHECK(peaks == std::vector<int>{41});
}

TEST_CASE("short bumps fall to the significance filter") {
    Histogram h;
    // Bump at 50 of height 1, bump at 200 of height 100.
    h.bins[49] = 0.5;
    h.bins[50] = 1.0;
    h.bins[51] = 0.5;
    h.bins[199] = 50.0;
    h.bins[200] = 100.0;
    h.bins[201] = 50.0;
    RsmConfig config;
    config.peak_min_ratio = 0.05; // 1 < 5 = 0.05 * 100
    CHECK(find_peaks(h, config) == std::vector<int>{200});
    config.peak_min_ratio = 0.005;
    CHECK(find_peaks(h, config) == std::vector<int>{50, 200});
}

TEST_CASE("valleys take the minimum strictly between adjacent peaks") {
    Histogram h;
    for (int i = 0; i < 256; ++i) h.bins[i] = 10.0;
    h.bins[50] = 30.0;
    h.bins[200] = 40.0;
    h.bins[120] = 1.0;
    CHECK(find_valleys(h, {50, 200}) == std::vector<int>{120});
    CHECK(find_valleys(h, {100}).empty());
    CHECK(find_valleys(h, {}).empty());
}

TEST_CASE("flat valleys resolve to the lowest index") {
    Histogram h;
    for (int i = 0; i < 256; ++i) h.bins[i] = 10.0;
    h.bins[10] = 30.0;
    h.bins[20] = 30.0;
    h.bins[14] = 2.0;
    h.bins[15] = 2.0;
    h.bins[16] = 2.0;
    CHECK(find_valleys(h, {10, 20}) == std::vector<int>{14});
}

TEST_CASE("a uniform region is a single cluster") {
    std::vector<FeatureVector> pixels(40, FeatureVector{10, 20, 30});
    const auto clusters = split_region(pixels, RsmConfig{});
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0].centroid == FeatureVector{10, 20, 30});
    CHECK(clusters[0].size() == 40);
}

TEST_CASE("two well-separated modes split into two clusters") {
    std::vector<FeatureVector> pixels;
    for (int i = 0; i < 10; ++i) pixels.push_back({0, 0, 0});
    for (int i = 0; i < 10; ++i) pixels.push_back({200, 200, 200});
    const auto clusters = split_region(pixels, RsmConfig{});
    REQUIRE(clusters.size() == 2);
    CHECK(clusters[0].centroid == FeatureVector{0, 0, 0});
    CHECK(clusters[1].centroid == FeatureVector{200, 200, 200});
    CHECK(clusters[0].size() == 10);
    CHECK(clusters[1].size() == 10);

    // Exhaustive cell-assignment oracle agrees on the membership split.
    const auto cells = oracle_cells(pixels, RsmConfig{});
    REQUIRE(cells.size() == 2);
    CHECK(cells[0] == clusters[0].members);
    CHECK(cells[1] == clusters[1].members);
}

TEST_CASE("tiny regions collapse to one cluster") {
    std::vector<FeatureVector> pixels = {
        {0, 0, 0}, {250, 0, 0}, {0, 250, 0}, {0, 0, 250}, {250, 250, 250}};
    RsmConfig config;
    config.min_region_pixels = 16;
    const auto clusters = split_region(pixels, config);
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0].size() == 5);
    CHECK(clusters[0].centroid.r == doctest::Approx(100.0));
}

TEST_CASE("split_region covers, stays disjoint and matches the cell oracle") {
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> count(16, 300);
    for (int trial = 0; trial < 40; ++trial) {
        const auto pixels = testutil::random_features(rng, count(rng));
        const auto clusters = split_region(pixels, RsmConfig{});

        std::size_t total = 0;
        std::set<std::uint32_t> seen;
        for (const Cluster& c : clusters) {
            total += c.size();
            for (std::uint32_t m : c.members) CHECK(seen.insert(m).second);
            // Def. 3: centroid is the member mean.
            double sr = 0, sg = 0, sb = 0;
            for (std::uint32_t m : c.members) {
                sr += pixels[m].r;
                sg += pixels[m].g;
                sb += pixels[m].b;
            }
            const double n = static_cast<double>(c.size());
            CHECK(c.centroid.r == doctest::Approx(sr / n).epsilon(1e-9));
            CHECK(c.centroid.g == doctest::Approx(sg / n).epsilon(1e-9));
            CHECK(c.centroid.b == doctest::Approx(sb / n).epsilon(1e-9));
        }
        CHECK(total == pixels.size());

        const auto cells = oracle_cells(pixels, RsmConfig{});
        REQUIRE(cells.size() == clusters.size());
        for (std::size_t i = 0; i < cells.size(); ++i)
            CHECK(cells[i] == clusters[i].members);

        // Deterministic rerun.
        const auto again = split_region(pixels, RsmConfig{});
        REQUIRE(again.size() == clusters.size());
        for (std::size_t i = 0; i < clusters.size(); ++i)
            CHECK(again[i].members == clusters[i].members);
    }
}

TEST_CASE("split_region records caller-supplied ids") {
    std::vector<FeatureVector> pixels(20, FeatureVector{9, 9, 9});
    std::vector<std::uint32_t> ids(20);
    std::iota(ids.begin(), ids.end(), 1000u);
    const auto clusters = split_region(pixels, ids, RsmConfig{});
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0].members.front() == 1000u);
    CHECK(clusters[0].members.back() == 1019u);
}

TEST_CASE("empty region input is an error") {
    CHECK_THROWS_AS(split_region({}, RsmConfig{}), EmptyInputError);
}

TEST_CASE("within-region merging delegates to the proximal rules") {
    std::vector<FeatureVector> pool = {{0, 0, 0}, {50, 5, 5}};
    std::vector<Cluster> two;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        Cluster c;
        c.centroid = pool[i];
        c.members = {static_cast<std::uint32_t>(i)};
        two.push_back(c);
    }
    // Manhattan distance 60 < 71: one merged cluster.
    const auto merged = merge_within_region(two, 71.0);
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].size() == 2);

    // All pairs >= 71 apart: unchanged.
    std::vector<Cluster> spread = two;
    spread[1].centroid = {100, 0, 0};
    const auto kept = merge_within_region(spread, 71.0);
    CHECK(kept.size() == 2);
}

TEST_CASE("three-cluster merge order follows the agglomerative trace") {
    // Mutual distances {50, 60, 100}: A-B 50, B-C 60, A-C 100.
    std::vector<Cluster> clusters(3);
    clusters[0].centroid = {0, 0, 0};
    clusters[0].members = {0};
    clusters[1].centroid = {50, 0, 0};
    clusters[1].members = {1};
    clusters[2].centroid = {45, 55, 0};
    clusters[2].members = {2};
    CHECK(manhattan(clusters[0].centroid, clusters[1].centroid) == 50.0);
    CHECK(manhattan(clusters[1].centroid, clusters[2].centroid) == 60.0);
    CHECK(manhattan(clusters[0].centroid, clusters[2].centroid) == 100.0);

    // First merge joins A and B at 50 -> (25,0,0); distance to C is then
    // 20 + 55 = 75 >= 71, so the sequence stops at two clusters.
    const auto merged = merge_within_region(clusters, 71.0);
    REQUIRE(merged.size() == 2);
    CHECK(merged[0].centroid == FeatureVector{25, 0, 0});
    CHECK(merged[0].size() == 2);
    CHECK(merged[1].centroid == FeatureVector{45, 55, 0});
}
