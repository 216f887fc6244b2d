#include "voroseg/region_split_merge.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "voroseg/errors.hpp"
#include "voroseg/proximal_merge.hpp"

namespace voroseg {

namespace {

int channel_bin(const FeatureVector& p, Channel channel) {
    const double v = p[static_cast<int>(channel)];
    return std::clamp(static_cast<int>(std::llround(v)), 0, 255);
}

} // namespace

Histogram channel_histogram(std::span<const FeatureVector> pixels,
                            Channel channel) {
    if (pixels.empty())
        throw EmptyInputError("histogram of an empty pixel set");
    Histogram h;
    for (const FeatureVector& p : pixels)
        h.bins[channel_bin(p, channel)] += 1.0;
    return h;
}

Histogram smooth_histogram(const Histogram& h, int span) {
    const int half = (span - 1) / 2;
    Histogram out;
    for (int i = 0; i < 256; ++i) {
        const int lo = std::max(0, i - half);
        const int hi = std::min(255, i + half);
        double sum = 0.0;
        for (int j = lo; j <= hi; ++j) sum += h.bins[j];
        out.bins[i] = sum / (hi - lo + 1);
    }
    return out;
}

std::vector<int> find_peaks(const Histogram& h, const RsmConfig& config) {
    const double max_bin = *std::max_element(h.bins.begin(), h.bins.end());
    const double min_height = config.peak_min_ratio * max_bin;

    std::vector<int> peaks;
    // diff(i) = h[i+1] - h[i]; the virtual bin before 0 is empty, so the
    // difference into bin 0 is h[0].
    auto diff = [&h](int i) { return i < 0 ? h.bins[0] : h.bins[i + 1] - h.bins[i]; };
    for (int i = 0; i <= 254; ++i) {
        if (diff(i - 1) > 0.0 && diff(i) <= 0.0 && h.bins[i] >= min_height)
            peaks.push_back(i);
    }
    return peaks;
}

std::vector<int> find_valleys(const Histogram& h, const std::vector<int>& peaks) {
    std::vector<int> valleys;
    for (std::size_t p = 0; p + 1 < peaks.size(); ++p) {
        int best = peaks[p] + 1;
        for (int i = peaks[p] + 1; i < peaks[p + 1]; ++i)
            if (h.bins[i] < h.bins[best]) best = i;
        valleys.push_back(best);
    }
    return valleys;
}

std::vector<Cluster> split_region(std::span<const FeatureVector> pixels,
                                  std::span<const std::uint32_t> ids,
                                  const RsmConfig& config) {
    if (pixels.empty())
        throw EmptyInputError("cannot split an empty region");

    auto make_cluster = [&](const std::vector<std::uint32_t>& member_positions) {
        Cluster c;
        c.members.reserve(member_positions.size());
        double sr = 0.0, sg = 0.0, sb = 0.0;
        for (std::uint32_t pos : member_positions) {
            c.members.push_back(ids[pos]);
            sr += pixels[pos].r;
            sg += pixels[pos].g;
            sb += pixels[pos].b;
        }
        const double n = static_cast<double>(member_positions.size());
        c.centroid = {sr / n, sg / n, sb / n};
        return c;
    };

    std::vector<Cluster> clusters;
    if (pixels.size() < config.min_region_pixels) {
        // Degenerate histograms; the global merge absorbs the remainder.
        std::vector<std::uint32_t> all(pixels.size());
        std::iota(all.begin(), all.end(), 0u);
        clusters.push_back(make_cluster(all));
        return clusters;
    }

    std::array<std::vector<int>, 3> valleys;
    for (int c = 0; c < 3; ++c) {
        const Histogram smoothed = smooth_histogram(
            channel_histogram(pixels, static_cast<Channel>(c)), config.span);
        valleys[c] = find_valleys(smoothed, find_peaks(smoothed, config));
    }

    // Interval index per channel = number of valleys at or below the bin;
    // a valley bin opens the upper interval.
    auto interval_of = [&](const FeatureVector& p, int c) {
        const int bin = channel_bin(p, static_cast<Channel>(c));
        return static_cast<int>(std::upper_bound(valleys[c].begin(),
                                                 valleys[c].end(), bin) -
                                valleys[c].begin());
    };

    // Cells keyed by (R, G, B) interval index; std::map keeps the
    // deterministic lexicographic cell order.
    std::map<std::array<int, 3>, std::vector<std::uint32_t>> cells;
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        const std::array<int, 3> key{interval_of(pixels[i], 0),
                                     interval_of(pixels[i], 1),
                                     interval_of(pixels[i], 2)};
        cells[key].push_back(static_cast<std::uint32_t>(i));
    }

    clusters.reserve(cells.size());
    for (const auto& [key, members] : cells)
        clusters.push_back(make_cluster(members));
    return clusters;
}

std::vector<Cluster> split_region(std::span<const FeatureVector> pixels,
                                  const RsmConfig& config) {
    std::vector<std::uint32_t> ids(pixels.size());
    std::iota(ids.begin(), ids.end(), 0u);
    return split_region(pixels, ids, config);
}

std::vector<Cluster> merge_within_region(std::vector<Cluster> clusters,
                                         double epsilon) {
    if (clusters.empty()) return clusters;
    return merge_proximal_clusters(std::move(clusters), epsilon).clusters;
}

} // namespace voroseg
