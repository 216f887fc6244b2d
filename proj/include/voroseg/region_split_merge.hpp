#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "voroseg/cluster.hpp"

namespace voroseg {

enum class Channel { R = 0, G = 1, B = 2 };

/// 256-bin count vector for one color channel. Real-valued so smoothing
/// can live in the same type.
struct Histogram {
    std::array<double, 256> bins{};
};

struct RsmConfig {
    int span = 5;                // moving-average window, odd
    double peak_min_ratio = 0.05; // of the tallest smoothed bin
    std::size_t min_region_pixels = 16;
    double epsilon = 71.0; // shared with the global proximal merge
};

/// bins[v] counts pixels whose selected channel rounds to v.
Histogram channel_histogram(std::span<const FeatureVector> pixels,
                            Channel channel);

/// Moving average with the window clipped to [0, 255] (it shrinks at the
/// edges). span must be odd; span = 1 is the identity.
Histogram smooth_histogram(const Histogram& h, int span);

/// Peak = bin where the forward difference turns from positive to
/// nonpositive; a plateau's leftmost bin carries the peak, and the climb
/// into bin 0 counts as positive (an empty virtual bin sits before it).
/// Peaks shorter than peak_min_ratio times the tallest smoothed bin are
/// dropped. Ascending order.
std::vector<int> find_peaks(const Histogram& h, const RsmConfig& config);

/// For each adjacent peak pair, the lowest bin strictly between them
/// (ties to the lowest index). Empty for fewer than two peaks.
std::vector<int> find_valleys(const Histogram& h, const std::vector<int>& peaks);

/// Histogram splitting: per-channel valleys partition [0, 255] into
/// intervals whose Cartesian product defines color cells; every nonempty
/// cell becomes a cluster. Regions below min_region_pixels collapse to a
/// single cluster. `ids` supplies the member indices recorded in the
/// clusters and must parallel `pixels`.
std::vector<Cluster> split_region(std::span<const FeatureVector> pixels,
                                  std::span<const std::uint32_t> ids,
                                  const RsmConfig& config);

/// Convenience overload: members index into `pixels` directly.
std::vector<Cluster> split_region(std::span<const FeatureVector> pixels,
                                  const RsmConfig& config);

/// Same agglomeration as the global stage, applied to one region's
/// clusters.
std::vector<Cluster> merge_within_region(std::vector<Cluster> clusters,
                                         double epsilon);

} // namespace voroseg
