#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "voroseg/cluster.hpp"
#include "voroseg/image.hpp"
#include "voroseg/kmeans_refine.hpp"

namespace voroseg {

enum class SegmentMode { Cluster, ConnectedComponent };

std::string to_string(SegmentMode mode);

/// One evaluation unit: either a whole cluster or a maximal 4-connected
/// same-label component. Mean colors always come from the original image.
struct Segment {
    std::vector<std::uint32_t> members; // pixel indices, row-major order
    FeatureVector mean_color;

    std::size_t area() const { return members.size(); }
};

struct SegmentView {
    std::vector<Segment> segments;
    SegmentMode mode = SegmentMode::Cluster;
    std::size_t total_pixels = 0; // N

    std::size_t segment_count() const { return segments.size(); } // M
};

SegmentView build_segment_view(const Image& image, const Segmentation& seg,
                               SegmentMode mode);

/// Mean squared deviation of pixels from their cluster centroids
/// (the centroids, not the segment means).
double mse(const Image& image, const Segmentation& seg);

/// Sum over segment j of the squared color error against the segment mean.
double color_error_sq(const SegmentView& view, std::size_t j, const Image& image);

double liu_yang_f(const Image& image, const SegmentView& view);
double borsotti_f_prime(const Image& image, const SegmentView& view);
double borsotti_q(const Image& image, const SegmentView& view);

/// Area-weighted mean of per-segment mean squared color error.
double intra_uniformity(const Image& image, const SegmentView& view);

/// Area-weighted mean of each segment's average normalized color distance
/// to the other segments' means (zero for a single segment).
double inter_disparity(const Image& image, const SegmentView& view);

/// (inter_disparity - intra_uniformity) / 2; higher is better.
double f_rc(const Image& image, const SegmentView& view);

struct MetricsReport {
    double mse = 0.0;
    double f = 0.0;
    double f_prime = 0.0;
    double q = 0.0;
    double d_intra = 0.0;
    double d_inter = 0.0;
    double f_rc = 0.0;
    std::size_t k = 0;
    SegmentMode mode = SegmentMode::Cluster;
};

MetricsReport compute_metrics(const Image& image, const Segmentation& seg,
                              SegmentMode mode);

/// Adopt an externally produced label map for evaluation: labels compact
/// to 0..k-1 in ascending original order and each centroid becomes the
/// mean color of its label's pixels.
Segmentation segmentation_from_labels(const Image& image,
                                      std::vector<std::uint32_t> labels);

} // namespace voroseg
