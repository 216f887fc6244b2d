#pragma once

#include <cstdint>
#include <vector>

#include "voroseg/cluster.hpp"
#include "voroseg/image.hpp"

namespace voroseg {

/// Per-pixel cluster labels plus the converged centroid list.
struct Segmentation {
    int width = 0;
    int height = 0;
    std::vector<std::uint32_t> label_of; // row-major, one label per pixel
    std::vector<FeatureVector> centroids;
    int iterations_used = 0;
    double final_sse = 0.0;

    std::size_t cluster_count() const { return centroids.size(); }
};

struct KmeansConfig {
    int max_iterations = 100;
    double tolerance = 1e-3; // max per-centroid Manhattan movement
};

/// Lloyd iteration over all image pixels, seeded with `init_centroids`.
/// Assignment uses squared Euclidean distance with ties going to the
/// lowest centroid index; clusters that lose all members are dropped and
/// the labels compacted. If `sse_trace` is non-null it receives the SSE
/// after each completed assign/update round.
Segmentation kmeans(const Image& image, std::size_t k,
                    const std::vector<FeatureVector>& init_centroids,
                    const KmeansConfig& config = {},
                    std::vector<double>* sse_trace = nullptr);

} // namespace voroseg
