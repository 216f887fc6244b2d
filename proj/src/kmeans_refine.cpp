#include "voroseg/kmeans_refine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "voroseg/errors.hpp"
#include "voroseg/proximal_merge.hpp"

namespace voroseg {

Segmentation kmeans(const Image& image, std::size_t k,
                    const std::vector<FeatureVector>& init_centroids,
                    const KmeansConfig& config, std::vector<double>* sse_trace) {
    if (k < 1 || k != init_centroids.size())
        throw InvalidKError("k = " + std::to_string(k) + " with " +
                            std::to_string(init_centroids.size()) +
                            " init centroids");
    if (image.pixel_count() == 0)
        throw EmptyInputError("cannot cluster an empty image");

    const std::size_t n = image.pixel_count();
    std::vector<FeatureVector> centroids = init_centroids;
    std::vector<std::uint32_t> labels(n, 0);
    if (sse_trace) sse_trace->clear();

    int iterations = 0;
    bool converged = false;
    while (iterations < config.max_iterations && !converged) {
        // Assignment: nearest centroid by squared Euclidean distance,
        // ties to the lowest index.
        for (std::size_t i = 0; i < n; ++i) {
            const FeatureVector p = to_feature(image.pixels[i]);
            double best = squared_distance(p, centroids[0]);
            std::uint32_t best_idx = 0;
            for (std::uint32_t c = 1; c < centroids.size(); ++c) {
                const double d = squared_distance(p, centroids[c]);
                if (d < best) {
                    best = d;
                    best_idx = c;
                }
            }
            labels[i] = best_idx;
        }

        // Update: per-cluster mean of the assigned pixels.
        std::vector<FeatureVector> sums(centroids.size());
        std::vector<std::size_t> counts(centroids.size(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const FeatureVector p = to_feature(image.pixels[i]);
            FeatureVector& s = sums[labels[i]];
            s.r += p.r;
            s.g += p.g;
            s.b += p.b;
            ++counts[labels[i]];
        }

        double max_move = 0.0;
        bool dropped = false;
        std::vector<FeatureVector> next;
        std::vector<std::uint32_t> remap(centroids.size(), 0);
        next.reserve(centroids.size());
        for (std::size_t c = 0; c < centroids.size(); ++c) {
            if (counts[c] == 0) {
                dropped = true; // empty cluster: drop and compact labels
                continue;
            }
            const double inv = 1.0 / static_cast<double>(counts[c]);
            const FeatureVector updated{sums[c].r * inv, sums[c].g * inv,
                                        sums[c].b * inv};
            max_move = std::max(max_move, manhattan(updated, centroids[c]));
            remap[c] = static_cast<std::uint32_t>(next.size());
            next.push_back(updated);
        }
        if (dropped)
            for (std::size_t i = 0; i < n; ++i) labels[i] = remap[labels[i]];
        centroids = std::move(next);
        ++iterations;

        if (sse_trace) {
            double sse = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                sse += squared_distance(to_feature(image.pixels[i]),
                                        centroids[labels[i]]);
            sse_trace->push_back(sse);
        }
        // A drop changes the centroid set, so the round cannot count as
        // converged even if the survivors stood still.
        converged = !dropped && max_move < config.tolerance;
    }

    Segmentation seg;
    seg.width = image.width;
    seg.height = image.height;
    seg.label_of = std::move(labels);
    seg.centroids = std::move(centroids);
    seg.iterations_used = iterations;
    seg.final_sse = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        seg.final_sse += squared_distance(to_feature(image.pixels[i]),
                                          seg.centroids[seg.label_of[i]]);
    return seg;
}

} // namespace voroseg
