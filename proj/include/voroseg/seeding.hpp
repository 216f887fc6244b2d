#pragma once

#include <vector>

#include "voroseg/image.hpp"

namespace voroseg {

/// Real-valued intensity raster, row-major.
struct ScalarField {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    ScalarField() = default;
    ScalarField(int w, int h, double fill = 0.0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

    double at(int x, int y) const {
        return values[static_cast<std::size_t>(y) * width + x];
    }
    double& at(int x, int y) {
        return values[static_cast<std::size_t>(y) * width + x];
    }
};

/// (x, y) = (column, row).
struct Seed {
    int x = 0;
    int y = 0;

    friend bool operator==(const Seed&, const Seed&) = default;
};

using SeedSet = std::vector<Seed>;

struct SeedConfig {
    int max_corners = 50;
    double quality_ratio = 0.01; // fraction of the max corner response
    int min_distance = 10;       // pixels, Euclidean
    int grid_fallback_n = 16;
};

/// Rec. 601 luma: 0.299 R + 0.587 G + 0.114 B, unrounded.
ScalarField to_grayscale(const Image& image);

/// Harris corners: 3x3 Sobel gradients and a 3x3 uniform window (clamped
/// sampling at borders), sensitivity constant 0.04. Keeps responses at or
/// above quality_ratio times the maximum, greedily suppresses neighbors
/// closer than min_distance, returns at most max_corners seeds ordered by
/// descending response (ties by row-major position).
SeedSet detect_corners(const ScalarField& field, const SeedConfig& config = {});

/// ceil(sqrt(n)) x ceil(sqrt(n)) grid of cell centers in row-major order,
/// truncated to n; duplicate positions (grids finer than the raster) are
/// skipped, so fewer than n seeds may come back.
SeedSet fallback_grid_seeds(int width, int height, int n);

} // namespace voroseg
