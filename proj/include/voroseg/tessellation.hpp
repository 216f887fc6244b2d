#pragma once

#include <cstdint>
#include <vector>

#include "voroseg/seeding.hpp"

namespace voroseg {

/// Per-pixel index of the nearest seed.
struct VoronoiMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint32_t> region_of; // row-major
    std::uint32_t region_count = 0;

    std::uint32_t at(int x, int y) const {
        return region_of[static_cast<std::size_t>(y) * width + x];
    }
};

/// Exact nearest-seed assignment in integer squared Euclidean distance;
/// ties break to the lowest seed index.
VoronoiMap assign_voronoi(int width, int height, const SeedSet& seeds);

} // namespace voroseg
