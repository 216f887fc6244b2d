#include "voroseg/tessellation.hpp"

#include <limits>
#include <string>

#include "voroseg/errors.hpp"

namespace voroseg {

VoronoiMap assign_voronoi(int width, int height, const SeedSet& seeds) {
    if (seeds.empty())
        throw EmptySeedSetError("cannot tessellate without seeds");
    for (const Seed& s : seeds)
        if (s.x < 0 || s.x >= width || s.y < 0 || s.y >= height)
            throw Error("seed (" + std::to_string(s.x) + "," +
                        std::to_string(s.y) + ") outside raster");

    VoronoiMap map;
    map.width = width;
    map.height = height;
    map.region_count = static_cast<std::uint32_t>(seeds.size());
    map.region_of.resize(static_cast<std::size_t>(width) * height);

    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            long best = std::numeric_limits<long>::max();
            std::uint32_t best_idx = 0;
            for (std::uint32_t i = 0; i < seeds.size(); ++i) {
                const long dx = seeds[i].x - x;
                const long dy = seeds[i].y - y;
                const long d2 = dx * dx + dy * dy;
                if (d2 < best) { // strict: ties keep the lowest index
                    best = d2;
                    best_idx = i;
                }
            }
            map.region_of[static_cast<std::size_t>(y) * width + x] = best_idx;
        }
    }
    return map;
}

} // namespace voroseg
