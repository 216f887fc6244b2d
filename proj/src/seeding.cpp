#include "voroseg/seeding.hpp"

#include <algorithm>
#include <cmath>

#include "voroseg/errors.hpp"

namespace voroseg {

ScalarField to_grayscale(const Image& image) {
    ScalarField field(image.width, image.height);
    for (std::size_t i = 0; i < image.pixel_count(); ++i) {
        const Rgb& p = image.pixels[i];
        field.values[i] = 0.299 * p.r + 0.587 * p.g + 0.114 * p.b;
    }
    return field;
}

namespace {

constexpr double kHarrisK = 0.04;

double clamped(const ScalarField& f, int x, int y) {
    x = std::clamp(x, 0, f.width - 1);
    y = std::clamp(y, 0, f.height - 1);
    return f.at(x, y);
}

struct Candidate {
    double response;
    int x;
    int y;
};

} // namespace

SeedSet detect_corners(const ScalarField& field, const SeedConfig& config) {
    if (field.width < 3 || field.height < 3)
        throw ImageTooSmallError("corner detection needs at least 3x3 pixels");

    const int w = field.width;
    const int h = field.height;

    // Sobel gradients, clamped at the borders.
    ScalarField gx(w, h), gy(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double tl = clamped(field, x - 1, y - 1);
            const double tc = clamped(field, x, y - 1);
            const double tr = clamped(field, x + 1, y - 1);
            const double ml = clamped(field, x - 1, y);
            const double mr = clamped(field, x + 1, y);
            const double bl = clamped(field, x - 1, y + 1);
            const double bc = clamped(field, x, y + 1);
            const double br = clamped(field, x + 1, y + 1);
            gx.at(x, y) = (tr + 2 * mr + br) - (tl + 2 * ml + bl);
            gy.at(x, y) = (bl + 2 * bc + br) - (tl + 2 * tc + tr);
        }
    }

    // Structure tensor summed over a 3x3 uniform window, then the Harris
    // response R = det(M) - k trace(M)^2.
    ScalarField response(w, h);
    double max_response = 0.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double sxx = 0.0, syy = 0.0, sxy = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const double ix = clamped(gx, x + dx, y + dy);
                    const double iy = clamped(gy, x + dx, y + dy);
                    sxx += ix * ix;
                    syy += iy * iy;
                    sxy += ix * iy;
                }
            }
            const double det = sxx * syy - sxy * sxy;
            const double trace = sxx + syy;
            const double r = det - kHarrisK * trace * trace;
            response.at(x, y) = r;
            max_response = std::max(max_response, r);
        }
    }
    if (max_response <= 0.0)
        return {}; // no positive response anywhere: featureless image

    const double threshold = config.quality_ratio * max_response;
    std::vector<Candidate> candidates;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (const double r = response.at(x, y); r > 0.0 && r >= threshold)
                candidates.push_back({r, x, y});

    // Descending response; ties resolve by row-major position.
    std::sort(candidates.begin(), candidates.end(),
              [w](const Candidate& a, const Candidate& b) {
                  if (a.response != b.response) return a.response > b.response;
                  return static_cast<long>(a.y) * w + a.x <
                         static_cast<long>(b.y) * w + b.x;
              });

    const long min_d2 =
        static_cast<long>(config.min_distance) * config.min_distance;
    SeedSet seeds;
    for (const Candidate& c : candidates) {
        if (static_cast<int>(seeds.size()) >= config.max_corners) break;
        const bool suppressed =
            std::any_of(seeds.begin(), seeds.end(), [&](const Seed& s) {
                const long dx = s.x - c.x;
                const long dy = s.y - c.y;
                return dx * dx + dy * dy < min_d2;
            });
        if (!suppressed) seeds.push_back({c.x, c.y});
    }
    return seeds;
}

SeedSet fallback_grid_seeds(int width, int height, int n) {
    if (n < 1) throw EmptyInputError("grid seed count must be >= 1");
    int side = 1;
    while (side * side < n) ++side;

    SeedSet seeds;
    seeds.reserve(static_cast<std::size_t>(n));
    for (int row = 0; row < side && static_cast<int>(seeds.size()) < n; ++row) {
        for (int col = 0; col < side && static_cast<int>(seeds.size()) < n; ++col) {
            const Seed s{(2 * col + 1) * width / (2 * side),
                         (2 * row + 1) * height / (2 * side)};
            if (std::find(seeds.begin(), seeds.end(), s) == seeds.end())
                seeds.push_back(s);
        }
    }
    return seeds;
}

} // namespace voroseg
