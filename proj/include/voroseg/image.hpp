#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace voroseg {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 8-bit RGB raster, row-major.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<Rgb> pixels;

    Image() = default;
    Image(int w, int h, Rgb fill = {})
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    std::size_t pixel_count() const { return pixels.size(); }

    const Rgb& at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    Rgb& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }

    friend bool operator==(const Image&, const Image&) = default;
};

} // namespace voroseg
