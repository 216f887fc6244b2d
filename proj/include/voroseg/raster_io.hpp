#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "voroseg/image.hpp"
#include "voroseg/kmeans_refine.hpp"

namespace voroseg {

enum class ImageFormat { PpmP6, Png };

/// Decode a PPM (P3 or P6, maxval 255) or PNG (8-bit RGB/RGBA, alpha
/// discarded) file.
Image load_image(const std::filesystem::path& path);

Image decode_image(const std::vector<std::uint8_t>& bytes);

void save_image(const Image& image, const std::filesystem::path& path,
                ImageFormat format);

std::vector<std::uint8_t> encode_image(const Image& image, ImageFormat format);

/// Label maps travel as 16-bit grayscale PNG, pixel value = label.
void save_label_map(const Segmentation& seg, const std::filesystem::path& path);
std::vector<std::uint32_t> load_label_map_png(const std::filesystem::path& path,
                                              int& width, int& height);

/// Ordered list of pairwise-distinct colors for false-color rendering.
struct Palette {
    std::vector<Rgb> colors;

    std::size_t size() const { return colors.size(); }
};

/// Deterministic palette: colors come from the smallest cubic RGB lattice
/// with at least `n` points (4x4x4 for n <= 64), ordered by greedy
/// farthest-point selection starting from black; ties pick the smallest
/// (r, g, b) tuple. The default palette is spaced_palette(64).
Palette spaced_palette(std::size_t n);
const Palette& default_palette();

/// Replace every pixel with its cluster centroid, rounded half-up per
/// channel.
Image render_centroid_image(const Image& image, const Segmentation& seg);

/// Map labels straight onto palette entries.
Image render_false_color(const Segmentation& seg, const Palette& palette);

} // namespace voroseg
