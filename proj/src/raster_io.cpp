#include "voroseg/raster_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include <png.h>

#include "voroseg/errors.hpp"

namespace voroseg {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec) || ec)
        throw FileNotFoundError("no such file: " + path.string());
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open for reading: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad())
        throw IoError("read failed: " + path.string());
    return bytes;
}

void write_file(const std::filesystem::path& path,
                const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError("write failed: " + path.string());
}

// --- PPM ---------------------------------------------------------------

// Reads the next header token, skipping whitespace and '#' comments.
bool next_ppm_token(const std::vector<std::uint8_t>& bytes, std::size_t& pos,
                    std::string& token) {
    token.clear();
    while (pos < bytes.size()) {
        const char c = static_cast<char>(bytes[pos]);
        if (c == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
        } else {
            break;
        }
    }
    while (pos < bytes.size() &&
           !std::isspace(static_cast<unsigned char>(bytes[pos])) &&
           bytes[pos] != '#') {
        token.push_back(static_cast<char>(bytes[pos]));
        ++pos;
    }
    return !token.empty();
}

int parse_ppm_int(const std::string& token, const char* what) {
    if (token.empty() ||
        !std::all_of(token.begin(), token.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw CorruptDataError(std::string("bad PPM ") + what + ": '" + token + "'");
    long v = std::strtol(token.c_str(), nullptr, 10);
    if (v < 0 || v > std::numeric_limits<int>::max())
        throw CorruptDataError(std::string("PPM ") + what + " out of range");
    return static_cast<int>(v);
}

Image decode_ppm(const std::vector<std::uint8_t>& bytes) {
    std::size_t pos = 0;
    std::string tok;
    if (!next_ppm_token(bytes, pos, tok))
        throw CorruptDataError("empty PPM header");
    const bool ascii = tok == "P3";
    if (!ascii && tok != "P6")
        throw UnsupportedFormatError("unsupported PPM magic '" + tok + "'");

    std::string wtok, htok, mtok;
    if (!next_ppm_token(bytes, pos, wtok) || !next_ppm_token(bytes, pos, htok) ||
        !next_ppm_token(bytes, pos, mtok))
        throw CorruptDataError("truncated PPM header");
    const int width = parse_ppm_int(wtok, "width");
    const int height = parse_ppm_int(htok, "height");
    const int maxval = parse_ppm_int(mtok, "maxval");
    if (width <= 0 || height <= 0)
        throw CorruptDataError("non-positive PPM dimensions");
    if (maxval != 255)
        throw UnsupportedFormatError("PPM maxval must be 255, got " +
                                     std::to_string(maxval));

    Image image(width, height);
    const std::size_t n_values = image.pixel_count() * 3;
    if (ascii) {
        for (std::size_t i = 0; i < n_values; ++i) {
            if (!next_ppm_token(bytes, pos, tok))
                throw CorruptDataError("truncated P3 payload");
            const int v = parse_ppm_int(tok, "sample");
            if (v > maxval)
                throw CorruptDataError("P3 sample exceeds maxval");
            reinterpret_cast<std::uint8_t*>(image.pixels.data())[i] =
                static_cast<std::uint8_t>(v);
        }
    } else {
        // Exactly one whitespace byte separates the header from the payload.
        if (pos >= bytes.size() ||
            !std::isspace(static_cast<unsigned char>(bytes[pos])))
            throw CorruptDataError("missing P6 header terminator");
        ++pos;
        if (bytes.size() - pos < n_values)
            throw CorruptDataError("truncated P6 payload");
        std::memcpy(image.pixels.data(), bytes.data() + pos, n_values);
    }
    return image;
}

std::vector<std::uint8_t> encode_ppm_p6(const Image& image) {
    char header[64];
    const int n = std::snprintf(header, sizeof header, "P6\n%d %d\n255\n",
                                image.width, image.height);
    std::vector<std::uint8_t> bytes(header, header + n);
    const auto* raw = reinterpret_cast<const std::uint8_t*>(image.pixels.data());
    bytes.insert(bytes.end(), raw, raw + image.pixel_count() * 3);
    return bytes;
}

// --- PNG ---------------------------------------------------------------

struct PngByteSource {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t count) {
    auto* src = static_cast<PngByteSource*>(png_get_io_ptr(png));
    if (src->pos + count > src->size)
        png_error(png, "unexpected end of PNG stream");
    std::memcpy(out, src->data + src->pos, count);
    src->pos += count;
}

void png_write_to_vector(png_structp png, png_bytep data, png_size_t count) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + count);
}

void png_flush_noop(png_structp) {}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngReader() {
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                     nullptr);
        if (png) info = png_create_info_struct(png);
        if (!png || !info)
            throw IoError("libpng allocation failed");
    }
    ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
    PngReader(const PngReader&) = delete;
    PngReader& operator=(const PngReader&) = delete;
};

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngWriter() {
        png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                      nullptr);
        if (png) info = png_create_info_struct(png);
        if (!png || !info)
            throw IoError("libpng allocation failed");
    }
    ~PngWriter() { png_destroy_write_struct(&png, &info); }
    PngWriter(const PngWriter&) = delete;
    PngWriter& operator=(const PngWriter&) = delete;
};

bool looks_like_png(const std::vector<std::uint8_t>& bytes) {
    static const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    return bytes.size() >= 8 && std::memcmp(bytes.data(), sig, 8) == 0;
}

Image decode_png(const std::vector<std::uint8_t>& bytes) {
    PngReader reader;
    PngByteSource src{bytes.data(), bytes.size(), 0};
    png_set_read_fn(reader.png, &src, png_read_from_memory);

    // libpng reports errors via longjmp back to this frame.
    if (setjmp(png_jmpbuf(reader.png)))
        throw CorruptDataError("corrupt PNG stream");

    png_read_info(reader.png, reader.info);
    const png_uint_32 width = png_get_image_width(reader.png, reader.info);
    const png_uint_32 height = png_get_image_height(reader.png, reader.info);
    const int bit_depth = png_get_bit_depth(reader.png, reader.info);
    const int color_type = png_get_color_type(reader.png, reader.info);

    if (bit_depth != 8)
        throw UnsupportedFormatError("PNG bit depth " + std::to_string(bit_depth) +
                                     ", want 8-bit RGB/RGBA");
    if (color_type != PNG_COLOR_TYPE_RGB && color_type != PNG_COLOR_TYPE_RGB_ALPHA)
        throw UnsupportedFormatError("PNG color type " + std::to_string(color_type) +
                                     ", want RGB or RGBA");
    if (width == 0 || height == 0)
        throw CorruptDataError("empty PNG canvas");

    if (color_type == PNG_COLOR_TYPE_RGB_ALPHA)
        png_set_strip_alpha(reader.png);
    png_set_interlace_handling(reader.png);
    png_read_update_info(reader.png, reader.info);

    Image image(static_cast<int>(width), static_cast<int>(height));
    std::vector<png_bytep> rows(height);
    for (png_uint_32 y = 0; y < height; ++y)
        rows[y] = reinterpret_cast<png_bytep>(image.pixels.data()) +
                  static_cast<std::size_t>(y) * width * 3;
    png_read_image(reader.png, rows.data());
    png_read_end(reader.png, nullptr);
    return image;
}

std::vector<std::uint8_t> encode_png(const Image& image) {
    PngWriter writer;
    std::vector<std::uint8_t> out;
    png_set_write_fn(writer.png, &out, png_write_to_vector, png_flush_noop);
    if (setjmp(png_jmpbuf(writer.png)))
        throw IoError("PNG encode failed");

    png_set_IHDR(writer.png, writer.info, image.width, image.height, 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(writer.png, writer.info);
    for (int y = 0; y < image.height; ++y) {
        auto* row = const_cast<png_bytep>(
            reinterpret_cast<const std::uint8_t*>(image.pixels.data()) +
            static_cast<std::size_t>(y) * image.width * 3);
        png_write_row(writer.png, row);
    }
    png_write_end(writer.png, nullptr);
    return out;
}

} // namespace

Image decode_image(const std::vector<std::uint8_t>& bytes) {
    if (looks_like_png(bytes))
        return decode_png(bytes);
    if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '3' || bytes[1] == '6'))
        return decode_ppm(bytes);
    throw UnsupportedFormatError("not a PPM (P3/P6) or PNG stream");
}

Image load_image(const std::filesystem::path& path) {
    return decode_image(read_file(path));
}

std::vector<std::uint8_t> encode_image(const Image& image, ImageFormat format) {
    return format == ImageFormat::PpmP6 ? encode_ppm_p6(image) : encode_png(image);
}

void save_image(const Image& image, const std::filesystem::path& path,
                ImageFormat format) {
    write_file(path, encode_image(image, format));
}

void save_label_map(const Segmentation& seg, const std::filesystem::path& path) {
    for (std::uint32_t label : seg.label_of)
        if (label > 0xffff)
            throw LabelOutOfRangeError("label exceeds 16-bit range");

    PngWriter writer;
    std::vector<std::uint8_t> out;
    png_set_write_fn(writer.png, &out, png_write_to_vector, png_flush_noop);
    if (setjmp(png_jmpbuf(writer.png)))
        throw IoError("PNG encode failed");

    png_set_IHDR(writer.png, writer.info, seg.width, seg.height, 16,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(writer.png, writer.info);
    std::vector<std::uint8_t> row(static_cast<std::size_t>(seg.width) * 2);
    for (int y = 0; y < seg.height; ++y) {
        for (int x = 0; x < seg.width; ++x) {
            const std::uint32_t v =
                seg.label_of[static_cast<std::size_t>(y) * seg.width + x];
            row[2 * x] = static_cast<std::uint8_t>(v >> 8); // network byte order
            row[2 * x + 1] = static_cast<std::uint8_t>(v & 0xff);
        }
        png_write_row(writer.png, row.data());
    }
    png_write_end(writer.png, nullptr);
    write_file(path, out);
}

std::vector<std::uint32_t> load_label_map_png(const std::filesystem::path& path,
                                              int& width, int& height) {
    const auto bytes = read_file(path);
    if (!looks_like_png(bytes))
        throw UnsupportedFormatError("label map is not a PNG stream");

    PngReader reader;
    PngByteSource src{bytes.data(), bytes.size(), 0};
    png_set_read_fn(reader.png, &src, png_read_from_memory);
    if (setjmp(png_jmpbuf(reader.png)))
        throw CorruptDataError("corrupt PNG stream");

    png_read_info(reader.png, reader.info);
    const png_uint_32 w = png_get_image_width(reader.png, reader.info);
    const png_uint_32 h = png_get_image_height(reader.png, reader.info);
    if (png_get_bit_depth(reader.png, reader.info) != 16 ||
        png_get_color_type(reader.png, reader.info) != PNG_COLOR_TYPE_GRAY)
        throw UnsupportedFormatError("label map must be 16-bit grayscale PNG");

    png_set_interlace_handling(reader.png);
    png_read_update_info(reader.png, reader.info);

    std::vector<std::uint8_t> raw(static_cast<std::size_t>(w) * h * 2);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = raw.data() + static_cast<std::size_t>(y) * w * 2;
    png_read_image(reader.png, rows.data());
    png_read_end(reader.png, nullptr);

    std::vector<std::uint32_t> labels(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < labels.size(); ++i)
        labels[i] = (static_cast<std::uint32_t>(raw[2 * i]) << 8) | raw[2 * i + 1];
    width = static_cast<int>(w);
    height = static_cast<int>(h);
    return labels;
}

// --- palette and rendering ----------------------------------------------

Palette spaced_palette(std::size_t n) {
    // Smallest cubic lattice covering n points; side 4 gives the 64 defaults.
    std::size_t side = 4;
    while (side * side * side < n) ++side;

    std::vector<Rgb> lattice;
    lattice.reserve(side * side * side);
    for (std::size_t r = 0; r < side; ++r)
        for (std::size_t g = 0; g < side; ++g)
            for (std::size_t b = 0; b < side; ++b)
                lattice.push_back({static_cast<std::uint8_t>(r * 255 / (side - 1)),
                                   static_cast<std::uint8_t>(g * 255 / (side - 1)),
                                   static_cast<std::uint8_t>(b * 255 / (side - 1))});

    auto dist2 = [](const Rgb& a, const Rgb& b) {
        const int dr = int(a.r) - int(b.r);
        const int dg = int(a.g) - int(b.g);
        const int db = int(a.b) - int(b.b);
        return dr * dr + dg * dg + db * db;
    };

    Palette palette;
    palette.colors.reserve(n);
    std::vector<bool> taken(lattice.size(), false);
    std::vector<int> min_d2(lattice.size(), std::numeric_limits<int>::max());
    // Greedy farthest-point ordering, seeded at black (lattice index 0).
    std::size_t pick = 0;
    for (std::size_t count = 0; count < n && count < lattice.size(); ++count) {
        taken[pick] = true;
        palette.colors.push_back(lattice[pick]);
        int best = -1;
        std::size_t next = 0;
        for (std::size_t i = 0; i < lattice.size(); ++i) {
            if (taken[i]) continue;
            min_d2[i] = std::min(min_d2[i], dist2(lattice[i], lattice[pick]));
            if (min_d2[i] > best) { // lattice order breaks ties: lowest (r,g,b)
                best = min_d2[i];
                next = i;
            }
        }
        pick = next;
    }
    return palette;
}

const Palette& default_palette() {
    static const Palette palette = spaced_palette(64);
    return palette;
}

Image render_centroid_image(const Image& image, const Segmentation& seg) {
    auto round_channel = [](double v) {
        const double r = std::floor(v + 0.5); // round half up
        return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
    };
    std::vector<Rgb> colors(seg.centroids.size());
    for (std::size_t i = 0; i < seg.centroids.size(); ++i)
        colors[i] = {round_channel(seg.centroids[i].r),
                     round_channel(seg.centroids[i].g),
                     round_channel(seg.centroids[i].b)};

    Image out(image.width, image.height);
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
        const std::uint32_t label = seg.label_of[i];
        if (label >= colors.size())
            throw LabelOutOfRangeError("label " + std::to_string(label) +
                                       " has no centroid");
        out.pixels[i] = colors[label];
    }
    return out;
}

Image render_false_color(const Segmentation& seg, const Palette& palette) {
    if (seg.centroids.size() > palette.size())
        throw PaletteTooSmallError("palette has " + std::to_string(palette.size()) +
                                   " colors for " +
                                   std::to_string(seg.centroids.size()) +
                                   " clusters");
    Image out(seg.width, seg.height);
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
        const std::uint32_t label = seg.label_of[i];
        if (label >= seg.centroids.size())
            throw LabelOutOfRangeError("label " + std::to_string(label) +
                                       " out of range");
        out.pixels[i] = palette.colors[label];
    }
    return out;
}

} // namespace voroseg
