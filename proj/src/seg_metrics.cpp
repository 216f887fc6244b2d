#include "voroseg/seg_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "voroseg/errors.hpp"

namespace voroseg {

namespace {

constexpr double kGrayLevels = 255.0; // NG for 8-bit channels

FeatureVector mean_color_of(const Image& image,
                            const std::vector<std::uint32_t>& members) {
    double sr = 0.0, sg = 0.0, sb = 0.0;
    for (std::uint32_t i : members) {
        const Rgb& p = image.pixels[i];
        sr += p.r;
        sg += p.g;
        sb += p.b;
    }
    const double n = static_cast<double>(members.size());
    return {sr / n, sg / n, sb / n};
}

// Histogram of segment areas: S(a) = number of segments with area exactly a.
std::map<std::size_t, std::size_t> area_counts(const SegmentView& view) {
    std::map<std::size_t, std::size_t> counts;
    for (const Segment& s : view.segments) ++counts[s.area()];
    return counts;
}

} // namespace

std::string to_string(SegmentMode mode) {
    return mode == SegmentMode::Cluster ? "cluster" : "connected-component";
}

SegmentView build_segment_view(const Image& image, const Segmentation& seg,
                               SegmentMode mode) {
    SegmentView view;
    view.mode = mode;
    view.total_pixels = image.pixel_count();

    if (mode == SegmentMode::Cluster) {
        // One segment per label present, ascending label order.
        std::map<std::uint32_t, std::vector<std::uint32_t>> by_label;
        for (std::size_t i = 0; i < seg.label_of.size(); ++i)
            by_label[seg.label_of[i]].push_back(static_cast<std::uint32_t>(i));
        for (auto& [label, members] : by_label) {
            Segment s;
            s.members = std::move(members);
            view.segments.push_back(std::move(s));
        }
    } else {
        // Maximal 4-connected same-label components in discovery order.
        const int w = seg.width;
        const int h = seg.height;
        std::vector<bool> visited(seg.label_of.size(), false);
        std::vector<std::uint32_t> stack;
        for (std::size_t start = 0; start < seg.label_of.size(); ++start) {
            if (visited[start]) continue;
            const std::uint32_t label = seg.label_of[start];
            Segment s;
            visited[start] = true;
            stack.assign(1, static_cast<std::uint32_t>(start));
            while (!stack.empty()) {
                const std::uint32_t i = stack.back();
                stack.pop_back();
                s.members.push_back(i);
                const int x = static_cast<int>(i) % w;
                const int y = static_cast<int>(i) / w;
                const int nx[4] = {x - 1, x + 1, x, x};
                const int ny[4] = {y, y, y - 1, y + 1};
                for (int d = 0; d < 4; ++d) {
                    if (nx[d] < 0 || nx[d] >= w || ny[d] < 0 || ny[d] >= h)
                        continue;
                    const std::size_t j =
                        static_cast<std::size_t>(ny[d]) * w + nx[d];
                    if (!visited[j] && seg.label_of[j] == label) {
                        visited[j] = true;
                        stack.push_back(static_cast<std::uint32_t>(j));
                    }
                }
            }
            std::sort(s.members.begin(), s.members.end());
            view.segments.push_back(std::move(s));
        }
    }

    for (Segment& s : view.segments)
        s.mean_color = mean_color_of(image, s.members);
    return view;
}

double mse(const Image& image, const Segmentation& seg) {
    double sum = 0.0;
    for (std::size_t i = 0; i < image.pixel_count(); ++i)
        sum += squared_distance(to_feature(image.pixels[i]),
                                seg.centroids[seg.label_of[i]]);
    return sum / static_cast<double>(image.pixel_count());
}

double color_error_sq(const SegmentView& view, std::size_t j, const Image& image) {
    if (j >= view.segments.size())
        throw IndexOutOfRangeError("segment index " + std::to_string(j) +
                                   " of " + std::to_string(view.segments.size()));
    const Segment& s = view.segments[j];
    double sum = 0.0;
    for (std::uint32_t i : s.members)
        sum += squared_distance(to_feature(image.pixels[i]), s.mean_color);
    return sum;
}

double liu_yang_f(const Image& image, const SegmentView& view) {
    const double n = static_cast<double>(view.total_pixels);
    const double m = static_cast<double>(view.segment_count());
    double sum = 0.0;
    for (std::size_t j = 0; j < view.segment_count(); ++j)
        sum += color_error_sq(view, j, image) /
               std::sqrt(static_cast<double>(view.segments[j].area()));
    return std::sqrt(m) / (1000.0 * n) * sum;
}

double borsotti_f_prime(const Image& image, const SegmentView& view) {
    const double n = static_cast<double>(view.total_pixels);
    double root_term = 0.0;
    for (const auto& [area, count] : area_counts(view))
        root_term += std::pow(static_cast<double>(count),
                              1.0 + 1.0 / static_cast<double>(area));
    double sum = 0.0;
    for (std::size_t j = 0; j < view.segment_count(); ++j)
        sum += color_error_sq(view, j, image) /
               std::sqrt(static_cast<double>(view.segments[j].area()));
    return std::sqrt(root_term) / (1000.0 * n) * sum;
}

double borsotti_q(const Image& image, const SegmentView& view) {
    const double n = static_cast<double>(view.total_pixels);
    const double m = static_cast<double>(view.segment_count());
    const auto counts = area_counts(view);
    double sum = 0.0;
    for (std::size_t j = 0; j < view.segment_count(); ++j) {
        const double area = static_cast<double>(view.segments[j].area());
        const double same_area =
            static_cast<double>(counts.at(view.segments[j].area()));
        const double ratio = same_area / area;
        sum += color_error_sq(view, j, image) / (1.0 + std::log(area)) +
               ratio * ratio;
    }
    return std::sqrt(m) / (1000.0 * n) * sum;
}

double intra_uniformity(const Image& image, const SegmentView& view) {
    const double n = static_cast<double>(view.total_pixels);
    const double m = static_cast<double>(view.segment_count());
    double sum = 0.0;
    for (std::size_t j = 0; j < view.segment_count(); ++j) {
        const double area = static_cast<double>(view.segments[j].area());
        // (N_j / N) times the segment's mean squared color error.
        sum += (area / n) * (color_error_sq(view, j, image) / area);
    }
    return sum / m;
}

double inter_disparity(const Image& /*image*/, const SegmentView& view) {
    const std::size_t m = view.segment_count();
    if (m < 2) return 0.0;
    const double n = static_cast<double>(view.total_pixels);
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        double pair_sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == j) continue;
            pair_sum += std::sqrt(squared_distance(view.segments[j].mean_color,
                                                   view.segments[i].mean_color)) /
                        kGrayLevels;
        }
        const double per_region = pair_sum / static_cast<double>(m - 1);
        total += (static_cast<double>(view.segments[j].area()) / n) * per_region;
    }
    return total / static_cast<double>(m);
}

double f_rc(const Image& image, const SegmentView& view) {
    return (inter_disparity(image, view) - intra_uniformity(image, view)) / 2.0;
}

Segmentation segmentation_from_labels(const Image& image,
                                      std::vector<std::uint32_t> labels) {
    if (labels.size() != image.pixel_count())
        throw Error("label map size does not match the image");

    std::map<std::uint32_t, std::uint32_t> compact;
    for (std::uint32_t label : labels) compact.emplace(label, 0);
    std::uint32_t next = 0;
    for (auto& [label, idx] : compact) idx = next++;

    Segmentation seg;
    seg.width = image.width;
    seg.height = image.height;
    seg.label_of.reserve(labels.size());
    for (std::uint32_t label : labels) seg.label_of.push_back(compact.at(label));

    std::vector<FeatureVector> sums(compact.size());
    std::vector<std::size_t> counts(compact.size(), 0);
    for (std::size_t i = 0; i < seg.label_of.size(); ++i) {
        const FeatureVector p = to_feature(image.pixels[i]);
        FeatureVector& s = sums[seg.label_of[i]];
        s.r += p.r;
        s.g += p.g;
        s.b += p.b;
        ++counts[seg.label_of[i]];
    }
    seg.centroids.resize(compact.size());
    for (std::size_t c = 0; c < compact.size(); ++c) {
        const double inv = 1.0 / static_cast<double>(counts[c]);
        seg.centroids[c] = {sums[c].r * inv, sums[c].g * inv, sums[c].b * inv};
    }
    for (std::size_t i = 0; i < image.pixel_count(); ++i)
        seg.final_sse += squared_distance(to_feature(image.pixels[i]),
                                          seg.centroids[seg.label_of[i]]);
    return seg;
}

MetricsReport compute_metrics(const Image& image, const Segmentation& seg,
                              SegmentMode mode) {
    const SegmentView view = build_segment_view(image, seg, mode);
    MetricsReport report;
    report.mse = mse(image, seg);
    report.f = liu_yang_f(image, view);
    report.f_prime = borsotti_f_prime(image, view);
    report.q = borsotti_q(image, view);
    report.d_intra = intra_uniformity(image, view);
    report.d_inter = inter_disparity(image, view);
    report.f_rc = f_rc(image, view);
    report.k = seg.centroids.size();
    report.mode = mode;
    return report;
}

} // namespace voroseg
