#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "voroseg/pipeline.hpp"
#include "voroseg/proximal_merge.hpp"
#include "voroseg/raster_io.hpp"
#include "voroseg/seeding.hpp"
#include "voroseg/seg_metrics.hpp"
#include "voroseg/tessellation.hpp"

namespace py = pybind11;
using namespace voroseg;

namespace {

Image image_from_array(const py::array_t<std::uint8_t>& array) {
    const auto buf = array.request();
    if (buf.ndim != 3 || buf.shape[2] != 3)
        throw std::invalid_argument("expected an (H, W, 3) uint8 array");
    Image image(static_cast<int>(buf.shape[1]), static_cast<int>(buf.shape[0]));
    const auto view = array.unchecked<3>();
    for (py::ssize_t y = 0; y < view.shape(0); ++y)
        for (py::ssize_t x = 0; x < view.shape(1); ++x)
            image.at(static_cast<int>(x), static_cast<int>(y)) = {
                view(y, x, 0), view(y, x, 1), view(y, x, 2)};
    return image;
}

py::array_t<std::uint32_t> labels_to_array(const Segmentation& seg) {
    py::array_t<std::uint32_t> labels({seg.height, seg.width});
    auto out = labels.mutable_unchecked<2>();
    for (int y = 0; y < seg.height; ++y)
        for (int x = 0; x < seg.width; ++x)
            out(y, x) = seg.label_of[static_cast<std::size_t>(y) * seg.width + x];
    return labels;
}

py::array_t<double> centroids_to_array(const std::vector<FeatureVector>& cs) {
    py::array_t<double> array({static_cast<py::ssize_t>(cs.size()),
                               static_cast<py::ssize_t>(3)});
    auto out = array.mutable_unchecked<2>();
    for (std::size_t i = 0; i < cs.size(); ++i) {
        out(i, 0) = cs[i].r;
        out(i, 1) = cs[i].g;
        out(i, 2) = cs[i].b;
    }
    return array;
}

py::dict metrics_to_dict(const MetricsReport& m) {
    py::dict d;
    d["mse"] = m.mse;
    d["f"] = m.f;
    d["f_prime"] = m.f_prime;
    d["q"] = m.q;
    d["d_intra"] = m.d_intra;
    d["d_inter"] = m.d_inter;
    d["f_rc"] = m.f_rc;
    d["k"] = m.k;
    d["mode"] = to_string(m.mode);
    return d;
}

SegmentMode parse_mode(const std::string& mode) {
    if (mode == "cluster") return SegmentMode::Cluster;
    if (mode == "cc" || mode == "connected-component")
        return SegmentMode::ConnectedComponent;
    throw std::invalid_argument("mode must be 'cluster' or 'cc'");
}

std::vector<FeatureVector> centroids_from_array(const py::array_t<double>& array) {
    const auto buf = array.request();
    if (buf.ndim != 2 || buf.shape[1] != 3)
        throw std::invalid_argument("expected a (k, 3) float array");
    const auto view = array.unchecked<2>();
    std::vector<FeatureVector> centroids(static_cast<std::size_t>(view.shape(0)));
    for (py::ssize_t i = 0; i < view.shape(0); ++i)
        centroids[i] = {view(i, 0), view(i, 1), view(i, 2)};
    return centroids;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Voronoi-region adaptive unsupervised color image segmentation";

    m.def(
        "segment",
        [](const py::array_t<std::uint8_t>& image_array, double epsilon,
           int max_corners, int min_distance, const std::string& metrics_mode) {
            const Image image = image_from_array(image_array);
            PipelineConfig config;
            config.epsilon = epsilon;
            config.seed_config.max_corners = max_corners;
            config.seed_config.min_distance = min_distance;
            config.metrics_mode = parse_mode(metrics_mode);

            auto [seg, record] = segment_image(image, config);

            py::dict timings;
            timings["seed"] = record.timings.seeding;
            timings["voronoi"] = record.timings.tessellation;
            timings["rsm"] = record.timings.rsm;
            timings["merge"] = record.timings.merge;
            timings["kmeans"] = record.timings.kmeans;
            timings["metrics"] = record.timings.metrics;
            timings["total"] = record.timings.total();

            py::dict result;
            result["labels"] = labels_to_array(seg);
            result["centroids"] = centroids_to_array(seg.centroids);
            result["k"] = seg.centroids.size();
            result["seeds"] = record.seed_count;
            result["regions"] = record.region_count;
            result["pre_merge_clusters"] = record.pre_merge_clusters;
            result["iterations"] = seg.iterations_used;
            result["sse"] = seg.final_sse;
            result["metrics"] = metrics_to_dict(record.metrics);
            result["timings"] = timings;
            return result;
        },
        py::arg("image"), py::arg("epsilon") = 71.0, py::arg("max_corners") = 50,
        py::arg("min_distance") = 10, py::arg("metrics_mode") = "cluster",
        "Run the full segmentation pipeline on an (H, W, 3) uint8 image.");

    m.def(
        "evaluate",
        [](const py::array_t<std::uint8_t>& image_array,
           const py::array_t<std::uint32_t>& label_array,
           const std::string& mode) {
            const Image image = image_from_array(image_array);
            const auto view = label_array.unchecked<2>();
            if (view.shape(0) != image.height || view.shape(1) != image.width)
                throw std::invalid_argument("label map shape mismatch");
            std::vector<std::uint32_t> labels;
            labels.reserve(image.pixel_count());
            for (py::ssize_t y = 0; y < view.shape(0); ++y)
                for (py::ssize_t x = 0; x < view.shape(1); ++x)
                    labels.push_back(view(y, x));
            const Segmentation seg =
                segmentation_from_labels(image, std::move(labels));
            return metrics_to_dict(compute_metrics(image, seg, parse_mode(mode)));
        },
        py::arg("image"), py::arg("labels"), py::arg("mode") = "cluster",
        "Score an (H, W) uint32 label map against its image.");

    m.def(
        "assign_voronoi",
        [](int width, int height, const py::array_t<long>& seed_array) {
            const auto view = seed_array.unchecked<2>();
            if (view.shape(1) != 2)
                throw std::invalid_argument("expected an (n, 2) array of (x, y)");
            SeedSet seeds(static_cast<std::size_t>(view.shape(0)));
            for (py::ssize_t i = 0; i < view.shape(0); ++i)
                seeds[i] = {static_cast<int>(view(i, 0)),
                            static_cast<int>(view(i, 1))};
            const VoronoiMap map = assign_voronoi(width, height, seeds);
            py::array_t<std::uint32_t> out({height, width});
            auto w = out.mutable_unchecked<2>();
            for (int y = 0; y < height; ++y)
                for (int x = 0; x < width; ++x)
                    w(y, x) = map.at(x, y);
            return out;
        },
        py::arg("width"), py::arg("height"), py::arg("seeds"),
        "Nearest-seed region index per pixel; ties go to the lowest index.");

    m.def(
        "detect_corners",
        [](const py::array_t<std::uint8_t>& image_array, int max_corners,
           double quality_ratio, int min_distance) {
            const Image image = image_from_array(image_array);
            SeedConfig config;
            config.max_corners = max_corners;
            config.quality_ratio = quality_ratio;
            config.min_distance = min_distance;
            const SeedSet seeds = detect_corners(to_grayscale(image), config);
            py::array_t<long> out({static_cast<py::ssize_t>(seeds.size()),
                                   static_cast<py::ssize_t>(2)});
            auto w = out.mutable_unchecked<2>();
            for (std::size_t i = 0; i < seeds.size(); ++i) {
                w(i, 0) = seeds[i].x;
                w(i, 1) = seeds[i].y;
            }
            return out;
        },
        py::arg("image"), py::arg("max_corners") = 50,
        py::arg("quality_ratio") = 0.01, py::arg("min_distance") = 10,
        "Harris corner seeds as an (n, 2) array of (x, y).");

    m.def(
        "kmeans",
        [](const py::array_t<std::uint8_t>& image_array,
           const py::array_t<double>& init, int max_iterations,
           double tolerance) {
            const Image image = image_from_array(image_array);
            const auto centroids = centroids_from_array(init);
            KmeansConfig config;
            config.max_iterations = max_iterations;
            config.tolerance = tolerance;
            const Segmentation seg =
                kmeans(image, centroids.size(), centroids, config);
            return py::make_tuple(labels_to_array(seg),
                                  centroids_to_array(seg.centroids),
                                  seg.iterations_used, seg.final_sse);
        },
        py::arg("image"), py::arg("init_centroids"),
        py::arg("max_iterations") = 100, py::arg("tolerance") = 1e-3,
        "Lloyd refinement; returns (labels, centroids, iterations, sse).");

    m.def(
        "merge_clusters",
        [](const py::array_t<double>& centroid_array,
           const py::array_t<long>& size_array, double epsilon) {
            const auto centroids = centroids_from_array(centroid_array);
            const auto sizes = size_array.unchecked<1>();
            if (sizes.shape(0) != static_cast<py::ssize_t>(centroids.size()))
                throw std::invalid_argument("sizes must match centroids");
            std::vector<Cluster> clusters(centroids.size());
            std::uint32_t next_id = 0;
            for (std::size_t i = 0; i < centroids.size(); ++i) {
                clusters[i].centroid = centroids[i];
                // Synthetic member ids; only the counts matter here.
                for (long n = 0; n < sizes(i); ++n)
                    clusters[i].members.push_back(next_id++);
            }
            const MergeResult result =
                merge_proximal_clusters(std::move(clusters), epsilon);
            py::list log;
            for (const MergeRecord& r : result.merge_log)
                log.append(py::make_tuple(r.index_a, r.index_b, r.distance));
            py::array_t<long> out_sizes(
                {static_cast<py::ssize_t>(result.clusters.size())});
            auto w = out_sizes.mutable_unchecked<1>();
            for (std::size_t i = 0; i < result.clusters.size(); ++i) {
                std::fprintf(stderr, "dbg cluster %zu size %zu members0 %u\n",
                             i, result.clusters[i].size(),
                             result.clusters[i].members.empty() ? 0u : result.clusters[i].members[0]);
                w(i) = static_cast<long>(result.clusters[i].size());
            }
            return py::make_tuple(centroids_to_array(result.centroids), out_sizes,
                                  log);
        },
        py::arg("centroids"), py::arg("sizes"), py::arg("epsilon"),
        "Greedy proximal merging of (centroid, size) clusters; returns "
        "(centroids, sizes, merge_log).");

    m.def(
        "manhattan",
        [](double r1, double g1, double b1, double r2, double g2, double b2) {
            return manhattan({r1, g1, b1}, {r2, g2, b2});
        },
        "Manhattan distance between two RGB feature vectors.");

#ifdef VOROSEG_VERSION
    m.attr("__version__") = VOROSEG_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
