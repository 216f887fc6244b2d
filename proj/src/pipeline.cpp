#include "voroseg/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <utility>

#include "voroseg/errors.hpp"
#include "voroseg/raster_io.hpp"
#include "voroseg/tessellation.hpp"

namespace voroseg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

} // namespace

Artifact parse_artifact(const std::string& name) {
    if (name == "centroid-image") return Artifact::CentroidImage;
    if (name == "false-color") return Artifact::FalseColor;
    if (name == "label-map") return Artifact::LabelMap;
    if (name == "metrics") return Artifact::Metrics;
    if (name == "merge-log") return Artifact::MergeLog;
    if (name == "timing") return Artifact::Timing;
    throw Error("unknown artifact '" + name + "'");
}

std::pair<Segmentation, RunRecord> segment_image(const Image& image,
                                                 const PipelineConfig& config) {
    if (image.width < 3 || image.height < 3)
        throw ImageTooSmallError("pipeline needs at least a 3x3 image");

    RunRecord record;
    record.width = image.width;
    record.height = image.height;

    // One epsilon knob drives the within-region and the global merge.
    RsmConfig rsm = config.rsm_config;
    rsm.epsilon = config.epsilon;

    auto t0 = Clock::now();
    SeedSet seeds = detect_corners(to_grayscale(image), config.seed_config);
    if (seeds.size() < 2)
        seeds = fallback_grid_seeds(image.width, image.height,
                                    config.seed_config.grid_fallback_n);
    record.timings.seeding = seconds_since(t0);
    record.seed_count = seeds.size();

    t0 = Clock::now();
    const VoronoiMap vmap = assign_voronoi(image.width, image.height, seeds);
    record.timings.tessellation = seconds_since(t0);
    record.region_count = vmap.region_count;

    t0 = Clock::now();
    std::vector<std::vector<std::uint32_t>> region_pixels(vmap.region_count);
    for (std::size_t i = 0; i < vmap.region_of.size(); ++i)
        region_pixels[vmap.region_of[i]].push_back(static_cast<std::uint32_t>(i));

    std::vector<Cluster> pool;
    std::vector<FeatureVector> features;
    for (const auto& ids : region_pixels) {
        if (ids.empty()) continue; // cannot happen: every seed owns its pixel
        features.clear();
        features.reserve(ids.size());
        for (std::uint32_t i : ids) features.push_back(to_feature(image.pixels[i]));
        auto clusters =
            merge_within_region(split_region(features, ids, rsm), config.epsilon);
        pool.insert(pool.end(), std::make_move_iterator(clusters.begin()),
                    std::make_move_iterator(clusters.end()));
    }
    record.timings.rsm = seconds_since(t0);
    record.pre_merge_clusters = pool.size();

    t0 = Clock::now();
    MergeResult merged = merge_proximal_clusters(std::move(pool), config.epsilon);
    record.timings.merge = seconds_since(t0);
    record.merge_log = std::move(merged.merge_log);

    t0 = Clock::now();
    Segmentation seg = kmeans(image, merged.k, merged.centroids,
                              config.kmeans_config);
    record.timings.kmeans = seconds_since(t0);

    t0 = Clock::now();
    record.metrics = compute_metrics(image, seg, config.metrics_mode);
    record.timings.metrics = seconds_since(t0);
    record.k = seg.centroids.size();

    return {std::move(seg), std::move(record)};
}

const char* const kReportHeader =
    "file,status,width,height,seeds,regions,pre_merge_clusters,k,"
    "mse,f,f_prime,q,d_intra,d_inter,f_rc,"
    "t_seed,t_voronoi,t_rsm,t_merge,t_kmeans,t_metrics,t_total";

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string report_row(const std::string& file, const RunRecord& r) {
    std::string row = file + ",ok," + std::to_string(r.width) + "," +
                      std::to_string(r.height) + "," +
                      std::to_string(r.seed_count) + "," +
                      std::to_string(r.region_count) + "," +
                      std::to_string(r.pre_merge_clusters) + "," +
                      std::to_string(r.k);
    for (double v : {r.metrics.mse, r.metrics.f, r.metrics.f_prime, r.metrics.q,
                     r.metrics.d_intra, r.metrics.d_inter, r.metrics.f_rc})
        row += "," + format_value(v);
    for (double t : {r.timings.seeding, r.timings.tessellation, r.timings.rsm,
                     r.timings.merge, r.timings.kmeans, r.timings.metrics,
                     r.timings.total()})
        row += "," + format_value(t);
    return row;
}

std::string report_error_row(const std::string& file) {
    return file + ",error,,,,,,,,,,,,,,,,,,,,";
}

void write_artifacts(const Image& image, const Segmentation& seg,
                     const RunRecord& record, const PipelineConfig& config,
                     const std::filesystem::path& out_dir,
                     const std::string& stem) {
    std::filesystem::create_directories(out_dir);
    const auto want = [&](Artifact a) { return config.emit.count(a) > 0; };

    if (want(Artifact::CentroidImage))
        save_image(render_centroid_image(image, seg),
                   out_dir / (stem + "_centroid.png"), ImageFormat::Png);
    if (want(Artifact::FalseColor)) {
        // Large cluster counts get a palette grown by the same procedure.
        const Palette palette = seg.centroids.size() <= default_palette().size()
                                    ? default_palette()
                                    : spaced_palette(seg.centroids.size());
        save_image(render_false_color(seg, palette),
                   out_dir / (stem + "_falsecolor.png"), ImageFormat::Png);
    }
    if (want(Artifact::LabelMap))
        save_label_map(seg, out_dir / (stem + "_labels.png"));
    if (want(Artifact::Metrics)) {
        std::ofstream out(out_dir / (stem + "_metrics.csv"), std::ios::trunc);
        if (!out) throw IoError("cannot write metrics CSV");
        out << kReportHeader << "\n" << report_row(record.input, record) << "\n";
    }
    if (want(Artifact::MergeLog)) {
        std::ofstream out(out_dir / (stem + "_merges.csv"), std::ios::trunc);
        if (!out) throw IoError("cannot write merge log");
        out << "step,index_a,index_b,distance\n";
        for (std::size_t i = 0; i < record.merge_log.size(); ++i) {
            const MergeRecord& m = record.merge_log[i];
            out << i << "," << m.index_a << "," << m.index_b << ","
                << format_value(m.distance) << "\n";
        }
    }
    if (want(Artifact::Timing)) {
        std::ofstream out(out_dir / (stem + "_timing.csv"), std::ios::trunc);
        if (!out) throw IoError("cannot write timing CSV");
        out << "t_seed,t_voronoi,t_rsm,t_merge,t_kmeans,t_metrics,t_total\n";
        const StageTimings& t = record.timings;
        out << format_value(t.seeding) << "," << format_value(t.tessellation)
            << "," << format_value(t.rsm) << "," << format_value(t.merge) << ","
            << format_value(t.kmeans) << "," << format_value(t.metrics) << ","
            << format_value(t.total()) << "\n";
    }
}

BatchResult run_batch(const std::filesystem::path& input_dir,
                      const std::filesystem::path& output_dir,
                      const PipelineConfig& config) {
    if (!std::filesystem::is_directory(input_dir))
        throw FileNotFoundError("not a directory: " + input_dir.string());

    std::vector<std::filesystem::path> inputs;
    for (const auto& entry : std::filesystem::directory_iterator(input_dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = lowercase(entry.path().extension().string());
        if (ext == ".ppm" || ext == ".png") inputs.push_back(entry.path());
    }
    if (inputs.empty())
        throw EmptyDirectoryError("no .ppm/.png images in " + input_dir.string());
    std::sort(inputs.begin(), inputs.end(),
              [](const auto& a, const auto& b) {
                  return a.filename().string() < b.filename().string();
              });

    std::filesystem::create_directories(output_dir);
    BatchResult result;
    result.report_path = output_dir / "report.csv";
    std::ofstream report(result.report_path, std::ios::trunc);
    if (!report) throw IoError("cannot write " + result.report_path.string());
    report << kReportHeader << "\n";

    StageTimings mean{};
    std::size_t ok_count = 0;
    for (const auto& path : inputs) {
        const std::string file = path.filename().string();
        try {
            const Image image = load_image(path);
            auto [seg, record] = segment_image(image, config);
            record.input = file;
            write_artifacts(image, seg, record, config, output_dir,
                            path.stem().string());
            report << report_row(file, record) << "\n";
            mean.seeding += record.timings.seeding;
            mean.tessellation += record.timings.tessellation;
            mean.rsm += record.timings.rsm;
            mean.merge += record.timings.merge;
            mean.kmeans += record.timings.kmeans;
            mean.metrics += record.timings.metrics;
            ++ok_count;
        } catch (const std::exception&) {
            report << report_error_row(file) << "\n";
            ++result.failed;
        }
        ++result.processed;
    }

    // Trailing mean-timing row; non-timing columns stay empty.
    std::string row = "mean,,,,,,,,,,,,,,";
    if (ok_count > 0) {
        const double inv = 1.0 / static_cast<double>(ok_count);
        for (double t : {mean.seeding, mean.tessellation, mean.rsm, mean.merge,
                         mean.kmeans, mean.metrics, mean.total()})
            row += "," + format_value(t * inv);
    } else {
        row += ",,,,,,,";
    }
    report << row << "\n";
    if (!report) throw IoError("write failed: " + result.report_path.string());
    return result;
}

} // namespace voroseg
