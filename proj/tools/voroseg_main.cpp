#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "voroseg/errors.hpp"
#include "voroseg/pipeline.hpp"
#include "voroseg/raster_io.hpp"

namespace fs = std::filesystem;
using namespace voroseg;

namespace {

struct CommonFlags {
    double epsilon = 71.0;
    int max_corners = 50;
    int min_distance = 10;
    std::string metrics_mode = "cluster";
    std::vector<std::string> emit;
    std::string out_dir = ".";
    bool dump_merges = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--epsilon", flags.epsilon,
                    "Manhattan merge threshold (default 71)");
    cmd->add_option("--max-corners", flags.max_corners,
                    "Maximum number of corner seeds (default 50)");
    cmd->add_option("--min-distance", flags.min_distance,
                    "Minimum pixel distance between seeds (default 10)");
    cmd->add_option("--metrics-mode", flags.metrics_mode,
                    "Evaluation granularity: cluster or cc")
        ->check(CLI::IsMember({"cluster", "cc"}));
    cmd->add_option("--emit", flags.emit,
                    "Artifacts to write: centroid-image, false-color, "
                    "label-map, metrics, merge-log, timing")
        ->delimiter(',');
    cmd->add_option("--out", flags.out_dir, "Output directory");
    cmd->add_flag("--dump-merges", flags.dump_merges,
                  "Also write the merge log CSV");
}

PipelineConfig make_config(const CommonFlags& flags) {
    PipelineConfig config;
    config.epsilon = flags.epsilon;
    config.seed_config.max_corners = flags.max_corners;
    config.seed_config.min_distance = flags.min_distance;
    config.metrics_mode = flags.metrics_mode == "cc"
                              ? SegmentMode::ConnectedComponent
                              : SegmentMode::Cluster;
    if (!flags.emit.empty()) {
        config.emit.clear();
        for (const std::string& name : flags.emit)
            config.emit.insert(parse_artifact(name));
    }
    if (flags.dump_merges) config.emit.insert(Artifact::MergeLog);
    if (flags.epsilon < 0)
        throw Error("--epsilon must be >= 0");
    if (flags.max_corners < 1 || flags.min_distance < 1)
        throw Error("--max-corners and --min-distance must be >= 1");
    return config;
}

int cmd_segment(const std::string& input, const CommonFlags& flags) {
    const PipelineConfig config = make_config(flags);
    const Image image = load_image(input);
    auto [seg, record] = segment_image(image, config);
    record.input = fs::path(input).filename().string();
    write_artifacts(image, seg, record, config, flags.out_dir,
                    fs::path(input).stem().string());
    std::cout << kReportHeader << "\n"
              << report_row(record.input, record) << "\n";
    return 0;
}

int cmd_batch(const std::string& input_dir, const CommonFlags& flags) {
    const PipelineConfig config = make_config(flags);
    const BatchResult result = run_batch(input_dir, flags.out_dir, config);
    std::cout << "processed " << result.processed << " image(s), "
              << result.failed << " failed; report at "
              << result.report_path.string() << "\n";
    return result.failed > 0 ? 1 : 0;
}

std::vector<std::uint32_t> load_label_map_csv(const fs::path& path, int width,
                                              int height) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError("cannot open label CSV: " + path.string());
    std::vector<std::uint32_t> labels;
    labels.reserve(static_cast<std::size_t>(width) * height);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        int cols = 0;
        while (std::getline(ss, cell, ',')) {
            try {
                labels.push_back(static_cast<std::uint32_t>(std::stoul(cell)));
            } catch (const std::exception&) {
                throw CorruptDataError("bad label '" + cell + "' in " +
                                       path.string());
            }
            ++cols;
        }
        if (cols != width)
            throw CorruptDataError("label CSV row has " + std::to_string(cols) +
                                   " values, image width is " +
                                   std::to_string(width));
        ++rows;
    }
    if (rows != height)
        throw CorruptDataError("label CSV has " + std::to_string(rows) +
                               " rows, image height is " +
                               std::to_string(height));
    return labels;
}

int cmd_eval(const std::string& image_path, const std::string& label_path,
             const CommonFlags& flags) {
    const Image image = load_image(image_path);

    std::vector<std::uint32_t> labels;
    const std::string ext = fs::path(label_path).extension().string();
    if (ext == ".csv" || ext == ".CSV") {
        labels = load_label_map_csv(label_path, image.width, image.height);
    } else {
        int w = 0, h = 0;
        labels = load_label_map_png(label_path, w, h);
        if (w != image.width || h != image.height)
            throw Error("label map is " + std::to_string(w) + "x" +
                        std::to_string(h) + " but image is " +
                        std::to_string(image.width) + "x" +
                        std::to_string(image.height));
    }

    const Segmentation seg = segmentation_from_labels(image, std::move(labels));
    const SegmentMode mode = flags.metrics_mode == "cc"
                                 ? SegmentMode::ConnectedComponent
                                 : SegmentMode::Cluster;
    const MetricsReport m = compute_metrics(image, seg, mode);

    std::cout << "file,width,height,k,mode,mse,f,f_prime,q,d_intra,d_inter,f_rc\n"
              << fs::path(image_path).filename().string() << ","
              << image.width << "," << image.height << "," << m.k << ","
              << (mode == SegmentMode::Cluster ? "cluster" : "cc");
    for (double v : {m.mse, m.f, m.f_prime, m.q, m.d_intra, m.d_inter, m.f_rc})
        std::cout << "," << format_value(v);
    std::cout << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Voronoi-region adaptive unsupervised color image segmentation"};
    app.require_subcommand(1);

    std::string input, label_map;
    CommonFlags segment_flags, batch_flags, eval_flags;

    CLI::App* segment = app.add_subcommand("segment", "Segment a single image");
    segment->add_option("input", input, "Input image (.ppm or .png)")->required();
    add_common_flags(segment, segment_flags);

    CLI::App* batch = app.add_subcommand("batch", "Segment a directory of images");
    std::string batch_dir;
    batch->add_option("input_dir", batch_dir, "Directory of images")->required();
    add_common_flags(batch, batch_flags);
    batch->get_option("--out")->required();

    CLI::App* eval = app.add_subcommand("eval", "Score an existing label map");
    std::string eval_image;
    eval->add_option("image", eval_image, "Original image")->required();
    eval->add_option("label_map", label_map,
                     "Label map (16-bit grayscale PNG or CSV)")
        ->required();
    eval->add_option("--metrics-mode", eval_flags.metrics_mode,
                     "Evaluation granularity: cluster or cc")
        ->check(CLI::IsMember({"cluster", "cc"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage errors exit 2
    }

    try {
        if (segment->parsed()) return cmd_segment(input, segment_flags);
        if (batch->parsed()) return cmd_batch(batch_dir, batch_flags);
        if (eval->parsed()) return cmd_eval(eval_image, label_map, eval_flags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
