#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "voroseg/kmeans_refine.hpp"
#include "voroseg/proximal_merge.hpp"
#include "voroseg/region_split_merge.hpp"
#include "voroseg/seeding.hpp"
#include "voroseg/seg_metrics.hpp"

namespace voroseg {

enum class Artifact {
    CentroidImage,
    FalseColor,
    LabelMap,
    Metrics,
    MergeLog,
    Timing,
};

/// Parse an --emit name ("centroid-image", "false-color", "label-map",
/// "metrics", "merge-log", "timing").
Artifact parse_artifact(const std::string& name);

struct PipelineConfig {
    double epsilon = 71.0; // drives both merge stages
    SeedConfig seed_config;
    RsmConfig rsm_config;
    KmeansConfig kmeans_config;
    SegmentMode metrics_mode = SegmentMode::Cluster;
    std::set<Artifact> emit = {Artifact::CentroidImage, Artifact::FalseColor,
                               Artifact::LabelMap, Artifact::Metrics};
};

struct StageTimings {
    double seeding = 0.0;
    double tessellation = 0.0;
    double rsm = 0.0;
    double merge = 0.0;
    double kmeans = 0.0;
    double metrics = 0.0;

    double total() const {
        return seeding + tessellation + rsm + merge + kmeans + metrics;
    }
};

struct RunRecord {
    std::string input;
    int width = 0;
    int height = 0;
    std::size_t seed_count = 0;          // N
    std::size_t region_count = 0;        // regions of the tessellation
    std::size_t pre_merge_clusters = 0;  // P
    std::size_t k = 0;
    MetricsReport metrics;
    StageTimings timings; // seconds
    std::vector<MergeRecord> merge_log;
};

/// Full pipeline: corner seeding (grid fallback below two seeds), spatial
/// tessellation, per-region split + merge, global proximal merge, K-means
/// refinement, metrics.
std::pair<Segmentation, RunRecord> segment_image(const Image& image,
                                                 const PipelineConfig& config);

struct BatchResult {
    std::filesystem::path report_path;
    std::size_t processed = 0;
    std::size_t failed = 0;
};

/// Segment every supported image (.ppm/.png, sorted by filename), write
/// requested artifacts and report.csv into output_dir. A failing image
/// gets a status=error row and the batch continues.
BatchResult run_batch(const std::filesystem::path& input_dir,
                      const std::filesystem::path& output_dir,
                      const PipelineConfig& config);

/// report.csv schema, also used for single-image metric rows.
extern const char* const kReportHeader;
std::string report_row(const std::string& file, const RunRecord& record);
std::string report_error_row(const std::string& file);

/// Fixed-precision float formatting so reruns diff cleanly.
std::string format_value(double v);

void write_artifacts(const Image& image, const Segmentation& seg,
                     const RunRecord& record, const PipelineConfig& config,
                     const std::filesystem::path& out_dir,
                     const std::string& stem);

} // namespace voroseg
