#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "curvelens/metrics.hpp"
#include "curvelens/stereo_eval.hpp"

namespace curvelens {

enum class AggregationMode { per_image, aggregate };
enum class InputKind { disparity, depth };

struct RunConfig {
    std::filesystem::path input;       // depth/disparity PFM
    std::filesystem::path calib;       // calib.txt (required for disparity input)
    std::string scene;                 // built-in scene name, alternative to input
    std::filesystem::path scene_spec;  // custom scene-spec file
    InputKind input_kind = InputKind::disparity;
    double sigma = 0.0;                // smoothing sigma, grid-index units
    double trim_fraction = 0.20;
    double window_w = 1000.0;          // m^-2
    std::optional<HistogramPreset> hist; // default: fig4 preset
    std::string hist_preset_name = "fig4";
    AggregationMode aggregation = AggregationMode::per_image;
    MaskMode mask = MaskMode::both;
    std::filesystem::path out_dir;
    // Diagnostic only: smooth the raw depth map in image space before
    // back-projection instead of smoothing the 3D components.
    bool diagnostic_smooth_depth_image = false;

    std::string to_json() const; // echoed into every output for provenance
};

// Threads cap from CURVELENS_THREADS (applied to OpenMP); 0 = library default.
void apply_thread_cap_from_env();

// ingest -> (smooth) -> curvature -> metrics -> K/kappa PFMs, |K|<=W raster,
// histogram CSV, SparsityReport JSON. Returns 0 on success.
int cmd_curvature(const RunConfig& config);

// GT depth PFM, disparity PFM, analytic curvature PFM, scene sidecar + JSON.
int cmd_synth(const RunConfig& config);

// Batch evaluation over a dataset directory laid out as
//   dataset/calib/{scene}.txt, dataset/gt/{scene}.pfm, dataset/{method}/{scene}.pfm
// Emits per-method per-scene reports, a rank table and a per-image-median CSV.
int cmd_eval(const std::filesystem::path& dataset_dir, const RunConfig& config);

}  // namespace curvelens
