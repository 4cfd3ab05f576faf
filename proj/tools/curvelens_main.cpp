#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curvelens/cli.hpp"
#include "curvelens/metrics.hpp"
#include "curvelens/synth.hpp"

namespace {

CLI::Option* add_stats_flags(CLI::App* cmd, curvelens::RunConfig& config, bool& aggregate,
                             std::vector<double>& range, int& bins) {
    cmd->add_option("--sigma", config.sigma, "Smoothing sigma in grid-index (pixel) units");
    cmd->add_option("--trim", config.trim_fraction, "Fraction of highest |K| discarded")
        ->default_val(0.2);
    cmd->add_option("--window", config.window_w, "LGC window W in m^-2")->default_val(1000.0);
    cmd->add_option("--preset", config.hist_preset_name, "Histogram preset: fig4 or fig6")
        ->default_val("fig4");
    cmd->add_option("--bins", bins, "Explicit histogram bin count (overrides preset)");
    cmd->add_option("--range", range, "Explicit histogram range: lo hi (overrides preset)")
        ->expected(2);
    auto* agg = cmd->add_flag("--aggregate{true},--per-image{false}", aggregate,
                              "Trimming scope when aggregating over a dataset");
    cmd->add_option("--out", config.out_dir, "Output directory")->required();
    return agg;
}

void finalize_hist(curvelens::RunConfig& config, const std::vector<double>& range, int bins) {
    curvelens::HistogramPreset preset = curvelens::histogram_preset(config.hist_preset_name);
    if (bins > 0) preset.bins = bins;
    if (range.size() == 2) {
        preset.lo = range[0];
        preset.hi = range[1];
    }
    config.hist = preset;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvelens: Gaussian-curvature sparsity analysis for depth and disparity maps"};
    app.require_subcommand(1);

    curvelens::RunConfig config;
    bool aggregate = false;
    std::vector<double> range;
    int bins = 0;
    std::string mask_mode = "both";
    std::string dataset_dir;

    auto* curvature = app.add_subcommand(
        "curvature", "Depth/disparity -> 3D surface -> per-pixel K and sparsity report");
    curvature->add_option("--input", config.input, "Disparity or depth PFM");
    curvature->add_option("--calib", config.calib, "Middlebury-style calib.txt");
    curvature->add_option("--scene", config.scene, "Built-in synthetic scene name");
    curvature->add_option("--spec", config.scene_spec, "Custom scene-spec file");
    bool depth_input = false;
    curvature->add_flag("--depth-input", depth_input,
                        "Interpret --input as metric depth instead of disparity");
    curvature->add_flag("--diagnostic-smooth-depth-image",
                        config.diagnostic_smooth_depth_image,
                        "Diagnostic only: smooth the raw depth map in image space instead of "
                        "the 3D components");
    (void)add_stats_flags(curvature, config, aggregate, range, bins);

    auto* synth = app.add_subcommand("synth", "Render a synthetic scene with GT curvature");
    synth->add_option("--scene", config.scene, "Built-in scene name");
    synth->add_option("--spec", config.scene_spec, "Custom scene-spec file");
    synth->add_option("--out", config.out_dir, "Output directory");
    bool list_scenes = false;
    synth->add_flag("--list", list_scenes, "List built-in scene names and exit");

    auto* eval = app.add_subcommand("eval", "Batch-evaluate methods over a dataset directory");
    eval->add_option("dataset", dataset_dir, "Dataset directory: {method}/{scene}.pfm + gt/ + calib/")
        ->required();
    eval->add_option("--mask", mask_mode, "Evaluation mask: gt or both")->default_val("both");
    auto* eval_agg = add_stats_flags(eval, config, aggregate, range, bins);

    CLI11_PARSE(app, argc, argv);

    try {
        config.input_kind =
            depth_input ? curvelens::InputKind::depth : curvelens::InputKind::disparity;
        config.aggregation = aggregate ? curvelens::AggregationMode::aggregate
                                       : curvelens::AggregationMode::per_image;
        config.mask = mask_mode == "gt" ? curvelens::MaskMode::gt : curvelens::MaskMode::both;
        if (curvature->parsed() || eval->parsed()) finalize_hist(config, range, bins);

        if (curvature->parsed()) return curvelens::cmd_curvature(config);
        if (synth->parsed()) {
            if (list_scenes) {
                for (const auto& name : curvelens::builtin_scene_names())
                    std::cout << name << "\n";
                return 0;
            }
            if (config.scene.empty() && config.scene_spec.empty()) {
                std::cerr << "synth: provide --scene or --spec\n";
                return 1;
            }
            if (config.out_dir.empty()) {
                std::cerr << "synth: --out is required\n";
                return 1;
            }
            return curvelens::cmd_synth(config);
        }
        if (eval->parsed()) {
            // eval defaults to aggregate trimming (dataset-wide histogram)
            if (eval_agg->count() == 0)
                config.aggregation = curvelens::AggregationMode::aggregate;
            return curvelens::cmd_eval(dataset_dir, config);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
