#include "curvelens/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "curvelens/curvature.hpp"
#include "curvelens/depth_io.hpp"
#include "curvelens/projection.hpp"
#include "curvelens/raster.hpp"
#include "curvelens/synth.hpp"

namespace curvelens {

namespace fs = std::filesystem;

void apply_thread_cap_from_env() {
#ifdef _OPENMP
    if (const char* env = std::getenv("CURVELENS_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
#endif
}

std::string RunConfig::to_json() const {
    const HistogramPreset preset = hist ? *hist : histogram_preset(hist_preset_name);
    nlohmann::json j{
        {"input", input.string()},
        {"calib", calib.string()},
        {"scene", scene},
        {"scene_spec", scene_spec.string()},
        {"input_kind", input_kind == InputKind::disparity ? "disparity" : "depth"},
        {"sigma", sigma},
        {"trim_fraction", trim_fraction},
        {"window_W", window_w},
        {"histogram", {{"preset", hist_preset_name}, {"lo", preset.lo}, {"hi", preset.hi}, {"bins", preset.bins}}},
        {"aggregation", aggregation == AggregationMode::aggregate ? "aggregate" : "per-image"},
        {"mask", mask == MaskMode::gt ? "gt" : "both"},
        {"out", out_dir.string()},
        {"diagnostic_smooth_depth_image", diagnostic_smooth_depth_image}};
    return j.dump(2);
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open file for writing: " + path.string());
    out << text;
    if (!out) throw IoError("I/O failure writing " + path.string());
}

ImageGrid field_to_grid(const CurvatureField& f, const std::vector<double>& values) {
    ImageGrid g(f.width, f.height, 0.0, false);
    g.values = values;
    g.valid = f.valid;
    return g;
}

// Diagnostic-only image-space smoothing of the raw depth map (normalized
// convolution on the scalar grid). Exists to demonstrate why it is wrong.
DepthGrid smooth_depth_image(const DepthGrid& depth, double sigma) {
    if (sigma == 0.0) return depth;
    SurfaceGrid tmp(depth.width, depth.height);
    tmp.Z = depth.values;
    tmp.valid = depth.valid;
    const SurfaceGrid sm = smooth_surface(tmp, {sigma, 3});
    DepthGrid out(depth.width, depth.height, 0.0, false);
    out.values = sm.Z;
    out.valid = sm.valid;
    out.scale_magnitude = depth.scale_magnitude;
    return out;
}

struct PipelineInput {
    DepthGrid depth;
    CameraIntrinsics cam;
    std::string label;
};

PipelineInput load_input(const RunConfig& config) {
    PipelineInput in;
    if (!config.scene.empty() || !config.scene_spec.empty()) {
        const SceneSpec scene = config.scene.empty() ? read_scene_spec(config.scene_spec)
                                                     : builtin_scene(config.scene);
        in.depth = render_depth(scene, WhichCamera::left);
        in.cam = scene.rig.intrinsics;
        in.label = scene.name;
        return in;
    }
    if (config.input.empty()) throw IoError("no input: provide --input or --scene");
    in.cam = read_calib(config.calib);
    if (config.input_kind == InputKind::disparity) {
        const DisparityGrid disp{read_pfm(config.input)};
        in.depth = disparity_to_depth(disp, in.cam);
    } else {
        in.depth = DepthGrid{read_pfm(config.input)};
        // depth semantics: nonpositive samples carry no geometry
        for (std::size_t i = 0; i < in.depth.size(); ++i)
            if (in.depth.valid[i] && in.depth.values[i] <= 0.0) in.depth.valid[i] = 0;
    }
    in.label = config.input.stem().string();
    return in;
}

CurvatureField run_pipeline(const DepthGrid& depth, const CameraIntrinsics& cam,
                            const RunConfig& config) {
    const DepthGrid& d =
        config.diagnostic_smooth_depth_image ? smooth_depth_image(depth, config.sigma) : depth;
    SurfaceGrid surface = backproject(d, cam);
    if (config.sigma > 0.0 && !config.diagnostic_smooth_depth_image)
        surface = smooth_surface(surface, {config.sigma, 3});
    return curvature_field(surface);
}

HistogramPreset preset_of(const RunConfig& config) {
    return config.hist ? *config.hist : histogram_preset(config.hist_preset_name);
}

}  // namespace

int cmd_curvature(const RunConfig& config) {
    apply_thread_cap_from_env();
    fs::create_directories(config.out_dir);

    const PipelineInput in = load_input(config);
    const CurvatureField field = run_pipeline(in.depth, in.cam, config);

    write_pfm(field_to_grid(field, field.K), config.out_dir / "K.pfm");
    write_pfm(field_to_grid(field, field.kappa1), config.out_dir / "kappa1.pfm");
    write_pfm(field_to_grid(field, field.kappa2), config.out_dir / "kappa2.pfm");
    write_curvature_ppm(field, config.window_w, config.out_dir / "K_window.ppm");

    const std::vector<double> values = field.valid_values();
    const HistogramPreset preset = preset_of(config);
    const SparsityReport report =
        sparsity_report(values, config.window_w, config.trim_fraction, preset);
    const CurvatureHistogram hist =
        histogram(values, preset.lo, preset.hi, preset.bins, config.trim_fraction);

    write_text(config.out_dir / "histogram.csv", histogram_csv(hist));

    nlohmann::json j;
    j["input"] = in.label;
    j["report"] = nlohmann::json::parse(sparsity_report_json(report));
    j["config"] = nlohmann::json::parse(config.to_json());
    write_text(config.out_dir / "report.json", j.dump(2));
    return 0;
}

int cmd_synth(const RunConfig& config) {
    apply_thread_cap_from_env();
    fs::create_directories(config.out_dir);

    const SceneSpec scene = config.scene.empty() ? read_scene_spec(config.scene_spec)
                                                 : builtin_scene(config.scene);
    const DisparityPair pair = render_disparity_pair(scene);
    const CurvatureField oracle = analytic_curvature(scene, WhichCamera::left);

    write_pfm(pair.depth, config.out_dir / (scene.name + "_depth.pfm"));
    write_pfm(pair.disparity, config.out_dir / (scene.name + "_disparity.pfm"));
    write_pfm(field_to_grid(oracle, oracle.K), config.out_dir / (scene.name + "_K.pfm"));
    write_text(config.out_dir / (scene.name + ".scene"), format_scene_spec(scene));

    const auto& r = scene.rig;
    nlohmann::json j{{"scene", scene.name},
                     {"rig",
                      {{"fx", r.intrinsics.fx},
                       {"fy", r.intrinsics.fy},
                       {"cx", r.intrinsics.cx},
                       {"cy", r.intrinsics.cy},
                       {"baseline_m", r.intrinsics.baseline_m},
                       {"doffs_px", r.intrinsics.doffs_px},
                       {"width", r.width},
                       {"height", r.height},
                       {"sensor_w_mm", r.sensor_w_mm},
                       {"sensor_h_mm", r.sensor_h_mm}}},
                     {"config", nlohmann::json::parse(config.to_json())}};
    write_text(config.out_dir / (scene.name + ".json"), j.dump(2));
    return 0;
}

int cmd_eval(const fs::path& dataset_dir, const RunConfig& config) {
    apply_thread_cap_from_env();
    fs::create_directories(config.out_dir);

    const fs::path gt_dir = dataset_dir / "gt";
    const fs::path calib_dir = dataset_dir / "calib";
    if (!fs::is_directory(gt_dir)) throw IoError("missing GT directory: " + gt_dir.string());

    std::vector<std::string> scenes;
    for (const auto& e : fs::directory_iterator(gt_dir))
        if (e.path().extension() == ".pfm") scenes.push_back(e.path().stem().string());
    std::sort(scenes.begin(), scenes.end());
    if (scenes.empty()) throw IoError("no GT maps under " + gt_dir.string());

    std::vector<std::string> methods;
    for (const auto& e : fs::directory_iterator(dataset_dir)) {
        if (!e.is_directory()) continue;
        const std::string name = e.path().filename().string();
        if (name != "calib") methods.push_back(name);
    }
    std::sort(methods.begin(), methods.end());

    const HistogramPreset preset = preset_of(config);
    const std::vector<double> taus = {0.5, 2.0};

    std::ostringstream medians_csv;
    medians_csv << "method,scene,k_median,k_abs_median,lgc_percent\n";
    medians_csv.precision(10);

    std::vector<MethodEntry> entries;
    for (const std::string& method : methods) {
        std::vector<double> pooled_k;
        std::vector<double> per_image_lgc;
        AccuracyReport total;
        for (double tau : taus) total.bad_tau[tau] = 0.0;
        int n_scenes = 0;

        for (const std::string& scene : scenes) {
            const fs::path est_path = dataset_dir / method / (scene + ".pfm");
            if (!fs::exists(est_path))
                throw IoError("missing map for method '" + method + "': " + est_path.string());
            const CameraIntrinsics cam = read_calib(calib_dir / (scene + ".txt"));
            const DisparityGrid est{read_pfm(est_path)};
            const DisparityGrid gt{read_pfm(gt_dir / (scene + ".pfm"))};
            if (est.width != gt.width || est.height != gt.height)
                throw IoError("mixed resolutions for scene '" + scene + "'");

            const AccuracyReport acc = compare_disparity(est, gt, taus, config.mask);
            const double depth_err =
                compare_depth(disparity_to_depth(est, cam), disparity_to_depth(gt, cam),
                              config.mask);

            const CurvatureField field =
                run_pipeline(disparity_to_depth(est, cam), cam, config);
            const std::vector<double> k = field.valid_values();
            const SparsityReport sr =
                sparsity_report(k, config.window_w, config.trim_fraction, preset);
            pooled_k.insert(pooled_k.end(), k.begin(), k.end());
            if (sr.defined) per_image_lgc.push_back(sr.lgc_percent);

            medians_csv << method << "," << scene << "," << sr.k_median << ","
                        << sr.k_abs_median << "," << sr.lgc_percent << "\n";

            nlohmann::json j;
            j["method"] = method;
            j["scene"] = scene;
            j["accuracy"] = {{"avg_err_px", acc.avg_err_px},
                             {"rms_px", acc.rms_px},
                             {"bad_0.5", acc.bad_tau.at(0.5)},
                             {"bad_2.0", acc.bad_tau.at(2.0)},
                             {"depth_avg_err_cm", depth_err},
                             {"n_evaluated", acc.n_evaluated}};
            j["sparsity"] = nlohmann::json::parse(sparsity_report_json(sr));
            j["config"] = nlohmann::json::parse(config.to_json());
            const fs::path method_out = config.out_dir / method;
            fs::create_directories(method_out);
            write_text(method_out / (scene + ".json"), j.dump(2));

            total.avg_err_px += acc.avg_err_px;
            total.rms_px += acc.rms_px;
            for (double tau : taus) total.bad_tau[tau] += acc.bad_tau.at(tau);
            total.depth_avg_err_cm += depth_err;
            total.n_evaluated += acc.n_evaluated;
            ++n_scenes;
        }

        MethodEntry entry;
        entry.name = method;
        entry.accuracy = total;
        if (n_scenes > 0) {
            entry.accuracy.avg_err_px /= n_scenes;
            entry.accuracy.rms_px /= n_scenes;
            for (double tau : taus) entry.accuracy.bad_tau[tau] /= n_scenes;
            entry.accuracy.depth_avg_err_cm /= n_scenes;
        }
        if (config.aggregation == AggregationMode::aggregate) {
            entry.sparsity =
                sparsity_report(pooled_k, config.window_w, config.trim_fraction, preset);
        } else {
            // per-image trimming: the dataset LGC is the mean of per-image LGCs
            entry.sparsity =
                sparsity_report(pooled_k, config.window_w, config.trim_fraction, preset);
            if (!per_image_lgc.empty()) {
                double s = 0;
                for (double v : per_image_lgc) s += v;
                entry.sparsity.lgc_percent = s / static_cast<double>(per_image_lgc.size());
            }
        }
        entries.push_back(std::move(entry));
    }

    const RankTable table = rank_report(std::move(entries), taus);
    write_text(config.out_dir / "rank_table.txt", table.render_text());
    write_text(config.out_dir / "rank_table.html", table.render_html());
    write_text(config.out_dir / "rank_table.csv", table.render_csv());
    write_text(config.out_dir / "per_image_medians.csv", medians_csv.str());
    write_text(config.out_dir / "eval_config.json", config.to_json());
    return 0;
}

}  // namespace curvelens
