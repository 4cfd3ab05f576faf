#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "curvelens/grids.hpp"
#include "curvelens/metrics.hpp"

namespace curvelens {

enum class MaskMode {
    both, // evaluate over the intersection of both validity masks
    gt    // evaluate wherever GT is valid (Middlebury convention)
};

struct AccuracyReport {
    double avg_err_px = 0.0;
    double rms_px = 0.0;
    std::map<double, double> bad_tau; // tau -> percentage of |error| > tau
    double depth_avg_err_cm = 0.0;
    std::int64_t n_evaluated = 0;
};

// AvgErr = mean |dd|, RMS = sqrt(mean dd^2), Bad tau = 100 * frac(|dd| > tau).
// Throws on dimension mismatch; empty overlap yields n_evaluated = 0 and zeros.
AccuracyReport compare_disparity(const DisparityGrid& est, const DisparityGrid& gt,
                                 const std::vector<double>& taus = {0.5, 2.0},
                                 MaskMode mask = MaskMode::both);

// Mean |dZ| in centimeters over jointly valid pixels.
double compare_depth(const DepthGrid& est, const DepthGrid& gt,
                     MaskMode mask = MaskMode::both);

struct MethodEntry {
    std::string name;
    SparsityReport sparsity;
    AccuracyReport accuracy;
    bool has_accuracy = true; // GT rows carry no accuracy numbers
};

struct RankTable {
    std::vector<MethodEntry> rows; // sorted by descending LGC, ties by name
    std::vector<double> taus;

    std::string render_text() const;
    std::string render_html() const;
    std::string render_csv() const;
};

// Combined table sorted by descending LGC with per-metric rank superscripts.
RankTable rank_report(std::vector<MethodEntry> entries,
                      const std::vector<double>& taus = {0.5, 2.0});

}  // namespace curvelens
