#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace curvelens {

struct HistogramPreset {
    double lo, hi;
    int bins;
};

// Fig-style presets: "fig4" = 30 bins over [-2500, 2500],
// "fig6" = 50 bins over [-4000, 4000].
HistogramPreset histogram_preset(const std::string& name);

struct CurvatureHistogram {
    std::vector<double> bin_edges; // B+1 uniform edges, m^-2
    std::vector<std::int64_t> counts;
    std::vector<double> h;         // normalized frequencies, sum 1 over in-range mass
    double trim_fraction = 0.0;
    double range_lo = 0.0, range_hi = 0.0;
    std::int64_t n_total = 0;      // = n_in_bins + n_trimmed + n_out_of_range
    std::int64_t n_trimmed = 0;
    std::int64_t n_out_of_range = 0;
    bool empty = true;             // no in-range samples; h is undefined

    int bins() const { return static_cast<int>(counts.size()); }
    std::int64_t n_in_bins() const { return n_total - n_trimmed - n_out_of_range; }
    // Half-open bins [lo, hi) with the final bin closed. Returns -1 if out of range.
    int bin_of(double k) const;
};

// Removes the ceil(trim_fraction * n) largest-|K| samples. Ties are broken by
// original index, keeping earlier samples; kept samples stay in input order.
std::vector<double> trim_top_abs(const std::vector<double>& values, double trim_fraction);

CurvatureHistogram histogram(const std::vector<double>& values, double range_lo,
                             double range_hi, int bins, double trim_fraction);

struct EmpiricalLoss {
    enum class Kind { finite, empty_bin, out_of_support };
    Kind kind = Kind::out_of_support;
    double value = 0.0; // meaningful only when kind == finite

    bool finite() const { return kind == Kind::finite; }
};

// L(K) = -ln h(bin containing K). An empty bin yields an explicit
// infinite-loss marker rather than a float inf.
EmpiricalLoss empirical_loss(const CurvatureHistogram& hist, double k);

// P(K) = exp(-L(K)); 0 for empty bins, nullopt out of support.
std::optional<double> empirical_prior(const CurvatureHistogram& hist, double k);

// alpha * sqrt(|kappa1 * kappa2|), alpha in meters.
double sparse_loss(double kappa1, double kappa2, double alpha);

// ((|k1|^p + |k2|^p)/2)^(1/p), p > 0. Computed in the log domain so small p
// neither overflows nor underflows; a zero kappa is handled explicitly.
double p_mean(double kappa1, double kappa2, double p);

// The p -> 0 limit: sqrt(|kappa1 * kappa2|).
double p_mean_limit(double kappa1, double kappa2);

// Percentage of trimmed samples with |K| <= W. nullopt when nothing is kept.
std::optional<double> lgc(const std::vector<double>& values, double window_w,
                          double trim_fraction);

// -sum h_i log(h_i) / log(base) over non-empty bins. Base 2 gives bits.
double shannon_entropy(const CurvatureHistogram& hist, double base = 2.0);

struct SparsityReport {
    double lgc_percent = 0.0;
    double window_w = 0.0;       // m^-2
    double entropy_bits = 0.0;
    double k_abs_max = 0.0;      // max |K| after trimming
    double k_median = 0.0;       // median of signed K (after trimming)
    double k_abs_median = 0.0;   // median of |K| (after trimming)
    double alpha = 1.0;          // loss weight, meters
    std::int64_t n_total = 0;
    std::int64_t n_trimmed = 0;
    bool defined = false;        // false when no samples survive trimming
};

SparsityReport sparsity_report(const std::vector<double>& values, double window_w,
                               double trim_fraction, const HistogramPreset& preset,
                               double alpha = 1.0);

// Serialization used by the CLI: {lgc_percent, window_W, entropy_bits,
// k_abs_max, k_median, n_total, n_trimmed} plus the extras above.
std::string sparsity_report_json(const SparsityReport& r);
std::string histogram_csv(const CurvatureHistogram& hist);

}  // namespace curvelens
