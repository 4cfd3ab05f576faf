#include "curvelens/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace curvelens {

HistogramPreset histogram_preset(const std::string& name) {
    if (name == "fig4") return {-2500.0, 2500.0, 30};
    if (name == "fig6") return {-4000.0, 4000.0, 50};
    throw std::invalid_argument("unknown histogram preset: " + name);
}

int CurvatureHistogram::bin_of(double k) const {
    if (empty || k < range_lo || k > range_hi) return -1;
    const int B = bins();
    const double t = (k - range_lo) / (range_hi - range_lo) * B;
    int b = static_cast<int>(t);
    if (b >= B) b = B - 1; // final bin is closed on the right
    return b;
}

std::vector<double> trim_top_abs(const std::vector<double>& values, double trim_fraction) {
    if (trim_fraction < 0.0 || trim_fraction >= 1.0)
        throw std::invalid_argument("trim_fraction must be in [0, 1)");
    const std::size_t n = values.size();
    if (n == 0) return {};
    const auto m = static_cast<std::size_t>(std::ceil(trim_fraction * static_cast<double>(n)));
    if (m == 0) return values;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    // ascending |v|, ties by original index: the removed set is the tail, so
    // among tied |v| the earlier sample is kept
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double fa = std::abs(values[a]), fb = std::abs(values[b]);
        if (fa != fb) return fa < fb;
        return a < b;
    });

    std::vector<std::uint8_t> keep(n, 0);
    for (std::size_t i = 0; i + m < n; ++i) keep[order[i]] = 1;

    std::vector<double> out;
    out.reserve(n - m);
    for (std::size_t i = 0; i < n; ++i)
        if (keep[i]) out.push_back(values[i]);
    return out;
}

CurvatureHistogram histogram(const std::vector<double>& values, double range_lo,
                             double range_hi, int bins, double trim_fraction) {
    if (bins < 1) throw std::invalid_argument("histogram: bins must be >= 1");
    if (!(range_lo < range_hi)) throw std::invalid_argument("histogram: range.lo must be < range.hi");

    CurvatureHistogram hist;
    hist.trim_fraction = trim_fraction;
    hist.range_lo = range_lo;
    hist.range_hi = range_hi;
    hist.counts.assign(bins, 0);
    hist.bin_edges.resize(bins + 1);
    for (int i = 0; i <= bins; ++i)
        hist.bin_edges[i] = range_lo + (range_hi - range_lo) * i / bins;

    hist.n_total = static_cast<std::int64_t>(values.size());
    const std::vector<double> kept = trim_top_abs(values, trim_fraction);
    hist.n_trimmed = hist.n_total - static_cast<std::int64_t>(kept.size());

    hist.empty = false; // so bin_of works during accumulation
    std::int64_t in_range = 0;
    for (double k : kept) {
        const int b = hist.bin_of(k);
        if (b < 0) {
            ++hist.n_out_of_range;
        } else {
            ++hist.counts[b];
            ++in_range;
        }
    }

    if (in_range == 0) {
        hist.empty = true;
        hist.h.assign(bins, 0.0);
        return hist;
    }
    hist.h.resize(bins);
    for (int i = 0; i < bins; ++i)
        hist.h[i] = static_cast<double>(hist.counts[i]) / static_cast<double>(in_range);
    return hist;
}

EmpiricalLoss empirical_loss(const CurvatureHistogram& hist, double k) {
    if (hist.empty) return {EmpiricalLoss::Kind::out_of_support, 0.0};
    const int b = hist.bin_of(k);
    if (b < 0) return {EmpiricalLoss::Kind::out_of_support, 0.0};
    if (hist.h[b] == 0.0) return {EmpiricalLoss::Kind::empty_bin, 0.0};
    return {EmpiricalLoss::Kind::finite, -std::log(hist.h[b])};
}

std::optional<double> empirical_prior(const CurvatureHistogram& hist, double k) {
    const EmpiricalLoss l = empirical_loss(hist, k);
    switch (l.kind) {
        case EmpiricalLoss::Kind::finite: return std::exp(-l.value);
        case EmpiricalLoss::Kind::empty_bin: return 0.0;
        default: return std::nullopt;
    }
}

double sparse_loss(double kappa1, double kappa2, double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("sparse_loss: alpha must be > 0");
    return alpha * std::sqrt(std::abs(kappa1 * kappa2));
}

double p_mean(double kappa1, double kappa2, double p) {
    if (p <= 0.0) throw std::invalid_argument("p_mean: p must be > 0 (limit is p_mean_limit)");
    const double a1 = std::abs(kappa1), a2 = std::abs(kappa2);
    if (a1 == 0.0 && a2 == 0.0) return 0.0;
    if (a1 == 0.0 || a2 == 0.0) {
        // (|k|^p / 2)^(1/p) = |k| * 2^(-1/p)
        const double a = a1 + a2;
        return a * std::exp2(-1.0 / p);
    }
    // log-domain: exp( (logaddexp(p log a1, p log a2) - log 2) / p )
    const double l1 = p * std::log(a1), l2 = p * std::log(a2);
    const double m = std::max(l1, l2);
    const double lse = m + std::log1p(std::exp(std::min(l1, l2) - m));
    return std::exp((lse - std::log(2.0)) / p);
}

double p_mean_limit(double kappa1, double kappa2) {
    return std::sqrt(std::abs(kappa1 * kappa2));
}

std::optional<double> lgc(const std::vector<double>& values, double window_w,
                          double trim_fraction) {
    if (window_w <= 0.0) throw std::invalid_argument("lgc: window W must be > 0");
    const std::vector<double> kept = trim_top_abs(values, trim_fraction);
    if (kept.empty()) return std::nullopt;
    std::size_t within = 0;
    for (double k : kept)
        if (std::abs(k) <= window_w) ++within;
    return 100.0 * static_cast<double>(within) / static_cast<double>(kept.size());
}

double shannon_entropy(const CurvatureHistogram& hist, double base) {
    if (hist.empty) throw std::invalid_argument("shannon_entropy: empty histogram");
    double e = 0.0;
    for (double p : hist.h)
        if (p > 0.0) e -= p * std::log(p);
    return e / std::log(base);
}

namespace {

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    auto mid = v.begin() + n / 2;
    std::nth_element(v.begin(), mid, v.end());
    if (n % 2 == 1) return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

}  // namespace

SparsityReport sparsity_report(const std::vector<double>& values, double window_w,
                               double trim_fraction, const HistogramPreset& preset,
                               double alpha) {
    SparsityReport r;
    r.window_w = window_w;
    r.alpha = alpha;
    r.n_total = static_cast<std::int64_t>(values.size());

    const std::vector<double> kept = trim_top_abs(values, trim_fraction);
    r.n_trimmed = r.n_total - static_cast<std::int64_t>(kept.size());
    if (kept.empty()) return r;

    r.defined = true;
    std::size_t within = 0;
    double kmax = 0.0;
    std::vector<double> abs_kept(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        abs_kept[i] = std::abs(kept[i]);
        kmax = std::max(kmax, abs_kept[i]);
        if (abs_kept[i] <= window_w) ++within;
    }
    r.lgc_percent = 100.0 * static_cast<double>(within) / static_cast<double>(kept.size());
    r.k_abs_max = kmax;
    r.k_median = median_of(kept);
    r.k_abs_median = median_of(std::move(abs_kept));

    // Histogram over already-trimmed values: trim exactly once.
    const CurvatureHistogram hist = histogram(kept, preset.lo, preset.hi, preset.bins, 0.0);
    r.entropy_bits = hist.empty ? 0.0 : shannon_entropy(hist);
    return r;
}

std::string sparsity_report_json(const SparsityReport& r) {
    nlohmann::json j{{"lgc_percent", r.lgc_percent},
                     {"window_W", r.window_w},
                     {"entropy_bits", r.entropy_bits},
                     {"k_abs_max", r.k_abs_max},
                     {"k_median", r.k_median},
                     {"k_abs_median", r.k_abs_median},
                     {"alpha", r.alpha},
                     {"n_total", r.n_total},
                     {"n_trimmed", r.n_trimmed},
                     {"defined", r.defined}};
    return j.dump(2);
}

std::string histogram_csv(const CurvatureHistogram& hist) {
    std::ostringstream out;
    out << "bin_center,h\n";
    out.precision(17);
    for (int i = 0; i < hist.bins(); ++i) {
        const double center = 0.5 * (hist.bin_edges[i] + hist.bin_edges[i + 1]);
        out << center << "," << (hist.empty ? 0.0 : hist.h[i]) << "\n";
    }
    return out.str();
}

}  // namespace curvelens
