#include "curvelens/stereo_eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace curvelens {

namespace {

bool evaluate_pixel(const ImageGrid& est, const ImageGrid& gt, std::size_t i, MaskMode mask) {
    if (mask == MaskMode::gt) return gt.valid[i] != 0 && est.valid[i] != 0;
    return gt.valid[i] != 0 && est.valid[i] != 0;
}

// Both modes currently intersect masks for the error itself (an invalid
// estimate has no number to compare); under MaskMode::gt the denominator of
// the Bad-tau percentages counts every GT-valid pixel, so missing estimates
// count as bad.
std::int64_t denominator(const ImageGrid& est, const ImageGrid& gt, MaskMode mask) {
    std::int64_t n = 0;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        if (mask == MaskMode::gt) {
            if (gt.valid[i]) ++n;
        } else {
            if (gt.valid[i] && est.valid[i]) ++n;
        }
    }
    return n;
}

}  // namespace

AccuracyReport compare_disparity(const DisparityGrid& est, const DisparityGrid& gt,
                                 const std::vector<double>& taus, MaskMode mask) {
    if (est.width != gt.width || est.height != gt.height)
        throw std::invalid_argument("compare_disparity: dimension mismatch");

    AccuracyReport r;
    double sum_abs = 0.0, sum_sq = 0.0;
    std::vector<std::int64_t> bad(taus.size(), 0);
    std::int64_t n = 0;
#pragma omp parallel for schedule(static) reduction(+ : sum_abs, sum_sq, n)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(gt.size()); ++i) {
        if (!evaluate_pixel(est, gt, static_cast<std::size_t>(i), mask)) continue;
        const double e = std::abs(est.values[i] - gt.values[i]);
        sum_abs += e;
        sum_sq += e * e;
        ++n;
    }
    for (std::size_t ti = 0; ti < taus.size(); ++ti) {
        std::int64_t b = 0;
        for (std::size_t i = 0; i < gt.size(); ++i) {
            if (mask == MaskMode::gt && gt.valid[i] && !est.valid[i]) {
                ++b; // missing estimate counts as bad under GT masking
                continue;
            }
            if (!evaluate_pixel(est, gt, i, mask)) continue;
            if (std::abs(est.values[i] - gt.values[i]) > taus[ti]) ++b;
        }
        bad[ti] = b;
    }

    r.n_evaluated = n;
    if (n > 0) {
        r.avg_err_px = sum_abs / static_cast<double>(n);
        r.rms_px = std::sqrt(sum_sq / static_cast<double>(n));
    }
    const std::int64_t denom = denominator(est, gt, mask);
    for (std::size_t ti = 0; ti < taus.size(); ++ti)
        r.bad_tau[taus[ti]] =
            denom > 0 ? 100.0 * static_cast<double>(bad[ti]) / static_cast<double>(denom) : 0.0;
    return r;
}

double compare_depth(const DepthGrid& est, const DepthGrid& gt, MaskMode mask) {
    if (est.width != gt.width || est.height != gt.height)
        throw std::invalid_argument("compare_depth: dimension mismatch");
    double sum = 0.0;
    std::int64_t n = 0;
#pragma omp parallel for schedule(static) reduction(+ : sum, n)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(gt.size()); ++i) {
        if (!evaluate_pixel(est, gt, static_cast<std::size_t>(i), mask)) continue;
        sum += std::abs(est.values[i] - gt.values[i]);
        ++n;
    }
    return n > 0 ? 100.0 * sum / static_cast<double>(n) : 0.0; // meters -> cm
}

namespace {

// rank (1-based) of each row under a smaller-is-better key
std::vector<int> ranks_of(const std::vector<double>& keys) {
    std::vector<std::size_t> order(keys.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::vector<int> ranks(keys.size(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        // competition ranking: equal keys share the lowest rank
        if (i > 0 && keys[order[i]] == keys[order[i - 1]])
            ranks[order[i]] = ranks[order[i - 1]];
        else
            ranks[order[i]] = static_cast<int>(i) + 1;
    }
    return ranks;
}

std::string fmt(double v, int prec = 2) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(prec) << v;
    return s.str();
}

}  // namespace

RankTable rank_report(std::vector<MethodEntry> entries, const std::vector<double>& taus) {
    if (entries.empty()) throw std::invalid_argument("rank_report: no entries");
    std::sort(entries.begin(), entries.end(), [](const MethodEntry& a, const MethodEntry& b) {
        if (a.sparsity.lgc_percent != b.sparsity.lgc_percent)
            return a.sparsity.lgc_percent > b.sparsity.lgc_percent;
        return a.name < b.name; // deterministic tie-break
    });
    return RankTable{std::move(entries), taus};
}

std::string RankTable::render_text() const {
    // rank superscripts computed over accuracy-bearing rows only
    std::vector<double> avg, rms;
    std::vector<std::vector<double>> bads(taus.size());
    std::vector<std::size_t> acc_rows;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].has_accuracy) continue;
        acc_rows.push_back(i);
        avg.push_back(rows[i].accuracy.avg_err_px);
        rms.push_back(rows[i].accuracy.rms_px);
        for (std::size_t t = 0; t < taus.size(); ++t)
            bads[t].push_back(rows[i].accuracy.bad_tau.at(taus[t]));
    }
    const auto ravg = ranks_of(avg), rrms = ranks_of(rms);
    std::vector<std::vector<int>> rbad;
    for (const auto& b : bads) rbad.push_back(ranks_of(b));

    std::ostringstream out;
    out << std::left << std::setw(22) << "Technique" << std::setw(8) << "LGC"
        << std::setw(12) << "AvgErr" << std::setw(12) << "RMS";
    for (double tau : taus) out << std::setw(12) << ("Bad " + fmt(tau, 1));
    out << "\n";
    std::size_t a = 0;
    for (const auto& row : rows) {
        out << std::left << std::setw(22) << row.name << std::setw(8)
            << fmt(row.sparsity.lgc_percent, 1);
        if (row.has_accuracy) {
            out << std::setw(12) << (fmt(row.accuracy.avg_err_px) + "^" + std::to_string(ravg[a]))
                << std::setw(12) << (fmt(row.accuracy.rms_px) + "^" + std::to_string(rrms[a]));
            for (std::size_t t = 0; t < taus.size(); ++t)
                out << std::setw(12)
                    << (fmt(row.accuracy.bad_tau.at(taus[t])) + "^" + std::to_string(rbad[t][a]));
            ++a;
        } else {
            out << std::setw(12) << "---" << std::setw(12) << "---";
            for (std::size_t t = 0; t < taus.size(); ++t) out << std::setw(12) << "---";
        }
        out << "\n";
    }
    return out.str();
}

std::string RankTable::render_html() const {
    std::vector<double> avg, rms;
    std::vector<std::vector<double>> bads(taus.size());
    for (const auto& row : rows) {
        if (!row.has_accuracy) continue;
        avg.push_back(row.accuracy.avg_err_px);
        rms.push_back(row.accuracy.rms_px);
        for (std::size_t t = 0; t < taus.size(); ++t)
            bads[t].push_back(row.accuracy.bad_tau.at(taus[t]));
    }
    const auto ravg = ranks_of(avg), rrms = ranks_of(rms);
    std::vector<std::vector<int>> rbad;
    for (const auto& b : bads) rbad.push_back(ranks_of(b));

    std::ostringstream out;
    out << "<table>\n<tr><th>Technique</th><th>LGC</th><th>AvgErr</th><th>RMS</th>";
    for (double tau : taus) out << "<th>Bad " << fmt(tau, 1) << "</th>";
    out << "</tr>\n";
    std::size_t a = 0;
    for (const auto& row : rows) {
        out << "<tr><td>" << row.name << "</td><td>" << fmt(row.sparsity.lgc_percent, 1)
            << "</td>";
        if (row.has_accuracy) {
            out << "<td>" << fmt(row.accuracy.avg_err_px) << "<sup>" << ravg[a] << "</sup></td>"
                << "<td>" << fmt(row.accuracy.rms_px) << "<sup>" << rrms[a] << "</sup></td>";
            for (std::size_t t = 0; t < taus.size(); ++t)
                out << "<td>" << fmt(row.accuracy.bad_tau.at(taus[t])) << "<sup>" << rbad[t][a]
                    << "</sup></td>";
            ++a;
        } else {
            out << "<td>&mdash;</td><td>&mdash;</td>";
            for (std::size_t t = 0; t < taus.size(); ++t) out << "<td>&mdash;</td>";
        }
        out << "</tr>\n";
    }
    out << "</table>\n";
    return out.str();
}

std::string RankTable::render_csv() const {
    std::ostringstream out;
    out << "technique,lgc_percent,avg_err_px,rms_px";
    for (double tau : taus) out << ",bad_" << fmt(tau, 1);
    out << ",depth_avg_err_cm,entropy_bits,k_median\n";
    out.precision(10);
    for (const auto& row : rows) {
        out << row.name << "," << row.sparsity.lgc_percent;
        if (row.has_accuracy) {
            out << "," << row.accuracy.avg_err_px << "," << row.accuracy.rms_px;
            for (double tau : taus) out << "," << row.accuracy.bad_tau.at(tau);
            out << "," << row.accuracy.depth_avg_err_cm;
        } else {
            out << ",,";
            for (std::size_t t = 0; t < taus.size(); ++t) out << ",";
            out << ",";
        }
        out << "," << row.sparsity.entropy_bits << "," << row.sparsity.k_median << "\n";
    }
    return out.str();
}

}  // namespace curvelens
