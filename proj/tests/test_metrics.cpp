#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "curvelens/curvature.hpp"
#include "curvelens/metrics.hpp"
#include "curvelens/projection.hpp"
#include "test_util.hpp"

using namespace curvelens;

TEST_CASE("trim_top_abs removes the highest |K| samples") {
    const std::vector<double> in{0, 1, -2, 3, 4};
    CHECK(trim_top_abs(in, 0.2) == std::vector<double>{0, 1, -2, 3});
    CHECK(trim_top_abs(in, 0.0) == in);
    CHECK(trim_top_abs({}, 0.2).empty());
}

TEST_CASE("trim_top_abs tie rule keeps the earlier sample") {
    // |−2000| == |2000|: the later one is removed
    const std::vector<double> in{-2000, -500, 0, 500, 2000};
    CHECK(trim_top_abs(in, 0.2) == std::vector<double>{-2000, -500, 0, 500});
}

TEST_CASE("trim_top_abs separation property") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> dist(-100, 100);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> in(1 + rng() % 40);
        for (auto& v : in) v = dist(rng);
        const auto kept = trim_top_abs(in, 0.3);
        // removed set = multiset difference; check via sorted |values|
        std::vector<double> all, k;
        for (double v : in) all.push_back(std::abs(v));
        for (double v : kept) k.push_back(std::abs(v));
        std::sort(all.begin(), all.end());
        std::sort(k.begin(), k.end());
        // kept are exactly the smallest |v|
        for (std::size_t i = 0; i < k.size(); ++i) CHECK(k[i] == all[i]);
    }
}

TEST_CASE("histogram puts a point mass in the right half-open bin") {
    const std::vector<double> values(10, 0.0);
    const CurvatureHistogram h = histogram(values, -1.0, 1.0, 2, 0.0);
    REQUIRE_FALSE(h.empty);
    CHECK(h.h[0] == 0.0);
    CHECK(h.h[1] == 1.0); // 0 falls in [0, 1)
}

TEST_CASE("histogram of uniform samples is flat to 1/n") {
    const int n = 100000, B = 10;
    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) values[i] = -1.0 + 2.0 * (i + 0.5) / n;
    const CurvatureHistogram h = histogram(values, -1.0, 1.0, B, 0.0);
    for (int b = 0; b < B; ++b) CHECK(std::abs(h.h[b] - 1.0 / B) <= 1.0 / n + 1e-12);
}

TEST_CASE("histogram accounting identity and normalization") {
    std::mt19937 rng(31);
    std::normal_distribution<double> dist(0.0, 500.0);
    std::vector<double> values(5000);
    for (auto& v : values) v = dist(rng);
    const CurvatureHistogram h = histogram(values, -400.0, 400.0, 30, 0.2);
    CHECK(h.n_total == 5000);
    std::int64_t binned = std::accumulate(h.counts.begin(), h.counts.end(), std::int64_t{0});
    CHECK(h.n_total == binned + h.n_trimmed + h.n_out_of_range);
    const double mass = std::accumulate(h.h.begin(), h.h.end(), 0.0);
    CHECK(std::abs(mass - 1.0) <= 1e-12);
    // uniform edges
    const double w = h.bin_edges[1] - h.bin_edges[0];
    for (int b = 1; b < h.bins(); ++b)
        CHECK(std::abs((h.bin_edges[b + 1] - h.bin_edges[b]) - w) < 1e-9);
}

TEST_CASE("empty histogram is flagged") {
    const CurvatureHistogram h = histogram({1e9, -1e9}, -1.0, 1.0, 4, 0.0);
    CHECK(h.empty);
    CHECK(h.n_out_of_range == 2);
    CHECK(empirical_loss(h, 0.5).kind == EmpiricalLoss::Kind::out_of_support);
}

TEST_CASE("histogram presets match the named figures") {
    const HistogramPreset fig4 = histogram_preset("fig4");
    CHECK(fig4.lo == -2500.0);
    CHECK(fig4.hi == 2500.0);
    CHECK(fig4.bins == 30);
    const HistogramPreset fig6 = histogram_preset("fig6");
    CHECK(fig6.lo == -4000.0);
    CHECK(fig6.hi == 4000.0);
    CHECK(fig6.bins == 50);
    CHECK_THROWS(histogram_preset("fig5"));
}

TEST_CASE("empirical loss is -ln h and inverts back to h") {
    const std::vector<double> values{0.1, 0.1, 0.1, 0.9}; // h = [0.75, 0.25] over [0,1], 2 bins
    const CurvatureHistogram h = histogram(values, 0.0, 1.0, 2, 0.0);

    const EmpiricalLoss l0 = empirical_loss(h, 0.1);
    REQUIRE(l0.finite());
    CHECK(l0.value == doctest::Approx(-std::log(0.75)));
    CHECK(*empirical_prior(h, 0.1) == doctest::Approx(0.75).epsilon(1e-12));

    // full-certainty bin: loss 0, prior 1
    const CurvatureHistogram one = histogram({0.5, 0.5}, 0.0, 1.0, 1, 0.0);
    CHECK(empirical_loss(one, 0.5).value == 0.0);
    CHECK(*empirical_prior(one, 0.5) == 1.0);

    // h = e^-1 gives loss 1
    std::vector<double> mix;
    for (int i = 0; i < 1000; ++i) mix.push_back(i < 368 ? 0.25 : 0.75);
    const CurvatureHistogram he = histogram(mix, 0.0, 1.0, 2, 0.0);
    CHECK(empirical_loss(he, 0.25).value == doctest::Approx(-std::log(0.368)));

    // inverse identity on every non-empty bin
    for (int b = 0; b < h.bins(); ++b) {
        const double center = 0.5 * (h.bin_edges[b] + h.bin_edges[b + 1]);
        if (h.h[b] == 0.0) {
            CHECK(empirical_loss(h, center).kind == EmpiricalLoss::Kind::empty_bin);
            CHECK(*empirical_prior(h, center) == 0.0);
        } else {
            CHECK(std::abs(*empirical_prior(h, center) - h.h[b]) < 1e-12);
        }
    }
    CHECK(empirical_loss(h, 7.0).kind == EmpiricalLoss::Kind::out_of_support);
}

TEST_CASE("sparse_loss") {
    CHECK(sparse_loss(0, 0, 1.0) == 0.0);
    CHECK(sparse_loss(2, 8, 1.0) == doctest::Approx(4.0));
    CHECK(sparse_loss(-2, 8, 0.5) == sparse_loss(2, -8, 0.5));
    CHECK_THROWS(sparse_loss(1, 1, 0.0));
}

TEST_CASE("p_mean special values") {
    CHECK(p_mean(2, 8, 1.0) == doctest::Approx(5.0));
    CHECK(p_mean(3, 4, 2.0) == doctest::Approx(std::sqrt(25.0 / 2.0)));
    CHECK(p_mean(0, 0, 0.5) == 0.0);
    CHECK_THROWS(p_mean(1, 1, 0.0));
    CHECK_THROWS(p_mean(1, 1, -1.0));
    // one zero kappa: (|k|^p / 2)^(1/p)
    CHECK(p_mean(0.0, 3.0, 1.0) == doctest::Approx(1.5));
    CHECK(p_mean(0.0, 3.0, 0.01) == doctest::Approx(3.0 * std::exp2(-100.0)));
}

TEST_CASE("p_mean converges monotonically to sqrt(|k1 k2|)") {
    CHECK(std::abs(p_mean(2, 8, 1e-3) - 4.0) < 1e-3);
    double prev = p_mean(2, 8, 1.0);
    for (double p : {0.5, 0.1, 0.01, 1e-3}) {
        const double v = p_mean(2, 8, p);
        CHECK(v <= prev + 1e-15);
        CHECK(v >= 4.0);
        prev = v;
    }
    CHECK(p_mean_limit(2, 8) == 4.0);
}

TEST_CASE("p_mean chain on randomized pairs") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> logk(-3.0, 3.0);
    std::uniform_int_distribution<int> sign(0, 1);
    const std::vector<double> ps{1.0, 0.5, 0.1, 0.01, 1e-3};
    std::uniform_real_distribution<double> spread(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        // keep the pair within 3 decades of each other: the p = 1e-3 gap is
        // exp(p ln^2|k1/k2| / 8), which stays below 1% only then
        const double e1 = logk(rng);
        const double e2 = std::clamp(e1 + spread(rng), -3.0, 3.0);
        const double k1 = (sign(rng) ? 1 : -1) * std::pow(10.0, e1);
        const double k2 = (sign(rng) ? 1 : -1) * std::pow(10.0, e2);
        const double limit = p_mean_limit(k1, k2);
        double prev = std::numeric_limits<double>::infinity();
        for (double p : ps) {
            const double v = p_mean(k1, k2, p);
            CHECK(v <= prev * (1 + 1e-12)); // nonincreasing as p decreases
            CHECK(v >= limit * (1 - 1e-12)); // bounded below
            prev = v;
        }
        CHECK(std::abs(p_mean(k1, k2, 1e-3) - limit) / limit < 1e-2);
    }
}

TEST_CASE("lgc basics") {
    CHECK(*lgc({0, 0, 0}, 5.0, 0.0) == 100.0);
    // trim removes one of the +-2000 (tie rule), W = 1000 keeps 3 of 4
    CHECK(*lgc({-2000, -500, 0, 500, 2000}, 1000.0, 0.2) == 75.0);
    CHECK_FALSE(lgc({}, 10.0, 0.0).has_value());
    CHECK_THROWS(lgc({1.0}, 0.0, 0.0));
}

TEST_CASE("shannon entropy limits") {
    CHECK(shannon_entropy(histogram({0.5, 0.5}, 0.0, 1.0, 4, 0.0)) == 0.0);

    const int B = 8;
    std::vector<double> values;
    for (int b = 0; b < B; ++b) values.push_back((b + 0.5) / B);
    const CurvatureHistogram h = histogram(values, 0.0, 1.0, B, 0.0);
    CHECK(shannon_entropy(h) == doctest::Approx(3.0)); // log2 8
    CHECK(shannon_entropy(h, std::exp(1.0)) == doctest::Approx(std::log(8.0)));
}

TEST_CASE("entropy rises and LGC falls as noise grows") {
    // synthetic sweep: curvature populations of increasing spread
    std::mt19937 rng(53);
    std::vector<double> lgcs, ents;
    for (double scale : {10.0, 50.0, 200.0, 800.0, 2000.0}) {
        std::normal_distribution<double> dist(0.0, scale);
        std::vector<double> values(20000);
        for (auto& v : values) v = dist(rng);
        lgcs.push_back(*lgc(values, 1000.0, 0.2));
        ents.push_back(shannon_entropy(histogram(values, -2500, 2500, 30, 0.2)));
    }
    // Spearman: both sequences are strictly monotone in opposite directions
    for (std::size_t i = 1; i < lgcs.size(); ++i) {
        CHECK(lgcs[i] <= lgcs[i - 1] + 1e-12);
        CHECK(ents[i] >= ents[i - 1] - 1e-12);
    }
}

TEST_CASE("noise never raises the LGC of a flat scene") {
    const CameraIntrinsics cam{500.0, 500.0, 64.0, 48.0, 0.2, 0.0};
    const auto lgc_of = [&](double noise, unsigned seed) {
        std::mt19937 rng(seed);
        std::normal_distribution<double> dist(0.0, noise);
        DepthGrid depth(128, 96, 2.0);
        for (auto& v : depth.values) v += dist(rng);
        const CurvatureField f = curvature_field(backproject(depth, cam));
        return *lgc(f.valid_values(), 1000.0, 0.2);
    };
    std::vector<double> clean, noisy;
    for (unsigned t = 0; t < 10; ++t) {
        clean.push_back(lgc_of(1e-5, 100 + t));
        noisy.push_back(lgc_of(1e-3, 200 + t));
    }
    CHECK(testutil::median(noisy) <= testutil::median(clean));
}

TEST_CASE("sparsity report fields") {
    std::vector<double> values{-2000, -500, 0, 500, 2000};
    const SparsityReport r = sparsity_report(values, 1000.0, 0.2, histogram_preset("fig4"));
    CHECK(r.defined);
    CHECK(r.lgc_percent == 75.0);
    CHECK(r.n_total == 5);
    CHECK(r.n_trimmed == 1);
    CHECK(r.k_abs_max == 2000.0);
    CHECK(r.k_median == doctest::Approx(-250.0)); // kept: -2000,-500,0,500 -> mid (-500+0)/2
    CHECK(r.entropy_bits >= 0.0);
    CHECK(r.entropy_bits <= std::log2(30.0));

    const std::string json = sparsity_report_json(r);
    CHECK(json.find("lgc_percent") != std::string::npos);
    CHECK(json.find("window_W") != std::string::npos);

    const SparsityReport undef = sparsity_report({}, 1000.0, 0.2, histogram_preset("fig4"));
    CHECK_FALSE(undef.defined);
}
