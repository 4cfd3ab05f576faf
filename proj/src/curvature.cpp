#include "curvelens/curvature.hpp"

#include <cmath>

namespace curvelens {

std::vector<double> CurvatureField::valid_values() const {
    std::vector<double> out;
    out.reserve(K.size());
    for (std::size_t i = 0; i < K.size(); ++i)
        if (valid[i]) out.push_back(K[i]);
    return out;
}

std::optional<SurfaceDerivatives> partial_derivatives(const SurfaceGrid& s, int x, int y) {
    if (x < 1 || y < 1 || x >= s.width - 1 || y >= s.height - 1) return std::nullopt;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
            if (!s.is_valid(x + dx, y + dy)) return std::nullopt;

    const auto P = [&](int dx, int dy) -> Vec3 {
        const std::size_t i = s.idx(x + dx, y + dy);
        return {s.X[i], s.Y[i], s.Z[i]};
    };

    SurfaceDerivatives d;
    d.zu = (P(1, 0) - P(-1, 0)) * 0.5;
    d.zv = (P(0, 1) - P(0, -1)) * 0.5;
    d.zuu = P(1, 0) - P(0, 0) * 2.0 + P(-1, 0);
    d.zvv = P(0, 1) - P(0, 0) * 2.0 + P(0, -1);
    d.zuv = (P(1, 1) - P(1, -1) - P(-1, 1) + P(-1, -1)) * 0.25;
    return d;
}

std::optional<FundamentalForms> fundamental_forms(const SurfaceDerivatives& d) {
    FundamentalForms f;
    f.E = dot(d.zu, d.zu);
    f.F = dot(d.zu, d.zv);
    f.G = dot(d.zv, d.zv);
    const Vec3 c = cross(d.zu, d.zv);
    const double cn = norm(c);
    if (cn < 1e-12 * std::sqrt(f.E) * std::sqrt(f.G)) return std::nullopt;
    f.n = c / cn;
    f.L = dot(d.zuu, f.n);
    f.M = dot(d.zuv, f.n);
    f.N = dot(d.zvv, f.n);
    return f;
}

std::optional<double> gaussian_curvature(const FundamentalForms& f) {
    const double den = f.E * f.G - f.F * f.F;
    if (den <= 1e-15) return std::nullopt;
    return (f.L * f.N - f.M * f.M) / den;
}

std::optional<PrincipalCurvatures> principal_curvatures(const FundamentalForms& f) {
    const double den = f.E * f.G - f.F * f.F;
    if (den <= 1e-15) return std::nullopt;
    const double K = (f.L * f.N - f.M * f.M) / den;
    const double H = (f.E * f.N + f.G * f.L - 2.0 * f.F * f.M) / (2.0 * den);
    const double disc = std::sqrt(std::max(0.0, H * H - K));
    return PrincipalCurvatures{H + disc, H - disc};
}

namespace {

template <bool Parallel>
CurvatureField field_impl(const SurfaceGrid& s) {
    CurvatureField out(s.width, s.height);
#pragma omp parallel for schedule(static) if (Parallel)
    for (int y = 1; y < s.height - 1; ++y) {
        for (int x = 1; x < s.width - 1; ++x) {
            const auto d = partial_derivatives(s, x, y);
            if (!d) continue;
            const auto f = fundamental_forms(*d);
            if (!f) continue;
            const auto k = gaussian_curvature(*f);
            const auto pk = principal_curvatures(*f);
            if (!k || !pk) continue;
            const std::size_t i = out.idx(x, y);
            out.K[i] = *k;
            out.kappa1[i] = pk->kappa1;
            out.kappa2[i] = pk->kappa2;
            out.valid[i] = 1;
        }
    }
    return out;
}

}  // namespace

CurvatureField curvature_field(const SurfaceGrid& s) { return field_impl<true>(s); }

CurvatureField curvature_field_serial(const SurfaceGrid& s) { return field_impl<false>(s); }

}  // namespace curvelens
