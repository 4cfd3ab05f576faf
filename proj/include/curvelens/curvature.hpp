#pragma once

#include <optional>

#include "curvelens/geometry.hpp"
#include "curvelens/projection.hpp"

namespace curvelens {

struct SurfaceDerivatives {
    Vec3 zu, zv;        // first partials along u (column) and v (row)
    Vec3 zuu, zuv, zvv; // second partials
};

struct FundamentalForms {
    double E = 0, F = 0, G = 0; // first form
    double L = 0, M = 0, N = 0; // second form
    Vec3 n;                     // unit surface normal (Zu x Zv direction)
};

struct CurvatureField {
    int width = 0;
    int height = 0;
    std::vector<double> K;      // Gaussian curvature, m^-2
    std::vector<double> kappa1; // principal curvatures, m^-1, kappa1 >= kappa2
    std::vector<double> kappa2;
    std::vector<std::uint8_t> valid;

    CurvatureField() = default;
    CurvatureField(int w, int h)
        : width(w), height(h),
          K(static_cast<std::size_t>(w) * h, 0.0),
          kappa1(static_cast<std::size_t>(w) * h, 0.0),
          kappa2(static_cast<std::size_t>(w) * h, 0.0),
          valid(static_cast<std::size_t>(w) * h, 0) {}

    std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
    bool is_valid(int x, int y) const { return valid[idx(x, y)] != 0; }

    // Valid K values in row-major order.
    std::vector<double> valid_values() const;
};

// Central differences on the (u,v) grid with unit grid step. Requires the
// pixel and all 8 neighbors valid; returns nullopt on an incomplete stencil.
std::optional<SurfaceDerivatives> partial_derivatives(const SurfaceGrid& s, int x, int y);

// E = <Zu,Zu>, F = <Zu,Zv>, G = <Zv,Zv>; n = Zu x Zv normalized;
// L = Zuu.n, M = Zuv.n, N = Zvv.n. Returns nullopt at degenerate tangent
// planes (|Zu x Zv| < 1e-12 |Zu||Zv|).
std::optional<FundamentalForms> fundamental_forms(const SurfaceDerivatives& d);

// K = (LN - M^2)/(EG - F^2). Returns nullopt when the denominator is below 1e-15.
std::optional<double> gaussian_curvature(const FundamentalForms& f);

struct PrincipalCurvatures {
    double kappa1 = 0; // >= kappa2
    double kappa2 = 0;
};

// From mean curvature H = (EN + GL - 2FM)/(2(EG - F^2)):
// kappa_{1,2} = H +- sqrt(max(0, H^2 - K)).
std::optional<PrincipalCurvatures> principal_curvatures(const FundamentalForms& f);

// Per-pixel curvature over the whole grid. The one-pixel border and any pixel
// with an incomplete stencil or degenerate forms are invalid. No clamping.
CurvatureField curvature_field(const SurfaceGrid& s);

// Serial reference implementation, kept for testing the parallel kernel.
CurvatureField curvature_field_serial(const SurfaceGrid& s);

}  // namespace curvelens
