#pragma once

#include <cstdint>
#include <vector>

#include "curvelens/grids.hpp"

namespace curvelens {

// Gridded 3D point cloud parametrized by image coordinates (u,v) = (column, row).
struct SurfaceGrid {
    int width = 0;
    int height = 0;
    std::vector<double> X, Y, Z;
    std::vector<std::uint8_t> valid;

    SurfaceGrid() = default;
    SurfaceGrid(int w, int h)
        : width(w), height(h),
          X(static_cast<std::size_t>(w) * h, 0.0),
          Y(static_cast<std::size_t>(w) * h, 0.0),
          Z(static_cast<std::size_t>(w) * h, 0.0),
          valid(static_cast<std::size_t>(w) * h, 0) {}

    std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
    bool is_valid(int x, int y) const { return valid[idx(x, y)] != 0; }
};

struct SmoothingParams {
    double sigma = 0.0;        // kernel std deviation, grid-index (pixel) units
    int truncation_radius = 3; // kernel support radius in units of sigma
};

// X = (x - cx)/fx * d, Y = (y - cy)/fy * d, Z = d. Mask is copied.
SurfaceGrid backproject(const DepthGrid& depth, const CameraIntrinsics& cam);

// Separable Gaussian filtering of X, Y, Z independently over the (u,v) grid,
// with normalized convolution over valid pixels (invalid samples get zero
// weight; the remaining weights are renormalized per pixel). Invalid pixels
// stay invalid: the filter never fills holes. sigma = 0 is the identity.
SurfaceGrid smooth_surface(const SurfaceGrid& s, const SmoothingParams& p);

// Serial reference implementation, kept for testing the parallel kernel.
SurfaceGrid smooth_surface_serial(const SurfaceGrid& s, const SmoothingParams& p);

}  // namespace curvelens
