#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace curvelens {

// Single-channel grid with a per-pixel validity mask. Index (0,0) is the
// top-left pixel; storage is row-major, top row first.
struct ImageGrid {
    int width = 0;
    int height = 0;
    std::vector<double> values;
    std::vector<std::uint8_t> valid;
    // Magnitude of the PFM scale line this grid was decoded from (or will be
    // encoded with). Recorded as metadata, never multiplied into the samples.
    double scale_magnitude = 1.0;

    ImageGrid() = default;
    ImageGrid(int w, int h, double fill = 0.0, bool all_valid = true)
        : width(w), height(h),
          values(static_cast<std::size_t>(w) * h, fill),
          valid(static_cast<std::size_t>(w) * h, all_valid ? 1 : 0) {}

    std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
    double at(int x, int y) const { return values[idx(x, y)]; }
    double& at(int x, int y) { return values[idx(x, y)]; }
    bool is_valid(int x, int y) const { return valid[idx(x, y)] != 0; }
    std::size_t size() const { return values.size(); }
};

struct DisparityGrid : ImageGrid {
    DisparityGrid() = default;
    explicit DisparityGrid(ImageGrid g) : ImageGrid(std::move(g)) {}
    DisparityGrid(int w, int h, double fill = 0.0, bool all_valid = true)
        : ImageGrid(w, h, fill, all_valid) {}
};

struct DepthGrid : ImageGrid {
    DepthGrid() = default;
    explicit DepthGrid(ImageGrid g) : ImageGrid(std::move(g)) {}
    DepthGrid(int w, int h, double fill = 0.0, bool all_valid = true)
        : ImageGrid(w, h, fill, all_valid) {}
};

struct CameraIntrinsics {
    double fx = 0.0;       // focal length, pixels
    double fy = 0.0;
    double cx = 0.0;       // principal point, pixels
    double cy = 0.0;
    double baseline_m = 0.0;
    double doffs_px = 0.0;

    bool is_valid() const { return fx > 0 && fy > 0 && baseline_m > 0 && doffs_px >= 0; }
};

}  // namespace curvelens
