#pragma once

#include <filesystem>

#include "curvelens/curvature.hpp"

namespace curvelens {

// False-color raster of a curvature field as binary PPM: signed K maps blue
// (negative) to red (positive) within [-window_w, window_w]; pixels with
// |K| > window_w, and invalid pixels, are black.
void write_curvature_ppm(const CurvatureField& field, double window_w,
                         const std::filesystem::path& path);

}  // namespace curvelens
