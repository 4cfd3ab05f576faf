#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "curvelens/grids.hpp"

namespace curvelens {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class PfmEndianness { little, big };

// Reads a single-channel PFM file ("Pf" header). Rows are flipped on load so
// index (0,0) is the top-left pixel. Non-finite samples (Middlebury encodes
// unknown disparity as +inf) are marked invalid. The scale magnitude is
// recorded in the grid but not applied to the samples.
// Color "PF" files are rejected.
ImageGrid read_pfm(const std::filesystem::path& path);

// Writes a spec-conformant PFM. Invalid pixels are written as +inf.
// read_pfm(write_pfm(g)) reproduces g exactly on values and masks.
void write_pfm(const ImageGrid& grid, const std::filesystem::path& path,
               PfmEndianness endianness = PfmEndianness::little);

// Parses a Middlebury-style calib.txt. Requires cam0, doffs, baseline (mm).
// Parsing is strict: a missing key is an error, not a default.
CameraIntrinsics read_calib(const std::filesystem::path& path);

// Depth = fx * baseline / (d + doffs). Pixels where d + doffs <= 0, or which
// are invalid in the input, become invalid.
DepthGrid disparity_to_depth(const DisparityGrid& disp, const CameraIntrinsics& cam);

// Inverse of the above (used by the synthetic pipeline): d = fx * baseline / Z - doffs.
DisparityGrid depth_to_disparity(const DepthGrid& depth, const CameraIntrinsics& cam);

}  // namespace curvelens
