#include "curvelens/depth_io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace curvelens {

namespace {

bool host_is_little_endian() { return std::endian::native == std::endian::little; }

float byteswap_float(float f) {
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    u = ((u & 0x000000FFu) << 24) | ((u & 0x0000FF00u) << 8) |
        ((u & 0x00FF0000u) >> 8) | ((u & 0xFF000000u) >> 24);
    std::memcpy(&f, &u, 4);
    return f;
}

// One whitespace-delimited header token; PFM headers allow '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    if (!(in >> tok)) throw IoError("PFM: truncated header");
    while (tok[0] == '#') {
        std::string rest;
        std::getline(in, rest);
        if (!(in >> tok)) throw IoError("PFM: truncated header");
    }
    return tok;
}

std::string format_scale(double magnitude, PfmEndianness e) {
    const double signed_scale = (e == PfmEndianness::little) ? -magnitude : magnitude;
    char buf[64];
    if (signed_scale == std::floor(signed_scale) && std::abs(signed_scale) < 1e15)
        std::snprintf(buf, sizeof(buf), "%.1f", signed_scale);
    else
        std::snprintf(buf, sizeof(buf), "%g", signed_scale);
    return buf;
}

}  // namespace

ImageGrid read_pfm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open PFM file: " + path.string());

    const std::string magic = next_token(in);
    if (magic == "PF") throw IoError("color PFM not supported: " + path.string());
    if (magic != "Pf") throw IoError("not a PFM file (bad magic '" + magic + "'): " + path.string());

    int width = 0, height = 0;
    double scale = 0.0;
    try {
        width = std::stoi(next_token(in));
        height = std::stoi(next_token(in));
        scale = std::stod(next_token(in));
    } catch (const std::exception&) {
        throw IoError("PFM: malformed header in " + path.string());
    }
    if (width <= 0 || height <= 0) throw IoError("PFM: non-positive dimensions in " + path.string());
    if (scale == 0.0) throw IoError("PFM: zero scale in " + path.string());

    // Exactly one whitespace byte separates the header from the payload.
    in.get();

    const std::size_t n = static_cast<std::size_t>(width) * height;
    std::vector<float> payload(n);
    in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(n * 4));
    if (static_cast<std::size_t>(in.gcount()) != n * 4)
        throw IoError("PFM: payload shorter than header promises in " + path.string());

    const bool file_little = scale < 0.0;
    if (file_little != host_is_little_endian())
        for (float& f : payload) f = byteswap_float(f);

    ImageGrid g(width, height);
    g.scale_magnitude = std::abs(scale);
    // PFM stores the bottom row first; flip so (0,0) is top-left.
    for (int y = 0; y < height; ++y) {
        const float* src = payload.data() + static_cast<std::size_t>(height - 1 - y) * width;
        for (int x = 0; x < width; ++x) {
            const float v = src[x];
            const std::size_t i = g.idx(x, y);
            if (std::isfinite(v)) {
                g.values[i] = v;
                g.valid[i] = 1;
            } else {
                g.values[i] = 0.0;
                g.valid[i] = 0;
            }
        }
    }
    return g;
}

void write_pfm(const ImageGrid& grid, const std::filesystem::path& path,
               PfmEndianness endianness) {
    if (grid.width <= 0 || grid.height <= 0)
        throw IoError("write_pfm: grid dimensions must be positive");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path.string());

    out << "Pf\n" << grid.width << " " << grid.height << "\n"
        << format_scale(grid.scale_magnitude, endianness) << "\n";

    const bool file_little = endianness == PfmEndianness::little;
    const bool swap = file_little != host_is_little_endian();
    std::vector<float> row(grid.width);
    for (int y = grid.height - 1; y >= 0; --y) { // bottom row first
        for (int x = 0; x < grid.width; ++x) {
            float v = grid.is_valid(x, y) ? static_cast<float>(grid.at(x, y))
                                          : std::numeric_limits<float>::infinity();
            if (swap) v = byteswap_float(v);
            row[x] = v;
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * 4));
    }
    if (!out) throw IoError("I/O failure writing " + path.string());
}

namespace {

// cam0=[fx 0 cx; 0 fy cy; 0 0 1]
void parse_cam_matrix(const std::string& text, CameraIntrinsics& cam) {
    std::string s = text;
    for (char& c : s)
        if (c == '[' || c == ']' || c == ';') c = ' ';
    std::istringstream in(s);
    double m[9];
    for (double& v : m)
        if (!(in >> v)) throw IoError("calib: unparsable cam0 matrix: " + text);
    cam.fx = m[0];
    cam.cx = m[2];
    cam.fy = m[4];
    cam.cy = m[5];
}

}  // namespace

CameraIntrinsics read_calib(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open calib file: " + path.string());

    CameraIntrinsics cam;
    bool have_cam0 = false, have_doffs = false, have_baseline = false;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "cam0") {
            parse_cam_matrix(value, cam);
            have_cam0 = true;
        } else if (key == "doffs") {
            cam.doffs_px = std::stod(value);
            have_doffs = true;
        } else if (key == "baseline") {
            cam.baseline_m = std::stod(value) / 1000.0; // file stores mm
            have_baseline = true;
        }
        // cam1, width, height, ndisp and unknown keys are accepted and ignored
    }
    if (!have_cam0) throw IoError("calib: missing key 'cam0' in " + path.string());
    if (!have_doffs) throw IoError("calib: missing key 'doffs' in " + path.string());
    if (!have_baseline) throw IoError("calib: missing key 'baseline' in " + path.string());
    if (!cam.is_valid()) throw IoError("calib: invalid intrinsics in " + path.string());
    return cam;
}

DepthGrid disparity_to_depth(const DisparityGrid& disp, const CameraIntrinsics& cam) {
    DepthGrid depth(disp.width, disp.height, 0.0, false);
    depth.scale_magnitude = disp.scale_magnitude;
    const double fb = cam.fx * cam.baseline_m;
    for (std::size_t i = 0; i < disp.size(); ++i) {
        if (!disp.valid[i]) continue;
        const double denom = disp.values[i] + cam.doffs_px;
        if (denom <= 0.0) continue;
        depth.values[i] = fb / denom;
        depth.valid[i] = 1;
    }
    return depth;
}

DisparityGrid depth_to_disparity(const DepthGrid& depth, const CameraIntrinsics& cam) {
    DisparityGrid disp(depth.width, depth.height, 0.0, false);
    disp.scale_magnitude = depth.scale_magnitude;
    const double fb = cam.fx * cam.baseline_m;
    for (std::size_t i = 0; i < depth.size(); ++i) {
        if (!depth.valid[i] || depth.values[i] <= 0.0) continue;
        const double d = fb / depth.values[i] - cam.doffs_px;
        if (d < 0.0) continue;
        disp.values[i] = d;
        disp.valid[i] = 1;
    }
    return disp;
}

}  // namespace curvelens
