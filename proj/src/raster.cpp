#include "curvelens/raster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "curvelens/depth_io.hpp"

namespace curvelens {

void write_curvature_ppm(const CurvatureField& field, double window_w,
                         const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path.string());
    out << "P6\n" << field.width << " " << field.height << "\n255\n";

    std::vector<unsigned char> row(static_cast<std::size_t>(field.width) * 3);
    for (int y = 0; y < field.height; ++y) {
        for (int x = 0; x < field.width; ++x) {
            unsigned char r = 0, g = 0, b = 0; // black: masked or |K| > W
            const std::size_t i = field.idx(x, y);
            if (field.valid[i] && std::abs(field.K[i]) <= window_w) {
                // signed map: blue negative, red positive, white at K = 0
                const double t = field.K[i] / window_w; // in [-1, 1]
                const double a = std::min(1.0, std::abs(t));
                if (t >= 0) {
                    r = 255;
                    g = b = static_cast<unsigned char>(std::lround(255.0 * (1.0 - a)));
                } else {
                    b = 255;
                    r = g = static_cast<unsigned char>(std::lround(255.0 * (1.0 - a)));
                }
            }
            row[static_cast<std::size_t>(x) * 3 + 0] = r;
            row[static_cast<std::size_t>(x) * 3 + 1] = g;
            row[static_cast<std::size_t>(x) * 3 + 2] = b;
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw IoError("I/O failure writing " + path.string());
}

}  // namespace curvelens
