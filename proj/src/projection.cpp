#include "curvelens/projection.hpp"

#include <cmath>

namespace curvelens {

SurfaceGrid backproject(const DepthGrid& depth, const CameraIntrinsics& cam) {
    SurfaceGrid s(depth.width, depth.height);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < depth.height; ++y) {
        for (int x = 0; x < depth.width; ++x) {
            const std::size_t i = depth.idx(x, y);
            if (!depth.valid[i]) continue;
            const double d = depth.values[i];
            s.X[i] = (x - cam.cx) / cam.fx * d;
            s.Y[i] = (y - cam.cy) / cam.fy * d;
            s.Z[i] = d;
            s.valid[i] = 1;
        }
    }
    return s;
}

namespace {

std::vector<double> gaussian_kernel(double sigma, int truncation_radius, int& radius) {
    radius = static_cast<int>(std::ceil(truncation_radius * sigma));
    std::vector<double> w(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        w[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        sum += w[i + radius];
    }
    for (double& v : w) v /= sum;
    return w;
}

// Separable normalized convolution: the horizontal pass accumulates weighted
// component sums and the weight mass, the vertical pass filters both, and the
// final divide renormalizes per pixel. Invalid pixels keep weight zero and
// remain invalid in the output (no hole filling).
template <bool Parallel>
SurfaceGrid smooth_impl(const SurfaceGrid& s, const SmoothingParams& p) {
    if (p.sigma == 0.0) return s;

    int radius = 0;
    const std::vector<double> w = gaussian_kernel(p.sigma, p.truncation_radius, radius);
    const int W = s.width, H = s.height;
    const std::size_t n = static_cast<std::size_t>(W) * H;

    std::vector<double> nx(n, 0.0), ny(n, 0.0), nz(n, 0.0), den(n, 0.0);

#pragma omp parallel for schedule(static) if (Parallel)
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            double ax = 0, ay = 0, az = 0, ad = 0;
            const int lo = std::max(0, x - radius), hi = std::min(W - 1, x + radius);
            for (int xx = lo; xx <= hi; ++xx) {
                const std::size_t j = s.idx(xx, y);
                if (!s.valid[j]) continue;
                const double wk = w[xx - x + radius];
                ax += wk * s.X[j];
                ay += wk * s.Y[j];
                az += wk * s.Z[j];
                ad += wk;
            }
            const std::size_t i = s.idx(x, y);
            nx[i] = ax; ny[i] = ay; nz[i] = az; den[i] = ad;
        }
    }

    SurfaceGrid out(W, H);
#pragma omp parallel for schedule(static) if (Parallel)
    for (int y = 0; y < H; ++y) {
        const int lo = std::max(0, y - radius), hi = std::min(H - 1, y + radius);
        for (int x = 0; x < W; ++x) {
            const std::size_t i = s.idx(x, y);
            if (!s.valid[i]) continue;
            double ax = 0, ay = 0, az = 0, ad = 0;
            for (int yy = lo; yy <= hi; ++yy) {
                const std::size_t j = s.idx(x, yy);
                const double wk = w[yy - y + radius];
                ax += wk * nx[j];
                ay += wk * ny[j];
                az += wk * nz[j];
                ad += wk * den[j];
            }
            if (ad <= 0.0) continue; // no valid sample in support
            out.X[i] = ax / ad;
            out.Y[i] = ay / ad;
            out.Z[i] = az / ad;
            out.valid[i] = 1;
        }
    }
    return out;
}

}  // namespace

SurfaceGrid smooth_surface(const SurfaceGrid& s, const SmoothingParams& p) {
    return smooth_impl<true>(s, p);
}

SurfaceGrid smooth_surface_serial(const SurfaceGrid& s, const SmoothingParams& p) {
    return smooth_impl<false>(s, p);
}

}  // namespace curvelens
