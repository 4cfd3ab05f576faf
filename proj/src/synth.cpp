#include "curvelens/synth.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "curvelens/depth_io.hpp"

namespace curvelens {

namespace {

constexpr double kRayEps = 1e-9;

struct PrimHit {
    double t = std::numeric_limits<double>::infinity();
    int face = 0;
    bool ok = false;
};

PrimHit hit_plane(const PlanePrim& pl, const Vec3& o, const Vec3& d) {
    const double dn = dot(d, pl.normal);
    if (dn == 0.0) return {};
    const double t = dot(pl.point - o, pl.normal) / dn;
    if (t <= kRayEps) return {};
    return {t, 0, true};
}

PrimHit hit_sphere(const SpherePrim& sp, const Vec3& o, const Vec3& d) {
    const Vec3 oc = o - sp.center;
    const double a = dot(d, d);
    const double b = 2.0 * dot(d, oc);
    const double c = dot(oc, oc) - sp.radius * sp.radius;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return {};
    const double sq = std::sqrt(disc);
    const double t1 = (-b - sq) / (2.0 * a);
    const double t2 = (-b + sq) / (2.0 * a);
    const double t = t1 > kRayEps ? t1 : t2;
    if (t <= kRayEps) return {};
    return {t, 0, true};
}

PrimHit hit_cylinder(const CylinderPrim& cy, const Vec3& o, const Vec3& d) {
    const Vec3 a = normalized(cy.axis);
    const Vec3 oc = o - cy.center;
    PrimHit best;

    // side: project out the axis component
    const Vec3 dp = d - a * dot(d, a);
    const Vec3 op = oc - a * dot(oc, a);
    const double qa = dot(dp, dp);
    if (qa > 0.0) {
        const double qb = 2.0 * dot(dp, op);
        const double qc = dot(op, op) - cy.radius * cy.radius;
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            for (double t : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)}) {
                if (t <= kRayEps || t >= best.t) continue;
                const double h = dot(oc + d * t, a);
                if (std::abs(h) <= cy.half_length) best = {t, 0, true};
            }
        }
    }

    // caps: discs at center -+ half_length * axis
    for (int side = 0; side < 2; ++side) {
        const double sgn = side == 0 ? -1.0 : 1.0;
        const Vec3 cc = cy.center + a * (sgn * cy.half_length);
        const double dn = dot(d, a);
        if (dn == 0.0) continue;
        const double t = dot(cc - o, a) / dn;
        if (t <= kRayEps || t >= best.t) continue;
        const Vec3 q = o + d * t - cc;
        const Vec3 radial = q - a * dot(q, a);
        if (dot(radial, radial) <= cy.radius * cy.radius) best = {t, 1 + side, true};
    }
    return best;
}

PrimHit hit_box(const BoxPrim& bx, const Vec3& o, const Vec3& d) {
    // slab test in the box frame (yaw about the vertical axis)
    const Mat3 r = Mat3::rotation_y(bx.yaw_rad);
    const Mat3 rt = r.transposed();
    const Vec3 ob = rt * (o - bx.center);
    const Vec3 db = rt * d;

    const double oarr[3] = {ob.x, ob.y, ob.z};
    const double darr[3] = {db.x, db.y, db.z};
    const double harr[3] = {bx.half_extents.x, bx.half_extents.y, bx.half_extents.z};

    double tmin = -std::numeric_limits<double>::infinity();
    double tmax = std::numeric_limits<double>::infinity();
    int face_min = -1, face_max = -1;
    for (int i = 0; i < 3; ++i) {
        if (darr[i] == 0.0) {
            if (std::abs(oarr[i]) > harr[i]) return {};
            continue;
        }
        double t0 = (-harr[i] - oarr[i]) / darr[i];
        double t1 = (harr[i] - oarr[i]) / darr[i];
        int f0 = 2 * i, f1 = 2 * i + 1; // -axis, +axis face
        if (t0 > t1) {
            std::swap(t0, t1);
            std::swap(f0, f1);
        }
        if (t0 > tmin) { tmin = t0; face_min = f0; }
        if (t1 < tmax) { tmax = t1; face_max = f1; }
    }
    if (tmin > tmax) return {};
    if (tmin > kRayEps) return {tmin, face_min, true};
    if (tmax > kRayEps) return {tmax, face_max, true};
    return {};
}

Vec3 pixel_ray_cam(const CameraIntrinsics& cam, int x, int y) {
    // dir.z = 1, so the ray parameter of a hit equals the camera z-depth
    return {(x - cam.cx) / cam.fx, (y - cam.cy) / cam.fy, 1.0};
}

CameraPose pose_of(const SceneSpec& scene, WhichCamera which) {
    return which == WhichCamera::left ? scene.rig.left_pose() : scene.rig.right_pose();
}

// (primitive index << 3) | face, or -1 for a miss; used for crease detection.
using PatchId = std::int64_t;

PatchId patch_of(const RayHit& h) {
    return h.hit() ? (static_cast<PatchId>(h.primitive) << 3) | h.face : -1;
}

template <bool Parallel>
void cast_all(const SceneSpec& scene, const CameraPose& pose,
              std::vector<RayHit>& hits) {
    const int W = scene.rig.width, H = scene.rig.height;
    hits.assign(static_cast<std::size_t>(W) * H, RayHit{});
#pragma omp parallel for schedule(static) if (Parallel)
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            const Vec3 dir = pose.rotation * pixel_ray_cam(scene.rig.intrinsics, x, y);
            hits[static_cast<std::size_t>(y) * W + x] =
                intersect_scene(scene, pose.center, dir);
        }
    }
}

}  // namespace

RayHit intersect_scene(const SceneSpec& scene, const Vec3& origin, const Vec3& dir) {
    RayHit best;
    best.t = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
        const PrimHit h = std::visit(
            [&](const auto& prim) {
                using T = std::decay_t<decltype(prim)>;
                if constexpr (std::is_same_v<T, PlanePrim>) return hit_plane(prim, origin, dir);
                else if constexpr (std::is_same_v<T, SpherePrim>) return hit_sphere(prim, origin, dir);
                else if constexpr (std::is_same_v<T, CylinderPrim>) return hit_cylinder(prim, origin, dir);
                else return hit_box(prim, origin, dir);
            },
            scene.primitives[i]);
        if (h.ok && h.t < best.t) {
            best.t = h.t;
            best.primitive = static_cast<int>(i);
            best.face = h.face;
        }
    }
    return best;
}

DepthGrid render_depth_posed(const SceneSpec& scene, const CameraPose& pose) {
    std::vector<RayHit> hits;
    cast_all<true>(scene, pose, hits);
    DepthGrid depth(scene.rig.width, scene.rig.height, 0.0, false);
    for (std::size_t i = 0; i < hits.size(); ++i) {
        if (!hits[i].hit()) continue;
        depth.values[i] = hits[i].t;
        depth.valid[i] = 1;
    }
    return depth;
}

DepthGrid render_depth(const SceneSpec& scene, WhichCamera which) {
    return render_depth_posed(scene, pose_of(scene, which));
}

DepthGrid render_depth_serial(const SceneSpec& scene, WhichCamera which) {
    std::vector<RayHit> hits;
    cast_all<false>(scene, pose_of(scene, which), hits);
    DepthGrid depth(scene.rig.width, scene.rig.height, 0.0, false);
    for (std::size_t i = 0; i < hits.size(); ++i) {
        if (!hits[i].hit()) continue;
        depth.values[i] = hits[i].t;
        depth.valid[i] = 1;
    }
    return depth;
}

DisparityPair render_disparity_pair(const SceneSpec& scene) {
    DisparityPair pair;
    pair.depth = render_depth(scene, WhichCamera::left);
    CameraIntrinsics cam = scene.rig.intrinsics;
    cam.doffs_px = 0.0; // rectified by construction
    pair.disparity = depth_to_disparity(pair.depth, cam);
    return pair;
}

CurvatureField analytic_curvature_posed(const SceneSpec& scene, const CameraPose& pose) {
    std::vector<RayHit> hits;
    cast_all<true>(scene, pose, hits);

    const int W = scene.rig.width, H = scene.rig.height;
    CurvatureField field(W, H);
#pragma omp parallel for schedule(static)
    for (int y = 1; y < H - 1; ++y) {
        for (int x = 1; x < W - 1; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * W + x;
            const RayHit& h = hits[i];
            if (!h.hit()) continue;
            // curvature is undefined across creases and silhouettes: require
            // all 8 neighbors on the same smooth patch
            const PatchId id = patch_of(h);
            bool interior = true;
            for (int dy = -1; dy <= 1 && interior; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    if (patch_of(hits[i + static_cast<std::size_t>(dy) * W + dx]) != id) {
                        interior = false;
                        break;
                    }
            if (!interior) continue;

            double k = 0.0, k1 = 0.0, k2 = 0.0;
            const ScenePrimitive& prim = scene.primitives[h.primitive];
            if (const auto* sp = std::get_if<SpherePrim>(&prim)) {
                k1 = k2 = 1.0 / sp->radius;
                k = k1 * k2;
            } else if (const auto* cy = std::get_if<CylinderPrim>(&prim)) {
                if (h.face == 0) k1 = 1.0 / cy->radius; // side: one curved direction
            }
            field.K[i] = k;
            field.kappa1[i] = k1;
            field.kappa2[i] = k2;
            field.valid[i] = 1;
        }
    }
    return field;
}

CurvatureField analytic_curvature(const SceneSpec& scene, WhichCamera which) {
    return analytic_curvature_posed(scene, pose_of(scene, which));
}

// ---------------------------------------------------------------------------
// Scene-spec text format and the canonical scenes
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kSceneHeader = "curvelens-scene v1";

// Canonical rig: 35mm / 4729.73px focal length, 200mm baseline, 2000x3000 px.
const char* kSphereScene = R"(curvelens-scene v1
name Sphere
rig 4729.73 4729.73 1500 1000 0.2 0 3000 2000 22.2 14.8
plane 0 0.55 0 0 -1 0
plane 0 0 8 0 0 -1
sphere 0 0.3 3 0.25
)";

const char* kSmallSphereScene = R"(curvelens-scene v1
name SmallSphere
rig 4729.73 4729.73 1500 1000 0.2 0 3000 2000 22.2 14.8
plane 0 0.55 0 0 -1 0
plane 0 0 8 0 0 -1
sphere 0 0.425 3 0.125
)";

const char* kCylinderScene = R"(curvelens-scene v1
name Cylinder
rig 4729.73 4729.73 1500 1000 0.2 0 3000 2000 22.2 14.8
plane 0 0.55 0 0 -1 0
plane 0 0 8 0 0 -1
cylinder 0 0.25 3 0 1 0 0.3 0.15
)";

const char* kBox45Scene = R"(curvelens-scene v1
name Box_Rotation_45
rig 4729.73 4729.73 1500 1000 0.2 0 3000 2000 22.2 14.8
plane 0 0.55 0 0 -1 0
plane 0 0 8 0 0 -1
box 0 0.35 3 0.2 0.2 0.15 45
)";

const char* kBox90Scene = R"(curvelens-scene v1
name Box_Rotation_90
rig 4729.73 4729.73 1500 1000 0.2 0 3000 2000 22.2 14.8
plane 0 0.55 0 0 -1 0
plane 0 0 8 0 0 -1
box 0 0.35 3 0.2 0.2 0.15 90
)";

const char* kMainScene = R"(curvelens-scene v1
name MainScene
rig 4729.73 4729.73 1500 1000 0.2 0 3000 2000 22.2 14.8
plane 0 0.55 0 0 -1 0
plane 0 0 8 0 0 -1
sphere -0.45 0.3 3.2 0.25
sphere 0.4 0.425 2.9 0.125
box 0.05 0.4 3.4 0.15 0.15 0.12 30
cylinder -0.05 0.3 2.6 0 1 0 0.25 0.1
)";

// Slanted plane, used by the smoothing and planarity checks.
const char* kPlaneScene = R"(curvelens-scene v1
name Plane
rig 4729.73 4729.73 1500 1000 0.2 0 3000 2000 22.2 14.8
plane 0 0 3 0.35 0.25 -1
)";

}  // namespace

SceneSpec parse_scene_spec(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kSceneHeader)
        throw IoError("scene spec: missing '" + std::string(kSceneHeader) + "' header");

    SceneSpec scene;
    bool have_rig = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "name") {
            ls >> scene.name;
        } else if (kw == "rig") {
            auto& r = scene.rig;
            auto& c = r.intrinsics;
            if (!(ls >> c.fx >> c.fy >> c.cx >> c.cy >> c.baseline_m >> c.doffs_px >>
                  r.width >> r.height >> r.sensor_w_mm >> r.sensor_h_mm))
                throw IoError("scene spec: malformed rig line: " + line);
            have_rig = true;
        } else if (kw == "plane") {
            PlanePrim p;
            if (!(ls >> p.point.x >> p.point.y >> p.point.z >> p.normal.x >> p.normal.y >> p.normal.z))
                throw IoError("scene spec: malformed plane line: " + line);
            scene.primitives.emplace_back(p);
        } else if (kw == "sphere") {
            SpherePrim p;
            if (!(ls >> p.center.x >> p.center.y >> p.center.z >> p.radius))
                throw IoError("scene spec: malformed sphere line: " + line);
            if (p.radius <= 0) throw IoError("scene spec: sphere radius must be > 0");
            scene.primitives.emplace_back(p);
        } else if (kw == "cylinder") {
            CylinderPrim p;
            if (!(ls >> p.center.x >> p.center.y >> p.center.z >> p.axis.x >> p.axis.y >>
                  p.axis.z >> p.half_length >> p.radius))
                throw IoError("scene spec: malformed cylinder line: " + line);
            if (p.radius <= 0 || p.half_length <= 0)
                throw IoError("scene spec: cylinder radius and half_length must be > 0");
            scene.primitives.emplace_back(p);
        } else if (kw == "box") {
            BoxPrim p;
            double yaw_deg = 0;
            if (!(ls >> p.center.x >> p.center.y >> p.center.z >> p.half_extents.x >>
                  p.half_extents.y >> p.half_extents.z >> yaw_deg))
                throw IoError("scene spec: malformed box line: " + line);
            if (p.half_extents.x <= 0 || p.half_extents.y <= 0 || p.half_extents.z <= 0)
                throw IoError("scene spec: box extents must be > 0");
            p.yaw_rad = yaw_deg * M_PI / 180.0;
            scene.primitives.emplace_back(p);
        } else {
            throw IoError("scene spec: unknown keyword '" + kw + "'");
        }
    }
    if (!have_rig) throw IoError("scene spec: missing rig line");
    if (scene.primitives.empty()) throw IoError("scene spec: no primitives");
    return scene;
}

SceneSpec read_scene_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scene spec: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scene_spec(buf.str());
}

namespace {

std::string num(double v) {
    // shortest text that parses back to exactly v
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string format_scene_spec(const SceneSpec& scene) {
    std::ostringstream out;
    out << kSceneHeader << "\n";
    out << "name " << scene.name << "\n";
    const auto& r = scene.rig;
    const auto& c = r.intrinsics;
    out << "rig " << num(c.fx) << " " << num(c.fy) << " " << num(c.cx) << " " << num(c.cy)
        << " " << num(c.baseline_m) << " " << num(c.doffs_px) << " " << r.width << " "
        << r.height << " " << num(r.sensor_w_mm) << " " << num(r.sensor_h_mm) << "\n";
    for (const auto& prim : scene.primitives) {
        if (const auto* p = std::get_if<PlanePrim>(&prim)) {
            out << "plane " << num(p->point.x) << " " << num(p->point.y) << " "
                << num(p->point.z) << " " << num(p->normal.x) << " " << num(p->normal.y)
                << " " << num(p->normal.z) << "\n";
        } else if (const auto* p = std::get_if<SpherePrim>(&prim)) {
            out << "sphere " << num(p->center.x) << " " << num(p->center.y) << " "
                << num(p->center.z) << " " << num(p->radius) << "\n";
        } else if (const auto* p = std::get_if<CylinderPrim>(&prim)) {
            out << "cylinder " << num(p->center.x) << " " << num(p->center.y) << " "
                << num(p->center.z) << " " << num(p->axis.x) << " " << num(p->axis.y) << " "
                << num(p->axis.z) << " " << num(p->half_length) << " " << num(p->radius)
                << "\n";
        } else if (const auto* p = std::get_if<BoxPrim>(&prim)) {
            out << "box " << num(p->center.x) << " " << num(p->center.y) << " "
                << num(p->center.z) << " " << num(p->half_extents.x) << " "
                << num(p->half_extents.y) << " " << num(p->half_extents.z) << " "
                << num(p->yaw_rad * 180.0 / M_PI) << "\n";
        }
    }
    return out.str();
}

std::vector<std::string> builtin_scene_names() {
    return {"Box_Rotation_45", "Box_Rotation_90", "Cylinder", "Sphere", "MainScene"};
}

SceneSpec builtin_scene(const std::string& name) {
    if (name == "Sphere") return parse_scene_spec(kSphereScene);
    if (name == "SmallSphere") return parse_scene_spec(kSmallSphereScene);
    if (name == "Cylinder") return parse_scene_spec(kCylinderScene);
    if (name == "Box_Rotation_45") return parse_scene_spec(kBox45Scene);
    if (name == "Box_Rotation_90") return parse_scene_spec(kBox90Scene);
    if (name == "MainScene") return parse_scene_spec(kMainScene);
    if (name == "Plane") return parse_scene_spec(kPlaneScene);
    throw std::invalid_argument("unknown scene: " + name);
}

std::vector<SceneSpec> builtin_scenes() {
    std::vector<SceneSpec> scenes;
    for (const std::string& name : builtin_scene_names())
        scenes.push_back(builtin_scene(name));
    return scenes;
}

}  // namespace curvelens
