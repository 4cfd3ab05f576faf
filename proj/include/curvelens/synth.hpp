#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "curvelens/curvature.hpp"
#include "curvelens/geometry.hpp"
#include "curvelens/grids.hpp"

namespace curvelens {

// World-from-camera pose: p_world = rotation * p_camera + center.
struct CameraPose {
    Mat3 rotation;
    Vec3 center;
};

struct StereoRig {
    CameraIntrinsics intrinsics;
    int width = 0;   // image size, px
    int height = 0;
    double sensor_w_mm = 0.0; // metadata
    double sensor_h_mm = 0.0;

    CameraPose left_pose() const { return {Mat3::identity(), {0, 0, 0}}; }
    // Pure X translation by the baseline: rectified by construction.
    CameraPose right_pose() const { return {Mat3::identity(), {intrinsics.baseline_m, 0, 0}}; }
};

struct PlanePrim {
    Vec3 point;
    Vec3 normal; // need not be unit length on input
};

struct SpherePrim {
    Vec3 center;
    double radius = 0.0;
};

struct CylinderPrim {
    Vec3 center;      // midpoint of the axis segment
    Vec3 axis;        // direction, need not be unit
    double half_length = 0.0;
    double radius = 0.0;
    // Faces: 0 = side, 1 = cap at -axis end, 2 = cap at +axis end.
};

struct BoxPrim {
    Vec3 center;
    Vec3 half_extents; // sx, sy, sz
    double yaw_rad = 0.0; // rotation about the vertical (Y) axis
    // Faces 0..5: -x, +x, -y, +y, -z, +z in the box frame.
};

using ScenePrimitive = std::variant<PlanePrim, SpherePrim, CylinderPrim, BoxPrim>;

struct SceneSpec {
    std::string name;
    StereoRig rig;
    std::vector<ScenePrimitive> primitives; // nearest hit wins
};

enum class WhichCamera { left, right };

struct RayHit {
    double t = 0.0;      // camera z-depth (ray parameter with dir.z = 1 in camera frame)
    int primitive = -1;
    int face = 0;
    bool hit() const { return primitive >= 0; }
};

// Nearest positive intersection of a world-space ray with the scene.
RayHit intersect_scene(const SceneSpec& scene, const Vec3& origin, const Vec3& dir);

// Casts a ray through every pixel center and stores the camera-frame Z of the
// nearest hit (z-depth, not ray length). Pixels with no hit are invalid.
DepthGrid render_depth(const SceneSpec& scene, WhichCamera which);
DepthGrid render_depth_posed(const SceneSpec& scene, const CameraPose& pose);
DepthGrid render_depth_serial(const SceneSpec& scene, WhichCamera which);

struct DisparityPair {
    DisparityGrid disparity; // left-referenced
    DepthGrid depth;         // left-camera GT
};

// Disparity from GT depth via d = fx * baseline / Z (doffs = 0 for the rig).
DisparityPair render_disparity_pair(const SceneSpec& scene);

// Per-pixel true curvature of the primitive hit: 0 on planes, box faces and
// cylinder sides/caps, 1/r^2 on spheres. Silhouette and crease pixels (any
// 8-neighbor hitting a different smooth patch) are invalid, as is the border.
CurvatureField analytic_curvature(const SceneSpec& scene, WhichCamera which);
CurvatureField analytic_curvature_posed(const SceneSpec& scene, const CameraPose& pose);

// The five canonical scenes (Box_Rotation_45, Box_Rotation_90, Cylinder,
// Sphere, MainScene) on the 2000x3000 rig, plus named extras such as "Plane".
std::vector<SceneSpec> builtin_scenes();
SceneSpec builtin_scene(const std::string& name);
std::vector<std::string> builtin_scene_names(); // the five canonical ones

// Scene-spec text format, versioned header "curvelens-scene v1".
SceneSpec parse_scene_spec(const std::string& text);
SceneSpec read_scene_spec(const std::filesystem::path& path);
std::string format_scene_spec(const SceneSpec& scene);

}  // namespace curvelens
