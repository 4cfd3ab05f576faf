#include <doctest.h>

#include <cmath>

#include "curvelens/depth_io.hpp"
#include "curvelens/synth.hpp"
#include "test_util.hpp"

using namespace curvelens;

namespace {

// Same geometry on a cheaper grid; K is resolution independent.
SceneSpec shrink(SceneSpec scene, int factor) {
    auto& r = scene.rig;
    r.intrinsics.fx /= factor;
    r.intrinsics.fy /= factor;
    r.intrinsics.cx /= factor;
    r.intrinsics.cy /= factor;
    r.width /= factor;
    r.height /= factor;
    return scene;
}

SceneSpec small_scene(const std::string& name, int factor = 8) {
    return shrink(builtin_scene(name), factor);
}

}  // namespace

TEST_CASE("fronto-parallel plane renders constant z-depth exactly") {
    SceneSpec scene = small_scene("Sphere");
    scene.primitives = {PlanePrim{{0, 0, 2.0}, {0, 0, -1}}};
    const DepthGrid depth = render_depth(scene, WhichCamera::left);
    for (std::size_t i = 0; i < depth.size(); ++i) {
        REQUIRE(depth.valid[i]);
        CHECK(depth.values[i] == 2.0); // ray length would vary across pixels
    }
}

TEST_CASE("on-axis sphere: center pixel depth is Z - r") {
    SceneSpec scene = small_scene("Sphere");
    scene.rig.intrinsics.cx = scene.rig.width / 2;
    scene.rig.intrinsics.cy = scene.rig.height / 2;
    scene.primitives = {SpherePrim{{0, 0, 3.0}, 0.25}};
    const DepthGrid depth = render_depth(scene, WhichCamera::left);
    const int cx = static_cast<int>(scene.rig.intrinsics.cx);
    const int cy = static_cast<int>(scene.rig.intrinsics.cy);
    CHECK(depth.at(cx, cy) == doctest::Approx(2.75).epsilon(1e-12));
}

TEST_CASE("disparity pair inverts the depth formula") {
    SceneSpec scene = small_scene("Sphere");
    scene.primitives = {PlanePrim{{0, 0, 0.945946}, {0, 0, -1}}};
    const DisparityPair pair = render_disparity_pair(scene);
    const double fx = scene.rig.intrinsics.fx;
    // Z = fx*b/d  =>  d = fx*0.2/0.945946
    const double expected = fx * 0.2 / 0.945946;
    CHECK(pair.disparity.at(5, 5) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("far background has near-zero disparity") {
    SceneSpec scene = builtin_scene("Sphere"); // full-res intrinsics
    scene.rig.width = 16;                      // only a few rays needed
    scene.rig.height = 16;
    scene.rig.intrinsics.cx = 8;
    scene.rig.intrinsics.cy = 8;
    scene.primitives = {PlanePrim{{0, 0, 100.0}, {0, 0, -1}}};
    const DisparityPair pair = render_disparity_pair(scene);
    for (std::size_t i = 0; i < pair.disparity.size(); ++i)
        CHECK(pair.disparity.values[i] < 10.0);
}

TEST_CASE("disparity -> depth round trip matches the rendered depth") {
    const SceneSpec scene = small_scene("MainScene");
    const DisparityPair pair = render_disparity_pair(scene);
    CameraIntrinsics cam = scene.rig.intrinsics;
    cam.doffs_px = 0.0;
    const DepthGrid back = disparity_to_depth(pair.disparity, cam);
    const DepthGrid direct = render_depth(scene, WhichCamera::left);
    double max_err = 0.0;
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back.valid[i] == direct.valid[i]);
        if (back.valid[i])
            max_err = std::max(max_err, std::abs(back.values[i] - direct.values[i]));
    }
    CHECK(max_err < 1e-9);
}

TEST_CASE("left/right pair satisfies epipolar consistency") {
    const SceneSpec scene = small_scene("MainScene");
    const DisparityPair pair = render_disparity_pair(scene);
    const DepthGrid right = render_depth(scene, WhichCamera::right);

    int matched = 0;
    for (int y = 2; y < scene.rig.height - 2; y += 7)
        for (int x = 2; x < scene.rig.width - 2; x += 7) {
            if (!pair.disparity.is_valid(x, y)) continue;
            const double d = pair.disparity.at(x, y);
            const int xr = static_cast<int>(std::lround(x - d));
            if (xr < 1 || xr >= scene.rig.width - 1) continue;
            if (!right.is_valid(xr, y)) continue;
            // pure-X translation keeps Z: the corresponding right pixel sees
            // either the same point or an occluder in front of it, never
            // anything behind, up to the depth change across one pixel
            double local = 0.0;
            for (int dx : {-1, 0, 1})
                if (right.is_valid(xr + dx, y))
                    local = std::max(local, std::abs(right.at(xr + dx, y) - right.at(xr, y)));
            const double expected = pair.depth.at(x, y);
            CHECK(right.at(xr, y) <= expected + local + 1e-3);
            if (std::abs(right.at(xr, y) - expected) <= local + 1e-3) ++matched;
        }
    CHECK(matched > 200);
}

TEST_CASE("mirror-symmetric scene yields mirrored left/right depth") {
    // sphere centered on the rig midplane x = baseline/2, cx = W/2 so the
    // pixel mapping x' = W - x is exact
    SceneSpec scene = small_scene("Sphere");
    const double b = scene.rig.intrinsics.baseline_m;
    scene.rig.intrinsics.cx = scene.rig.width / 2.0;
    scene.primitives = {PlanePrim{{0, 0.55, 0}, {0, -1, 0}},
                        PlanePrim{{0, 0, 8}, {0, 0, -1}},
                        SpherePrim{{b / 2, 0.3, 3}, 0.25}};
    const DepthGrid left = render_depth(scene, WhichCamera::left);
    const DepthGrid right = render_depth(scene, WhichCamera::right);
    const int W = scene.rig.width;
    for (int y = 0; y < scene.rig.height; ++y)
        for (int x = 1; x < W; ++x) {
            const int xm = W - x;
            if (xm >= W) continue;
            CHECK(left.is_valid(x, y) == right.is_valid(xm, y));
            if (left.is_valid(x, y)) CHECK(left.at(x, y) == right.at(xm, y));
        }
}

TEST_CASE("analytic curvature labels primitives correctly") {
    const SceneSpec scene = small_scene("MainScene");
    const CurvatureField oracle = analytic_curvature(scene, WhichCamera::left);
    int sphere_big = 0, sphere_small = 0, flat = 0;
    for (std::size_t i = 0; i < oracle.valid.size(); ++i) {
        if (!oracle.valid[i]) continue;
        if (oracle.K[i] == 16.0) ++sphere_big;
        else if (oracle.K[i] == 64.0) ++sphere_small;
        else if (oracle.K[i] == 0.0) ++flat;
        else FAIL("unexpected oracle K value ", oracle.K[i]);
    }
    CHECK(sphere_big > 100);  // r = 0.25 sphere, K = 1/r^2 = 16
    CHECK(sphere_small > 50); // r = 0.125 sphere, K = 64
    CHECK(flat > 10000);      // planes, box faces, cylinder
}

TEST_CASE("analytic curvature invalidates creases and silhouettes") {
    SceneSpec scene = small_scene("Sphere");
    const CurvatureField oracle = analytic_curvature(scene, WhichCamera::left);
    const DepthGrid depth = render_depth(scene, WhichCamera::left);
    // find a sphere silhouette pixel: sphere next to non-sphere
    int silhouettes = 0;
    for (int y = 1; y < scene.rig.height - 1; ++y)
        for (int x = 1; x < scene.rig.width - 1; ++x) {
            const bool on = oracle.is_valid(x, y) && oracle.K[oracle.idx(x, y)] == 16.0;
            const bool next_off = oracle.is_valid(x + 1, y) && oracle.K[oracle.idx(x + 1, y)] == 0.0;
            if (on && next_off) ++silhouettes;
        }
    CHECK(silhouettes == 0); // a band of invalid pixels separates patches
    (void)depth;
}

TEST_CASE("builtin scenes match the published rig") {
    const auto scenes = builtin_scenes();
    REQUIRE(scenes.size() == 5);
    const auto names = builtin_scene_names();
    for (std::size_t i = 0; i < scenes.size(); ++i) CHECK(scenes[i].name == names[i]);

    for (const auto& scene : scenes) {
        const auto& r = scene.rig;
        CHECK(r.width == 3000);
        CHECK(r.height == 2000);
        CHECK(r.intrinsics.fx == doctest::Approx(4729.73));
        CHECK(r.intrinsics.baseline_m == doctest::Approx(0.2));
        // pixel size 0.0074 mm: focal length in mm comes out at 35
        CHECK(r.intrinsics.fx * 0.0074 == doctest::Approx(35.0).epsilon(1e-4));
        CHECK(r.sensor_w_mm == doctest::Approx(22.2));
        CHECK(r.sensor_h_mm == doctest::Approx(14.8));
    }
}

TEST_CASE("every builtin scene renders mostly valid pixels") {
    for (const auto& name : builtin_scene_names()) {
        const SceneSpec scene = small_scene(name);
        const DepthGrid depth = render_depth(scene, WhichCamera::left);
        std::size_t ok = 0;
        for (auto v : depth.valid) ok += v;
        CHECK(static_cast<double>(ok) / depth.size() >= 0.95);
    }
}

TEST_CASE("scene spec text round trips") {
    const SceneSpec scene = builtin_scene("MainScene");
    const std::string text = format_scene_spec(scene);
    const SceneSpec back = parse_scene_spec(text);
    CHECK(back.name == scene.name);
    CHECK(back.primitives.size() == scene.primitives.size());
    CHECK(format_scene_spec(back) == text);
}

TEST_CASE("scene spec parser rejects bad input") {
    CHECK_THROWS_AS(parse_scene_spec("not-a-scene\n"), IoError);
    CHECK_THROWS_AS(parse_scene_spec("curvelens-scene v1\nname X\n"), IoError); // no rig
    CHECK_THROWS_AS(
        parse_scene_spec("curvelens-scene v1\nrig 1 1 0 0 0.1 0 4 4 1 1\nwedge 0 0 0\n"),
        IoError);
    CHECK_THROWS_AS(
        parse_scene_spec("curvelens-scene v1\nrig 1 1 0 0 0.1 0 4 4 1 1\nsphere 0 0 3 -1\n"),
        IoError);
    CHECK_THROWS(builtin_scene("NoSuchScene"));
}

TEST_CASE("committed scene files parse to the builtin scenes") {
    const std::filesystem::path dir = std::filesystem::path(CURVELENS_SOURCE_DIR) / "data" / "scenes";
    for (const auto& name : builtin_scene_names()) {
        const SceneSpec from_file = read_scene_spec(dir / (name + ".scene"));
        CHECK(format_scene_spec(from_file) == format_scene_spec(builtin_scene(name)));
    }
}
