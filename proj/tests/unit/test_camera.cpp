// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "voxtherm/camera.hpp"
#include "voxtherm/errors.hpp"

using namespace voxtherm;

namespace {

Mat3 rotation_z(double angle) {
    Mat3 r;
    r(0, 0) = std::cos(angle);
    r(0, 1) = -std::sin(angle);
    r(1, 0) = std::sin(angle);
    r(1, 1) = std::cos(angle);
    r(2, 2) = 1.0;
    return r;
}

Mat3 rotation_x(double angle) {
    Mat3 r;
    r(1, 1) = std::cos(angle);
    r(1, 2) = -std::sin(angle);
    r(2, 1) = std::sin(angle);
    r(2, 2) = std::cos(angle);
    r(0, 0) = 1.0;
    return r;
}

CameraIntrinsics test_intrinsics() {
    CameraIntrinsics intr;
    intr.fx = intr.fy = 10.0;
    intr.cx = intr.cy = 4.5;
    intr.width = intr.height = 9;
    return intr;
}

}  // namespace

TEST_SUITE("camera") {

TEST_CASE("principal-point pixel looks along the optical axis") {
    Ray ray = generate_ray(test_intrinsics(), CameraPose{}, 4, 4);
    CHECK(ray.direction.x == doctest::Approx(0.0));
    CHECK(ray.direction.y == doctest::Approx(0.0));
    CHECK(ray.direction.z == doctest::Approx(1.0));
}

TEST_CASE("pixel one focal length right of center gives a 45 degree ray") {
    CameraIntrinsics intr;
    intr.fx = intr.fy = 10.0;
    intr.cx = 0.5;
    intr.cy = 0.5;
    intr.width = intr.height = 32;
    Ray ray = generate_ray(intr, CameraPose{}, 10, 0);  // u + 0.5 - cx = fx
    Vec3 expected = Vec3{1, 0, 1}.normalized();
    CHECK(ray.direction.x == doctest::Approx(expected.x));
    CHECK(ray.direction.y == doctest::Approx(expected.y));
    CHECK(ray.direction.z == doctest::Approx(expected.z));
}

TEST_CASE("rotated pose rotates the identity-pose direction") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    std::uniform_int_distribution<int> pix(0, 8);
    for (int trial = 0; trial < 50; ++trial) {
        Mat3 rot = rotation_z(angle(rng)) * rotation_x(angle(rng));
        CameraPose pose{rot, {1.0, -2.0, 0.5}};
        pose.validate();
        int u = pix(rng), v = pix(rng);
        Ray base = generate_ray(test_intrinsics(), CameraPose{}, u, v);
        Ray rotated = generate_ray(test_intrinsics(), pose, u, v);
        Vec3 expected = rot * base.direction;
        CHECK(std::abs(rotated.direction.x - expected.x) <= 1e-12);
        CHECK(std::abs(rotated.direction.y - expected.y) <= 1e-12);
        CHECK(std::abs(rotated.direction.z - expected.z) <= 1e-12);
        CHECK(rotated.origin.x == doctest::Approx(1.0));
    }
}

TEST_CASE("in-image pixels have positive camera-frame depth") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    CameraIntrinsics intr = test_intrinsics();
    for (int trial = 0; trial < 20; ++trial) {
        Mat3 rot = rotation_x(angle(rng)) * rotation_z(angle(rng));
        CameraPose pose{rot, {}};
        for (int v = 0; v < intr.height; v += 4)
            for (int u = 0; u < intr.width; u += 4) {
                Ray ray = generate_ray(intr, pose, u, v);
                Vec3 cam = rot.transposed() * ray.direction;
                CHECK(cam.z > 0.0);
            }
    }
}

TEST_CASE("ray direction stays unit length") {
    CameraIntrinsics intr = test_intrinsics();
    for (int v = 0; v < intr.height; ++v)
        for (int u = 0; u < intr.width; ++u)
            CHECK(generate_ray(intr, CameraPose{}, u, v).direction.norm() ==
                  doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("axis-aligned slab intersection") {
    GridBounds box{{0, 0, 1}, {1, 1, 2}};
    Ray ray{{0.5, 0.5, 0.0}, {0, 0, 1}};
    auto hit = intersect_bounds(ray, box);
    REQUIRE(hit.has_value());
    CHECK(hit->first == doctest::Approx(1.0));
    CHECK(hit->second == doctest::Approx(2.0));
}

TEST_CASE("ray pointing away misses") {
    GridBounds box{{0, 0, 1}, {1, 1, 2}};
    Ray ray{{0.5, 0.5, 0.0}, {0, 0, -1}};
    CHECK_FALSE(intersect_bounds(ray, box).has_value());
}

TEST_CASE("interval endpoints agree with a dense stepping oracle") {
    GridBounds box{{-0.7, -0.4, -0.9}, {0.8, 0.6, 0.5}};
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pos(-2.0, 2.0);
    std::uniform_real_distribution<double> dir(-1.0, 1.0);
    int tested = 0;
    for (int trial = 0; trial < 300 && tested < 60; ++trial) {
        Ray ray{{pos(rng), pos(rng), pos(rng)}, {}};
        Vec3 d{dir(rng), dir(rng), dir(rng)};
        if (d.norm() < 1e-3) continue;
        ray.direction = d.normalized();
        if (box.contains(ray.origin)) continue;

        constexpr double kStep = 1e-3;
        double first = -1.0, last = -1.0;
        for (double t = 0.0; t < 8.0; t += kStep) {
            if (box.contains(ray.origin + ray.direction * t)) {
                if (first < 0.0) first = t;
                last = t;
            }
        }
        auto hit = intersect_bounds(ray, box);
        if (first < 0.0) {
            // The oracle can narrowly miss corner grazes; only assert when the
            // analytic interval is wide enough for the stepping to see it.
            if (hit && hit->second - hit->first > 5.0 * kStep) CHECK(false);
            continue;
        }
        REQUIRE(hit.has_value());
        CHECK(std::abs(hit->first - first) <= 2e-3);
        CHECK(std::abs(hit->second - last) <= 2e-3);
        ++tested;
    }
    CHECK(tested >= 40);
}

TEST_CASE("points strictly inside the interval are inside the bounds") {
    GridBounds box{{-1, -1, -1}, {1, 1, 1}};
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> pos(-3.0, 3.0);
    std::uniform_real_distribution<double> dir(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        Vec3 d{dir(rng), dir(rng), dir(rng)};
        if (d.norm() < 1e-3) continue;
        Ray ray{{pos(rng), pos(rng), pos(rng)}, d.normalized()};
        auto hit = intersect_bounds(ray, box);
        if (!hit) continue;
        for (int s = 1; s < 10; ++s) {
            double t = hit->first + (hit->second - hit->first) * s / 10.0;
            Vec3 p = ray.origin + ray.direction * t;
            CHECK(p.x >= box.min_corner.x - 1e-9);
            CHECK(p.x <= box.max_corner.x + 1e-9);
            CHECK(p.y >= box.min_corner.y - 1e-9);
            CHECK(p.y <= box.max_corner.y + 1e-9);
            CHECK(p.z >= box.min_corner.z - 1e-9);
            CHECK(p.z <= box.max_corner.z + 1e-9);
        }
    }
}

TEST_CASE("pose validation rejects non-rotations") {
    CameraPose pose;
    pose.rotation(0, 0) = 2.0;
    CHECK_THROWS_AS(pose.validate(), DataError);

    CameraPose mirrored;  // determinant -1
    mirrored.rotation(0, 0) = -1.0;
    CHECK_THROWS_AS(mirrored.validate(), DataError);
}

TEST_CASE("intrinsics validation") {
    CameraIntrinsics intr = test_intrinsics();
    intr.fx = -1.0;
    CHECK_THROWS_AS(intr.validate(), DataError);
    intr = test_intrinsics();
    intr.cx = 20.0;
    CHECK_THROWS_AS(intr.validate(), DataError);
}

}  // TEST_SUITE
