#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "moebius/geometry.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace moebius;
using geometry::MoebiusShape;
using geometry::ParamPoint;
using geometry::Vec3;

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kFourPi = 4.0 * M_PI;

Vec3 embed_vec(const MoebiusShape& shape, double u, double v) {
    return geometry::embed(shape, {u, v}).vec();
}

}  // namespace

TEST_CASE("embed matches the parametrization at pinned points") {
    const MoebiusShape shape;  // R = 1, half_width = 1/3

    const auto origin = geometry::embed(shape, {0.0, 0.0});
    CHECK(origin.x == 0.0);
    CHECK(origin.y == doctest::Approx(1.0));
    CHECK(origin.z == 0.0);

    const auto edge = geometry::embed(shape, {0.0, 1.0 / 3.0});
    CHECK(edge.x == 0.0);
    CHECK(edge.y == doctest::Approx(1.0));
    CHECK(edge.z == doctest::Approx(1.0 / 3.0));

    // Same (u mod 2*pi) after a full turn, flipped transverse position.
    const auto flipped = geometry::embed(shape, {kTwoPi, 1.0 / 3.0});
    CHECK(std::abs(flipped.x) < 1e-15);
    CHECK(flipped.y == doctest::Approx(1.0));
    CHECK(flipped.z == doctest::Approx(-1.0 / 3.0));
}

TEST_CASE("embed rejects out-of-strip and invalid shapes") {
    const MoebiusShape shape;
    CHECK_THROWS_AS(geometry::embed(shape, {0.0, 0.5}), std::domain_error);
    CHECK_THROWS_AS(geometry::embed(MoebiusShape{0.0, 0.1}, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(geometry::embed(MoebiusShape{1.0, 1.5}, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(geometry::embed(MoebiusShape{1.0, -0.1}, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("tangents at pinned points") {
    const MoebiusShape shape;

    const auto frame0 = geometry::tangents(shape, {0.0, 0.0});
    CHECK((frame0.e_u - Vec3(1, 0, 0)).norm() < 1e-15);
    CHECK((frame0.e_v - Vec3(0, 0, 1)).norm() < 1e-15);
    CHECK((frame0.normal - Vec3(0, -1, 0)).norm() < 1e-15);

    // On the centerline the u-tangent is the circle tangent.
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> angle(-kFourPi, kFourPi);
    for (int i = 0; i < 50; ++i) {
        const double u = angle(rng);
        const auto frame = geometry::tangents(shape, {u, 0.0});
        CHECK((frame.e_u - Vec3(std::cos(u), -std::sin(u), 0.0)).norm() < 1e-14);
    }
}

TEST_CASE("tangent frame invariants hold at random points") {
    const MoebiusShape shape{2.0, 0.4};
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> angle(-kFourPi, kFourPi);
    std::uniform_real_distribution<double> trans(-0.39, 0.39);

    for (int i = 0; i < 200; ++i) {
        const ParamPoint p{angle(rng), trans(rng)};
        const auto frame = geometry::tangents(shape, p);
        CHECK(std::abs(frame.normal.norm() - 1.0) < 1e-12);
        const double scale = frame.e_u.norm() + frame.e_v.norm();
        CHECK(std::abs(frame.normal.dot(frame.e_u)) < 1e-12 * scale);
        CHECK(std::abs(frame.normal.dot(frame.e_v)) < 1e-12 * scale);
        CHECK(frame.area_element > 0.0);
    }
}

TEST_CASE("tangents agree with central differences of embed") {
    const MoebiusShape shape;
    const double step = 1e-6;
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> angle(0.0, kFourPi);
    std::uniform_real_distribution<double> trans(-0.3, 0.3);

    for (int i = 0; i < 100; ++i) {
        const double u = angle(rng), v = trans(rng);
        const auto frame = geometry::tangents(shape, {u, v});
        const Vec3 fd_u = (embed_vec(shape, u + step, v) - embed_vec(shape, u - step, v)) / (2 * step);
        const Vec3 fd_v = (embed_vec(shape, u, v + step) - embed_vec(shape, u, v - step)) / (2 * step);
        CHECK((fd_u - frame.e_u).norm() < 1e-8 * std::max(1.0, frame.e_u.norm()));
        CHECK((fd_v - frame.e_v).norm() < 1e-8 * std::max(1.0, frame.e_v.norm()));
    }
}

TEST_CASE("centerline normal at pinned angles") {
    const MoebiusShape shape;
    CHECK((geometry::centerline_normal(shape, 0.0) - Vec3(0, -1, 0)).norm() < 1e-12);
    CHECK((geometry::centerline_normal(shape, kTwoPi) - Vec3(0, 1, 0)).norm() < 1e-12);
    CHECK((geometry::centerline_normal(shape, kFourPi) - Vec3(0, -1, 0)).norm() < 1e-12);
    CHECK((geometry::centerline_normal(shape, M_PI) - Vec3(0, 0, 1)).norm() < 1e-12);
}

TEST_CASE("normal flips after one turn and restores after two") {
    const MoebiusShape shape;
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> angle(-10.0 * M_PI, 10.0 * M_PI);
    for (int i = 0; i < 200; ++i) {
        const double u = angle(rng);
        const Vec3 n = geometry::centerline_normal(shape, u);
        CHECK((geometry::centerline_normal(shape, u + kTwoPi) + n).norm() < 1e-12);
        CHECK((geometry::centerline_normal(shape, u + kFourPi) - n).norm() < 1e-12);
    }
}

TEST_CASE("surface normal reduces to the centerline normal at v=0") {
    const MoebiusShape shape{1.7, 0.3};
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> angle(0.0, kFourPi);
    for (int i = 0; i < 100; ++i) {
        const double u = angle(rng);
        const auto frame = geometry::tangents(shape, {u, 0.0});
        CHECK((frame.normal - geometry::centerline_normal(shape, u)).norm() < 1e-12);
    }
}

TEST_CASE("centerline is a circle of radius R about the z-axis") {
    for (double R : {1.0, 2.5}) {
        const MoebiusShape shape{R, R / 4.0};
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> angle(0.0, kFourPi);
        for (int i = 0; i < 50; ++i) {
            const auto point = geometry::embed(shape, {angle(rng), 0.0});
            CHECK(std::abs(std::hypot(point.x, point.y) - R) < 1e-12 * R);
            CHECK(point.z == 0.0);
        }
    }
}

TEST_CASE("holonomy report stays at round-off for any shape and sampling") {
    for (const auto& [R, samples] : {std::pair{1.0, 100}, {2.0, 7}, {1.0, 2}}) {
        const auto report = geometry::holonomy_report(MoebiusShape{R, R / 3.0}, samples);
        CHECK(report.flip_residual < 1e-12);
        CHECK(report.period_residual < 1e-12);
        CHECK(report.samples == samples);
    }
    CHECK_THROWS_AS(geometry::holonomy_report(MoebiusShape{}, 1), std::invalid_argument);
}

TEST_CASE("mesh grid layout and contents") {
    const MoebiusShape shape;

    const auto small = geometry::emit_mesh(shape, 3, 2);
    CHECK(small.vertices.size() == 6);
    CHECK(small.at(0, 0).u == 0.0);
    CHECK(small.at(0, 0).v == doctest::Approx(-1.0 / 3.0));
    const auto corner = geometry::embed(shape, {0.0, -1.0 / 3.0});
    CHECK(small.at(0, 0).position.x == corner.x);
    CHECK(small.at(0, 0).position.y == corner.y);
    CHECK(small.at(0, 0).position.z == corner.z);

    const auto grid = geometry::emit_mesh(shape, 100, 10);
    CHECK(grid.vertices.size() == 1000);
    for (const auto& vertex : grid.vertices) {
        CHECK(std::isfinite(vertex.position.x));
        CHECK(std::isfinite(vertex.position.y));
        CHECK(std::isfinite(vertex.position.z));
        CHECK(std::abs(vertex.normal.norm() - 1.0) < 1e-12);
    }

    // u-major ordering: u varies slowest.
    const auto mesh4 = geometry::emit_mesh(shape, 4, 2);
    CHECK(mesh4.at(2, 0).u == doctest::Approx(M_PI));
    // The meridian point under that grid column.
    const auto mid = geometry::embed(shape, {M_PI, 0.0});
    CHECK(std::abs(mid.x) < 1e-15);
    CHECK(mid.y == doctest::Approx(-1.0));
    CHECK(std::abs(mid.z) < 1e-16);
}

TEST_CASE("mesh size validation") {
    const MoebiusShape shape;
    CHECK_THROWS_AS(geometry::emit_mesh(shape, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(geometry::emit_mesh(shape, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(geometry::emit_mesh(shape, 1000, 1000, 100000), std::length_error);
}
