#include "moebius/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace moebius::geometry {

namespace {

constexpr double kDegenerateFrameTol = 1e-14;

void check_param(const MoebiusShape& shape, const ParamPoint& p) {
    if (std::abs(p.v) > shape.half_width) {
        throw std::domain_error("moebius: |v| = " + std::to_string(std::abs(p.v)) +
                                " exceeds half_width = " + std::to_string(shape.half_width));
    }
}

}  // namespace

void check_shape(const MoebiusShape& shape) {
    if (!(shape.centerline_radius > 0.0)) {
        throw std::invalid_argument("moebius: centerline_radius must be > 0");
    }
    if (!(shape.half_width > 0.0) || !(shape.half_width < shape.centerline_radius)) {
        throw std::invalid_argument("moebius: half_width must satisfy 0 < half_width < centerline_radius");
    }
}

EmbeddedPoint embed(const MoebiusShape& shape, const ParamPoint& p) {
    check_shape(shape);
    check_param(shape, p);

    const double R = shape.centerline_radius;
    const double su = std::sin(p.u), cu = std::cos(p.u);
    const double sh = std::sin(0.5 * p.u), ch = std::cos(0.5 * p.u);

    return {R * su + p.v * sh * su,
            R * cu + p.v * sh * cu,
            p.v * ch};
}

TangentFrame tangents(const MoebiusShape& shape, const ParamPoint& p) {
    check_shape(shape);
    check_param(shape, p);

    const double R = shape.centerline_radius;
    const double su = std::sin(p.u), cu = std::cos(p.u);
    const double sh = std::sin(0.5 * p.u), ch = std::cos(0.5 * p.u);

    TangentFrame frame;
    frame.e_u = {R * cu + p.v * (0.5 * ch * su + sh * cu),
                 -R * su + p.v * (0.5 * ch * cu - sh * su),
                 -0.5 * p.v * sh};
    frame.e_v = {sh * su, sh * cu, ch};

    const Vec3 cross = frame.e_u.cross(frame.e_v);
    frame.area_element = cross.norm();
    if (frame.area_element < kDegenerateFrameTol) {
        throw std::runtime_error("moebius: degenerate tangent frame, |e_u x e_v| < 1e-14");
    }
    frame.normal = cross / frame.area_element;
    return frame;
}

Vec3 centerline_normal(const MoebiusShape& shape, double u) {
    check_shape(shape);
    const double sh = std::sin(0.5 * u), ch = std::cos(0.5 * u);
    return {-std::sin(u) * ch, -std::cos(u) * ch, sh};
}

HolonomyReport holonomy_report(const MoebiusShape& shape, int samples) {
    check_shape(shape);
    if (samples < 2) {
        throw std::invalid_argument("moebius: holonomy_report needs samples >= 2");
    }

    constexpr double two_pi = 2.0 * M_PI;
    HolonomyReport report;
    report.samples = samples;
    for (int i = 0; i < samples; ++i) {
        const double u = 2.0 * two_pi * i / samples;
        const Vec3 n0 = centerline_normal(shape, u);
        const Vec3 n1 = centerline_normal(shape, u + two_pi);
        const Vec3 n2 = centerline_normal(shape, u + 2.0 * two_pi);
        report.flip_residual = std::max(report.flip_residual, (n1 + n0).norm());
        report.period_residual = std::max(report.period_residual, (n2 - n0).norm());
    }
    return report;
}

SurfaceMesh emit_mesh(const MoebiusShape& shape, int nu, int nv, std::size_t max_vertices) {
    check_shape(shape);
    if (nu < 3 || nv < 2) {
        throw std::invalid_argument("moebius: emit_mesh needs nu >= 3 and nv >= 2");
    }
    const std::size_t count = static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv);
    if (count > max_vertices) {
        throw std::length_error("moebius: mesh of " + std::to_string(count) +
                                " vertices exceeds cap of " + std::to_string(max_vertices));
    }

    SurfaceMesh mesh;
    mesh.nu = nu;
    mesh.nv = nv;
    mesh.vertices.reserve(count);
    for (int iu = 0; iu < nu; ++iu) {
        const double u = 2.0 * M_PI * iu / nu;
        for (int iv = 0; iv < nv; ++iv) {
            const double v = -shape.half_width + 2.0 * shape.half_width * iv / (nv - 1);
            const ParamPoint p{u, v};
            MeshVertex vertex;
            vertex.u = u;
            vertex.v = v;
            vertex.position = embed(shape, p);
            vertex.normal = tangents(shape, p).normal;
            mesh.vertices.push_back(vertex);
        }
    }
    return mesh;
}

}  // namespace moebius::geometry
