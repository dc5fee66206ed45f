#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace moebius::geometry {

using Vec3 = Eigen::Vector3d;

/// Geometric parameters of the strip. The centerline (meridian) is the
/// circle of radius `centerline_radius` in the xy-plane; the transverse
/// coordinate v ranges over [-half_width, +half_width].
struct MoebiusShape {
    double centerline_radius = 1.0;
    double half_width = 1.0 / 3.0;
};

/// Surface coordinates. u is 4*pi-periodic (the embedding itself repeats
/// after 2*pi, the adapted frame only after 4*pi); no wrapping is applied.
struct ParamPoint {
    double u = 0.0;
    double v = 0.0;
};

struct EmbeddedPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 vec() const { return {x, y, z}; }
};

/// Tangent frame at a surface point: coordinate tangents, unit normal
/// (e_u x e_v normalized) and the area element |e_u x e_v|.
struct TangentFrame {
    Vec3 e_u;
    Vec3 e_v;
    Vec3 normal;
    double area_element = 0.0;
};

struct HolonomyReport {
    double flip_residual = 0.0;    // max_u |n(u + 2*pi) + n(u)|
    double period_residual = 0.0;  // max_u |n(u + 4*pi) - n(u)|
    int samples = 0;
};

struct MeshVertex {
    double u = 0.0;
    double v = 0.0;
    EmbeddedPoint position;
    Vec3 normal;
};

/// Regular vertex grid over the strip, u-major ordering:
/// vertex(iu, iv) = vertices[iu * nv + iv].
struct SurfaceMesh {
    int nu = 0;
    int nv = 0;
    std::vector<MeshVertex> vertices;

    const MeshVertex& at(int iu, int iv) const { return vertices[static_cast<std::size_t>(iu) * nv + iv]; }
};

inline constexpr std::size_t kDefaultMeshVertexCap = 4'000'000;

/// Throws std::invalid_argument unless R > 0 and 0 < half_width < R.
void check_shape(const MoebiusShape& shape);

/// Embedding of the strip:
///   x = R sin u + v sin(u/2) sin u
///   y = R cos u + v sin(u/2) cos u
///   z = v cos(u/2)
/// Throws std::domain_error if |v| > half_width.
EmbeddedPoint embed(const MoebiusShape& shape, const ParamPoint& p);

/// Coordinate tangents (exact partial derivatives of the embedding),
/// unit normal and area element. Throws std::runtime_error if the frame
/// degenerates (|e_u x e_v| < 1e-14, never reached for a valid shape).
TangentFrame tangents(const MoebiusShape& shape, const ParamPoint& p);

/// Unit normal on the centerline,
///   n(u) = (-sin u cos(u/2), -cos u cos(u/2), sin(u/2)).
/// Flips after one turn, returns after two: n(u + 2*pi) = -n(u),
/// n(u + 4*pi) = n(u).
Vec3 centerline_normal(const MoebiusShape& shape, double u);

/// Samples the centerline normal at `samples` points of [0, 4*pi) and
/// reports the worst-case deviations from the flip and double-cover
/// identities. Requires samples >= 2.
HolonomyReport holonomy_report(const MoebiusShape& shape, int samples);

/// nu x nv vertex grid with per-vertex normals; u spans [0, 2*pi)
/// (half-open, nu equal steps), v spans [-half_width, +half_width]
/// inclusive. Requires nu >= 3, nv >= 2; throws std::length_error if
/// nu*nv exceeds `max_vertices`.
SurfaceMesh emit_mesh(const MoebiusShape& shape, int nu, int nv,
                      std::size_t max_vertices = kDefaultMeshVertexCap);

}  // namespace moebius::geometry
