#pragma once

#include "surfch/background_mesh.hpp"

#include <functional>
#include <vector>

namespace surfch {

/// Implicit surface description: a scalar function and its ambient gradient.
/// The zero set defines the surface; the gradient must not vanish near it.
struct LevelSet {
    std::function<double(const Vec3&)> value;
    std::function<Vec3(const Vec3&)> gradient;
};

/// phi(x) = |x| - radius. The gradient is singular at the origin and throws there.
LevelSet sphere_levelset(double radius);

/// Genus-5 "six hole" surface,
///   phi = (x1^2+x2^2-4)^2 + (x2^2-1)^2 + (x2^2+x3^2-4)^2
///       + (x1^2-1)^2 + (x1^2+x3^2-4)^2 + (x3^2-1)^2 - 13,
/// with its analytic gradient.
LevelSet six_hole_levelset();

/// Piecewise-linear nodal interpolant of a level set on the background grid.
/// Values at grid vertices equal the analytic values exactly; inside a tet
/// the field is barycentric-linear.
class NodalField {
public:
    NodalField(const LevelSet& ls, const BackgroundMesh& mesh);

    const BackgroundMesh& mesh() const { return mesh_; }
    double at_vertex(std::int64_t id) const { return values_[static_cast<std::size_t>(id)]; }
    std::array<double, 4> values_on(const TetRef& tet) const;
    double eval(const TetRef& tet, const Vec3& x) const;

private:
    BackgroundMesh mesh_; // cheap value (box + counts), safe to copy
    std::vector<double> values_;
};

inline NodalField interpolate_p1(const LevelSet& ls, const BackgroundMesh& mesh)
{
    return NodalField(ls, mesh);
}

/// Per-element discrete normal n_h = grad(phi_h)/|grad(phi_h)| and tangential
/// projector P_h = I - n_h n_h^T; both constant on a tet for P1 interpolants.
struct ElementFrame {
    Vec3 normal;
    Mat3 projector;
};

/// Throws std::runtime_error when grad(phi_h) vanishes on the tet (degenerate
/// element; such tets are excluded from the narrow band by the caller).
ElementFrame element_frame(const NodalField& field, const TetRef& tet);

} // namespace surfch
