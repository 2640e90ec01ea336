#include "surfch/levelset.hpp"

#include <cmath>

namespace surfch {

LevelSet sphere_levelset(double radius)
{
    if (!(radius > 0.0))
        throw std::invalid_argument("sphere_levelset: radius must be positive");
    LevelSet ls;
    ls.value = [radius](const Vec3& x) { return x.norm() - radius; };
    ls.gradient = [](const Vec3& x) {
        const double r = x.norm();
        if (r == 0.0)
            throw std::runtime_error("sphere_levelset: gradient singular at the origin");
        return Vec3(x / r);
    };
    return ls;
}

LevelSet six_hole_levelset()
{
    auto sq = [](double v) { return v * v; };
    LevelSet ls;
    ls.value = [sq](const Vec3& p) {
        const double x = p[0], y = p[1], z = p[2];
        return sq(x * x + y * y - 4.0) + sq(y * y - 1.0) + sq(y * y + z * z - 4.0) + sq(x * x - 1.0)
             + sq(x * x + z * z - 4.0) + sq(z * z - 1.0) - 13.0;
    };
    ls.gradient = [](const Vec3& p) {
        const double x = p[0], y = p[1], z = p[2];
        Vec3 g;
        g[0] = 4.0 * x * ((x * x + y * y - 4.0) + (x * x - 1.0) + (x * x + z * z - 4.0));
        g[1] = 4.0 * y * ((x * x + y * y - 4.0) + (y * y - 1.0) + (y * y + z * z - 4.0));
        g[2] = 4.0 * z * ((y * y + z * z - 4.0) + (x * x + z * z - 4.0) + (z * z - 1.0));
        return g;
    };
    return ls;
}

NodalField::NodalField(const LevelSet& ls, const BackgroundMesh& mesh)
    : mesh_(mesh), values_(static_cast<std::size_t>(mesh.vertex_count()))
{
    const std::int64_t count = mesh.vertex_count();
    for (std::int64_t id = 0; id < count; ++id)
        values_[static_cast<std::size_t>(id)] = ls.value(mesh.vertex_coords(id));
}

std::array<double, 4> NodalField::values_on(const TetRef& tet) const
{
    return {at_vertex(tet.vertices[0]), at_vertex(tet.vertices[1]), at_vertex(tet.vertices[2]),
            at_vertex(tet.vertices[3])};
}

double NodalField::eval(const TetRef& tet, const Vec3& x) const
{
    const auto lambda = barycentric_coordinates(tet, x);
    const auto v = values_on(tet);
    return lambda[0] * v[0] + lambda[1] * v[1] + lambda[2] * v[2] + lambda[3] * v[3];
}

ElementFrame element_frame(const NodalField& field, const TetRef& tet)
{
    const auto grads = barycentric_gradients(tet);
    const auto v = field.values_on(tet);
    Vec3 g = Vec3::Zero();
    for (int k = 0; k < 4; ++k)
        g += v[k] * grads[k];

    const double norm = g.norm();
    if (norm == 0.0)
        throw std::runtime_error("element_frame: grad(phi_h) vanishes on the element");

    ElementFrame frame;
    frame.normal = g / norm;
    frame.projector = Mat3::Identity() - frame.normal * frame.normal.transpose();
    return frame;
}

} // namespace surfch
