#include "surfch/levelset.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace surfch;

namespace {

Box cube(double half)
{
    Box b;
    b.lo = Vec3::Constant(-half);
    b.hi = Vec3::Constant(half);
    return b;
}

// Central finite differences, the independent check for analytic gradients.
Vec3 fd_gradient(const LevelSet& ls, const Vec3& x, double step)
{
    Vec3 g;
    for (int k = 0; k < 3; ++k) {
        Vec3 hi = x, lo = x;
        hi[k] += step;
        lo[k] -= step;
        g[k] = (ls.value(hi) - ls.value(lo)) / (2.0 * step);
    }
    return g;
}

// Max angle between discrete and exact normals over the band, at element barycenters.
double max_normal_angle(const LevelSet& ls, int n)
{
    const BackgroundMesh mesh(cube(1.25), n);
    const NodalField phi = interpolate_p1(ls, mesh);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (const TetRef& tet : mesh.tets_in_cell({i, j, k})) {
                    const auto v = phi.values_on(tet);
                    int neg = 0;
                    for (double val : v)
                        neg += val < 0.0;
                    if (neg == 0 || neg == 4)
                        continue;
                    const ElementFrame frame = element_frame(phi, tet);
                    const Vec3 exact = ls.gradient(tet.barycenter()).normalized();
                    worst = std::max(worst, std::atan2(frame.normal.cross(exact).norm(),
                                                       frame.normal.dot(exact)));
                }
    return worst;
}

double max_interpolation_error(const LevelSet& ls, int n)
{
    const BackgroundMesh mesh(cube(1.25), n);
    const NodalField phi = interpolate_p1(ls, mesh);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (const TetRef& tet : mesh.tets_in_cell({i, j, k})) {
                    const auto v = phi.values_on(tet);
                    int neg = 0;
                    for (double val : v)
                        neg += val < 0.0;
                    if (neg == 0 || neg == 4)
                        continue;
                    const Vec3 c = tet.barycenter();
                    worst = std::max(worst, std::abs(phi.eval(tet, c) - ls.value(c)));
                }
    return worst;
}

} // namespace

TEST_CASE("sphere level set: values and gradient")
{
    const LevelSet ls = sphere_levelset(1.0);
    CHECK(ls.value(Vec3(1, 0, 0)) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(ls.value(Vec3(0, 0, 0)) == doctest::Approx(-1.0));
    const Vec3 g = ls.gradient(Vec3(2, 0, 0));
    CHECK((g - Vec3(1, 0, 0)).norm() <= 1e-15);
    CHECK(g.norm() == doctest::Approx(1.0));
    CHECK_THROWS_AS(ls.gradient(Vec3(0, 0, 0)), std::runtime_error);
    CHECK_THROWS_AS(sphere_levelset(0.0), std::invalid_argument);
}

TEST_CASE("six-hole level set: value at origin, parity, gradient vs finite differences")
{
    const LevelSet ls = six_hole_levelset();
    CHECK(ls.value(Vec3(0, 0, 0)) == doctest::Approx(38.0).epsilon(1e-15));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-2.25, 2.25);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec3 x(coord(rng), coord(rng), coord(rng));
        const double base = ls.value(x);
        for (int signs = 0; signs < 8; ++signs) {
            const Vec3 flipped(signs & 1 ? -x[0] : x[0], signs & 2 ? -x[1] : x[1],
                               signs & 4 ? -x[2] : x[2]);
            CHECK(ls.value(flipped) == doctest::Approx(base).epsilon(1e-13));
        }
        const Vec3 exact = ls.gradient(x);
        const Vec3 approx = fd_gradient(ls, x, 1e-5);
        CHECK((exact - approx).norm() <= 1e-6 * std::max(1.0, exact.norm()));
    }
}

TEST_CASE("P1 interpolant: nodal exactness and barycentric linearity")
{
    const LevelSet ls = sphere_levelset(1.0);
    const BackgroundMesh mesh(cube(1.25), 4);
    const NodalField phi = interpolate_p1(ls, mesh);

    for (std::int64_t id = 0; id < mesh.vertex_count(); id += 7)
        CHECK(phi.at_vertex(id) == ls.value(mesh.vertex_coords(id)));

    for (const TetRef& tet : mesh.tets_in_cell({1, 2, 3})) {
        const auto v = phi.values_on(tet);
        const double mean = 0.25 * (v[0] + v[1] + v[2] + v[3]);
        CHECK(phi.eval(tet, tet.barycenter()) == doctest::Approx(mean).epsilon(1e-13));
    }
}

TEST_CASE("interpolation error on cut elements is O(h^2)")
{
    const LevelSet ls = sphere_levelset(1.0);
    const double coarse = max_interpolation_error(ls, 10);
    const double fine = max_interpolation_error(ls, 20);
    const double ratio = coarse / fine;
    CHECK(ratio >= 3.2);
    CHECK(ratio <= 4.8);
}

TEST_CASE("element frames: unit normal, projector identities")
{
    const LevelSet ls = sphere_levelset(1.0);
    const BackgroundMesh mesh(cube(1.25), 10);
    const NodalField phi = interpolate_p1(ls, mesh);

    // tet whose barycenter lies farthest in +x among cut tets
    TetRef best;
    double best_x = -1e30;
    int frames_checked = 0;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j)
            for (int k = 0; k < 10; ++k)
                for (const TetRef& tet : mesh.tets_in_cell({i, j, k})) {
                    const auto v = phi.values_on(tet);
                    int neg = 0;
                    for (double val : v)
                        neg += val < 0.0;
                    if (neg == 0 || neg == 4)
                        continue;
                    const ElementFrame frame = element_frame(phi, tet);
                    CHECK(frame.normal.norm() == doctest::Approx(1.0).epsilon(1e-12));
                    CHECK((frame.projector * frame.normal).norm() <= 1e-14);
                    CHECK(frame.projector.trace() == doctest::Approx(2.0).epsilon(1e-14));
                    CHECK((frame.projector - frame.projector.transpose()).norm() <= 1e-13);
                    CHECK((frame.projector * frame.projector - frame.projector).norm() <= 1e-13);
                    ++frames_checked;
                    if (tet.barycenter()[0] > best_x) {
                        best_x = tet.barycenter()[0];
                        best = tet;
                    }
                }
    CHECK(frames_checked > 0);

    // h = 0.25 here; the normal of the most +x element is close to e_x
    const ElementFrame frame = element_frame(phi, best);
    const double angle = std::atan2(frame.normal.cross(Vec3(1, 0, 0)).norm(),
                                    frame.normal.dot(Vec3(1, 0, 0)));
    CHECK(angle <= 0.2);
}

TEST_CASE("normal accuracy improves with order >= 0.9")
{
    const LevelSet ls = sphere_levelset(1.0);
    const double coarse = max_normal_angle(ls, 10);
    const double fine = max_normal_angle(ls, 20);
    const double order = std::log(coarse / fine) / std::log(2.0);
    CHECK(order >= 0.9);
}

TEST_CASE("constant field gives degenerate frames")
{
    LevelSet flat;
    flat.value = [](const Vec3&) { return 1.0; };
    flat.gradient = [](const Vec3&) { return Vec3::Zero(); };
    const BackgroundMesh mesh(cube(1.0), 1);
    const NodalField phi = interpolate_p1(flat, mesh);
    const auto tets = mesh.tets_in_cell({0, 0, 0});
    CHECK_THROWS_AS(element_frame(phi, tets[0]), std::runtime_error);
}
