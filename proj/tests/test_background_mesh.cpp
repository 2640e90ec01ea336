#include "surfch/background_mesh.hpp"

#include <doctest.h>

#include <map>
#include <set>

using namespace surfch;

namespace {

Box cube(double half)
{
    Box b;
    b.lo = Vec3::Constant(-half);
    b.hi = Vec3::Constant(half);
    return b;
}

} // namespace

TEST_CASE("single-cell mesh: counts and volumes")
{
    const BackgroundMesh mesh(cube(1.25), 1);
    CHECK(mesh.tet_count() == 6);
    CHECK(mesh.vertex_count() == 8);
    CHECK(mesh.h() == doctest::Approx(2.5));

    const auto tets = mesh.tets_in_cell({0, 0, 0});
    double total = 0.0;
    for (const TetRef& tet : tets) {
        CHECK(tet.volume() > 0.0);
        CHECK(tet.volume() == doctest::Approx(2.5 * 2.5 * 2.5 / 6.0).epsilon(1e-14));
        total += tet.volume();
    }
    CHECK(total == doctest::Approx(2.5 * 2.5 * 2.5).epsilon(1e-14));
}

TEST_CASE("n=2 mesh: counts")
{
    const BackgroundMesh mesh(cube(1.25), 2);
    CHECK(mesh.tet_count() == 48);
    CHECK(mesh.vertex_count() == 27);
}

TEST_CASE("tiling identity over refinements")
{
    for (int n : {1, 2, 4, 8}) {
        const BackgroundMesh mesh(cube(1.25), n);
        double total = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (const TetRef& tet : mesh.tets_in_cell({i, j, k}))
                        total += tet.volume();
        CHECK(std::abs(total - 2.5 * 2.5 * 2.5) <= 1e-12 * 2.5 * 2.5 * 2.5);
    }
}

TEST_CASE("conformity: shared faces carry identical vertex ids, ids map to one coordinate")
{
    const BackgroundMesh mesh(cube(1.0), 2);
    std::map<std::array<std::int64_t, 3>, int> face_count;
    std::map<std::int64_t, Vec3> coords_of;

    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (const TetRef& tet : mesh.tets_in_cell({i, j, k})) {
                    for (int v = 0; v < 4; ++v) {
                        const auto [it, inserted] = coords_of.emplace(tet.vertices[v], tet.coords[v]);
                        if (!inserted)
                            CHECK((it->second - tet.coords[v]).norm() == 0.0);
                    }
                    // the four faces, as sorted id triples
                    for (int skip = 0; skip < 4; ++skip) {
                        std::array<std::int64_t, 3> face{};
                        int p = 0;
                        for (int v = 0; v < 4; ++v)
                            if (v != skip)
                                face[p++] = tet.vertices[v];
                        std::sort(face.begin(), face.end());
                        ++face_count[face];
                    }
                }

    for (const auto& [face, count] : face_count) {
        CHECK(count >= 1);
        CHECK(count <= 2); // interior faces shared by exactly two tets, boundary by one
    }
}

TEST_CASE("six tets of a cell are pairwise interior-disjoint")
{
    const BackgroundMesh mesh(cube(0.5), 1);
    const auto tets = mesh.tets_in_cell({0, 0, 0});
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            if (a == b)
                continue;
            const auto lambda = barycentric_coordinates(tets[b], tets[a].barycenter());
            bool inside = true;
            for (double l : lambda)
                inside = inside && l > 1e-12;
            CHECK_FALSE(inside);
        }
}

TEST_CASE("determinism: identical inputs give bitwise-identical coordinates")
{
    const BackgroundMesh a(cube(1.25), 3);
    const BackgroundMesh b(cube(1.25), 3);
    for (int i = 0; i < 3; ++i) {
        const auto ta = a.tets_in_cell({i, 2 - i, i});
        const auto tb = b.tets_in_cell({i, 2 - i, i});
        for (int t = 0; t < 6; ++t)
            for (int v = 0; v < 4; ++v) {
                CHECK(ta[t].vertices[v] == tb[t].vertices[v]);
                CHECK(std::memcmp(ta[t].coords[v].data(), tb[t].coords[v].data(), 3 * sizeof(double))
                      == 0);
            }
    }
}

TEST_CASE("invalid inputs are rejected")
{
    CHECK_THROWS_AS(BackgroundMesh(cube(1.0), 0), std::invalid_argument);

    Box slab;
    slab.lo = Vec3(-1, -1, -1);
    slab.hi = Vec3(1, 1, 2);
    CHECK_THROWS_AS(BackgroundMesh(slab, 4), std::invalid_argument);

    Box inverted;
    inverted.lo = Vec3(1, 1, 1);
    inverted.hi = Vec3(-1, -1, -1);
    CHECK_THROWS_AS(BackgroundMesh(inverted, 1), std::invalid_argument);

    const BackgroundMesh mesh(cube(1.0), 2);
    CHECK_THROWS_AS(mesh.tets_in_cell({2, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(mesh.tets_in_cell({0, -1, 0}), std::invalid_argument);
}

TEST_CASE("barycentric helpers: partition of unity and gradient sum")
{
    const BackgroundMesh mesh(cube(1.25), 2);
    const auto tets = mesh.tets_in_cell({1, 0, 1});
    for (const TetRef& tet : tets) {
        const auto grads = barycentric_gradients(tet);
        Vec3 sum = grads[0] + grads[1] + grads[2] + grads[3];
        CHECK(sum.norm() <= 1e-14 / mesh.h());

        const auto lambda = barycentric_coordinates(tet, tet.barycenter());
        CHECK(lambda[0] + lambda[1] + lambda[2] + lambda[3] == doctest::Approx(1.0).epsilon(1e-14));
        for (double l : lambda)
            CHECK(l == doctest::Approx(0.25).epsilon(1e-13));
    }
}
