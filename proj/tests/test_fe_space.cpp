#include "surfch/fe_space.hpp"

#include <doctest.h>

#include <random>
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

BandTet make_band_tet(const TetRef& tet)
{
    BandTet bt;
    bt.tet = tet;
    bt.frame.normal = Vec3(1, 0, 0);
    bt.frame.projector = Mat3::Identity() - bt.frame.normal * bt.frame.normal.transpose();
    bt.basis_grad = barycentric_gradients(tet);
    return bt;
}

struct SphereFixture {
    BackgroundMesh mesh;
    NodalField phi;
    CutResult cut;
    TraceSpace space;

    SphereFixture()
        : mesh(cube(1.25), 10),
          phi(sphere_levelset(1.0), mesh),
          cut(build_cut_surface(phi, mesh)),
          space(cut.band)
    {
    }
};

const SphereFixture& sphere_fixture()
{
    static const SphereFixture fixture;
    return fixture;
}

} // namespace

TEST_CASE("space over a single tet has four dofs")
{
    const BackgroundMesh mesh(cube(0.5), 1);
    NarrowBand band;
    band.tets.push_back(make_band_tet(mesh.tets_in_cell({0, 0, 0})[0]));
    const TraceSpace space = build_space(band);
    CHECK(space.n_dof() == 4);
}

TEST_CASE("two face-sharing tets have five dofs")
{
    const BackgroundMesh mesh(cube(0.5), 1);
    const auto tets = mesh.tets_in_cell({0, 0, 0});
    NarrowBand band;
    band.tets.push_back(make_band_tet(tets[0]));
    band.tets.push_back(make_band_tet(tets[1]));
    const TraceSpace space = build_space(band);
    CHECK(space.n_dof() == 5);
}

TEST_CASE("empty band is rejected")
{
    NarrowBand band;
    CHECK_THROWS_AS(build_space(band), std::invalid_argument);
}

TEST_CASE("sphere band: dof map is a bijection onto active vertices")
{
    const SphereFixture& fx = sphere_fixture();
    CHECK(fx.space.n_dof() > 0);

    std::set<int> covered;
    for (std::int32_t t = 0; t < fx.space.band_size(); ++t)
        for (int dof : fx.space.tet_dofs(t)) {
            CHECK(dof >= 0);
            CHECK(dof < fx.space.n_dof());
            covered.insert(dof);
        }
    CHECK(static_cast<int>(covered.size()) == fx.space.n_dof());

    for (int d = 1; d < fx.space.n_dof(); ++d)
        CHECK(fx.space.vertex_of_dof(d) > fx.space.vertex_of_dof(d - 1));
    for (int d = 0; d < fx.space.n_dof(); ++d)
        CHECK(fx.space.dof_of_vertex(fx.space.vertex_of_dof(d)) == d);
    CHECK(fx.space.dof_of_vertex(-1) == -1);
}

TEST_CASE("basis: kronecker property, barycenter, partition of unity")
{
    const BackgroundMesh mesh(cube(1.0), 2);
    const TetRef tet = mesh.tets_in_cell({1, 0, 1})[3];

    for (int k = 0; k < 4; ++k) {
        const P1Basis basis = eval_basis(tet, tet.coords[static_cast<std::size_t>(k)]);
        for (int m = 0; m < 4; ++m)
            CHECK(basis.values[static_cast<std::size_t>(m)]
                  == doctest::Approx(k == m ? 1.0 : 0.0).epsilon(1e-13));
    }

    const P1Basis at_center = eval_basis(tet, tet.barycenter());
    Vec3 grad_sum = Vec3::Zero();
    double value_sum = 0.0;
    for (int k = 0; k < 4; ++k) {
        CHECK(at_center.values[static_cast<std::size_t>(k)] == doctest::Approx(0.25).epsilon(1e-13));
        grad_sum += at_center.gradients[static_cast<std::size_t>(k)];
        value_sum += at_center.values[static_cast<std::size_t>(k)];
    }
    CHECK(value_sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(grad_sum.norm() <= 1e-14 / mesh.h());

    CHECK_THROWS_AS(eval_basis(tet, tet.barycenter() + Vec3(10, 0, 0)), std::invalid_argument);
}

TEST_CASE("field evaluation: constants, linears, nodal values")
{
    const SphereFixture& fx = sphere_fixture();
    const int n = fx.space.n_dof();

    const FieldVector ones{Eigen::VectorXd::Ones(n), FieldRole::generic};
    const FieldVector linear = [&] {
        Eigen::VectorXd c(n);
        for (int d = 0; d < n; ++d)
            c[d] = fx.mesh.vertex_coords(fx.space.vertex_of_dof(d))[0];
        return FieldVector{c, FieldRole::generic};
    }();

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Eigen::VectorXd random_coeffs(n);
    for (int d = 0; d < n; ++d)
        random_coeffs[d] = unit(rng);
    const FieldVector random{random_coeffs, FieldRole::generic};

    for (std::int32_t t = 0; t < fx.space.band_size(); t += 17) {
        const BandTet& bt = fx.cut.band.tets[static_cast<std::size_t>(t)];
        const Vec3 x = bt.tet.barycenter();

        const FieldSample s1 = eval_field(fx.space, ones, fx.cut.band, t, x);
        CHECK(s1.value == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(s1.surface_gradient.norm() <= 1e-12);

        const FieldSample s2 = eval_field(fx.space, linear, fx.cut.band, t, x);
        CHECK(s2.value == doctest::Approx(x[0]).epsilon(1e-12));
        const Vec3 expected = bt.frame.projector * Vec3(1, 0, 0);
        CHECK((s2.surface_gradient - expected).norm() <= 1e-12);

        const auto& dofs = fx.space.tet_dofs(t);
        const FieldSample s3 = eval_field(fx.space, random, fx.cut.band, t, bt.tet.coords[2]);
        CHECK(s3.value == doctest::Approx(random.coeffs[dofs[2]]).epsilon(1e-12));
    }

    CHECK_THROWS_AS(eval_field(fx.space, ones, fx.cut.band, fx.space.band_size(), Vec3(1, 0, 0)),
                    std::invalid_argument);
    const FieldVector wrong{Eigen::VectorXd::Ones(n + 1), FieldRole::generic};
    CHECK_THROWS_AS(eval_field(fx.space, wrong, fx.cut.band, 0, Vec3(1, 0, 0)),
                    std::invalid_argument);
}
