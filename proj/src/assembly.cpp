#include "surfch/assembly.hpp"

namespace surfch {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// P1 shape values from the precomputed constant gradients:
// lambda_k(x) = delta_{k0} + grad_k . (x - v0).
inline std::array<double, 4> shape_values(const BandTet& bt, const Vec3& x)
{
    const Vec3 d = x - bt.tet.coords[0];
    return {1.0 + bt.basis_grad[0].dot(d), bt.basis_grad[1].dot(d), bt.basis_grad[2].dot(d),
            bt.basis_grad[3].dot(d)};
}

using LocalMat = std::array<double, 16>;
using LocalVec = std::array<double, 4>;

// Merges per-element 4x4 blocks into a sparse matrix. Elements are visited in
// index order, so the accumulation order per entry is fixed and runs are
// reproducible for any thread count.
SparseOperator merge_local_matrices(const TraceSpace& space,
                                    const std::vector<LocalMat>& local,
                                    const std::function<const std::array<int, 4>&(std::size_t)>& dofs_of,
                                    bool symmetric)
{
    Triplets triplets;
    triplets.reserve(local.size() * 16);
    for (std::size_t e = 0; e < local.size(); ++e) {
        const auto& dofs = dofs_of(e);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                triplets.emplace_back(dofs[static_cast<std::size_t>(a)],
                                      dofs[static_cast<std::size_t>(b)],
                                      local[e][static_cast<std::size_t>(a * 4 + b)]);
    }
    SparseOperator op;
    op.mat.resize(space.n_dof(), space.n_dof());
    op.mat.setFromTriplets(triplets.begin(), triplets.end());
    op.mat.makeCompressed();
    op.symmetric = symmetric;
    return op;
}

Eigen::VectorXd merge_local_vectors(const TraceSpace& space, const std::vector<LocalVec>& local,
                                    const std::function<const std::array<int, 4>&(std::size_t)>& dofs_of)
{
    Eigen::VectorXd b = Eigen::VectorXd::Zero(space.n_dof());
    for (std::size_t e = 0; e < local.size(); ++e) {
        const auto& dofs = dofs_of(e);
        for (int a = 0; a < 4; ++a)
            b[dofs[static_cast<std::size_t>(a)]] += local[e][static_cast<std::size_t>(a)];
    }
    return b;
}

} // namespace

SparseOperator assemble_mass(const TraceSpace& space, const CutSurface& cut, const NarrowBand& band)
{
    const TriangleRule& rule = triangle_rule(cut.quadrature_degree);
    const std::size_t nq = rule.points.size();

    std::vector<LocalMat> local(cut.tris.size());
    parallel_for_chunks(cut.tris.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            const CutTriangle& ct = cut.tris[t];
            const BandTet& bt = band.tets[static_cast<std::size_t>(ct.band_tet)];
            LocalMat m{};
            for (std::size_t q = 0; q < nq; ++q) {
                const double w = cut.qweights[t * nq + q];
                const auto phi = shape_values(bt, cut.qpoints[t * nq + q]);
                for (int a = 0; a < 4; ++a)
                    for (int b = a; b < 4; ++b) {
                        const double v = w * phi[static_cast<std::size_t>(a)] * phi[static_cast<std::size_t>(b)];
                        m[static_cast<std::size_t>(a * 4 + b)] += v;
                        if (a != b)
                            m[static_cast<std::size_t>(b * 4 + a)] += v;
                    }
            }
            local[t] = m;
        }
    });

    return merge_local_matrices(
        space, local, [&](std::size_t e) -> const std::array<int, 4>& { return space.tet_dofs(cut.tris[e].band_tet); },
        true);
}

StiffnessOperators assemble_ah(const TraceSpace& space, const CutSurface& cut,
                               const NarrowBand& band, double h)
{
    // Surface stiffness: constant integrand per triangle, so the quadrature
    // reduces to the triangle area.
    std::vector<LocalMat> local_surf(cut.tris.size());
    parallel_for_chunks(cut.tris.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            const CutTriangle& ct = cut.tris[t];
            const BandTet& bt = band.tets[static_cast<std::size_t>(ct.band_tet)];
            std::array<Vec3, 4> tangential;
            for (int k = 0; k < 4; ++k)
                tangential[static_cast<std::size_t>(k)] =
                    bt.frame.projector * bt.basis_grad[static_cast<std::size_t>(k)];
            LocalMat m{};
            for (int a = 0; a < 4; ++a)
                for (int b = a; b < 4; ++b) {
                    const double v = ct.area
                        * tangential[static_cast<std::size_t>(a)].dot(tangential[static_cast<std::size_t>(b)]);
                    m[static_cast<std::size_t>(a * 4 + b)] = v;
                    m[static_cast<std::size_t>(b * 4 + a)] = v;
                }
            local_surf[t] = m;
        }
    });

    StiffnessOperators out;
    out.h = h;
    out.a_gamma = merge_local_matrices(
        space, local_surf,
        [&](std::size_t e) -> const std::array<int, 4>& { return space.tet_dofs(cut.tris[e].band_tet); }, true);

    // Normal-gradient stabilization over whole band tets; integrand constant,
    // quadrature reduces to the tet volume.
    std::vector<LocalMat> local_stab(band.tets.size());
    parallel_for_chunks(band.tets.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            const BandTet& bt = band.tets[t];
            const double vol = bt.tet.volume();
            std::array<double, 4> ngrad;
            for (int k = 0; k < 4; ++k)
                ngrad[static_cast<std::size_t>(k)] =
                    bt.frame.normal.dot(bt.basis_grad[static_cast<std::size_t>(k)]);
            LocalMat m{};
            for (int a = 0; a < 4; ++a)
                for (int b = a; b < 4; ++b) {
                    const double v =
                        vol * ngrad[static_cast<std::size_t>(a)] * ngrad[static_cast<std::size_t>(b)];
                    m[static_cast<std::size_t>(a * 4 + b)] = v;
                    m[static_cast<std::size_t>(b * 4 + a)] = v;
                }
            local_stab[t] = m;
        }
    });
    out.stab = merge_local_matrices(
        space, local_stab, [&](std::size_t e) -> const std::array<int, 4>& { return space.tet_dofs(static_cast<std::int32_t>(e)); },
        true);

    out.a_h.mat = out.a_gamma.mat + h * out.stab.mat;
    out.a_h.mat.makeCompressed();
    out.a_h.symmetric = true;
    return out;
}

Eigen::VectorXd assemble_nonlinear_load(const TraceSpace& space, const CutSurface& cut,
                                        const NarrowBand& band, const FieldVector& c,
                                        const PotentialParams& p)
{
    if (c.coeffs.size() != space.n_dof())
        throw std::invalid_argument("assemble_nonlinear_load: coefficient size mismatch");

    const TriangleRule& rule = triangle_rule(cut.quadrature_degree);
    const std::size_t nq = rule.points.size();

    std::vector<LocalVec> local(cut.tris.size());
    parallel_for_chunks(cut.tris.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            const CutTriangle& ct = cut.tris[t];
            const BandTet& bt = band.tets[static_cast<std::size_t>(ct.band_tet)];
            const auto& dofs = space.tet_dofs(ct.band_tet);
            LocalVec v{};
            for (std::size_t q = 0; q < nq; ++q) {
                const double w = cut.qweights[t * nq + q];
                const auto phi = shape_values(bt, cut.qpoints[t * nq + q]);
                double ch = 0.0;
                for (int a = 0; a < 4; ++a)
                    ch += c.coeffs[dofs[static_cast<std::size_t>(a)]] * phi[static_cast<std::size_t>(a)];
                const double f = df0(ch, p);
                for (int a = 0; a < 4; ++a)
                    v[static_cast<std::size_t>(a)] += w * f * phi[static_cast<std::size_t>(a)];
            }
            local[t] = v;
        }
    });

    return merge_local_vectors(space, local, [&](std::size_t e) -> const std::array<int, 4>& {
        return space.tet_dofs(cut.tris[e].band_tet);
    });
}

Eigen::VectorXd assemble_forcing(const TraceSpace& space, const CutSurface& cut,
                                 const NarrowBand& band, const ScalarField& g, double t)
{
    const TriangleRule& rule = triangle_rule(cut.quadrature_degree);
    const std::size_t nq = rule.points.size();

    std::vector<LocalVec> local(cut.tris.size());
    parallel_for_chunks(cut.tris.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t e = begin; e < end; ++e) {
            const CutTriangle& ct = cut.tris[e];
            const BandTet& bt = band.tets[static_cast<std::size_t>(ct.band_tet)];
            LocalVec v{};
            for (std::size_t q = 0; q < nq; ++q) {
                const Vec3& x = cut.qpoints[e * nq + q];
                const double w = cut.qweights[e * nq + q];
                const double gval = g(x, t);
                const auto phi = shape_values(bt, x);
                for (int a = 0; a < 4; ++a)
                    v[static_cast<std::size_t>(a)] += w * gval * phi[static_cast<std::size_t>(a)];
            }
            local[e] = v;
        }
    });

    return merge_local_vectors(space, local, [&](std::size_t e) -> const std::array<int, 4>& {
        return space.tet_dofs(cut.tris[e].band_tet);
    });
}

double discrete_energy(const TraceSpace& space, const CutSurface& cut, const NarrowBand& band,
                       const StiffnessOperators& stiffness, const FieldVector& c, double epsilon,
                       const PotentialParams& p)
{
    if (c.coeffs.size() != space.n_dof())
        throw std::invalid_argument("discrete_energy: coefficient size mismatch");

    const double dirichlet = c.coeffs.dot(stiffness.a_h.mat * c.coeffs);

    const TriangleRule& rule = triangle_rule(cut.quadrature_degree);
    const std::size_t nq = rule.points.size();
    double well = 0.0;
    for (std::size_t t = 0; t < cut.tris.size(); ++t) {
        const CutTriangle& ct = cut.tris[t];
        const BandTet& bt = band.tets[static_cast<std::size_t>(ct.band_tet)];
        const auto& dofs = space.tet_dofs(ct.band_tet);
        for (std::size_t q = 0; q < nq; ++q) {
            const auto phi = shape_values(bt, cut.qpoints[t * nq + q]);
            double ch = 0.0;
            for (int a = 0; a < 4; ++a)
                ch += c.coeffs[dofs[static_cast<std::size_t>(a)]] * phi[static_cast<std::size_t>(a)];
            well += cut.qweights[t * nq + q] * f0(ch, p);
        }
    }
    return 0.5 * epsilon * epsilon * dirichlet + well;
}

double total_mass(const SparseOperator& mass, const FieldVector& c)
{
    if (c.coeffs.size() != mass.rows())
        throw std::invalid_argument("total_mass: coefficient size mismatch");
    return (mass.mat * c.coeffs).sum();
}

} // namespace surfch
