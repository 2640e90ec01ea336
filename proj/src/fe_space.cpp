#include "surfch/fe_space.hpp"

#include <algorithm>
#include <sstream>

namespace surfch {

TraceSpace::TraceSpace(const NarrowBand& band)
{
    if (band.tets.empty())
        throw std::invalid_argument("TraceSpace: narrow band is empty");

    dof_to_vertex_.reserve(band.tets.size());
    for (const BandTet& bt : band.tets)
        for (std::int64_t v : bt.tet.vertices)
            dof_to_vertex_.push_back(v);
    std::sort(dof_to_vertex_.begin(), dof_to_vertex_.end());
    dof_to_vertex_.erase(std::unique(dof_to_vertex_.begin(), dof_to_vertex_.end()),
                         dof_to_vertex_.end());

    vertex_to_dof_.reserve(dof_to_vertex_.size());
    for (std::size_t d = 0; d < dof_to_vertex_.size(); ++d)
        vertex_to_dof_.emplace(dof_to_vertex_[d], static_cast<int>(d));

    tet_dofs_.resize(band.tets.size());
    for (std::size_t t = 0; t < band.tets.size(); ++t)
        for (int v = 0; v < 4; ++v)
            tet_dofs_[t][static_cast<std::size_t>(v)] =
                vertex_to_dof_.at(band.tets[t].tet.vertices[static_cast<std::size_t>(v)]);
}

int TraceSpace::dof_of_vertex(std::int64_t vertex) const
{
    const auto it = vertex_to_dof_.find(vertex);
    return it == vertex_to_dof_.end() ? -1 : it->second;
}

const std::array<int, 4>& TraceSpace::tet_dofs(std::int32_t band_index) const
{
    if (band_index < 0 || band_index >= band_size())
        throw std::invalid_argument("TraceSpace: band tet index out of range");
    return tet_dofs_[static_cast<std::size_t>(band_index)];
}

P1Basis eval_basis(const TetRef& tet, const Vec3& x)
{
    const auto lambda = barycentric_coordinates(tet, x);
    constexpr double tol = 1e-12;
    for (double l : lambda)
        if (l < -tol || l > 1.0 + tol) {
            std::ostringstream msg;
            msg << "eval_basis: point outside tetrahedron (barycentric " << lambda[0] << ", "
                << lambda[1] << ", " << lambda[2] << ", " << lambda[3] << ")";
            throw std::invalid_argument(msg.str());
        }
    return {lambda, barycentric_gradients(tet)};
}

FieldSample eval_field(const TraceSpace& space, const FieldVector& field, const NarrowBand& band,
                       std::int32_t band_index, const Vec3& x)
{
    if (band_index < 0 || static_cast<std::size_t>(band_index) >= band.tets.size())
        throw std::invalid_argument("eval_field: tet is not in the narrow band");
    if (field.coeffs.size() != space.n_dof())
        throw std::invalid_argument("eval_field: coefficient vector does not match the space");

    const BandTet& bt = band.tets[static_cast<std::size_t>(band_index)];
    const P1Basis basis = eval_basis(bt.tet, x);
    const auto& dofs = space.tet_dofs(band_index);

    FieldSample out;
    Vec3 grad = Vec3::Zero();
    for (int k = 0; k < 4; ++k) {
        const double c = field.coeffs[dofs[static_cast<std::size_t>(k)]];
        out.value += c * basis.values[static_cast<std::size_t>(k)];
        grad += c * basis.gradients[static_cast<std::size_t>(k)];
    }
    out.surface_gradient = bt.frame.projector * grad;
    return out;
}

} // namespace surfch
