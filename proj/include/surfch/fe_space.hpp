#pragma once

#include "surfch/cut_geometry.hpp"

#include <unordered_map>

namespace surfch {

enum class FieldRole { concentration, potential, generic };

/// Coefficients of a P1 trace function, one entry per active degree of freedom.
struct FieldVector {
    Eigen::VectorXd coeffs;
    FieldRole role = FieldRole::generic;
};

/// P1 finite element space restricted to the narrow band. A background vertex
/// is active iff it belongs to a band tet; active vertices get dense DOF
/// indices 0..n_dof-1 in ascending global vertex id order.
class TraceSpace {
public:
    explicit TraceSpace(const NarrowBand& band);

    int n_dof() const { return static_cast<int>(dof_to_vertex_.size()); }
    std::int64_t vertex_of_dof(int dof) const { return dof_to_vertex_[static_cast<std::size_t>(dof)]; }
    int dof_of_vertex(std::int64_t vertex) const; // -1 when inactive

    /// Local-to-global DOF map of band tet `band_index`.
    const std::array<int, 4>& tet_dofs(std::int32_t band_index) const;
    std::int32_t band_size() const { return static_cast<std::int32_t>(tet_dofs_.size()); }

private:
    std::vector<std::int64_t> dof_to_vertex_;
    std::unordered_map<std::int64_t, int> vertex_to_dof_;
    std::vector<std::array<int, 4>> tet_dofs_;
};

inline TraceSpace build_space(const NarrowBand& band)
{
    return TraceSpace(band);
}

/// Values and (constant) gradients of the four P1 shape functions at x.
/// Throws when x lies outside the tet beyond a 1e-12 barycentric tolerance.
struct P1Basis {
    std::array<double, 4> values;
    std::array<Vec3, 4> gradients;
};
P1Basis eval_basis(const TetRef& tet, const Vec3& x);

/// Field value and surface gradient P_h * grad at x inside a band tet.
struct FieldSample {
    double value = 0.0;
    Vec3 surface_gradient = Vec3::Zero();
};
FieldSample eval_field(const TraceSpace& space, const FieldVector& field, const NarrowBand& band,
                       std::int32_t band_index, const Vec3& x);

} // namespace surfch
