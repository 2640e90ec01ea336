#pragma once

#include "surfch/fe_space.hpp"
#include "surfch/potential.hpp"

#include <Eigen/Sparse>

namespace surfch {

struct SparseOperator {
    Eigen::SparseMatrix<double, Eigen::RowMajor> mat;
    bool symmetric = false;

    Eigen::Index rows() const { return mat.rows(); }
    Eigen::Index cols() const { return mat.cols(); }
};

using ScalarField = std::function<double(const Vec3&, double)>;

/// Surface mass matrix M[i,j] = integral over the cut surface of phi_i phi_j.
/// Symmetric positive semidefinite by construction (positive weights).
SparseOperator assemble_mass(const TraceSpace& space, const CutSurface& cut,
                             const NarrowBand& band);

/// The stabilized form split into its two parts:
///   a_gamma[i,j] = (P_h grad phi_i, P_h grad phi_j) over the cut surface,
///   stab[i,j]    = (n_h . grad phi_i)(n_h . grad phi_j) over band tets,
///   a_h          = a_gamma + h * stab.
struct StiffnessOperators {
    SparseOperator a_gamma;
    SparseOperator stab;
    SparseOperator a_h;
    double h = 0.0;
};
StiffnessOperators assemble_ah(const TraceSpace& space, const CutSurface& cut,
                               const NarrowBand& band, double h);

/// Load vector b[i] = integral of df0(c_h) phi_i over the cut surface, with
/// df0 evaluated at quadrature points of c_h (not at nodes).
Eigen::VectorXd assemble_nonlinear_load(const TraceSpace& space, const CutSurface& cut,
                                        const NarrowBand& band, const FieldVector& c,
                                        const PotentialParams& p);

/// Load vector b[i] = integral of g(x, t) phi_i over the cut surface.
Eigen::VectorXd assemble_forcing(const TraceSpace& space, const CutSurface& cut,
                                 const NarrowBand& band, const ScalarField& g, double t);

/// Discrete free energy (epsilon^2 / 2) c^T A_h c + integral of f0(c_h).
double discrete_energy(const TraceSpace& space, const CutSurface& cut, const NarrowBand& band,
                       const StiffnessOperators& stiffness, const FieldVector& c, double epsilon,
                       const PotentialParams& p);

/// Total surfactant mass 1^T M c = integral of c_h over the cut surface.
double total_mass(const SparseOperator& mass, const FieldVector& c);

} // namespace surfch
