#include "surfch/solver.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace surfch {

Discretization discretize(const LevelSet& ls, const Box& box, int cells_per_axis)
{
    BackgroundMesh mesh(box, cells_per_axis);
    NodalField phi = interpolate_p1(ls, mesh);
    CutResult cut = build_cut_surface(phi, mesh);
    TraceSpace space = build_space(cut.band);
    SparseOperator mass = assemble_mass(space, cut.surface, cut.band);
    StiffnessOperators stiffness = assemble_ah(space, cut.surface, cut.band, mesh.h());
    const double area = cut.surface.total_area;
    return Discretization{std::move(mesh),     std::move(phi),  std::move(cut.surface),
                          std::move(cut.band), std::move(space), std::move(mass),
                          std::move(stiffness), area};
}

CahnHilliardStepper::CahnHilliardStepper(const Discretization& disc, const SchemeParams& scheme,
                                         const PotentialParams& potential)
    : disc_(disc), scheme_(scheme), potential_(potential)
{
    if (!(scheme_.epsilon > 0.0))
        throw std::invalid_argument("CahnHilliardStepper: epsilon must be positive");
    if (!(scheme_.mobility > 0.0))
        throw std::invalid_argument("CahnHilliardStepper: mobility must be positive");
    if (scheme_.beta_s < 0.0)
        throw std::invalid_argument("CahnHilliardStepper: beta_s must be nonnegative");
}

void CahnHilliardStepper::set_tau(double tau)
{
    if (!(tau > 0.0))
        throw std::invalid_argument("CahnHilliardStepper: tau must be positive");
    if (lu_ && tau == tau_)
        return;
    tau_ = tau;

    const int n = disc_.space.n_dof();
    const double eps2 = scheme_.epsilon * scheme_.epsilon;

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(4 * disc_.mass.mat.nonZeros()
                                              + 2 * disc_.stiffness.a_h.mat.nonZeros()));
    const auto add_block = [&](int row0, int col0, const Eigen::SparseMatrix<double, Eigen::RowMajor>& m,
                               double factor) {
        for (int r = 0; r < m.outerSize(); ++r)
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m, r); it; ++it)
                triplets.emplace_back(row0 + static_cast<int>(it.row()), col0 + static_cast<int>(it.col()),
                                      factor * it.value());
    };
    add_block(0, 0, disc_.mass.mat, 1.0 / tau_);
    add_block(0, n, disc_.stiffness.a_h.mat, scheme_.mobility);
    add_block(n, 0, disc_.mass.mat, scheme_.beta_s);
    add_block(n, 0, disc_.stiffness.a_h.mat, eps2);
    add_block(n, n, disc_.mass.mat, -1.0);

    block_.resize(2 * n, 2 * n);
    block_.setFromTriplets(triplets.begin(), triplets.end());
    block_.makeCompressed();

    lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    lu_->compute(block_);
    if (lu_->info() != Eigen::Success) {
        // Report the least surface-attached DOF; tiny cuts are the usual suspect.
        const Eigen::VectorXd lumped =
            disc_.mass.mat * Eigen::VectorXd::Ones(disc_.mass.rows());
        Eigen::Index worst = 0;
        const double smallest = lumped.minCoeff(&worst);
        std::ostringstream msg;
        msg << "CahnHilliardStepper: sparse LU factorization of the block system failed"
            << " (tau = " << tau_ << "); smallest cut area per DOF = " << smallest
            << " at dof " << worst;
        throw SolverError(msg.str());
    }
    ++factorizations_;
}

ChState CahnHilliardStepper::step(const ChState& state, const Eigen::VectorXd* forcing_load) const
{
    if (!lu_)
        throw SolverError("CahnHilliardStepper: set_tau must be called before step");
    const int n = disc_.space.n_dof();
    if (state.c.coeffs.size() != n)
        throw std::invalid_argument("CahnHilliardStepper: state does not match the space");
    if (!state.c.coeffs.allFinite())
        throw SolverError("CahnHilliardStepper: NaN or Inf in the concentration state");

    const Eigen::VectorXd mass_c = disc_.mass.mat * state.c.coeffs;
    const Eigen::VectorXd b = assemble_nonlinear_load(disc_.space, disc_.cut, disc_.band, state.c, potential_);

    Eigen::VectorXd rhs(2 * n);
    rhs.head(n) = mass_c / tau_;
    if (forcing_load) {
        if (forcing_load->size() != n)
            throw std::invalid_argument("CahnHilliardStepper: forcing load size mismatch");
        rhs.head(n) += *forcing_load;
    }
    rhs.tail(n) = scheme_.beta_s * mass_c - b;

    const Eigen::VectorXd x = lu_->solve(rhs);
    if (lu_->info() != Eigen::Success)
        throw SolverError("CahnHilliardStepper: sparse LU solve failed");

    const double rhs_norm = rhs.norm();
    const double resid = (block_ * x - rhs).norm();
    if (resid > 1e-10 * std::max(rhs_norm, 1e-300)) {
        std::ostringstream msg;
        msg << "CahnHilliardStepper: linear solve residual " << resid << " exceeds 1e-10 * ||rhs|| = "
            << 1e-10 * rhs_norm;
        throw SolverError(msg.str());
    }

    ChState next;
    next.c = FieldVector{x.head(n), FieldRole::concentration};
    next.mu = FieldVector{x.tail(n), FieldRole::potential};
    next.t = state.t + tau_;
    next.step = state.step + 1;
    next.history = state.history;
    return next;
}

double CahnHilliardStepper::energy(const FieldVector& c) const
{
    return discrete_energy(disc_.space, disc_.cut, disc_.band, disc_.stiffness, c, scheme_.epsilon,
                           potential_);
}

double CahnHilliardStepper::mass(const FieldVector& c) const
{
    return total_mass(disc_.mass, c);
}

ChState run(CahnHilliardStepper& stepper, ChState state,
            const std::function<Eigen::VectorXd(double)>* forcing, const StepMonitor& monitor)
{
    const auto& schedule = stepper.scheme().schedule;

    if (state.history.empty()) {
        state.history.push_back({state.t, stepper.energy(state.c), stepper.mass(state.c)});
        if (monitor)
            monitor(state);
    }
    if (schedule.empty())
        return state;

    const double t_final = schedule.back().t_end;
    // Steps inside an interval land on t_start + i*tau; a shorter final step
    // closes any remainder (and triggers its own factorization).
    for (const ScheduleEntry& entry : schedule) {
        while (state.t < entry.t_end - 1e-12 * std::max(1.0, t_final)) {
            double tau = entry.tau;
            if (state.t + tau > entry.t_end + 1e-12 * std::max(1.0, t_final))
                tau = entry.t_end - state.t;
            stepper.set_tau(tau);

            Eigen::VectorXd load;
            const Eigen::VectorXd* load_ptr = nullptr;
            if (forcing && *forcing) {
                load = (*forcing)(state.t + tau);
                load_ptr = &load;
            }
            state = stepper.step(state, load_ptr);
            state.history.push_back({state.t, stepper.energy(state.c), stepper.mass(state.c)});
            if (monitor)
                monitor(state);
        }
    }
    return state;
}

FieldVector ritz_projection(const Discretization& disc, const std::function<double(const Vec3&)>& v,
                            const std::function<Vec3(const Vec3&)>& tangential_grad_v)
{
    const int n = disc.space.n_dof();
    const TriangleRule& rule = triangle_rule(disc.cut.quadrature_degree);
    const std::size_t nq = rule.points.size();

    // r[i] = (P grad v, P_h grad phi_i) and the surface integrals of v and phi_i.
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd phi_area = Eigen::VectorXd::Zero(n);
    double v_integral = 0.0;
    for (std::size_t t = 0; t < disc.cut.tris.size(); ++t) {
        const CutTriangle& ct = disc.cut.tris[t];
        const BandTet& bt = disc.band.tets[static_cast<std::size_t>(ct.band_tet)];
        const auto& dofs = disc.space.tet_dofs(ct.band_tet);
        std::array<Vec3, 4> tangential;
        for (int k = 0; k < 4; ++k)
            tangential[static_cast<std::size_t>(k)] =
                bt.frame.projector * bt.basis_grad[static_cast<std::size_t>(k)];
        for (std::size_t q = 0; q < nq; ++q) {
            const Vec3& x = disc.cut.qpoints[t * nq + q];
            const double w = disc.cut.qweights[t * nq + q];
            const Vec3 grad_v = tangential_grad_v(x);
            const Vec3 d = x - bt.tet.coords[0];
            v_integral += w * v(x);
            for (int a = 0; a < 4; ++a) {
                const double phi = (a == 0 ? 1.0 : 0.0) + bt.basis_grad[static_cast<std::size_t>(a)].dot(d);
                r[dofs[static_cast<std::size_t>(a)]] += w * grad_v.dot(tangential[static_cast<std::size_t>(a)]);
                phi_area[dofs[static_cast<std::size_t>(a)]] += w * phi;
            }
        }
    }

    // Augmented saddle system [A_h, m; m^T, 0] fixes the constant mode.
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(disc.stiffness.a_h.mat.nonZeros()) + 2 * static_cast<std::size_t>(n));
    for (int row = 0; row < disc.stiffness.a_h.mat.outerSize(); ++row)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(disc.stiffness.a_h.mat, row);
             it; ++it)
            triplets.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (int i = 0; i < n; ++i) {
        triplets.emplace_back(i, n, phi_area[i]);
        triplets.emplace_back(n, i, phi_area[i]);
    }
    Eigen::SparseMatrix<double> aug(n + 1, n + 1);
    aug.setFromTriplets(triplets.begin(), triplets.end());
    aug.makeCompressed();

    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = r;
    rhs[n] = v_integral;

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(aug);
    if (lu.info() != Eigen::Success)
        throw SolverError("ritz_projection: augmented system is singular");
    const Eigen::VectorXd x = lu.solve(rhs);
    if (lu.info() != Eigen::Success)
        throw SolverError("ritz_projection: solve failed");

    return FieldVector{x.head(n), FieldRole::generic};
}

FieldVector nodal_interpolant(const Discretization& disc, const std::function<double(const Vec3&)>& v)
{
    Eigen::VectorXd coeffs(disc.space.n_dof());
    for (int d = 0; d < disc.space.n_dof(); ++d)
        coeffs[d] = v(disc.mesh.vertex_coords(disc.space.vertex_of_dof(d)));
    return FieldVector{std::move(coeffs), FieldRole::generic};
}

FieldVector random_initial_condition(const TraceSpace& space, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    Eigen::VectorXd coeffs(space.n_dof());
    for (int d = 0; d < space.n_dof(); ++d) {
        // Top 53 bits -> [0,1), affinely mapped to [-1,1); bit-exact everywhere.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        coeffs[d] = 2.0 * u - 1.0;
    }
    return FieldVector{std::move(coeffs), FieldRole::concentration};
}

} // namespace surfch
