#pragma once

#include "surfch/assembly.hpp"

#include <Eigen/SparseLU>

#include <cstdint>
#include <memory>
#include <optional>

namespace surfch {

class SolverError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Everything the time stepper needs, built once per mesh level.
struct Discretization {
    BackgroundMesh mesh;
    NodalField phi;
    CutSurface cut;
    NarrowBand band;
    TraceSpace space;
    SparseOperator mass;
    StiffnessOperators stiffness;
    double area = 0.0;
};

Discretization discretize(const LevelSet& ls, const Box& box, int cells_per_axis);

/// Piecewise-constant step size: tau applies until time reaches t_end.
struct ScheduleEntry {
    double t_end = 0.0;
    double tau = 0.0;
};

struct SchemeParams {
    double epsilon = 0.05;
    double mobility = 1.0;
    double beta_s = 2.0;
    std::vector<ScheduleEntry> schedule;
};

struct HistoryEntry {
    double t = 0.0;
    double energy = 0.0;
    double mass = 0.0;
};

struct ChState {
    FieldVector c;
    FieldVector mu;
    double t = 0.0;
    long step = 0;
    std::vector<HistoryEntry> history;
};

/// One semi-implicit step couples (c, mu) through the block system
///   [ (1/tau) M        ,  mobility * A_h ] [c^{n+1}]   [(1/tau) M c^n + forcing]
///   [ beta_s M + eps^2 A_h ,     -M      ] [mu^{n+1}] = [beta_s M c^n - b(c^n) ]
/// where b is the load of df0(c^n). The matrix depends on tau only, so the
/// factorization is reused until the schedule switches step sizes.
class CahnHilliardStepper {
public:
    CahnHilliardStepper(const Discretization& disc, const SchemeParams& scheme,
                        const PotentialParams& potential);

    /// Factorizes the block matrix for the given step size (no-op when unchanged).
    void set_tau(double tau);
    double tau() const { return tau_; }
    int factorization_count() const { return factorizations_; }

    /// Advances one step of size tau(); optional forcing load enters the first
    /// equation. Throws SolverError on NaN input, factorization failure, or a
    /// relative residual above 1e-10.
    ChState step(const ChState& state, const Eigen::VectorXd* forcing_load = nullptr) const;

    const Discretization& discretization() const { return disc_; }
    const SchemeParams& scheme() const { return scheme_; }
    const PotentialParams& potential() const { return potential_; }

    double energy(const FieldVector& c) const;
    double mass(const FieldVector& c) const;

private:
    const Discretization& disc_;
    SchemeParams scheme_;
    PotentialParams potential_;
    double tau_ = 0.0;
    int factorizations_ = 0;
    Eigen::SparseMatrix<double> block_;
    std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
};

/// Called after every completed step (and once for the initial state).
using StepMonitor = std::function<void(const ChState&)>;

/// Runs the schedule from state.t to the final t_end, recording (t, energy,
/// mass) after every step. Refactorizes exactly when the step size changes.
/// On failure the partially advanced state is preserved in the exception-safe
/// sense: the returned state always carries the history up to the last
/// completed step.
ChState run(CahnHilliardStepper& stepper, ChState state,
            const std::function<Eigen::VectorXd(double)>* forcing = nullptr,
            const StepMonitor& monitor = {});

/// Stabilized Ritz projection: solves A_h x = r with a scalar multiplier
/// enforcing the mean constraint integral(x_h - v) = 0 on the cut surface.
/// r[i] = integral of (exact tangential gradient of v) . (P_h grad phi_i).
FieldVector ritz_projection(const Discretization& disc, const std::function<double(const Vec3&)>& v,
                            const std::function<Vec3(const Vec3&)>& tangential_grad_v);

/// Nodal interpolation: coefficients are v at the active vertices.
FieldVector nodal_interpolant(const Discretization& disc, const std::function<double(const Vec3&)>& v);

/// Uniform i.i.d. values in [-1, 1] per DOF from a seeded mt19937_64,
/// mapped to doubles deterministically (identical across platforms).
FieldVector random_initial_condition(const TraceSpace& space, std::uint64_t seed);

} // namespace surfch
