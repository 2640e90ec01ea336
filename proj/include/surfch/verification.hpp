#pragma once

#include "surfch/solver.hpp"

namespace surfch {

/// Scalar with first and second ambient derivatives, propagated by
/// forward-mode arithmetic. Enough for polynomials and the piecewise
/// double-well derivative; used to differentiate the composite chemical
/// potential instead of expanding it by hand.
struct Jet {
    double v = 0.0;
    Vec3 g = Vec3::Zero();
    Mat3 H = Mat3::Zero();

    static Jet constant(double value)
    {
        Jet j;
        j.v = value;
        return j;
    }
};

std::array<Jet, 3> jet_coordinates(const Vec3& x);

inline Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.g + b.g, a.H + b.H}; }
inline Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.g - b.g, a.H - b.H}; }
inline Jet operator*(double s, const Jet& a) { return {s * a.v, s * a.g, s * a.H}; }
inline Jet operator+(const Jet& a, double s) { return {a.v + s, a.g, a.H}; }
inline Jet operator-(const Jet& a, double s) { return {a.v - s, a.g, a.H}; }

inline Jet operator*(const Jet& a, const Jet& b)
{
    Jet out;
    out.v = a.v * b.v;
    out.g = a.v * b.g + b.v * a.g;
    out.H = a.v * b.H + b.v * a.H + a.g * b.g.transpose() + b.g * a.g.transpose();
    return out;
}

/// df0 lifted to jets (branches on the point value).
Jet df0_jet(const Jet& c, const PotentialParams& p);

/// Space-time scalar field with analytic ambient derivatives.
struct AnalyticField {
    std::function<double(const Vec3&, double)> value;
    std::function<Vec3(const Vec3&, double)> gradient;
    std::function<Mat3(const Vec3&, double)> hessian;
    std::function<double(const Vec3&, double)> dt;
};

/// Tangential part of the ambient gradient, P grad f with P = I - n n^T.
Vec3 surface_gradient_ambient(const AnalyticField& f, const Vec3& x, double t, const Vec3& n_exact);

/// Surface Laplacian on a centered sphere via the ambient identity
///   lap_G f = lap f - H (n . grad f) - n^T (Hess f) n,
/// with n = x/|x| and total curvature H = 2/|x|. Throws at the origin.
double surface_laplacian_sphere(const AnalyticField& f, const Vec3& x, double t);

/// The exact pair on the unit sphere:
///   c*(x,t)  = 0.5 (1 - 0.8 exp(-0.4 t)) (x1 x2 + 1),
///   mu*      = df0(c*) + 6 eps^2 a(t) x1 x2,
/// where a(t) is the amplitude above. mu*'s derivatives come from jets.
struct ManufacturedSolution {
    AnalyticField c;
    AnalyticField mu;
    double epsilon = 0.1;
};
ManufacturedSolution manufactured_pair(double epsilon, const PotentialParams& p);

/// Forcing for the first equation, g1 = dc*/dt - mobility * lap_G mu*.
/// Throws when |c*| exceeds K at a queried point (the regularized branch
/// would change the manufactured formula). Only `value` and `dt` are set.
AnalyticField forcing_g1(const ManufacturedSolution& ms, double mobility, const PotentialParams& p);

/// L2(Gamma_h) distance between a discrete field and an exact field at time t.
double surface_l2_error(const Discretization& disc, const FieldVector& fh, const AnalyticField& f,
                        double t);

struct LevelErrors {
    double h = 0.0;
    double c_l2 = 0.0;     // final-time L2 error of c
    double mu_l2 = 0.0;    // final-time L2 error of mu
    double c_l2l2 = 0.0;   // time-averaged L2 error of c
    double mu_l2l2 = 0.0;  // time-averaged L2 error of mu
};

/// Per-level errors with h strictly decreasing; orders are recovered from
/// log ratios between consecutive levels.
struct ErrorReport {
    std::vector<LevelErrors> levels;

    static ErrorReport build(std::vector<LevelErrors> levels);

    /// Generalized order log(e_l / e_{l+1}) / log(h_l / h_{l+1}); equals the
    /// dyadic log2 ratio when h halves. which: 0 c_l2, 1 mu_l2, 2 c_l2l2, 3 mu_l2l2.
    double eoc(std::size_t transition, int which) const;
};

struct ConvergenceSetup {
    Box box;
    double t_final = 0.1;
    double c_tau = 0.5;       // tau = c_tau * h^2
    double epsilon = 0.1;
    double beta_s = 2.0;
    double mobility = 1.0;
    PotentialParams potential{1.1};
    bool ritz_ic = true;      // false: nodal interpolation of c*(0)
};

/// Runs the manufactured-solution problem on one mesh level and returns the
/// four error norms. The step count is the smallest N with N * tau >= T.
LevelErrors run_convergence_level(const ConvergenceSetup& setup, int cells_per_axis);

/// Full study over a list of target mesh sizes (cells_per_axis = round(edge/h)).
ErrorReport converge_study(const ConvergenceSetup& setup, const std::vector<double>& target_h);

} // namespace surfch
