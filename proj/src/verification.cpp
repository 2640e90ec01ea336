#include "surfch/verification.hpp"

#include <cmath>
#include <sstream>

namespace surfch {

std::array<Jet, 3> jet_coordinates(const Vec3& x)
{
    std::array<Jet, 3> out;
    for (int k = 0; k < 3; ++k) {
        out[static_cast<std::size_t>(k)].v = x[k];
        out[static_cast<std::size_t>(k)].g = Vec3::Unit(k);
    }
    return out;
}

Jet df0_jet(const Jet& c, const PotentialParams& p)
{
    const double K = p.K;
    if (c.v > K)
        return p.lipschitz * c - 2.0 * K * K * K;
    if (c.v < -K)
        return p.lipschitz * c + 2.0 * K * K * K;
    return c * c * c - c;
}

Vec3 surface_gradient_ambient(const AnalyticField& f, const Vec3& x, double t, const Vec3& n_exact)
{
    const Vec3 grad = f.gradient(x, t);
    return grad - n_exact.dot(grad) * n_exact;
}

double surface_laplacian_sphere(const AnalyticField& f, const Vec3& x, double t)
{
    const double r = x.norm();
    if (r == 0.0)
        throw std::invalid_argument("surface_laplacian_sphere: undefined at the origin");
    const Vec3 n = x / r;
    const double curvature = 2.0 / r;
    const Vec3 grad = f.gradient(x, t);
    const Mat3 hess = f.hessian(x, t);
    return hess.trace() - curvature * n.dot(grad) - n.dot(hess * n);
}

namespace {

inline double amplitude(double t) { return 0.5 * (1.0 - 0.8 * std::exp(-0.4 * t)); }
inline double amplitude_dt(double t) { return 0.16 * std::exp(-0.4 * t); }

} // namespace

ManufacturedSolution manufactured_pair(double epsilon, const PotentialParams& p)
{
    ManufacturedSolution ms;
    ms.epsilon = epsilon;

    ms.c.value = [](const Vec3& x, double t) { return amplitude(t) * (x[0] * x[1] + 1.0); };
    ms.c.gradient = [](const Vec3& x, double t) {
        return Vec3(amplitude(t) * x[1], amplitude(t) * x[0], 0.0);
    };
    ms.c.hessian = [](const Vec3&, double t) {
        Mat3 h = Mat3::Zero();
        h(0, 1) = h(1, 0) = amplitude(t);
        return h;
    };
    ms.c.dt = [](const Vec3& x, double t) { return amplitude_dt(t) * (x[0] * x[1] + 1.0); };

    const double eps2 = epsilon * epsilon;
    const auto mu_jet = [eps2, p](const Vec3& x, double t) {
        const auto xs = jet_coordinates(x);
        const Jet x1x2 = xs[0] * xs[1];
        const Jet conc = amplitude(t) * (x1x2 + 1.0);
        return df0_jet(conc, p) + (6.0 * eps2 * amplitude(t)) * x1x2;
    };
    ms.mu.value = [mu_jet](const Vec3& x, double t) { return mu_jet(x, t).v; };
    ms.mu.gradient = [mu_jet](const Vec3& x, double t) { return mu_jet(x, t).g; };
    ms.mu.hessian = [mu_jet](const Vec3& x, double t) { return mu_jet(x, t).H; };
    ms.mu.dt = [eps2, p](const Vec3& x, double t) {
        const double s = x[0] * x[1];
        const double conc = amplitude(t) * (s + 1.0);
        const double conc_dt = amplitude_dt(t) * (s + 1.0);
        return ddf0(conc, p) * conc_dt + 6.0 * eps2 * amplitude_dt(t) * s;
    };
    return ms;
}

AnalyticField forcing_g1(const ManufacturedSolution& ms, double mobility, const PotentialParams& p)
{
    const AnalyticField c = ms.c;
    const AnalyticField mu = ms.mu;
    const double K = p.K;

    AnalyticField g;
    g.value = [c, mu, mobility, K](const Vec3& x, double t) {
        const double conc = c.value(x, t);
        if (std::abs(conc) > K) {
            std::ostringstream msg;
            msg << "forcing_g1: |c*| = " << std::abs(conc) << " exceeds K = " << K
                << "; the manufactured formula assumes the quartic branch";
            throw std::runtime_error(msg.str());
        }
        return c.dt(x, t) - mobility * surface_laplacian_sphere(mu, x, t);
    };
    g.dt = {};
    return g;
}

double surface_l2_error(const Discretization& disc, const FieldVector& fh, const AnalyticField& f,
                        double t)
{
    if (fh.coeffs.size() != disc.space.n_dof())
        throw std::invalid_argument("surface_l2_error: coefficient size mismatch");

    const TriangleRule& rule = triangle_rule(disc.cut.quadrature_degree);
    const std::size_t nq = rule.points.size();
    double accum = 0.0;
    for (std::size_t e = 0; e < disc.cut.tris.size(); ++e) {
        const CutTriangle& ct = disc.cut.tris[e];
        const BandTet& bt = disc.band.tets[static_cast<std::size_t>(ct.band_tet)];
        const auto& dofs = disc.space.tet_dofs(ct.band_tet);
        for (std::size_t q = 0; q < nq; ++q) {
            const Vec3& x = disc.cut.qpoints[e * nq + q];
            const double w = disc.cut.qweights[e * nq + q];
            const Vec3 d = x - bt.tet.coords[0];
            double value = 0.0;
            for (int a = 0; a < 4; ++a) {
                const double phi =
                    (a == 0 ? 1.0 : 0.0) + bt.basis_grad[static_cast<std::size_t>(a)].dot(d);
                value += fh.coeffs[dofs[static_cast<std::size_t>(a)]] * phi;
            }
            const double diff = value - f.value(x, t);
            accum += w * diff * diff;
        }
    }
    return std::sqrt(accum);
}

ErrorReport ErrorReport::build(std::vector<LevelErrors> levels)
{
    for (std::size_t l = 1; l < levels.size(); ++l)
        if (!(levels[l].h < levels[l - 1].h))
            throw std::invalid_argument("ErrorReport: mesh sizes must strictly decrease");
    return ErrorReport{std::move(levels)};
}

double ErrorReport::eoc(std::size_t transition, int which) const
{
    if (transition + 1 >= levels.size())
        throw std::invalid_argument("ErrorReport: transition index out of range");
    const LevelErrors& a = levels[transition];
    const LevelErrors& b = levels[transition + 1];
    const auto pick = [which](const LevelErrors& e) {
        switch (which) {
        case 0: return e.c_l2;
        case 1: return e.mu_l2;
        case 2: return e.c_l2l2;
        case 3: return e.mu_l2l2;
        default: throw std::invalid_argument("ErrorReport: invalid norm selector");
        }
    };
    return std::log(pick(a) / pick(b)) / std::log(a.h / b.h);
}

LevelErrors run_convergence_level(const ConvergenceSetup& setup, int cells_per_axis)
{
    const LevelSet ls = sphere_levelset(1.0);
    const Discretization disc = discretize(ls, setup.box, cells_per_axis);
    const double h = disc.mesh.h();

    const ManufacturedSolution ms = manufactured_pair(setup.epsilon, setup.potential);
    const AnalyticField g1 = forcing_g1(ms, setup.mobility, setup.potential);

    const double tau_target = setup.c_tau * h * h;
    const int steps = static_cast<int>(std::ceil(setup.t_final / tau_target - 1e-9));
    const double tau = setup.t_final / steps;

    SchemeParams scheme;
    scheme.epsilon = setup.epsilon;
    scheme.mobility = setup.mobility;
    scheme.beta_s = setup.beta_s;
    scheme.schedule = {{setup.t_final, tau}};

    CahnHilliardStepper stepper(disc, scheme, setup.potential);

    ChState state;
    if (setup.ritz_ic) {
        const auto value0 = [&ms](const Vec3& x) { return ms.c.value(x, 0.0); };
        const auto grad0 = [&ms](const Vec3& x) {
            return surface_gradient_ambient(ms.c, x, 0.0, Vec3(x.normalized()));
        };
        state.c = ritz_projection(disc, value0, grad0);
    } else {
        state.c = nodal_interpolant(disc, [&ms](const Vec3& x) { return ms.c.value(x, 0.0); });
    }
    state.c.role = FieldRole::concentration;
    state.mu = FieldVector{Eigen::VectorXd::Zero(disc.space.n_dof()), FieldRole::potential};

    const std::function<Eigen::VectorXd(double)> forcing = [&](double t) {
        return assemble_forcing(disc.space, disc.cut, disc.band, g1.value, t);
    };

    double c_sq_sum = 0.0, mu_sq_sum = 0.0, prev_t = 0.0;
    const StepMonitor monitor = [&](const ChState& s) {
        if (s.step == 0) {
            prev_t = s.t;
            return;
        }
        const double dt = s.t - prev_t;
        prev_t = s.t;
        const double ec = surface_l2_error(disc, s.c, ms.c, s.t);
        const double emu = surface_l2_error(disc, s.mu, ms.mu, s.t);
        c_sq_sum += dt * ec * ec;
        mu_sq_sum += dt * emu * emu;
    };

    state = run(stepper, std::move(state), &forcing, monitor);

    LevelErrors out;
    out.h = h;
    out.c_l2 = surface_l2_error(disc, state.c, ms.c, state.t);
    out.mu_l2 = surface_l2_error(disc, state.mu, ms.mu, state.t);
    out.c_l2l2 = std::sqrt(c_sq_sum / setup.t_final);
    out.mu_l2l2 = std::sqrt(mu_sq_sum / setup.t_final);
    return out;
}

ErrorReport converge_study(const ConvergenceSetup& setup, const std::vector<double>& target_h)
{
    std::vector<LevelErrors> levels;
    levels.reserve(target_h.size());
    const double edge = setup.box.edge();
    for (double h : target_h) {
        const int n = std::max(1, static_cast<int>(std::lround(edge / h)));
        levels.push_back(run_convergence_level(setup, n));
    }
    return ErrorReport::build(std::move(levels));
}

} // namespace surfch
