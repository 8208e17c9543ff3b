#include "bvpforge/ivp.hpp"

#include <cmath>
#include <sstream>

#include "bvpforge/errors.hpp"

namespace bvpforge {

namespace {

constexpr double kBlowupGuard = 1e100;

[[noreturn]] void diverged(const char* what, int i, double x, double a, double b) {
    std::ostringstream os;
    os << "trajectory diverged: |" << what << "| > 1e100 at step " << i << " (x=" << x
       << " of [" << a << "," << b << "])";
    throw DivergedError(os.str());
}

[[noreturn]] void step_error(const EvalError& e, int i, double x, double u, double v) {
    std::ostringstream os;
    os << e.what() << " [integration step " << i << ", x=" << x << ", u=" << u
       << ", v=" << v << "]";
    throw EvalError(os.str());
}

void check_finite(double u, double v, int i, const Mesh& mesh) {
    if (!(std::abs(u) <= kBlowupGuard)) diverged("u", i, mesh.x[i], mesh.a, mesh.b);
    if (!(std::abs(v) <= kBlowupGuard)) diverged("v", i, mesh.x[i], mesh.a, mesh.b);
}

// Coefficient samples along a stored trajectory, linearly interpolated for
// RK4 stage abscissae that fall between mesh points.
struct FrozenCoeffs {
    const ProblemSpec& spec;
    const TrajectoryPair& src;

    double q_at(double x, int left) const {
        const auto [uu, vv] = interp(x, left);
        return eval_q(spec, x, uu, vv);
    }
    double p_at(double x, int left) const {
        const auto [uu, vv] = interp(x, left);
        return eval_p(spec, x, uu, vv);
    }

private:
    std::pair<double, double> interp(double x, int left) const {
        const Mesh& m = src.mesh;
        const int r = std::min(left + 1, m.n - 1);
        if (r == left) return {src.u[left], src.v[left]};
        const double t = (x - m.x[left]) / m.h;
        return {src.u[left] + t * (src.u[r] - src.u[left]),
                src.v[left] + t * (src.v[r] - src.v[left])};
    }
};

}  // namespace

TrajectoryPair shoot(const ProblemSpec& spec, const Mesh& mesh, double v_a,
                     Integrator integrator) {
    const int n = mesh.n;
    const double h = mesh.h;
    TrajectoryPair traj{mesh, std::vector<double>(n), std::vector<double>(n)};
    traj.u[0] = spec.u_a;
    traj.v[0] = v_a;
    check_finite(traj.u[0], traj.v[0], 0, mesh);

    if (integrator == Integrator::PaperEuler) {
        for (int i = 1; i < n; ++i) {
            traj.u[i] = traj.u[i - 1] + h * traj.v[i - 1];
            try {
                traj.v[i] =
                    traj.v[i - 1] + h * eval_f(spec, mesh.x[i], traj.u[i], traj.v[i - 1]);
            } catch (const EvalError& e) {
                step_error(e, i, mesh.x[i], traj.u[i], traj.v[i - 1]);
            }
            check_finite(traj.u[i], traj.v[i], i, mesh);
        }
        return traj;
    }

    // Classical RK4 on (u' = v, v' = f).
    for (int i = 1; i < n; ++i) {
        const double x0 = mesh.x[i - 1];
        const double u0 = traj.u[i - 1];
        const double v0 = traj.v[i - 1];
        try {
            const double k1u = v0;
            const double k1v = eval_f(spec, x0, u0, v0);
            const double k2u = v0 + 0.5 * h * k1v;
            const double k2v = eval_f(spec, x0 + 0.5 * h, u0 + 0.5 * h * k1u, v0 + 0.5 * h * k1v);
            const double k3u = v0 + 0.5 * h * k2v;
            const double k3v = eval_f(spec, x0 + 0.5 * h, u0 + 0.5 * h * k2u, v0 + 0.5 * h * k2v);
            const double k4u = v0 + h * k3v;
            const double k4v = eval_f(spec, x0 + h, u0 + h * k3u, v0 + h * k3v);
            traj.u[i] = u0 + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            traj.v[i] = v0 + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        } catch (const EvalError& e) {
            step_error(e, i, x0, u0, v0);
        }
        check_finite(traj.u[i], traj.v[i], i, mesh);
    }
    return traj;
}

SensitivityPair shoot_sensitivity(const ProblemSpec& spec, const Mesh& mesh,
                                  const TrajectoryPair& coeff_source,
                                  Integrator integrator, double slope_init) {
    if (!mesh.same_as(coeff_source.mesh))
        throw ConfigError("shoot_sensitivity: coefficient source is on a different mesh");
    const int n = mesh.n;
    const double h = mesh.h;
    SensitivityPair sens{mesh, std::vector<double>(n), std::vector<double>(n)};
    sens.z[0] = 0.0;
    sens.w[0] = slope_init;

    if (integrator == Integrator::PaperEuler) {
        for (int i = 1; i < n; ++i) {
            sens.z[i] = sens.z[i - 1] + h * sens.w[i - 1];
            double qi = 0.0, pi = 0.0;
            try {
                qi = eval_q(spec, mesh.x[i], coeff_source.u[i], coeff_source.v[i - 1]);
                pi = eval_p(spec, mesh.x[i], coeff_source.u[i], coeff_source.v[i - 1]);
            } catch (const EvalError& e) {
                step_error(e, i, mesh.x[i], coeff_source.u[i], coeff_source.v[i - 1]);
            }
            sens.w[i] = sens.w[i - 1] + h * (qi * sens.z[i] + pi * sens.w[i - 1]);
            if (!(std::abs(sens.z[i]) <= kBlowupGuard) ||
                !(std::abs(sens.w[i]) <= kBlowupGuard))
                diverged("z", i, mesh.x[i], mesh.a, mesh.b);
        }
        return sens;
    }

    const FrozenCoeffs coeffs{spec, coeff_source};
    for (int i = 1; i < n; ++i) {
        const double x0 = mesh.x[i - 1];
        const double z0 = sens.z[i - 1];
        const double w0 = sens.w[i - 1];
        const double xm = x0 + 0.5 * h;
        const double x1 = mesh.x[i];
        try {
            const double q0 = coeffs.q_at(x0, i - 1), p0 = coeffs.p_at(x0, i - 1);
            const double qm = coeffs.q_at(xm, i - 1), pm = coeffs.p_at(xm, i - 1);
            const double q1 = coeffs.q_at(x1, i - 1), p1 = coeffs.p_at(x1, i - 1);
            const double k1z = w0;
            const double k1w = q0 * z0 + p0 * w0;
            const double k2z = w0 + 0.5 * h * k1w;
            const double k2w = qm * (z0 + 0.5 * h * k1z) + pm * (w0 + 0.5 * h * k1w);
            const double k3z = w0 + 0.5 * h * k2w;
            const double k3w = qm * (z0 + 0.5 * h * k2z) + pm * (w0 + 0.5 * h * k2w);
            const double k4z = w0 + h * k3w;
            const double k4w = q1 * (z0 + h * k3z) + p1 * (w0 + h * k3w);
            sens.z[i] = z0 + (h / 6.0) * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
            sens.w[i] = w0 + (h / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        } catch (const EvalError& e) {
            step_error(e, i, x0, coeff_source.u[i - 1], coeff_source.v[i - 1]);
        }
        if (!(std::abs(sens.z[i]) <= kBlowupGuard) ||
            !(std::abs(sens.w[i]) <= kBlowupGuard))
            diverged("z", i, mesh.x[i], mesh.a, mesh.b);
    }
    return sens;
}

}  // namespace bvpforge
