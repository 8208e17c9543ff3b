#include "bvpforge/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bvpforge/errors.hpp"

namespace bvpforge {

namespace {

const char* method_name(ShootMethodKind m) {
    switch (m) {
        case ShootMethodKind::Newton: return "shoot-newton";
        case ShootMethodKind::Picard: return "shoot-picard";
        case ShootMethodKind::ConstantSlope: return "shoot-slope";
        case ShootMethodKind::NewtonDerivativeFree: return "shoot-newton-df";
    }
    return "?";
}

void validate_config(const ProblemSpec& spec, const ShootConfig& config) {
    if (!(config.tol > 0.0)) throw ConfigError("shooting: tol must be positive");
    if (config.max_iter < 1) throw ConfigError("shooting: max_iter must be at least 1");
    if (config.n < 2) throw ConfigError("shooting: n must be at least 2");
    if (!(config.zero_v_threshold > 0.0))
        throw ConfigError("shooting: zero_v_threshold must be positive");
    if (config.method == ShootMethodKind::NewtonDerivativeFree && spec.f.depends_on_v())
        throw ConfigError(
            "shoot-newton-df requires f = f(u): the trajectory-reconstructed "
            "diagonal is only valid when f does not reference v (problem '" +
            spec.name + "')");
}

}  // namespace

double spi_step_formula(const ProblemSpec& spec, const ShootConfig& config,
                        const ShootState& state) {
    double l = 0.0;
    switch (config.method) {
        case ShootMethodKind::Picard:
            l = spec.b - spec.a;
            break;
        case ShootMethodKind::Newton:
            if (!state.sens)
                throw ConfigError("shoot-newton formula step needs the sensitivity pair");
            l = state.sens->z.back();
            break;
        case ShootMethodKind::ConstantSlope:
            l = state.denom;  // z(b) of the k = 0 shot, frozen by the driver
            break;
        case ShootMethodKind::NewtonDerivativeFree:
            throw ConfigError("shoot-newton-df has no formula path; use the projection");
    }
    if (std::abs(l) < 1e-12) {
        std::ostringstream os;
        os << method_name(config.method) << ": singular slope update, l_k = " << l
           << " at iteration " << state.k;
        throw SolveError(os.str());
    }
    return state.v_a - state.end_mismatch / l;
}

std::vector<double> assemble_df_diagonal(const ShootState& state,
                                         double zero_v_threshold) {
    const std::vector<double>& v = state.traj.v;
    const int n = state.traj.mesh.n;
    std::vector<double> diag(n, 1.0);

    const double vmax = max_norm(v);
    const double cutoff = zero_v_threshold * vmax;

    std::vector<int> valid;
    valid.reserve(n);
    for (int i = 1; i < n - 1; ++i) {
        if (std::abs(v[i]) > cutoff) {
            diag[i] = -(v[i - 1] + v[i + 1]) / v[i];
            valid.push_back(i);
        }
    }
    if (static_cast<int>(valid.size()) == n - 2) return diag;
    if (valid.size() < 2)
        throw SolveError(
            "shoot-newton-df: fewer than two usable diagonal entries (trajectory "
            "derivative is near zero almost everywhere); use shoot-newton instead");

    for (int i = 1; i < n - 1; ++i) {
        if (std::abs(v[i]) > cutoff) continue;
        // Nearest valid entries on each side: valid is sorted, so find the
        // first element past i.
        const auto split =
            std::lower_bound(valid.begin(), valid.end(), i) - valid.begin();
        const int n_left = static_cast<int>(split);
        const int n_right = static_cast<int>(valid.size()) - n_left;

        int i1 = -1, i2 = -1;
        if (n_left >= 2 && (n_right < 2 || i - valid[n_left - 1] <= valid[n_left] - i)) {
            i1 = valid[n_left - 2];
            i2 = valid[n_left - 1];
        } else if (n_right >= 2) {
            i1 = valid[n_left];
            i2 = valid[n_left + 1];
        } else if (n_left >= 1 && n_right >= 1) {
            i1 = valid[n_left - 1];  // straddle
            i2 = valid[n_left];
        } else {
            throw SolveError("shoot-newton-df: cannot extrapolate diagonal entry " +
                             std::to_string(i));
        }
        const double t = static_cast<double>(i - i1) / (i2 - i1);
        diag[i] = diag[i1] + t * (diag[i2] - diag[i1]);
    }
    return diag;
}

GridFunction project_trajectory(const ProblemSpec& spec, const ShootConfig& config,
                                const ShootState& state) {
    const Mesh& mesh = state.traj.mesh;
    const int n = mesh.n;
    GridFunction traj_grid{mesh, state.traj.u};

    TridiagSystem sys;
    if (config.method == ShootMethodKind::NewtonDerivativeFree) {
        sys.diag = assemble_df_diagonal(state, config.zero_v_threshold);
        sys.sub.assign(n, 0.0);
        sys.sup.assign(n, 0.0);
        for (int i = 1; i < n - 1; ++i) {
            sys.sub[i] = 1.0;
            sys.sup[i] = 1.0;
        }
        sys.rhs = config.rhs_mode == RhsMode::Endpoint
                      ? endpoint_rhs(state.end_mismatch, n)
                      : nonlinear_residual(spec, config.scheme, traj_grid).values;
    } else {
        LinearizationVariant variant = LinearizationVariant::newton();
        if (config.method == ShootMethodKind::Picard)
            variant = LinearizationVariant::picard();
        else if (config.method == ShootMethodKind::ConstantSlope)
            variant = LinearizationVariant::constant_slope(
                state.frozen ? *state.frozen : traj_grid);
        sys = assemble(spec, config.scheme, variant, traj_grid);
        if (config.rhs_mode == RhsMode::Endpoint)
            sys.rhs = endpoint_rhs(state.end_mismatch, n);
    }

    const std::vector<double> y = thomas_solve(sys);
    GridFunction proj{mesh, std::vector<double>(n)};
    for (int i = 0; i < n; ++i) proj.values[i] = state.traj.u[i] - y[i];
    return proj;
}

SpiResult spi_solve(const ProblemSpec& spec, const ShootConfig& config_in) {
    validate(spec);
    ShootConfig config = config_in;
    validate_config(spec, config);
    if (config.method == ShootMethodKind::NewtonDerivativeFree)
        config.path = SpiPath::Projection;

    const Mesh mesh = make_mesh(spec.a, spec.b, config.n);

    SpiResult result;
    ShootState& state = result.state;
    state.v_a = config.v_a0;

    for (int k = 0;; ++k) {
        state.k = k;
        state.traj = shoot(spec, mesh, state.v_a, config.integrator);
        state.end_mismatch = state.traj.u.back() - spec.u_b;
        result.trace.add(k, state.v_a, state.end_mismatch);
        if (std::abs(state.end_mismatch) <= config.tol) {
            result.converged = true;
            break;
        }
        if (k >= config.max_iter) break;

        const bool freeze_now =
            k == 0 && (config.method == ShootMethodKind::ConstantSlope);
        if (config.path == SpiPath::Formula) {
            if (config.method == ShootMethodKind::Newton) {
                state.sens = shoot_sensitivity(spec, mesh, state.traj, config.integrator);
                state.denom = state.sens->z.back();
            } else if (config.method == ShootMethodKind::Picard) {
                state.denom = spec.b - spec.a;
            } else if (freeze_now) {
                state.sens = shoot_sensitivity(spec, mesh, state.traj, config.integrator);
                state.denom = state.sens->z.back();
            }
            state.v_a = spi_step_formula(spec, config, state);
        } else {
            if (freeze_now)
                state.frozen = GridFunction{mesh, state.traj.u};
            const GridFunction proj = project_trajectory(spec, config, state);
            state.v_a = (proj.values[1] - proj.values[0]) / mesh.h;
        }
    }
    return result;
}

}  // namespace bvpforge
