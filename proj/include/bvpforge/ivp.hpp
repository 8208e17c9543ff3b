#pragma once

#include <vector>

#include "bvpforge/mesh.hpp"
#include "bvpforge/problem.hpp"

namespace bvpforge {

/// Integrators for the first-order system u' = v, v' = f(x, u, v).
///
/// PaperEuler performs, for each step in order,
///     u_i = u_{i-1} + h*v_{i-1}
///     v_i = v_{i-1} + h*f(x_i, u_i, v_{i-1})
/// i.e. f sees the new u, the old v and the right-end abscissa. This
/// semi-updated ordering is what makes iteration tables reproducible
/// digit for digit; textbook explicit Euler would evaluate f at
/// (x_{i-1}, u_{i-1}, v_{i-1}).
enum class Integrator { PaperEuler, RK4 };

/// Shooting trajectory u(x; v_a) and its derivative v = u'.
struct TrajectoryPair {
    Mesh mesh;
    std::vector<double> u;
    std::vector<double> v;
};

/// Sensitivity z = du/dv_a and w = z' with z(a) = 0, z'(a) = 1.
struct SensitivityPair {
    Mesh mesh;
    std::vector<double> z;
    std::vector<double> w;
};

/// Integrates the IVP from (u_a, v_a). Aborts with DivergedError when an
/// iterate exceeds 1e100 in magnitude; expression domain errors are
/// rethrown with the step index and arguments.
TrajectoryPair shoot(const ProblemSpec& spec, const Mesh& mesh, double v_a,
                     Integrator integrator);

/// Integrates the linearized equation z'' = q(x) z + p(x) z' with the
/// coefficients frozen along coeff_source. With PaperEuler the update is
///     z_i = z_{i-1} + h*w_{i-1}
///     w_i = w_{i-1} + h*(q_i*z_i + p_i*w_{i-1})
/// where q_i, p_i are evaluated at (x_i, u_i, v_{i-1}) of coeff_source —
/// the same argument pattern the trajectory integration uses. slope_init
/// replaces the standard initial slope w(a) = 1 (scaling diagnostics only).
SensitivityPair shoot_sensitivity(const ProblemSpec& spec, const Mesh& mesh,
                                  const TrajectoryPair& coeff_source,
                                  Integrator integrator, double slope_init = 1.0);

}  // namespace bvpforge
