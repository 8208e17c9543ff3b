#pragma once

#include <optional>

#include "bvpforge/ivp.hpp"
#include "bvpforge/linsys.hpp"
#include "bvpforge/mesh.hpp"
#include "bvpforge/problem.hpp"
#include "bvpforge/trace.hpp"

namespace bvpforge {

/// Initial-slope update rule of the shooting-projection iteration.
/// NewtonDerivativeFree reconstructs the Newton system diagonal from the
/// trajectory itself and therefore always goes through the projection path.
enum class ShootMethodKind { Newton, Picard, ConstantSlope, NewtonDerivativeFree };

/// How the corrected slope is obtained: Formula applies
/// v_a^{k+1} = v_a^k - E_k / l_k directly; Projection relaxes the shooting
/// trajectory through the linearized system and reads the slope off its
/// first mesh interval.
enum class SpiPath { Formula, Projection };

/// Right-hand side used by the projection solve: Endpoint puts the end
/// mismatch in the last component and zeros elsewhere (exact for an exact
/// trajectory); Residual uses the full discrete residual, which also picks
/// up the integrator's truncation error.
enum class RhsMode { Endpoint, Residual };

struct ShootConfig {
    ShootMethodKind method = ShootMethodKind::Newton;
    SpiPath path = SpiPath::Formula;
    Integrator integrator = Integrator::PaperEuler;
    DScheme scheme = DScheme::Central;  // projection assembly only
    RhsMode rhs_mode = RhsMode::Endpoint;
    int n = 1001;
    double v_a0 = 0.0;
    double tol = 1e-3;  // on |E_k|
    int max_iter = 100;
    double zero_v_threshold = 1e-8;  // relative, derivative-free diagonal guard
};

/// State after shooting with the current slope. denom is the update
/// denominator l_k (for the constant-slope method it stays frozen at its
/// k = 0 value); frozen is the reference iterate for constant-slope
/// projection coefficients.
struct ShootState {
    int k = 0;
    double v_a = 0.0;
    TrajectoryPair traj;
    std::optional<SensitivityPair> sens;
    double end_mismatch = 0.0;  // E_k = u(b; v_a^k) - u_b
    double denom = 0.0;         // l_k
    std::optional<GridFunction> frozen;
};

/// Closed-form slope update v_a^{k+1} = v_a^k - E_k / l_k with
/// l_k = z(b) (Newton), b - a (Picard), or the frozen z(b) from k = 0
/// (constant-slope). Throws SolveError when |l_k| < 1e-12.
double spi_step_formula(const ProblemSpec& spec, const ShootConfig& config,
                        const ShootState& state);

/// Derivative-free system diagonal, reconstructed from the trajectory:
/// interior entries -(v_{i-1} + v_{i+1}) / v_i, boundary entries 1.
/// Entries whose |v_i| falls below zero_v_threshold * max|v| are linearly
/// extrapolated from the two nearest valid interior entries on the same
/// side when possible, else interpolated across. Throws SolveError when
/// fewer than two valid entries exist (the formula path still works then).
std::vector<double> assemble_df_diagonal(const ShootState& state,
                                         double zero_v_threshold);

/// Relaxes the shooting trajectory through the linearized system:
/// u^{k+1} = u^k - L^{-1} G with G per config.rhs_mode and L per the
/// method (Table-of-variants coefficients, or the derivative-free
/// diagonal). The result satisfies both boundary values up to solver
/// roundoff.
GridFunction project_trajectory(const ProblemSpec& spec, const ShootConfig& config,
                                const ShootState& state);

struct SpiResult {
    ShootState state;
    IterationTrace trace;  // (k, v_a^k, E_k)
    bool converged = false;
};

/// The shooting-projection iteration: shoot, correct the slope (formula or
/// projection), repeat until |E_k| <= tol or max_iter corrections.
SpiResult spi_solve(const ProblemSpec& spec, const ShootConfig& config);

}  // namespace bvpforge
