#pragma once

#include <optional>

#include "bvpforge/linsys.hpp"
#include "bvpforge/mesh.hpp"
#include "bvpforge/problem.hpp"
#include "bvpforge/trace.hpp"

namespace bvpforge {

/// Settings for a relaxation (finite-difference) solve. The initial guess
/// defaults to the straight line between the boundary values; for the
/// constant-slope variant the linearization coefficients stay frozen at
/// that initial iterate.
struct RelaxConfig {
    LinearizationVariant::Kind variant = LinearizationVariant::Kind::Newton;
    DScheme scheme = DScheme::Central;
    int n = 1001;
    double tol = 1e-10;  // stop when the residual max-norm falls below
    int max_iter = 100;
    std::optional<GridFunction> initial_guess;
};

struct RelaxReport {
    GridFunction final;
    IterationTrace trace;  // (k, residual max-norm, residual max-norm)
    bool converged = false;
    DominanceDiagnostic dominance;
};

/// One update u^{k+1} = u^k - L^{-1} G: assemble, Thomas solve, subtract.
/// The result satisfies both boundary values up to solver roundoff.
GridFunction relax_step(const ProblemSpec& spec, const RelaxConfig& config,
                        const GridFunction& u_k);

/// Iterates relax_step until the residual max-norm drops below tol or
/// max_iter updates were made. Residuals above 1e50 abort with
/// DivergedError.
RelaxReport relax_solve(const ProblemSpec& spec, const RelaxConfig& config);

}  // namespace bvpforge
