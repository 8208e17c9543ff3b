#pragma once

#include <functional>
#include <optional>

#include "bvpforge/trace.hpp"

namespace bvpforge {

/// Scalar root problem F(x) = 0 with an initial guess. fprime may be null,
/// in which case Newton and constant-slope steps use a central numeric
/// derivative. m is the fixed Picard slope.
struct ScalarProblem {
    std::function<double(double)> f;
    std::function<double(double)> fprime;
    std::optional<double> m;
    double x0 = 0.0;
};

/// x_{k+1} = x_k - F(x_k)/m_k with m_k = F'(x_k) (Newton), the fixed m
/// (Picard), or F'(x_0) (constant-slope).
enum class ScalarMethod { Newton, Picard, ConstantSlope };

/// One update from x_k. Throws SolveError when the slope m_k vanishes.
double scalar_step(const ScalarProblem& problem, ScalarMethod method, double x_k);

struct ScalarResult {
    IterationTrace trace;  // records (k, x_k, F(x_k))
    bool converged = false;
    double root = 0.0;     // last iterate
};

/// Iterates until |F(x_k)| <= tol or max_iter steps were taken. The trace
/// always contains the starting point, so a start at a root gives a
/// single-record trace.
ScalarResult scalar_solve(const ScalarProblem& problem, ScalarMethod method,
                          double tol, int max_iter);

}  // namespace bvpforge
