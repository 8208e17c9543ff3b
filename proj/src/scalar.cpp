#include "bvpforge/scalar.hpp"

#include <cmath>
#include <sstream>

#include "bvpforge/errors.hpp"

namespace bvpforge {

namespace {

const char* method_name(ScalarMethod m) {
    switch (m) {
        case ScalarMethod::Newton: return "newton";
        case ScalarMethod::Picard: return "picard";
        case ScalarMethod::ConstantSlope: return "constant-slope";
    }
    return "?";
}

double derivative(const ScalarProblem& p, double at) {
    if (p.fprime) return p.fprime(at);
    const double d = std::max(1e-6, 1e-6 * std::abs(at));
    return (p.f(at + d) - p.f(at - d)) / (2.0 * d);
}

double slope_for(const ScalarProblem& p, ScalarMethod method, double x_k) {
    switch (method) {
        case ScalarMethod::Newton: return derivative(p, x_k);
        case ScalarMethod::Picard:
            if (!p.m) throw ConfigError("picard method needs the fixed slope m");
            return *p.m;
        case ScalarMethod::ConstantSlope: return derivative(p, p.x0);
    }
    return 0.0;
}

}  // namespace

double scalar_step(const ScalarProblem& problem, ScalarMethod method, double x_k) {
    const double m_k = slope_for(problem, method, x_k);
    if (m_k == 0.0 || !std::isfinite(m_k)) {
        std::ostringstream os;
        os << method_name(method) << " step has slope m_k=" << m_k << " at x=" << x_k;
        throw SolveError(os.str());
    }
    return x_k - problem.f(x_k) / m_k;
}

ScalarResult scalar_solve(const ScalarProblem& problem, ScalarMethod method,
                          double tol, int max_iter) {
    if (!(tol > 0.0)) throw ConfigError("scalar_solve: tol must be positive");
    if (max_iter < 1) throw ConfigError("scalar_solve: max_iter must be at least 1");

    ScalarResult result;
    double x = problem.x0;
    for (int k = 0;; ++k) {
        const double res = problem.f(x);
        result.trace.add(k, x, res);
        if (std::abs(res) <= tol) {
            result.converged = true;
            break;
        }
        if (k >= max_iter) break;
        try {
            x = scalar_step(problem, method, x);
        } catch (const SolveError& e) {
            throw SolveError(std::string(e.what()) + " (iteration " + std::to_string(k) + ")");
        }
    }
    result.root = x;
    return result;
}

}  // namespace bvpforge
