#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bvpforge/expr.hpp"

namespace bvpforge {

/// A two-point boundary value problem u'' = f(x, u, u') on [a, b] with
/// u(a) = u_a, u(b) = u_b. The partials q = df/du and p = df/dv are
/// optional; when absent the evaluators fall back to central finite
/// differences. p_bound is the user-supplied upper bound on |p| used by
/// the mesh-size diagnostic.
///
/// Immutable after construction; evaluation is reentrant.
struct ProblemSpec {
    std::string name;
    double a = 0.0;
    double b = 1.0;
    double u_a = 0.0;
    double u_b = 0.0;
    Expr f;
    std::optional<Expr> dfdu;      // q
    std::optional<Expr> dfdv;      // p
    std::optional<double> p_bound;
};

/// Throws ConfigError unless b > a and f is non-empty.
void validate(const ProblemSpec& spec);

double eval_f(const ProblemSpec& spec, double x, double u, double v);

/// Analytic partial when supplied, otherwise a central difference with
/// step max(1e-6, 1e-6*|u|) (resp. |v|).
double eval_q(const ProblemSpec& spec, double x, double u, double v);
double eval_p(const ProblemSpec& spec, double x, double u, double v);

/// Registry of built-in problems: "cube" (u'' = u^3, u(0)=1/2, u(1)=1),
/// "cube-no-derivs" (same without analytic partials), "linear" (u'' = 0).
/// Unknown names raise ConfigError listing the registry.
ProblemSpec builtin_problem(const std::string& name);
std::vector<std::string> builtin_problem_names();

/// Loads a problem from a JSON file with keys a, b, ua, ub, f and optional
/// dfdu, dfdv, p_bound. Malformed JSON or expressions raise ParseError;
/// semantic violations raise ConfigError.
ProblemSpec load_problem_file(const std::string& path);

}  // namespace bvpforge
