#include "bvpforge/relaxation.hpp"

#include <cmath>
#include <string>

#include "bvpforge/errors.hpp"

namespace bvpforge {

namespace {

constexpr double kDivergenceGuard = 1e50;

void validate_config(const RelaxConfig& config) {
    if (!(config.tol > 0.0)) throw ConfigError("relaxation: tol must be positive");
    if (config.max_iter < 1) throw ConfigError("relaxation: max_iter must be at least 1");
    if (config.n < 2) throw ConfigError("relaxation: n must be at least 2");
}

GridFunction initial_iterate(const ProblemSpec& spec, const RelaxConfig& config) {
    if (config.initial_guess) {
        const Mesh expected = make_mesh(spec.a, spec.b, config.n);
        if (!config.initial_guess->mesh.same_as(expected))
            throw ConfigError("relaxation: custom initial guess mesh does not match "
                              "(a, b, n)");
        return *config.initial_guess;
    }
    return linear_interpolant(make_mesh(spec.a, spec.b, config.n), spec.u_a, spec.u_b);
}

LinearizationVariant variant_for(const RelaxConfig& config, const GridFunction& frozen) {
    switch (config.variant) {
        case LinearizationVariant::Kind::Newton: return LinearizationVariant::newton();
        case LinearizationVariant::Kind::Picard: return LinearizationVariant::picard();
        case LinearizationVariant::Kind::ConstantSlope:
            return LinearizationVariant::constant_slope(frozen);
    }
    throw ConfigError("relaxation: invalid variant");
}

GridFunction apply_update(const ProblemSpec& spec, const RelaxConfig& config,
                          const LinearizationVariant& variant, const GridFunction& u_k) {
    const TridiagSystem sys = assemble(spec, config.scheme, variant, u_k);
    const std::vector<double> d = thomas_solve(sys);
    GridFunction next = u_k;
    for (int i = 0; i < u_k.mesh.n; ++i) next.values[i] = u_k.values[i] - d[i];
    return next;
}

}  // namespace

GridFunction relax_step(const ProblemSpec& spec, const RelaxConfig& config,
                        const GridFunction& u_k) {
    validate_config(config);
    // The stateless step freezes constant-slope coefficients at the
    // configured initial iterate, matching what relax_solve does.
    const LinearizationVariant variant =
        config.variant == LinearizationVariant::Kind::ConstantSlope
            ? LinearizationVariant::constant_slope(initial_iterate(spec, config))
            : variant_for(config, u_k);
    return apply_update(spec, config, variant, u_k);
}

RelaxReport relax_solve(const ProblemSpec& spec, const RelaxConfig& config) {
    validate(spec);
    validate_config(config);

    GridFunction u = initial_iterate(spec, config);
    const LinearizationVariant variant = variant_for(config, u);

    RelaxReport report;
    report.dominance = check_diag_dominance(spec, u.mesh, config.scheme);

    double res = max_norm(nonlinear_residual(spec, config.scheme, u).values);
    report.trace.add(0, res, res);
    bool converged = res <= config.tol;
    for (int k = 1; !converged && k <= config.max_iter; ++k) {
        if (res > kDivergenceGuard)
            throw DivergedError("relaxation diverged: residual max-norm " +
                                std::to_string(res) + " at iteration " +
                                std::to_string(k - 1));
        try {
            u = apply_update(spec, config, variant, u);
        } catch (const SolveError& e) {
            throw SolveError(std::string(e.what()) + " (iteration " + std::to_string(k) + ")");
        }
        res = max_norm(nonlinear_residual(spec, config.scheme, u).values);
        report.trace.add(k, res, res);
        converged = res <= config.tol;
    }
    report.final = std::move(u);
    report.converged = converged;
    return report;
}

}  // namespace bvpforge
