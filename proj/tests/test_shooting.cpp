#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bvpforge/errors.hpp"
#include "bvpforge/shooting.hpp"
#include "oracles.hpp"

using namespace bvpforge;

namespace {

struct PaperRow {
    double v_a;
    double E;
};

// Reference runs on the cube problem, n = 1001, v_a0 = 0, tol = 1e-3.
constexpr PaperRow kNewtonRows[3] = {
    {0.0, -0.433349035739307},
    {0.379948530223661, 0.026009489270876},
    {0.359783026933729, 0.000100006717963},
};
constexpr PaperRow kDfRows[3] = {
    {0.0, -0.433349035739307},
    {0.379942276669709, 0.026001423439514},
    {0.359786457564626, 0.000104397665347},
};

ShootConfig paper_config(ShootMethodKind method) {
    ShootConfig config;
    config.method = method;
    config.n = 1001;
    config.v_a0 = 0.0;
    config.tol = 1e-3;
    return config;
}

ShootState state_at(const ProblemSpec& spec, const ShootConfig& config, double v_a) {
    ShootState state;
    state.v_a = v_a;
    state.traj = shoot(spec, make_mesh(spec.a, spec.b, config.n), v_a, config.integrator);
    state.end_mismatch = state.traj.u.back() - spec.u_b;
    return state;
}

}  // namespace

TEST_CASE("spi_solve: Newton formula path reproduces the reference table") {
    const ProblemSpec cube = builtin_problem("cube");
    const SpiResult r = spi_solve(cube, paper_config(ShootMethodKind::Newton));
    CHECK(r.converged);
    REQUIRE(r.trace.size() == 3);
    for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(r.trace.records[k].value - kNewtonRows[k].v_a) <= 1e-12);
        CHECK(std::abs(r.trace.records[k].residual - kNewtonRows[k].E) <= 1e-12);
    }
}

TEST_CASE("spi_solve: derivative-free projection reproduces its table") {
    const ProblemSpec cube = builtin_problem("cube");
    const SpiResult r =
        spi_solve(cube, paper_config(ShootMethodKind::NewtonDerivativeFree));
    CHECK(r.converged);
    REQUIRE(r.trace.size() == 3);
    for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(r.trace.records[k].value - kDfRows[k].v_a) <= 1e-10);
        CHECK(std::abs(r.trace.records[k].residual - kDfRows[k].E) <= 1e-10);
    }
    // Works equally without analytic partials: only f is evaluated.
    const SpiResult nd = spi_solve(builtin_problem("cube-no-derivs"),
                                   paper_config(ShootMethodKind::NewtonDerivativeFree));
    REQUIRE(nd.trace.size() == 3);
    for (int k = 0; k < 3; ++k)
        CHECK(nd.trace.records[k].value == r.trace.records[k].value);
}

TEST_CASE("spi_step_formula: E = 0 is a fixed point of every method") {
    const ProblemSpec cube = builtin_problem("cube");
    for (ShootMethodKind method : {ShootMethodKind::Newton, ShootMethodKind::Picard,
                                   ShootMethodKind::ConstantSlope}) {
        ShootConfig config = paper_config(method);
        config.n = 101;
        ShootState state = state_at(cube, config, 0.36);
        state.end_mismatch = 0.0;
        state.sens = shoot_sensitivity(cube, state.traj.mesh, state.traj,
                                       config.integrator);
        state.denom = state.sens->z.back();
        CHECK(spi_step_formula(cube, config, state) == 0.36);
    }
}

TEST_CASE("spi_step_formula: Picard solves the linear problem in one step") {
    const ProblemSpec lin = builtin_problem("linear");
    ShootConfig config = paper_config(ShootMethodKind::Picard);
    config.n = 101;
    const ShootState state = state_at(lin, config, 0.0);
    CHECK(state.end_mismatch == -1.0);
    CHECK(spi_step_formula(lin, config, state) == 1.0);  // 0 - (-1)/(1-0)
}

TEST_CASE("spi_step_formula: singular denominator names the method") {
    const ProblemSpec cube = builtin_problem("cube");
    ShootConfig config = paper_config(ShootMethodKind::ConstantSlope);
    ShootState state;
    state.v_a = 0.1;
    state.end_mismatch = 0.5;
    state.denom = 0.0;
    try {
        spi_step_formula(cube, config, state);
        FAIL("expected SolveError");
    } catch (const SolveError& e) {
        CHECK(std::string(e.what()).find("shoot-slope") != std::string::npos);
        CHECK(std::string(e.what()).find("singular") != std::string::npos);
    }
    CHECK_THROWS_AS(
        spi_step_formula(cube, paper_config(ShootMethodKind::NewtonDerivativeFree),
                         state),
        ConfigError);
}

TEST_CASE("spi_solve: every method solves the linear problem in one correction") {
    const ProblemSpec lin = builtin_problem("linear");
    for (ShootMethodKind method :
         {ShootMethodKind::Newton, ShootMethodKind::Picard, ShootMethodKind::ConstantSlope,
          ShootMethodKind::NewtonDerivativeFree}) {
        ShootConfig config = paper_config(method);
        config.n = 101;
        // v = 0 identically has no usable reconstructed diagonal, so the
        // derivative-free run starts from a sloped guess.
        config.v_a0 = method == ShootMethodKind::NewtonDerivativeFree ? 0.5 : 0.0;
        const SpiResult r = spi_solve(lin, config);
        CHECK(r.converged);
        CHECK(r.trace.size() == 2);
    }
}

TEST_CASE("project_trajectory: idempotent on a projected trajectory") {
    const ProblemSpec cube = builtin_problem("cube");
    for (ShootMethodKind method : {ShootMethodKind::Newton, ShootMethodKind::Picard,
                                   ShootMethodKind::NewtonDerivativeFree}) {
        ShootConfig config = paper_config(method);
        config.path = SpiPath::Projection;
        config.n = 201;
        ShootState state = state_at(cube, config, 0.0);
        const GridFunction projected = project_trajectory(cube, config, state);
        CHECK(std::abs(projected.values[0] - cube.u_a) <= 1e-12);
        CHECK(std::abs(projected.values.back() - cube.u_b) <= 1e-12);

        // Feed the projected function back: its end mismatch vanishes by
        // construction of the boundary rows.
        ShootState fixed = state;
        fixed.traj.u = projected.values;
        fixed.end_mismatch = projected.values.back() - cube.u_b;
        CHECK(fixed.end_mismatch == 0.0);
        const GridFunction twice = project_trajectory(cube, config, fixed);
        for (int i = 0; i < config.n; ++i)
            CHECK(std::abs(twice.values[i] - projected.values[i]) <= 1e-11);
    }
}

TEST_CASE("project_trajectory: Picard projection subtracts the ramp") {
    const ProblemSpec cube = builtin_problem("cube");
    ShootConfig config = paper_config(ShootMethodKind::Picard);
    config.path = SpiPath::Projection;
    config.n = 301;
    const ShootState state = state_at(cube, config, 0.1);
    const GridFunction proj = project_trajectory(cube, config, state);
    const int n = config.n;
    for (int i = 0; i < n; ++i) {
        const double ramp = state.end_mismatch * i / (n - 1);
        CHECK(std::abs(proj.values[i] - (state.traj.u[i] - ramp)) <= 1e-12);
    }
}

TEST_CASE("project_trajectory: derivative-free slope matches the reference row") {
    const ProblemSpec cube = builtin_problem("cube");
    ShootConfig config = paper_config(ShootMethodKind::NewtonDerivativeFree);
    config.path = SpiPath::Projection;
    const ShootState state = state_at(cube, config, 0.0);
    const GridFunction proj = project_trajectory(cube, config, state);
    const double va1 = (proj.values[1] - proj.values[0]) / state.traj.mesh.h;
    CHECK(std::abs(va1 - 0.379942276669709) <= 1e-9);
}

TEST_CASE("assemble_df_diagonal: hand cases") {
    ShootState state;
    state.traj.mesh = make_mesh(0.0, 3.0, 4);
    state.traj.u = {0, 0, 0, 0};

    state.traj.v = {1.0, 1.0, 1.0, 1.0};
    auto diag = assemble_df_diagonal(state, 1e-8);
    CHECK(diag[0] == 1.0);
    CHECK(diag[1] == -2.0);  // -(1+1)/1
    CHECK(diag[2] == -2.0);
    CHECK(diag[3] == 1.0);

    state.traj.v = {1.0, 2.0, 4.0, 8.0};
    diag = assemble_df_diagonal(state, 1e-8);
    CHECK(diag[1] == -2.5);  // -(1+4)/2
    CHECK(diag[2] == -2.5);  // -(2+8)/4
}

TEST_CASE("assemble_df_diagonal: agrees with the analytic diagonal on a real shot") {
    const ProblemSpec cube = builtin_problem("cube");
    const Mesh m = make_mesh(0.0, 1.0, 1001);
    ShootState state;
    state.traj = shoot(cube, m, 0.0, Integrator::PaperEuler);
    const auto diag = assemble_df_diagonal(state, 1e-8);
    for (int i = 1; i < m.n - 1; ++i) {
        const double analytic =
            -2.0 - m.h * m.h * eval_q(cube, m.x[i], state.traj.u[i], 0.0);
        CHECK(std::abs(diag[i] - analytic) <= 1e-3);
    }
}

TEST_CASE("assemble_df_diagonal: near-zero derivative entries are extrapolated") {
    ShootState state;
    state.traj.mesh = make_mesh(0.0, 1.0, 5);
    state.traj.u = std::vector<double>(5, 0.0);

    SUBCASE("straddled zero crossing") {
        state.traj.v = {1.0, 0.5, 1e-12, 0.5, 1.0};
        const auto diag = assemble_df_diagonal(state, 1e-8);
        const double left = -(1.0 + 1e-12) / 0.5;
        const double right = -(1e-12 + 1.0) / 0.5;
        CHECK(diag[1] == left);
        CHECK(diag[3] == right);
        CHECK(std::abs(diag[2] - 0.5 * (left + right)) <= 1e-12);
    }
    SUBCASE("same-side extrapolation at the right edge") {
        state.traj.mesh = make_mesh(0.0, 1.0, 6);
        state.traj.u = std::vector<double>(6, 0.0);
        state.traj.v = {1.0, 2.0, 4.0, 8.0, 1e-13, 32.0};
        const auto diag = assemble_df_diagonal(state, 1e-8);
        // Valid interior entries at 1, 2, 3; entry 4 extends their line.
        const double d2 = diag[2], d3 = diag[3];
        CHECK(std::abs(diag[4] - (d3 + (d3 - d2))) <= 1e-12);
    }
    SUBCASE("too few valid entries") {
        state.traj.v = {0.0, 1e-12, 1e-12, 1e-12, 1.0};
        CHECK_THROWS_AS(assemble_df_diagonal(state, 1e-8), SolveError);
        state.traj.v = std::vector<double>(5, 0.0);
        CHECK_THROWS_AS(assemble_df_diagonal(state, 1e-8), SolveError);
    }
}

TEST_CASE("spi_solve: derivative-free refuses v-dependent problems") {
    ProblemSpec damped;
    damped.name = "damped";
    damped.a = 0.0;
    damped.b = 1.0;
    damped.u_a = 0.0;
    damped.u_b = 1.0;
    damped.f = parse_expr("u*u*u+0.1*v");
    ShootConfig config = paper_config(ShootMethodKind::NewtonDerivativeFree);
    CHECK_THROWS_AS(spi_solve(damped, config), ConfigError);
}

TEST_CASE("spi paths: Newton formula vs derivative-free projection gap is O(h)") {
    const ProblemSpec cube = builtin_problem("cube");
    for (int n : {101, 201, 1001}) {
        ShootConfig formula = paper_config(ShootMethodKind::Newton);
        formula.n = n;
        formula.max_iter = 1;
        formula.tol = 1e-30;
        ShootConfig df = paper_config(ShootMethodKind::NewtonDerivativeFree);
        df.n = n;
        df.max_iter = 1;
        df.tol = 1e-30;
        const double va1_formula =
            spi_solve(cube, formula).trace.records[1].value;
        const double va1_df = spi_solve(cube, df).trace.records[1].value;
        const double h = 1.0 / (n - 1);
        CHECK(std::abs(va1_formula - va1_df) <= 10.0 * h);
    }
}

TEST_CASE("spi paths: Picard formula and projection agree to 1e-10") {
    const ProblemSpec cube = builtin_problem("cube");
    ShootConfig formula = paper_config(ShootMethodKind::Picard);
    formula.max_iter = 1;
    formula.tol = 1e-30;
    ShootConfig proj = formula;
    proj.path = SpiPath::Projection;
    const double a = spi_solve(cube, formula).trace.records[1].value;
    const double b = spi_solve(cube, proj).trace.records[1].value;
    CHECK(std::abs(a - b) <= 1e-10);
}

TEST_CASE("spi paths: Newton projection with analytic coefficients tracks the formula") {
    const ProblemSpec cube = builtin_problem("cube");
    ShootConfig formula = paper_config(ShootMethodKind::Newton);
    formula.max_iter = 3;
    formula.tol = 1e-30;
    ShootConfig proj = formula;
    proj.path = SpiPath::Projection;
    const SpiResult a = spi_solve(cube, formula);
    const SpiResult b = spi_solve(cube, proj);
    for (int k = 1; k <= 3; ++k)
        CHECK(std::abs(a.trace.records[k].value - b.trace.records[k].value) <=
              10.0 * 0.001);
}

TEST_CASE("spi_solve: constant-slope shares the first correction with Newton") {
    const ProblemSpec cube = builtin_problem("cube");
    ShootConfig newton = paper_config(ShootMethodKind::Newton);
    newton.tol = 1e-12;
    newton.max_iter = 60;
    ShootConfig slope = newton;
    slope.method = ShootMethodKind::ConstantSlope;

    const SpiResult a = spi_solve(cube, newton);
    const SpiResult b = spi_solve(cube, slope);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(a.trace.records[1].value == b.trace.records[1].value);  // same k=0 sensitivity
    CHECK(a.trace.records[2].value != b.trace.records[2].value);  // frozen vs refreshed
    CHECK(b.trace.size() > a.trace.size());  // linear vs quadratic tail

    // Constant-slope end-mismatch ratios settle to a constant in (0,1).
    std::vector<double> es;
    for (const auto& r : b.trace.records) es.push_back(std::abs(r.residual));
    const auto clean = oracles::pre_roundoff(es);
    REQUIRE(clean.size() >= 5);
    for (std::size_t k = clean.size() - 4; k < clean.size(); ++k) {
        const double ratio = clean[k] / clean[k - 1];
        CHECK(ratio > 0.0);
        CHECK(ratio < 1.0);
    }
}

TEST_CASE("spi_solve: Newton end-mismatch shrinks quadratically, Picard linearly") {
    const ProblemSpec cube = builtin_problem("cube");
    ShootConfig newton = paper_config(ShootMethodKind::Newton);
    newton.tol = 1e-12;
    newton.max_iter = 40;
    const SpiResult nr = spi_solve(cube, newton);
    REQUIRE(nr.converged);
    std::vector<double> es;
    for (const auto& r : nr.trace.records) es.push_back(r.residual);
    const auto clean = oracles::pre_roundoff(es);
    REQUIRE(clean.size() >= 3);
    CHECK(oracles::empirical_order(clean) >= 1.8);

    ShootConfig picard = newton;
    picard.method = ShootMethodKind::Picard;
    picard.max_iter = 80;
    const SpiResult pr = spi_solve(cube, picard);
    REQUIRE(pr.converged);
    std::vector<double> ratios;
    for (std::size_t k = 0; k + 1 < pr.trace.size(); ++k) {
        const double e0 = std::abs(pr.trace.records[k].residual);
        const double e1 = std::abs(pr.trace.records[k + 1].residual);
        if (e1 > 1e-13) ratios.push_back(e1 / e0);
    }
    REQUIRE(ratios.size() >= 4);
    for (std::size_t k = ratios.size() - 4; k < ratios.size(); ++k) {
        CHECK(ratios[k] > 0.0);
        CHECK(ratios[k] < 1.0);
        CHECK(std::abs(ratios[k] - ratios.back()) <= 0.1);
    }
}

TEST_CASE("spi_solve: constant-slope projection freezes the k = 0 coefficients") {
    const ProblemSpec cube = builtin_problem("cube");
    ShootConfig newton = paper_config(ShootMethodKind::Newton);
    newton.path = SpiPath::Projection;
    newton.tol = 1e-11;
    newton.max_iter = 80;
    ShootConfig slope = newton;
    slope.method = ShootMethodKind::ConstantSlope;

    const SpiResult a = spi_solve(cube, newton);
    const SpiResult b = spi_solve(cube, slope);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    // Identical systems at k = 0, frozen-vs-refreshed coefficients afterwards.
    CHECK(a.trace.records[1].value == b.trace.records[1].value);
    CHECK(a.trace.records[2].value != b.trace.records[2].value);
    CHECK(b.trace.size() > a.trace.size());
}

TEST_CASE("project_trajectory: residual rhs mode") {
    // When f = f(u), the semi-updated Euler step IS the central second
    // difference relation u_{i+1} - 2u_i + u_{i-1} = h^2 f(x_i, u_i), so the
    // interior residual vanishes to roundoff and both rhs modes coincide.
    const ProblemSpec cube = builtin_problem("cube");
    for (ShootMethodKind method :
         {ShootMethodKind::Newton, ShootMethodKind::NewtonDerivativeFree}) {
        ShootConfig endpoint = paper_config(method);
        endpoint.path = SpiPath::Projection;
        ShootConfig residual = endpoint;
        residual.rhs_mode = RhsMode::Residual;

        ShootState state = state_at(cube, endpoint, 0.0);
        const GridFunction pe = project_trajectory(cube, endpoint, state);
        const GridFunction pr = project_trajectory(cube, residual, state);
        CHECK(std::abs(pr.values[0] - cube.u_a) <= 1e-12);
        CHECK(std::abs(pr.values.back() - cube.u_b) <= 1e-12);
        const double h = state.traj.mesh.h;
        const double va_e = (pe.values[1] - pe.values[0]) / h;
        const double va_r = (pr.values[1] - pr.values[0]) / h;
        CHECK(std::abs(va_e - va_r) <= 1e-10);

        const SpiResult r = spi_solve(cube, residual);
        CHECK(r.converged);
    }

    // With f depending on v, the trajectory picks up an O(h^3) interior
    // defect per row and the two modes separate measurably.
    ProblemSpec advective;
    advective.name = "advective";
    advective.a = 0.0;
    advective.b = 1.0;
    advective.u_a = 0.0;
    advective.u_b = 1.0;
    advective.f = parse_expr("2*v");
    advective.dfdu = parse_expr("0");
    advective.dfdv = parse_expr("2");

    ShootConfig endpoint = paper_config(ShootMethodKind::Newton);
    endpoint.path = SpiPath::Projection;
    ShootConfig residual = endpoint;
    residual.rhs_mode = RhsMode::Residual;
    ShootState state = state_at(advective, endpoint, 0.5);
    const GridFunction pe = project_trajectory(advective, endpoint, state);
    const GridFunction pr = project_trajectory(advective, residual, state);
    const double h = state.traj.mesh.h;
    const double va_e = (pe.values[1] - pe.values[0]) / h;
    const double va_r = (pr.values[1] - pr.values[0]) / h;
    CHECK(va_e != va_r);
    CHECK(std::abs(va_e - va_r) <= 1e-2);

    // In residual mode the slope locks onto the discrete-system answer and
    // |E| stalls at the integrator's O(h) truncation gap, which is the
    // quantity the switch exists to expose.
    ShootConfig full = residual;
    full.tol = 2e-3;  // just above the stall level at h = 0.001
    const SpiResult r = spi_solve(advective, full);
    CHECK(r.converged);
    CHECK(r.trace.size() == 2);

    ShootConfig stalled = residual;
    stalled.tol = 1e-30;
    stalled.max_iter = 4;
    const SpiResult s = spi_solve(advective, stalled);
    CHECK(!s.converged);
    REQUIRE(s.trace.size() == 5);
    for (int k = 2; k <= 4; ++k) {
        CHECK(std::abs(s.trace.records[k].value - s.trace.records[1].value) <= 1e-9);
        CHECK(std::abs(std::abs(s.trace.records[k].residual) - 1.31e-3) <= 1e-4);
    }
}

TEST_CASE("spi_solve: non-convergence keeps the trace") {
    const ProblemSpec cube = builtin_problem("cube");
    ShootConfig config = paper_config(ShootMethodKind::Picard);
    config.tol = 1e-30;
    config.max_iter = 4;
    const SpiResult r = spi_solve(cube, config);
    CHECK(!r.converged);
    CHECK(r.trace.size() == 5);
}

TEST_CASE("trace csv: table shape at 15 significant digits") {
    const ProblemSpec cube = builtin_problem("cube");
    const SpiResult r = spi_solve(cube, paper_config(ShootMethodKind::Newton));
    std::ostringstream out;
    write_trace_csv(out, r.trace);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "k,v_a,E");
    std::getline(in, line);
    CHECK(line == "0,0,-0.433349035739307");
    std::getline(in, line);
    CHECK(line == "1,0.379948530223661,0.0260094892708762");
}
