#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bvpforge/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"bvpforge: shooting and relaxation solvers for nonlinear "
                 "two-point boundary value problems u'' = f(x, u, u')"};
    app.require_subcommand(1);

    bvpforge::RunRequest run_req;
    CLI::App* solve = app.add_subcommand("solve", "run one method on one problem");
    solve->add_option("--problem", run_req.problem,
                      "built-in name (cube, cube-no-derivs, linear) or JSON file");
    solve->add_option("--method", run_req.method,
                      "relax-newton|relax-picard|relax-slope|shoot-newton|"
                      "shoot-picard|shoot-slope|shoot-newton-df");
    solve->add_option("--n", run_req.n, "mesh point count (h = (b-a)/(n-1))");
    solve->add_option("--tol", run_req.tol, "stopping tolerance on |E| or residual norm");
    solve->add_option("--max-iter", run_req.max_iter, "iteration cap");
    solve->add_option("--va0", run_req.v_a0, "starting initial slope (shooting)");
    solve->add_option("--d-scheme", run_req.d_scheme, "central|forward|backward");
    solve->add_option("--integrator", run_req.integrator, "paper-euler|rk4");
    solve->add_option("--rhs", run_req.rhs_mode,
                      "projection right-hand side: endpoint|residual");
    solve->add_option("--trace", run_req.trace_path, "write per-iteration CSV here");
    solve->add_option("--trajectory", run_req.trajectory_path,
                      "write final trajectory CSV here");
    solve->add_option("--report", run_req.report_path, "write run report here");
    solve->add_option("--format", run_req.format, "report format: json|csv");

    bvpforge::TablesRequest tab_req;
    CLI::App* tables =
        app.add_subcommand("tables", "reproduce the reference iteration tables");
    tables->add_option("--n", tab_req.n, "mesh point count");
    tables->add_option("--tol", tab_req.tol, "stopping tolerance on |E|");
    tables->add_option("--va0", tab_req.v_a0, "starting initial slope");
    tables->add_option("--integrator", tab_req.integrator, "paper-euler|rk4");

    bvpforge::CompareRequest cmp_req;
    CLI::App* cmp = app.add_subcommand("compare", "outcome matrix of problems x methods");
    cmp->add_option("--problems", cmp_req.problems, "problem names/files")
        ->delimiter(',');
    cmp->add_option("--methods", cmp_req.methods, "method selectors")->delimiter(',');
    cmp->add_option("--n", cmp_req.n, "mesh point count");
    cmp->add_option("--tol", cmp_req.tol, "stopping tolerance");
    cmp->add_option("--max-iter", cmp_req.max_iter, "iteration cap");
    cmp->add_option("--va0", cmp_req.v_a0, "starting initial slope (shooting)");
    cmp->add_option("--out", cmp_req.out_path, "write the matrix here (default stdout)");
    cmp->add_option("--format", cmp_req.format, "csv|json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : bvpforge::kExitConfig;
    }

    if (solve->parsed()) return bvpforge::run(run_req, std::cout, std::cerr);
    if (tables->parsed()) return bvpforge::reproduce_tables(tab_req, std::cout, std::cerr);
    return bvpforge::compare(cmp_req, std::cout, std::cerr);
}
