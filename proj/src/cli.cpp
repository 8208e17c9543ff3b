#include "bvpforge/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "bvpforge/errors.hpp"
#include "bvpforge/relaxation.hpp"
#include "bvpforge/shooting.hpp"

namespace bvpforge {

namespace {

using nlohmann::json;

struct PaperCell {
    double v_a;
    double E;
};

// Reference iteration tables for the built-in cube problem at n = 1001,
// v_a0 = 0, tol = 1e-3 with the semi-updated Euler integrator.
constexpr PaperCell kNewtonFormulaRows[3] = {
    {0.0, -0.433349035739307},
    {0.379948530223661, 0.026009489270876},
    {0.359783026933729, 0.000100006717963},
};
constexpr PaperCell kNewtonDfRows[3] = {
    {0.0, -0.433349035739307},
    {0.379942276669709, 0.026001423439514},
    {0.359786457564626, 0.000104397665347},
};

DScheme parse_scheme(const std::string& s) {
    if (s == "central") return DScheme::Central;
    if (s == "forward") return DScheme::Forward;
    if (s == "backward") return DScheme::Backward;
    throw ConfigError("unknown difference scheme '" + s +
                      "' (expected central, forward or backward)");
}

Integrator parse_integrator(const std::string& s) {
    if (s == "paper-euler") return Integrator::PaperEuler;
    if (s == "rk4") return Integrator::RK4;
    throw ConfigError("unknown integrator '" + s + "' (expected paper-euler or rk4)");
}

RhsMode parse_rhs_mode(const std::string& s) {
    if (s == "endpoint") return RhsMode::Endpoint;
    if (s == "residual") return RhsMode::Residual;
    throw ConfigError("unknown rhs mode '" + s + "' (expected endpoint or residual)");
}

ProblemSpec load_problem(const std::string& source) {
    for (const std::string& name : builtin_problem_names())
        if (name == source) return builtin_problem(source);
    if (std::filesystem::exists(source)) return load_problem_file(source);
    throw ConfigError("problem '" + source +
                      "' is neither a built-in name nor an existing file; built-ins:"
                      " cube, cube-no-derivs, linear");
}

struct MethodOutcome {
    bool is_relax = false;
    bool converged = false;
    int iterations = 0;        // corrections (shooting) or updates (relaxation)
    double final_residual = 0.0;  // E (shooting) or residual max-norm (relaxation)
    double v_a = 0.0;          // shooting only
    IterationTrace trace;
    GridFunction trajectory;
    DominanceDiagnostic dominance;
};

MethodOutcome run_method(const ProblemSpec& spec, const RunRequest& req) {
    MethodOutcome out;
    const DScheme scheme = parse_scheme(req.d_scheme);

    if (req.method.rfind("relax-", 0) == 0) {
        RelaxConfig config;
        if (req.method == "relax-newton")
            config.variant = LinearizationVariant::Kind::Newton;
        else if (req.method == "relax-picard")
            config.variant = LinearizationVariant::Kind::Picard;
        else if (req.method == "relax-slope")
            config.variant = LinearizationVariant::Kind::ConstantSlope;
        else
            throw ConfigError("unknown method '" + req.method + "'");
        config.scheme = scheme;
        config.n = req.n;
        config.tol = req.tol;
        config.max_iter = req.max_iter;

        RelaxReport report = relax_solve(spec, config);
        out.is_relax = true;
        out.converged = report.converged;
        out.iterations = static_cast<int>(report.trace.size()) - 1;
        out.final_residual = report.trace.back().residual;
        out.trace = std::move(report.trace);
        out.trajectory = std::move(report.final);
        out.dominance = report.dominance;
        return out;
    }

    ShootConfig config;
    if (req.method == "shoot-newton")
        config.method = ShootMethodKind::Newton;
    else if (req.method == "shoot-picard")
        config.method = ShootMethodKind::Picard;
    else if (req.method == "shoot-slope")
        config.method = ShootMethodKind::ConstantSlope;
    else if (req.method == "shoot-newton-df")
        config.method = ShootMethodKind::NewtonDerivativeFree;
    else
        throw ConfigError("unknown method '" + req.method +
                          "' (expected relax-newton, relax-picard, relax-slope, "
                          "shoot-newton, shoot-picard, shoot-slope or shoot-newton-df)");
    config.scheme = scheme;
    config.integrator = parse_integrator(req.integrator);
    config.rhs_mode = parse_rhs_mode(req.rhs_mode);
    config.n = req.n;
    config.v_a0 = req.v_a0;
    config.tol = req.tol;
    config.max_iter = req.max_iter;

    SpiResult result = spi_solve(spec, config);
    out.converged = result.converged;
    out.iterations = static_cast<int>(result.trace.size()) - 1;
    out.final_residual = result.state.end_mismatch;
    out.v_a = result.state.v_a;
    out.trace = std::move(result.trace);
    out.trajectory = GridFunction{result.state.traj.mesh, result.state.traj.u};
    out.dominance = check_diag_dominance(spec, out.trajectory.mesh, scheme);
    return out;
}

double sampled_q_min(const ProblemSpec& spec, const GridFunction& g, DScheme scheme) {
    double qmin = std::numeric_limits<double>::infinity();
    for (int i = 1; i < g.mesh.n - 1; ++i) {
        try {
            qmin = std::min(
                qmin, eval_q(spec, g.mesh.x[i], g.values[i], dapply(scheme, g, i)));
        } catch (const EvalError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    }
    return qmin;
}

const char* dominance_str(DominanceStatus s) {
    switch (s) {
        case DominanceStatus::Pass: return "pass";
        case DominanceStatus::Fail: return "fail";
        case DominanceStatus::Unknown: return "unknown";
    }
    return "?";
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write to '" + path + "'");
    fn(f);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_report(const RunRequest& req, const ProblemSpec& spec,
                  const MethodOutcome& outcome, double h, double wall_s,
                  double q_min, std::ostream& f) {
    if (req.format == "csv") {
        f << "key,value\n";
        f << "problem," << spec.name << "\n";
        f << "method," << req.method << "\n";
        f << "n," << req.n << "\n";
        f << "h," << fmt17(h) << "\n";
        f << "tol," << fmt17(req.tol) << "\n";
        f << "converged," << (outcome.converged ? "true" : "false") << "\n";
        f << "iterations," << outcome.iterations << "\n";
        f << "final_residual," << fmt17(outcome.final_residual) << "\n";
        if (!outcome.is_relax) f << "v_a," << fmt17(outcome.v_a) << "\n";
        f << "q_min_sampled," << fmt17(q_min) << "\n";
        f << "dominance," << dominance_str(outcome.dominance.status) << "\n";
        f << "wall_time_s," << wall_s << "\n";
        return;
    }
    json doc;
    doc["problem"] = spec.name;
    doc["method"] = req.method;
    doc["n"] = req.n;
    doc["h"] = h;
    doc["tol"] = req.tol;
    doc["max_iter"] = req.max_iter;
    doc["converged"] = outcome.converged;
    doc["iterations"] = outcome.iterations;
    doc["final_residual"] = outcome.final_residual;
    if (!outcome.is_relax) {
        doc["v_a"] = outcome.v_a;
        doc["v_a0"] = req.v_a0;
        doc["integrator"] = req.integrator;
    }
    json norms = json::array();
    for (const TraceRecord& r : outcome.trace.records) norms.push_back(r.residual);
    doc["residual_norms"] = norms;
    doc["q_min_sampled"] = q_min;
    doc["dominance"] = {{"status", dominance_str(outcome.dominance.status)},
                        {"threshold", outcome.dominance.threshold},
                        {"h", outcome.dominance.h}};
    doc["wall_time_s"] = wall_s;
    f << doc.dump(2) << "\n";
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DivergedError& e) {
        err << "diverged: " << e.what() << "\n";
        return kExitDiverged;
    } catch (const SolveError& e) {
        err << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const EvalError& e) {
        err << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    }
}

}  // namespace

int run(const RunRequest& request, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> int {
        const ProblemSpec spec = load_problem(request.problem);
        validate(spec);

        const auto t0 = std::chrono::steady_clock::now();
        const MethodOutcome outcome = run_method(spec, request);
        const double wall_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        const double h = outcome.trajectory.mesh.h;
        const double q_min =
            sampled_q_min(spec, outcome.trajectory, parse_scheme(request.d_scheme));

        if (!request.trace_path.empty())
            write_file(request.trace_path, [&](std::ostream& f) {
                if (outcome.is_relax)
                    write_residual_csv(f, outcome.trace);
                else
                    write_trace_csv(f, outcome.trace);
            });
        if (!request.trajectory_path.empty())
            write_file(request.trajectory_path,
                       [&](std::ostream& f) { write_grid_csv(f, outcome.trajectory); });
        if (!request.report_path.empty())
            write_file(request.report_path, [&](std::ostream& f) {
                write_report(request, spec, outcome, h, wall_s, q_min, f);
            });

        out << request.method << " on " << spec.name << ": "
            << (outcome.converged ? "converged" : "NOT converged") << " after "
            << outcome.iterations << " iterations, final "
            << (outcome.is_relax ? "residual" : "E") << " = "
            << fmt17(outcome.final_residual) << " (n=" << request.n << ", h=" << h
            << ")\n";
        if (!(q_min > 0.0))
            err << "note: sampled df/du <= 0 along the final iterate (min = " << q_min
                << "); the solvability conditions do not hold there\n";
        if (outcome.dominance.status == DominanceStatus::Fail)
            err << "note: h = " << outcome.dominance.h
                << " exceeds the diagonal-dominance threshold "
                << outcome.dominance.threshold << "\n";

        return outcome.converged ? kExitOk : kExitNotConverged;
    });
}

namespace {

struct CellCheck {
    std::string table;
    int k;
    std::string quantity;
    double computed = std::numeric_limits<double>::quiet_NaN();
    double expected = 0.0;
    double tolerance = 0.0;

    bool ok() const { return std::abs(computed - expected) <= tolerance; }
};

void collect_cells(const std::string& table, const IterationTrace& trace,
                   const PaperCell (&rows)[3], double va_tol, double e_tol,
                   std::vector<CellCheck>& cells) {
    for (int k = 0; k < 3; ++k) {
        CellCheck va{table, k, "v_a", std::numeric_limits<double>::quiet_NaN(),
                     rows[k].v_a, va_tol};
        CellCheck e{table, k, "E", std::numeric_limits<double>::quiet_NaN(),
                    rows[k].E, e_tol};
        if (k < static_cast<int>(trace.size())) {
            va.computed = trace.records[k].value;
            e.computed = trace.records[k].residual;
        }
        cells.push_back(va);
        cells.push_back(e);
    }
}

}  // namespace

int reproduce_tables(const TablesRequest& request, std::ostream& out,
                     std::ostream& err) {
    return guarded(err, [&]() -> int {
        const ProblemSpec spec = builtin_problem("cube");

        ShootConfig config;
        config.integrator = parse_integrator(request.integrator);
        config.n = request.n;
        config.tol = request.tol;
        config.v_a0 = request.v_a0;

        config.method = ShootMethodKind::Newton;
        const SpiResult newton = spi_solve(spec, config);

        config.method = ShootMethodKind::NewtonDerivativeFree;
        const SpiResult df = spi_solve(spec, config);

        const double h = (spec.b - spec.a) / (request.n - 1);
        out << "reference experiment: u'' = u^3, u(0) = 1/2, u(1) = 1, n=" << request.n
            << ", h=" << h << ", v_a0=" << request.v_a0
            << ", integrator=" << request.integrator << "\n\n";

        std::vector<CellCheck> cells;
        // The formula-path table is reproducible to solver roundoff; the
        // projection-path table admits linear-solve ordering differences in
        // its corrected rows.
        collect_cells("shoot-newton", newton.trace, kNewtonFormulaRows, 1e-9, 1e-9,
                      cells);
        collect_cells("shoot-newton-df", df.trace, kNewtonDfRows, 1e-6, 1e-6, cells);
        cells[6].tolerance = 1e-9;   // df row 0 shares the formula trajectory
        cells[7].tolerance = 1e-9;

        char buf[160];
        out << "table            k  cell  computed               expected               "
               "|diff|      status\n";
        int failures = 0;
        for (const CellCheck& c : cells) {
            const double diff = std::abs(c.computed - c.expected);
            std::snprintf(buf, sizeof(buf), "%-16s %d  %-4s  %-21.15g  %-21.15g  %-10.3e  %s\n",
                          c.table.c_str(), c.k, c.quantity.c_str(), c.computed,
                          c.expected, diff, c.ok() ? "ok" : "MISMATCH");
            out << buf;
            if (!c.ok()) ++failures;
        }
        const bool rows_ok = newton.trace.size() == 3 && df.trace.size() == 3;
        if (!rows_ok) {
            out << "row count: got " << newton.trace.size() << " and " << df.trace.size()
                << ", expected 3 and 3\n";
            ++failures;
        }
        out << "\n" << (failures == 0 ? "all cells match" : "MISMATCHED CELLS: ")
            << (failures == 0 ? "" : std::to_string(failures)) << "\n";
        return failures == 0 ? kExitOk : kExitNotConverged;
    });
}

int compare(const CompareRequest& request, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> int {
        if (request.problems.empty())
            throw ConfigError("compare: no problems given");
        if (request.methods.empty())
            throw ConfigError("compare: no methods given");
        if (request.format != "csv" && request.format != "json")
            throw ConfigError("compare: format must be csv or json");

        struct Cell {
            std::string problem, method, status;
            bool converged = false;
            int iterations = 0;
            double final_residual = std::numeric_limits<double>::quiet_NaN();
        };
        std::vector<Cell> cells;

        for (const std::string& prob : request.problems) {
            for (const std::string& method : request.methods) {
                Cell cell{prob, method, "ok"};
                RunRequest sub;
                sub.problem = prob;
                sub.method = method;
                sub.n = request.n;
                sub.tol = request.tol;
                sub.max_iter = request.max_iter;
                sub.v_a0 = request.v_a0;
                try {
                    const ProblemSpec spec = load_problem(prob);
                    validate(spec);
                    const MethodOutcome o = run_method(spec, sub);
                    cell.converged = o.converged;
                    cell.iterations = o.iterations;
                    cell.final_residual = o.final_residual;
                    if (!o.converged) cell.status = "not-converged";
                } catch (const ParseError&) {
                    cell.status = "parse-error";
                } catch (const ConfigError&) {
                    cell.status = "config-error";
                } catch (const DivergedError&) {
                    cell.status = "diverged";
                } catch (const SolveError&) {
                    cell.status = "solver-failure";
                } catch (const EvalError&) {
                    cell.status = "solver-failure";
                }
                cells.push_back(std::move(cell));
            }
        }

        const auto emit = [&](std::ostream& f) {
            if (request.format == "csv") {
                f << "problem,method,status,converged,iterations,final_residual\n";
                for (const Cell& c : cells)
                    f << c.problem << "," << c.method << "," << c.status << ","
                      << (c.converged ? "true" : "false") << "," << c.iterations << ","
                      << fmt17(c.final_residual) << "\n";
            } else {
                json doc = json::array();
                for (const Cell& c : cells)
                    doc.push_back({{"problem", c.problem},
                                   {"method", c.method},
                                   {"status", c.status},
                                   {"converged", c.converged},
                                   {"iterations", c.iterations},
                                   {"final_residual", c.final_residual}});
                f << doc.dump(2) << "\n";
            }
        };
        if (request.out_path.empty())
            emit(out);
        else
            write_file(request.out_path, emit);
        return kExitOk;
    });
}

}  // namespace bvpforge
