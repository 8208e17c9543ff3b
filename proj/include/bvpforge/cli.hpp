#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bvpforge {

// Process exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;        // bad options / unknown names
inline constexpr int kExitParse = 3;         // expression or problem-file syntax
inline constexpr int kExitDiverged = 4;      // iterates blew up
inline constexpr int kExitNotConverged = 5;  // ran out of iterations / table mismatch
inline constexpr int kExitSolver = 6;        // pivot, singular update, domain error

/// One solver invocation: problem source (built-in name or JSON path),
/// method selector, numeric options and output targets.
struct RunRequest {
    std::string problem = "cube";
    std::string method = "shoot-newton";  // relax-{newton,picard,slope} |
                                          // shoot-{newton,picard,slope,newton-df}
    int n = 1001;
    double tol = 1e-3;
    int max_iter = 100;
    double v_a0 = 0.0;
    std::string d_scheme = "central";        // central | forward | backward
    std::string integrator = "paper-euler";  // paper-euler | rk4
    std::string rhs_mode = "endpoint";       // endpoint | residual
    std::string trace_path;
    std::string trajectory_path;
    std::string report_path;
    std::string format = "json";  // report format: json | csv
};

/// Runs one request, writes the requested artifacts and a summary line.
/// Returns a process exit code.
int run(const RunRequest& request, std::ostream& out, std::ostream& err);

/// Reference-experiment settings. The defaults reproduce the built-in
/// iteration tables; any change (e.g. the rk4 integrator) makes the
/// comparison fail by design.
struct TablesRequest {
    int n = 1001;
    double tol = 1e-3;
    double v_a0 = 0.0;
    std::string integrator = "paper-euler";
};

/// Runs both reference configurations (shoot-newton and shoot-newton-df on
/// the cube problem), prints computed vs expected cells with per-cell
/// absolute differences, and fails when any cell exceeds its tolerance.
int reproduce_tables(const TablesRequest& request, std::ostream& out,
                     std::ostream& err);

/// Problem-by-method outcome matrix.
struct CompareRequest {
    std::vector<std::string> problems;
    std::vector<std::string> methods;
    int n = 1001;
    double tol = 1e-6;
    int max_iter = 100;
    double v_a0 = 0.0;
    std::string out_path;         // empty: write to stdout
    std::string format = "csv";   // csv | json
};

/// Runs every (problem, method) cell, recording per-cell failures without
/// stopping. Returns nonzero only for an invalid request.
int compare(const CompareRequest& request, std::ostream& out, std::ostream& err);

}  // namespace bvpforge
