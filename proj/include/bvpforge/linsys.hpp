#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "bvpforge/mesh.hpp"
#include "bvpforge/problem.hpp"

namespace bvpforge {

/// Tridiagonal system stored as three diagonals plus right-hand side, all of
/// length n. sub[0] and sup[n-1] are unused and kept at zero. The first and
/// last rows are identity boundary rows (diag = 1, off-diagonals 0).
struct TridiagSystem {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> sup;
    std::vector<double> rhs;

    int size() const { return static_cast<int>(diag.size()); }
};

/// Linearization choice for the system matrix. Newton takes the partials at
/// the current iterate, Picard zeroes them, ConstantSlope freezes them at a
/// reference iterate (normally the initial one).
struct LinearizationVariant {
    enum class Kind { Newton, Picard, ConstantSlope };

    Kind kind = Kind::Newton;
    std::optional<GridFunction> frozen;  // ConstantSlope reference

    static LinearizationVariant newton() { return {Kind::Newton, std::nullopt}; }
    static LinearizationVariant picard() { return {Kind::Picard, std::nullopt}; }
    static LinearizationVariant constant_slope(GridFunction reference) {
        return {Kind::ConstantSlope, std::move(reference)};
    }
};

/// Builds the relaxation system for one update u^{k+1} = u^k - L^{-1} G.
/// Interior row i:
///   sub  = 1 - h^2 p_i w_minus
///   diag = -2 - h^2 q_i - h^2 p_i w_zero
///   sup  = 1 - h^2 p_i w_plus
/// with the dscheme_weights of the chosen scheme, q_i/p_i per the variant,
/// and rhs the nonlinear residual of u_k. Throws SolveError when a
/// coefficient comes out non-finite.
TridiagSystem assemble(const ProblemSpec& spec, DScheme scheme,
                       const LinearizationVariant& variant, const GridFunction& u_k);

/// Right-hand side [0, ..., 0, end_mismatch] used when relaxing a shooting
/// trajectory: the trajectory satisfies the equation and the left boundary,
/// so only the final component survives.
std::vector<double> endpoint_rhs(double end_mismatch, int n);

/// Thomas forward elimination / back substitution. Throws SolveError with
/// the row index when a pivot falls below 1e-300 in magnitude.
std::vector<double> thomas_solve(const TridiagSystem& sys);

enum class DominanceStatus { Pass, Fail, Unknown };

/// Mesh-size check for strict diagonal dominance of the assembled matrix:
/// h < 2/P for the central scheme, h < 1/P for forward/backward, with P the
/// user-supplied bound on |p|. Unknown when no bound was given.
struct DominanceDiagnostic {
    DominanceStatus status = DominanceStatus::Unknown;
    double threshold = 0.0;  // h must stay below this; +inf when P = 0
    double h = 0.0;
};

DominanceDiagnostic check_diag_dominance(const ProblemSpec& spec, const Mesh& mesh,
                                         DScheme scheme);

/// Debug dump: columns sub,diag,sup,rhs at 17 significant digits.
void write_tridiag_csv(std::ostream& out, const TridiagSystem& sys);

}  // namespace bvpforge
