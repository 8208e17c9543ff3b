#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "bvpforge/problem.hpp"

namespace bvpforge {

/// Uniform mesh x_i = a + i*h, i = 0..n-1, with h = (b-a)/(n-1).
/// The last point is assigned b exactly rather than accumulated, so the
/// right boundary (where the shooting mismatch is measured) carries no
/// representation drift.
struct Mesh {
    int n = 0;
    double a = 0.0;
    double b = 0.0;
    double h = 0.0;
    std::vector<double> x;

    bool same_as(const Mesh& other) const {
        return n == other.n && a == other.a && b == other.b;
    }
};

Mesh make_mesh(double a, double b, int n);

/// Values of a function on a mesh.
struct GridFunction {
    Mesh mesh;
    std::vector<double> values;
};

/// The straight line through (a, ya) and (b, yb) sampled on the mesh.
GridFunction linear_interpolant(const Mesh& mesh, double ya, double yb);

/// First-derivative difference scheme at interior points.
enum class DScheme { Forward, Backward, Central };

struct DWeights {
    double minus = 0.0;  // coefficient of u_{i-1}
    double zero = 0.0;   // coefficient of u_i
    double plus = 0.0;   // coefficient of u_{i+1}
};

/// Stencil weights of the scheme: Central -> (-1/(2h), 0, 1/(2h)),
/// Forward -> (0, -1/h, 1/h), Backward -> (-1/h, 1/h, 0).
DWeights dscheme_weights(DScheme scheme, double h);

/// Difference quotient at interior index i (0-based, 1 <= i <= n-2).
double dapply(DScheme scheme, const GridFunction& g, int i);

/// Residual vector of the discrete problem: interior components
///   G_i = u_{i-1} - 2 u_i + u_{i+1} - h^2 f(x_i, u_i, Du_i),
/// boundary components G_0 = u_0 - u_a and G_{n-1} = u_{n-1} - u_b.
GridFunction nonlinear_residual(const ProblemSpec& spec, DScheme scheme,
                                const GridFunction& g);

double max_norm(std::span<const double> values);

/// Two-column CSV (x,u) with 17 significant digits, enough for every
/// double to round-trip through text unchanged.
void write_grid_csv(std::ostream& out, const GridFunction& g);

}  // namespace bvpforge
