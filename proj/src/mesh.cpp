#include "bvpforge/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "bvpforge/errors.hpp"

namespace bvpforge {

Mesh make_mesh(double a, double b, int n) {
    if (n < 2) throw ConfigError("mesh needs at least 2 points, got " + std::to_string(n));
    if (!(b > a)) {
        std::ostringstream os;
        os << "mesh requires b > a, got a=" << a << ", b=" << b;
        throw ConfigError(os.str());
    }
    Mesh mesh;
    mesh.n = n;
    mesh.a = a;
    mesh.b = b;
    mesh.h = (b - a) / (n - 1);
    mesh.x.resize(n);
    for (int i = 0; i < n; ++i) mesh.x[i] = a + mesh.h * i;
    mesh.x[n - 1] = b;
    return mesh;
}

GridFunction linear_interpolant(const Mesh& mesh, double ya, double yb) {
    GridFunction g{mesh, std::vector<double>(mesh.n)};
    for (int i = 0; i < mesh.n; ++i)
        g.values[i] = ya + (yb - ya) * (static_cast<double>(i) / (mesh.n - 1));
    g.values[mesh.n - 1] = yb;
    return g;
}

DWeights dscheme_weights(DScheme scheme, double h) {
    switch (scheme) {
        case DScheme::Central: return {-1.0 / (2.0 * h), 0.0, 1.0 / (2.0 * h)};
        case DScheme::Forward: return {0.0, -1.0 / h, 1.0 / h};
        case DScheme::Backward: return {-1.0 / h, 1.0 / h, 0.0};
    }
    throw ConfigError("invalid difference scheme");
}

double dapply(DScheme scheme, const GridFunction& g, int i) {
    const int n = g.mesh.n;
    if (i < 1 || i > n - 2)
        throw ConfigError("difference quotient needs an interior index, got " +
                          std::to_string(i) + " on a mesh of " + std::to_string(n) +
                          " points");
    const double h = g.mesh.h;
    switch (scheme) {
        case DScheme::Central: return (g.values[i + 1] - g.values[i - 1]) / (2.0 * h);
        case DScheme::Forward: return (g.values[i + 1] - g.values[i]) / h;
        case DScheme::Backward: return (g.values[i] - g.values[i - 1]) / h;
    }
    throw ConfigError("invalid difference scheme");
}

GridFunction nonlinear_residual(const ProblemSpec& spec, DScheme scheme,
                                const GridFunction& g) {
    const int n = g.mesh.n;
    const double h = g.mesh.h;
    GridFunction res{g.mesh, std::vector<double>(n)};
    res.values[0] = g.values[0] - spec.u_a;
    res.values[n - 1] = g.values[n - 1] - spec.u_b;
    for (int i = 1; i < n - 1; ++i) {
        const double du = dapply(scheme, g, i);
        const double fi = eval_f(spec, g.mesh.x[i], g.values[i], du);
        res.values[i] =
            g.values[i - 1] - 2.0 * g.values[i] + g.values[i + 1] - h * h * fi;
    }
    return res;
}

double max_norm(std::span<const double> values) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

void write_grid_csv(std::ostream& out, const GridFunction& g) {
    out << "x,u\n";
    char buf[64];
    for (int i = 0; i < g.mesh.n; ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", g.mesh.x[i], g.values[i]);
        out << buf;
    }
}

}  // namespace bvpforge
