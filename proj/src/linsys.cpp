#include "bvpforge/linsys.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "bvpforge/errors.hpp"

namespace bvpforge {

TridiagSystem assemble(const ProblemSpec& spec, DScheme scheme,
                       const LinearizationVariant& variant, const GridFunction& u_k) {
    const int n = u_k.mesh.n;
    const double h = u_k.mesh.h;
    const DWeights w = dscheme_weights(scheme, h);

    const GridFunction* coeff_src = &u_k;
    if (variant.kind == LinearizationVariant::Kind::ConstantSlope) {
        if (!variant.frozen)
            throw ConfigError("constant-slope assembly needs a frozen reference iterate");
        if (!variant.frozen->mesh.same_as(u_k.mesh))
            throw ConfigError("constant-slope reference is on a different mesh");
        coeff_src = &*variant.frozen;
    }

    TridiagSystem sys;
    sys.sub.assign(n, 0.0);
    sys.diag.assign(n, 0.0);
    sys.sup.assign(n, 0.0);

    sys.diag[0] = 1.0;
    sys.diag[n - 1] = 1.0;
    for (int i = 1; i < n - 1; ++i) {
        double qi = 0.0;
        double pi = 0.0;
        if (variant.kind != LinearizationVariant::Kind::Picard) {
            const double x = coeff_src->mesh.x[i];
            const double ui = coeff_src->values[i];
            const double dui = dapply(scheme, *coeff_src, i);
            qi = eval_q(spec, x, ui, dui);
            pi = eval_p(spec, x, ui, dui);
            if (!std::isfinite(qi) || !std::isfinite(pi)) {
                std::ostringstream os;
                os << "non-finite linearization coefficient at row " << i << ": q=" << qi
                   << ", p=" << pi;
                throw SolveError(os.str());
            }
        }
        sys.sub[i] = 1.0 - h * h * pi * w.minus;
        sys.diag[i] = -2.0 - h * h * qi - h * h * pi * w.zero;
        sys.sup[i] = 1.0 - h * h * pi * w.plus;
    }
    sys.rhs = nonlinear_residual(spec, scheme, u_k).values;
    return sys;
}

std::vector<double> endpoint_rhs(double end_mismatch, int n) {
    if (n < 2) throw ConfigError("endpoint_rhs needs n >= 2");
    std::vector<double> rhs(n, 0.0);
    rhs[n - 1] = end_mismatch;
    return rhs;
}

std::vector<double> thomas_solve(const TridiagSystem& sys) {
    const int n = sys.size();
    if (n < 1 || static_cast<int>(sys.rhs.size()) != n)
        throw ConfigError("thomas_solve: inconsistent system sizes");

    std::vector<double> diag = sys.diag;
    std::vector<double> rhs = sys.rhs;
    for (int i = 1; i < n; ++i) {
        const double pivot = diag[i - 1];
        if (std::abs(pivot) < 1e-300)
            throw SolveError("thomas_solve: near-zero pivot at row " +
                             std::to_string(i - 1));
        const double m = sys.sub[i] / pivot;
        diag[i] -= m * sys.sup[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    if (std::abs(diag[n - 1]) < 1e-300)
        throw SolveError("thomas_solve: near-zero pivot at row " + std::to_string(n - 1));

    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = (rhs[i] - sys.sup[i] * x[i + 1]) / diag[i];
    return x;
}

DominanceDiagnostic check_diag_dominance(const ProblemSpec& spec, const Mesh& mesh,
                                         DScheme scheme) {
    DominanceDiagnostic diag;
    diag.h = mesh.h;
    if (!spec.p_bound) {
        diag.status = DominanceStatus::Unknown;
        return diag;
    }
    const double P = *spec.p_bound;
    const double limit = scheme == DScheme::Central ? 2.0 : 1.0;
    diag.threshold =
        P == 0.0 ? std::numeric_limits<double>::infinity() : limit / P;
    diag.status =
        mesh.h < diag.threshold ? DominanceStatus::Pass : DominanceStatus::Fail;
    return diag;
}

void write_tridiag_csv(std::ostream& out, const TridiagSystem& sys) {
    out << "sub,diag,sup,rhs\n";
    char buf[128];
    for (int i = 0; i < sys.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", sys.sub[i],
                      sys.diag[i], sys.sup[i], sys.rhs[i]);
        out << buf;
    }
}

}  // namespace bvpforge
