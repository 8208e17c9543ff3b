#include "bvpforge/problem.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bvpforge/errors.hpp"

namespace bvpforge {

void validate(const ProblemSpec& spec) {
    if (spec.f.empty()) throw ConfigError("problem '" + spec.name + "' has no f expression");
    if (!(spec.b > spec.a)) {
        std::ostringstream os;
        os << "problem '" << spec.name << "' requires b > a, got a=" << spec.a
           << ", b=" << spec.b;
        throw ConfigError(os.str());
    }
    if (spec.p_bound && *spec.p_bound < 0.0)
        throw ConfigError("problem '" + spec.name + "': p_bound must be nonnegative");
}

double eval_f(const ProblemSpec& spec, double x, double u, double v) {
    return spec.f.eval(x, u, v);
}

namespace {

double central_step(double at) {
    const double delta = std::max(1e-6, 1e-6 * std::abs(at));
    if (!std::isfinite(delta))
        throw EvalError("numeric partial: difference step is not finite");
    return delta;
}

}  // namespace

double eval_q(const ProblemSpec& spec, double x, double u, double v) {
    if (spec.dfdu) return spec.dfdu->eval(x, u, v);
    const double d = central_step(u);
    return (spec.f.eval(x, u + d, v) - spec.f.eval(x, u - d, v)) / (2.0 * d);
}

double eval_p(const ProblemSpec& spec, double x, double u, double v) {
    if (spec.dfdv) return spec.dfdv->eval(x, u, v);
    const double d = central_step(v);
    return (spec.f.eval(x, u, v + d) - spec.f.eval(x, u, v - d)) / (2.0 * d);
}

namespace {

ProblemSpec make_cube(bool with_derivs) {
    ProblemSpec spec;
    spec.name = with_derivs ? "cube" : "cube-no-derivs";
    spec.a = 0.0;
    spec.b = 1.0;
    spec.u_a = 0.5;
    spec.u_b = 1.0;
    spec.f = parse_expr("u*u*u");
    if (with_derivs) {
        spec.dfdu = parse_expr("3*u*u");
        spec.dfdv = parse_expr("0");
        spec.p_bound = 0.0;
    }
    return spec;
}

ProblemSpec make_linear() {
    ProblemSpec spec;
    spec.name = "linear";
    spec.a = 0.0;
    spec.b = 1.0;
    spec.u_a = 0.0;
    spec.u_b = 1.0;
    spec.f = parse_expr("0");
    spec.dfdu = parse_expr("0");
    spec.dfdv = parse_expr("0");
    spec.p_bound = 0.0;
    return spec;
}

}  // namespace

std::vector<std::string> builtin_problem_names() {
    return {"cube", "cube-no-derivs", "linear"};
}

ProblemSpec builtin_problem(const std::string& name) {
    if (name == "cube") return make_cube(true);
    if (name == "cube-no-derivs") return make_cube(false);
    if (name == "linear") return make_linear();
    std::string msg = "unknown built-in problem '" + name + "'; available:";
    for (const auto& n : builtin_problem_names()) msg += " " + n;
    throw ConfigError(msg);
}

ProblemSpec load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open problem file '" + path + "'");

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("problem file '" + path + "': " + e.what());
    }

    auto require_number = [&](const char* key) {
        if (!doc.contains(key) || !doc[key].is_number())
            throw ParseError("problem file '" + path + "': missing numeric key '" +
                             key + "'");
        return doc[key].get<double>();
    };
    auto require_expr = [&](const char* key) {
        if (!doc.contains(key) || !doc[key].is_string())
            throw ParseError("problem file '" + path + "': missing expression key '" +
                             key + "'");
        try {
            return parse_expr(doc[key].get<std::string>());
        } catch (const ParseError& e) {
            throw ParseError("problem file '" + path + "', key '" + key +
                             "': " + e.what());
        }
    };

    ProblemSpec spec;
    spec.name = path;
    spec.a = require_number("a");
    spec.b = require_number("b");
    spec.u_a = require_number("ua");
    spec.u_b = require_number("ub");
    spec.f = require_expr("f");
    if (doc.contains("dfdu")) spec.dfdu = require_expr("dfdu");
    if (doc.contains("dfdv")) spec.dfdv = require_expr("dfdv");
    if (doc.contains("p_bound")) {
        if (!doc["p_bound"].is_number())
            throw ParseError("problem file '" + path + "': p_bound must be a number");
        spec.p_bound = doc["p_bound"].get<double>();
    }
    validate(spec);
    return spec;
}

}  // namespace bvpforge
