#include "bvpforge/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "bvpforge/errors.hpp"

namespace bvpforge {

bool is_unary(ExprOp op) {
    switch (op) {
        case ExprOp::Neg:
        case ExprOp::Sin:
        case ExprOp::Cos:
        case ExprOp::Exp:
        case ExprOp::Log:
        case ExprOp::Sqrt:
        case ExprOp::Abs:
        case ExprOp::Tanh:
            return true;
        default:
            return false;
    }
}

bool is_binary(ExprOp op) {
    switch (op) {
        case ExprOp::Add:
        case ExprOp::Sub:
        case ExprOp::Mul:
        case ExprOp::Div:
        case ExprOp::Pow:
            return true;
        default:
            return false;
    }
}

Expr Expr::constant(double c) {
    Expr e;
    e.nodes_.push_back({ExprOp::Constant, c, -1, -1});
    return e;
}

Expr Expr::variable(ExprOp var) {
    Expr e;
    e.nodes_.push_back({var, 0.0, -1, -1});
    return e;
}

Expr Expr::unary(ExprOp op, const Expr& arg) {
    Expr e = arg;
    e.nodes_.push_back({op, 0.0, static_cast<int>(e.nodes_.size()) - 1, -1});
    return e;
}

Expr Expr::binary(ExprOp op, const Expr& lhs, const Expr& rhs) {
    Expr e = lhs;
    const int lhs_root = static_cast<int>(e.nodes_.size()) - 1;
    const int shift = static_cast<int>(e.nodes_.size());
    for (ExprNode n : rhs.nodes_) {
        if (n.lhs >= 0) n.lhs += shift;
        if (n.rhs >= 0) n.rhs += shift;
        e.nodes_.push_back(n);
    }
    const int rhs_root = static_cast<int>(e.nodes_.size()) - 1;
    e.nodes_.push_back({op, 0.0, lhs_root, rhs_root});
    return e;
}

namespace {

std::string fmt_inputs(double x, double u, double v) {
    std::ostringstream os;
    os << "(x=" << x << ", u=" << u << ", v=" << v << ")";
    return os.str();
}

[[noreturn]] void domain_error(const std::string& what, double x, double u, double v) {
    throw EvalError("domain error: " + what + " at " + fmt_inputs(x, u, v));
}

// Integer exponents up to |e| <= 64 multiply out left to right, so u^3
// equals u*u*u bit for bit.
double eval_pow(double base, double expo, double x, double u, double v) {
    double ipart = 0.0;
    if (std::abs(expo) <= 64.0 && std::modf(expo, &ipart) == 0.0) {
        long n = static_cast<long>(ipart);
        const long an = n < 0 ? -n : n;
        double r = 1.0;
        for (long i = 0; i < an; ++i) r *= base;
        if (n < 0) {
            if (r == 0.0) domain_error("zero raised to a negative power", x, u, v);
            r = 1.0 / r;
        }
        return r;
    }
    if (base < 0.0) domain_error("fractional power of a negative base", x, u, v);
    if (base == 0.0 && expo < 0.0) domain_error("zero raised to a negative power", x, u, v);
    return std::pow(base, expo);
}

}  // namespace

double Expr::eval(double x, double u, double v) const {
    if (nodes_.empty()) throw EvalError("evaluation of an empty expression");
    std::vector<double> val(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const ExprNode& n = nodes_[i];
        switch (n.op) {
            case ExprOp::Constant: val[i] = n.value; break;
            case ExprOp::VarX: val[i] = x; break;
            case ExprOp::VarU: val[i] = u; break;
            case ExprOp::VarV: val[i] = v; break;
            case ExprOp::Neg: val[i] = -val[n.lhs]; break;
            case ExprOp::Sin: val[i] = std::sin(val[n.lhs]); break;
            case ExprOp::Cos: val[i] = std::cos(val[n.lhs]); break;
            case ExprOp::Exp: val[i] = std::exp(val[n.lhs]); break;
            case ExprOp::Tanh: val[i] = std::tanh(val[n.lhs]); break;
            case ExprOp::Abs: val[i] = std::abs(val[n.lhs]); break;
            case ExprOp::Log:
                if (!(val[n.lhs] > 0.0)) domain_error("log of non-positive argument", x, u, v);
                val[i] = std::log(val[n.lhs]);
                break;
            case ExprOp::Sqrt:
                if (val[n.lhs] < 0.0) domain_error("sqrt of negative argument", x, u, v);
                val[i] = std::sqrt(val[n.lhs]);
                break;
            case ExprOp::Add: val[i] = val[n.lhs] + val[n.rhs]; break;
            case ExprOp::Sub: val[i] = val[n.lhs] - val[n.rhs]; break;
            case ExprOp::Mul: val[i] = val[n.lhs] * val[n.rhs]; break;
            case ExprOp::Div:
                if (val[n.rhs] == 0.0) domain_error("division by zero", x, u, v);
                val[i] = val[n.lhs] / val[n.rhs];
                break;
            case ExprOp::Pow: val[i] = eval_pow(val[n.lhs], val[n.rhs], x, u, v); break;
        }
    }
    return val.back();
}

bool Expr::depends_on_v() const {
    for (const ExprNode& n : nodes_)
        if (n.op == ExprOp::VarV) return true;
    return false;
}

namespace {

std::string print_node(const std::vector<ExprNode>& nodes, int i) {
    const ExprNode& n = nodes[i];
    switch (n.op) {
        case ExprOp::Constant: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", n.value);
            if (n.value < 0.0) return std::string("(-") + (buf + 1) + ")";
            return buf;
        }
        case ExprOp::VarX: return "x";
        case ExprOp::VarU: return "u";
        case ExprOp::VarV: return "v";
        case ExprOp::Neg: return "(-" + print_node(nodes, n.lhs) + ")";
        case ExprOp::Sin: return "sin(" + print_node(nodes, n.lhs) + ")";
        case ExprOp::Cos: return "cos(" + print_node(nodes, n.lhs) + ")";
        case ExprOp::Exp: return "exp(" + print_node(nodes, n.lhs) + ")";
        case ExprOp::Log: return "log(" + print_node(nodes, n.lhs) + ")";
        case ExprOp::Sqrt: return "sqrt(" + print_node(nodes, n.lhs) + ")";
        case ExprOp::Abs: return "abs(" + print_node(nodes, n.lhs) + ")";
        case ExprOp::Tanh: return "tanh(" + print_node(nodes, n.lhs) + ")";
        case ExprOp::Add: return "(" + print_node(nodes, n.lhs) + "+" + print_node(nodes, n.rhs) + ")";
        case ExprOp::Sub: return "(" + print_node(nodes, n.lhs) + "-" + print_node(nodes, n.rhs) + ")";
        case ExprOp::Mul: return "(" + print_node(nodes, n.lhs) + "*" + print_node(nodes, n.rhs) + ")";
        case ExprOp::Div: return "(" + print_node(nodes, n.lhs) + "/" + print_node(nodes, n.rhs) + ")";
        case ExprOp::Pow: return "(" + print_node(nodes, n.lhs) + "^" + print_node(nodes, n.rhs) + ")";
    }
    return "?";
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr parse() {
        Expr e = parse_expr_rule();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected trailing input");
        if (e.empty()) fail("empty expression");
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_expr_rule() {
        Expr lhs = parse_term();
        for (;;) {
            if (consume('+'))
                lhs = Expr::binary(ExprOp::Add, lhs, parse_term());
            else if (consume('-'))
                lhs = Expr::binary(ExprOp::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    Expr parse_term() {
        Expr lhs = parse_factor();
        for (;;) {
            if (consume('*'))
                lhs = Expr::binary(ExprOp::Mul, lhs, parse_factor());
            else if (consume('/'))
                lhs = Expr::binary(ExprOp::Div, lhs, parse_factor());
            else
                return lhs;
        }
    }

    // "^" is right-associative: the exponent recurses into factor.
    Expr parse_factor() {
        Expr base = parse_unary();
        if (consume('^')) return Expr::binary(ExprOp::Pow, base, parse_factor());
        return base;
    }

    Expr parse_unary() {
        if (consume('-')) return Expr::unary(ExprOp::Neg, parse_unary());
        return parse_atom();
    }

    Expr parse_atom() {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            Expr inner = parse_expr_rule();
            if (!consume(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        if (c == '\0') fail("unexpected end of input");
        fail(std::string("unexpected character '") + c + "'");
    }

    Expr parse_number() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t e = pos_ + 1;
            if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
            if (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) {
                pos_ = e;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            }
        }
        double value = 0.0;
        const auto [end, ec] =
            std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (ec != std::errc{} || end != src_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        return Expr::constant(value);
    }

    Expr parse_ident() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               std::isalpha(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);
        if (name == "x") return Expr::variable(ExprOp::VarX);
        if (name == "u") return Expr::variable(ExprOp::VarU);
        if (name == "v") return Expr::variable(ExprOp::VarV);

        ExprOp op;
        if (name == "sin") op = ExprOp::Sin;
        else if (name == "cos") op = ExprOp::Cos;
        else if (name == "exp") op = ExprOp::Exp;
        else if (name == "log") op = ExprOp::Log;
        else if (name == "sqrt") op = ExprOp::Sqrt;
        else if (name == "abs") op = ExprOp::Abs;
        else if (name == "tanh") op = ExprOp::Tanh;
        else {
            pos_ = start;
            fail("unknown identifier '" + std::string(name) + "'");
        }
        if (!consume('(')) fail("expected '(' after function name '" + std::string(name) + "'");
        Expr arg = parse_expr_rule();
        if (peek() == ',') fail("functions take exactly one argument");
        if (!consume(')')) fail("expected ')'");
        return Expr::unary(op, arg);
    }
};

}  // namespace

std::string Expr::to_string() const {
    if (nodes_.empty()) return "";
    return print_node(nodes_, static_cast<int>(nodes_.size()) - 1);
}

Expr parse_expr(std::string_view source) { return Parser(source).parse(); }

}  // namespace bvpforge
