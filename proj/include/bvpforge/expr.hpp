#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bvpforge {

/// Node kinds of the expression tree for f(x, u, v) and its partials.
enum class ExprOp {
    Constant,
    VarX,
    VarU,
    VarV,
    Neg,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
    Tanh,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
};

bool is_unary(ExprOp op);
bool is_binary(ExprOp op);

struct ExprNode {
    ExprOp op = ExprOp::Constant;
    double value = 0.0;  // Constant only
    int lhs = -1;        // child (unary) or left child (binary)
    int rhs = -1;        // right child (binary)
};

/// Immutable expression in the variables x, u, v.
///
/// Nodes are stored child-before-parent, so evaluation is a single forward
/// pass. Binary chains evaluate left to right and each arithmetic operation
/// rounds once, which keeps e.g. "u*u*u" equal to ((u*u)*u) exactly.
/// Domain errors (log of non-positive, sqrt of negative, division by zero,
/// fractional power of a negative base) throw EvalError and never yield NaN.
class Expr {
public:
    Expr() = default;

    static Expr constant(double c);
    static Expr variable(ExprOp var);               // VarX, VarU or VarV
    static Expr unary(ExprOp op, const Expr& arg);  // Neg or a function
    static Expr binary(ExprOp op, const Expr& lhs, const Expr& rhs);

    bool empty() const { return nodes_.empty(); }
    std::size_t node_count() const { return nodes_.size(); }

    double eval(double x, double u, double v) const;

    /// True if any node references the variable v.
    bool depends_on_v() const;

    /// Parenthesized source form; parsing it back yields an expression with
    /// identical evaluation on every point.
    std::string to_string() const;

private:
    friend Expr parse_expr(std::string_view source);

    std::vector<ExprNode> nodes_;
};

/// Recursive-descent parser for the grammar
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := unary ("^" factor)?
///   unary  := "-" unary | atom
///   atom   := number | "x" | "u" | "v" | ident "(" expr ")" | "(" expr ")"
/// where ident is one of sin, cos, exp, log, sqrt, abs, tanh.
/// Throws ParseError with the byte offset of the offending character.
Expr parse_expr(std::string_view source);

}  // namespace bvpforge
