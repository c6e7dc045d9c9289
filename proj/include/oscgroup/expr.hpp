#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "oscgroup/errors.hpp"

namespace oscgroup {

// Minimal expression language for time-dependent coefficients.
//
// Grammar:
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := '-' factor | primary
//   primary := number | 't' | 'pi' | func '(' expr ')' | '(' expr ')'
//   func    := 'sin' | 'cos' | 'tan' | 'exp' | 'sqrt'
//
// Whitespace is insignificant.  Numbers are decimal with optional fraction
// and exponent; `pi` folds to a constant at parse time.

enum class ExprKind { Constant, Time, Add, Sub, Mul, Div, Neg, Call };
enum class ExprFunc { Sin, Cos, Tan, Exp, Sqrt };

struct ExprNode;
using ExprNodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprKind kind;
    double value = 0.0;              // Constant payload
    ExprFunc func = ExprFunc::Sin;   // Call payload
    ExprNodePtr lhs;                 // sole child of Neg/Call
    ExprNodePtr rhs;
};

// Immutable expression handle.  Trees are never mutated after construction,
// so evaluation is pure and concurrent use is safe.
class Expr {
public:
    Expr() : Expr(constant(0.0)) {}

    static Expr parse(std::string_view source);  // throws ParseError
    static Expr constant(double value);

    double eval(double t) const;   // throws DomainError
    Expr derivative() const;       // exact symbolic d/dt, total on the grammar
    std::string str() const;

    // True for the literal constant 0 (how presets spell an absent term).
    bool is_literal_zero() const;
    bool same_structure(const Expr& other) const;

    const ExprNode& node() const { return *node_; }

private:
    explicit Expr(ExprNodePtr node) : node_(std::move(node)) {}
    ExprNodePtr node_;
};

}  // namespace oscgroup
