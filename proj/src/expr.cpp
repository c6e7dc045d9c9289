#include "oscgroup/expr.hpp"

#include <fmt/format.h>

#include <cctype>
#include <cmath>
#include <numbers>

namespace oscgroup {

namespace {

ExprNodePtr make_node(ExprNode n) {
    return std::make_shared<const ExprNode>(std::move(n));
}

ExprNodePtr leaf_const(double v) {
    return make_node({ExprKind::Constant, v, ExprFunc::Sin, nullptr, nullptr});
}

ExprNodePtr binary(ExprKind k, ExprNodePtr l, ExprNodePtr r) {
    return make_node({k, 0.0, ExprFunc::Sin, std::move(l), std::move(r)});
}

ExprNodePtr unary_neg(ExprNodePtr c) {
    return make_node({ExprKind::Neg, 0.0, ExprFunc::Sin, std::move(c), nullptr});
}

ExprNodePtr call(ExprFunc f, ExprNodePtr c) {
    return make_node({ExprKind::Call, 0.0, f, std::move(c), nullptr});
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    ExprNodePtr run() {
        ExprNodePtr e = expr();
        skip_ws();
        if (pos_ != src_.size())
            throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) throw ParseError(std::string("expected ") + what, pos_);
    }

    ExprNodePtr expr() {
        ExprNodePtr e = term();
        for (;;) {
            if (accept('+')) e = binary(ExprKind::Add, e, term());
            else if (accept('-')) e = binary(ExprKind::Sub, e, term());
            else return e;
        }
    }

    ExprNodePtr term() {
        ExprNodePtr e = factor();
        for (;;) {
            if (accept('*')) e = binary(ExprKind::Mul, e, factor());
            else if (accept('/')) e = binary(ExprKind::Div, e, factor());
            else return e;
        }
    }

    ExprNodePtr factor() {
        if (accept('-')) return unary_neg(factor());
        return primary();
    }

    ExprNodePtr primary() {
        skip_ws();
        if (pos_ >= src_.size())
            throw ParseError("expected number, 't', 'pi', function or '('", pos_);
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        if (c == '(') {
            ++pos_;
            ExprNodePtr e = expr();
            expect(')', "')'");
            return e;
        }
        throw ParseError("expected number, 't', 'pi', function or '('", pos_);
    }

    ExprNodePtr number() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
                throw ParseError("expected exponent digits", pos_);
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        double v = std::stod(std::string(src_.substr(start, pos_ - start)));
        return leaf_const(v);
    }

    ExprNodePtr identifier() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        std::string_view name = src_.substr(start, pos_ - start);
        if (name == "t")
            return make_node({ExprKind::Time, 0.0, ExprFunc::Sin, nullptr, nullptr});
        if (name == "pi") return leaf_const(std::numbers::pi);
        ExprFunc f;
        if (name == "sin") f = ExprFunc::Sin;
        else if (name == "cos") f = ExprFunc::Cos;
        else if (name == "tan") f = ExprFunc::Tan;
        else if (name == "exp") f = ExprFunc::Exp;
        else if (name == "sqrt") f = ExprFunc::Sqrt;
        else throw ParseError("unknown name '" + std::string(name) + "'", start);
        skip_ws();
        expect('(', "'(' after function name");
        ExprNodePtr arg = expr();
        expect(')', "')'");
        return call(f, std::move(arg));
    }
};

double eval_node(const ExprNode& n, double t) {
    switch (n.kind) {
        case ExprKind::Constant: return n.value;
        case ExprKind::Time: return t;
        case ExprKind::Add: return eval_node(*n.lhs, t) + eval_node(*n.rhs, t);
        case ExprKind::Sub: return eval_node(*n.lhs, t) - eval_node(*n.rhs, t);
        case ExprKind::Mul: return eval_node(*n.lhs, t) * eval_node(*n.rhs, t);
        case ExprKind::Div: {
            double den = eval_node(*n.rhs, t);
            if (den == 0.0)
                throw DomainError(fmt::format("division by zero at t={}", t));
            return eval_node(*n.lhs, t) / den;
        }
        case ExprKind::Neg: return -eval_node(*n.lhs, t);
        case ExprKind::Call: {
            double u = eval_node(*n.lhs, t);
            switch (n.func) {
                case ExprFunc::Sin: return std::sin(u);
                case ExprFunc::Cos: return std::cos(u);
                case ExprFunc::Tan: return std::tan(u);
                case ExprFunc::Exp: return std::exp(u);
                case ExprFunc::Sqrt:
                    if (u < 0.0)
                        throw DomainError(fmt::format("sqrt of negative value at t={}", t));
                    return std::sqrt(u);
            }
            return 0.0;  // unreachable
        }
    }
    return 0.0;  // unreachable
}

ExprNodePtr diff_node(const ExprNodePtr& p) {
    const ExprNode& n = *p;
    switch (n.kind) {
        case ExprKind::Constant: return leaf_const(0.0);
        case ExprKind::Time: return leaf_const(1.0);
        case ExprKind::Add: return binary(ExprKind::Add, diff_node(n.lhs), diff_node(n.rhs));
        case ExprKind::Sub: return binary(ExprKind::Sub, diff_node(n.lhs), diff_node(n.rhs));
        case ExprKind::Mul:
            return binary(ExprKind::Add,
                          binary(ExprKind::Mul, diff_node(n.lhs), n.rhs),
                          binary(ExprKind::Mul, n.lhs, diff_node(n.rhs)));
        case ExprKind::Div:
            // (u'v - uv') / v^2
            return binary(ExprKind::Div,
                          binary(ExprKind::Sub,
                                 binary(ExprKind::Mul, diff_node(n.lhs), n.rhs),
                                 binary(ExprKind::Mul, n.lhs, diff_node(n.rhs))),
                          binary(ExprKind::Mul, n.rhs, n.rhs));
        case ExprKind::Neg: return unary_neg(diff_node(n.lhs));
        case ExprKind::Call: {
            ExprNodePtr du = diff_node(n.lhs);
            switch (n.func) {
                case ExprFunc::Sin:
                    return binary(ExprKind::Mul, call(ExprFunc::Cos, n.lhs), du);
                case ExprFunc::Cos:
                    return unary_neg(binary(ExprKind::Mul, call(ExprFunc::Sin, n.lhs), du));
                case ExprFunc::Tan:
                    // u' / cos(u)^2
                    return binary(ExprKind::Div, du,
                                  binary(ExprKind::Mul, call(ExprFunc::Cos, n.lhs),
                                         call(ExprFunc::Cos, n.lhs)));
                case ExprFunc::Exp:
                    return binary(ExprKind::Mul, call(ExprFunc::Exp, n.lhs), du);
                case ExprFunc::Sqrt:
                    // u' / (2 sqrt(u))
                    return binary(ExprKind::Div, du,
                                  binary(ExprKind::Mul, leaf_const(2.0),
                                         call(ExprFunc::Sqrt, n.lhs)));
            }
            return nullptr;  // unreachable
        }
    }
    return nullptr;  // unreachable
}

int precedence(ExprKind k) {
    switch (k) {
        case ExprKind::Add:
        case ExprKind::Sub: return 1;
        case ExprKind::Mul:
        case ExprKind::Div: return 2;
        case ExprKind::Neg: return 3;
        default: return 4;
    }
}

const char* func_name(ExprFunc f) {
    switch (f) {
        case ExprFunc::Sin: return "sin";
        case ExprFunc::Cos: return "cos";
        case ExprFunc::Tan: return "tan";
        case ExprFunc::Exp: return "exp";
        case ExprFunc::Sqrt: return "sqrt";
    }
    return "";
}

void print_node(const ExprNode& n, std::string& out, int parent_prec) {
    int prec = precedence(n.kind);
    bool parens = prec < parent_prec;
    if (parens) out += '(';
    switch (n.kind) {
        case ExprKind::Constant: out += fmt::format("{}", n.value); break;
        case ExprKind::Time: out += 't'; break;
        case ExprKind::Add:
            print_node(*n.lhs, out, prec);
            out += '+';
            // right operand needs the next level so "a-(b+c)" style groups survive
            print_node(*n.rhs, out, prec + 1);
            break;
        case ExprKind::Sub:
            print_node(*n.lhs, out, prec);
            out += '-';
            print_node(*n.rhs, out, prec + 1);
            break;
        case ExprKind::Mul:
            print_node(*n.lhs, out, prec);
            out += '*';
            print_node(*n.rhs, out, prec + 1);
            break;
        case ExprKind::Div:
            print_node(*n.lhs, out, prec);
            out += '/';
            print_node(*n.rhs, out, prec + 1);
            break;
        case ExprKind::Neg:
            out += '-';
            print_node(*n.lhs, out, prec + 1);
            break;
        case ExprKind::Call:
            out += func_name(n.func);
            out += '(';
            print_node(*n.lhs, out, 0);
            out += ')';
            break;
    }
    if (parens) out += ')';
}

bool same_node(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprKind::Constant: return a.value == b.value;
        case ExprKind::Time: return true;
        case ExprKind::Neg: return same_node(*a.lhs, *b.lhs);
        case ExprKind::Call: return a.func == b.func && same_node(*a.lhs, *b.lhs);
        default: return same_node(*a.lhs, *b.lhs) && same_node(*a.rhs, *b.rhs);
    }
}

}  // namespace

Expr Expr::parse(std::string_view source) {
    Parser p(source);
    return Expr(p.run());
}

Expr Expr::constant(double value) { return Expr(leaf_const(value)); }

double Expr::eval(double t) const {
    double v = eval_node(*node_, t);
    if (!std::isfinite(v))
        throw DomainError(fmt::format("non-finite expression value at t={}", t));
    return v;
}

Expr Expr::derivative() const { return Expr(diff_node(node_)); }

std::string Expr::str() const {
    std::string out;
    print_node(*node_, out, 0);
    return out;
}

bool Expr::is_literal_zero() const {
    return node_->kind == ExprKind::Constant && node_->value == 0.0;
}

bool Expr::same_structure(const Expr& other) const {
    return same_node(*node_, *other.node_);
}

}  // namespace oscgroup
