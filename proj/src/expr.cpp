#include "liftcheck/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace liftcheck {

namespace {

Expr node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

bool is_lit(const Expr& e, double v) {
    return e->kind == ExprKind::Literal && e->value == v;
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

void Env::set(const std::string& name, double v) {
    for (auto& [n, val] : vars_) {
        if (n == name) {
            val = v;
            return;
        }
    }
    vars_.emplace_back(name, v);
}

double Env::get(const std::string& name) const {
    for (const auto& [n, v] : vars_) {
        if (n == name) return v;
    }
    throw EvalError("unbound symbol '" + name + "'", name);
}

bool Env::has(const std::string& name) const {
    for (const auto& [n, v] : vars_) {
        if (n == name) return true;
    }
    return false;
}

Expr lit(double v) {
    ExprNode n;
    n.kind = ExprKind::Literal;
    n.value = v;
    return node(std::move(n));
}

Expr sym(const std::string& name) {
    ExprNode n;
    n.kind = ExprKind::Symbol;
    n.name = name;
    return node(std::move(n));
}

Expr add(Expr a, Expr b) {
    if (a->kind == ExprKind::Literal && b->kind == ExprKind::Literal)
        return lit(a->value + b->value);
    if (is_lit(a, 0.0)) return b;
    if (is_lit(b, 0.0)) return a;
    ExprNode n;
    n.kind = ExprKind::Add;
    n.a = std::move(a);
    n.b = std::move(b);
    return node(std::move(n));
}

Expr sub(Expr a, Expr b) {
    if (a->kind == ExprKind::Literal && b->kind == ExprKind::Literal)
        return lit(a->value - b->value);
    if (is_lit(b, 0.0)) return a;
    if (is_lit(a, 0.0)) return neg(std::move(b));
    ExprNode n;
    n.kind = ExprKind::Sub;
    n.a = std::move(a);
    n.b = std::move(b);
    return node(std::move(n));
}

Expr mul(Expr a, Expr b) {
    if (a->kind == ExprKind::Literal && b->kind == ExprKind::Literal)
        return lit(a->value * b->value);
    if (is_lit(a, 0.0) || is_lit(b, 0.0)) return lit(0.0);
    if (is_lit(a, 1.0)) return b;
    if (is_lit(b, 1.0)) return a;
    ExprNode n;
    n.kind = ExprKind::Mul;
    n.a = std::move(a);
    n.b = std::move(b);
    return node(std::move(n));
}

Expr div(Expr a, Expr b) {
    if (a->kind == ExprKind::Literal && b->kind == ExprKind::Literal &&
        b->value != 0.0)
        return lit(a->value / b->value);
    if (is_lit(a, 0.0) && !is_lit(b, 0.0)) return lit(0.0);
    if (is_lit(b, 1.0)) return a;
    ExprNode n;
    n.kind = ExprKind::Div;
    n.a = std::move(a);
    n.b = std::move(b);
    return node(std::move(n));
}

Expr pow(Expr a, Expr b) {
    if (a->kind == ExprKind::Literal && b->kind == ExprKind::Literal) {
        double v = std::pow(a->value, b->value);
        if (std::isfinite(v)) return lit(v);
    }
    if (is_lit(b, 1.0)) return a;
    if (is_lit(b, 0.0)) return lit(1.0);
    if (is_lit(a, 1.0)) return lit(1.0);
    ExprNode n;
    n.kind = ExprKind::Pow;
    n.a = std::move(a);
    n.b = std::move(b);
    return node(std::move(n));
}

Expr neg(Expr a) {
    if (a->kind == ExprKind::Literal) return lit(-a->value);
    if (a->kind == ExprKind::Neg) return a->a;
    ExprNode n;
    n.kind = ExprKind::Neg;
    n.a = std::move(a);
    return node(std::move(n));
}

Expr apply(Func f, Expr a) {
    ExprNode n;
    n.kind = ExprKind::Apply;
    n.func = f;
    n.a = std::move(a);
    return node(std::move(n));
}

const char* func_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Tan: return "tan";
        case Func::Exp: return "exp";
        case Func::Log: return "log";
        case Func::Sqrt: return "sqrt";
        case Func::Sinh: return "sinh";
        case Func::Cosh: return "cosh";
        case Func::Tanh: return "tanh";
    }
    return "?";
}

namespace {

bool func_from_name(const std::string& s, Func& out) {
    static const std::pair<const char*, Func> table[] = {
        {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},
        {"exp", Func::Exp},   {"log", Func::Log},   {"sqrt", Func::Sqrt},
        {"sinh", Func::Sinh}, {"cosh", Func::Cosh}, {"tanh", Func::Tanh},
    };
    for (const auto& [name, f] : table) {
        if (s == name) {
            out = f;
            return true;
        }
    }
    return false;
}

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& symbols)
        : text_(text), symbols_(symbols) {}

    Expr run() {
        Expr e = expr();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected character '" + std::string(1, text_[pos_]) + "'",
                 pos_);
        return e;
    }

private:
    const std::string& text_;
    const std::vector<std::string>& symbols_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg, size_t off) {
        throw ParseError(msg + " at offset " + std::to_string(off), off);
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Expr expr() {
        Expr e = term();
        for (;;) {
            if (eat('+'))
                e = add(e, term());
            else if (eat('-'))
                e = sub(e, term());
            else
                return e;
        }
    }

    Expr term() {
        Expr e = factor();
        for (;;) {
            if (eat('*'))
                e = mul(e, factor());
            else if (eat('/'))
                e = div(e, factor());
            else
                return e;
        }
    }

    Expr factor() {
        if (eat('-')) return neg(factor());
        return power();
    }

    Expr power() {
        Expr base = atom();
        if (eat('^')) return pow(base, factor());
        return base;
    }

    Expr atom() {
        char c = peek();
        size_t start = pos_;
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            if (!eat(')')) fail("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return identifier();
        if (c == '\0') fail("unexpected end of input", start);
        fail("unexpected character '" + std::string(1, c) + "'", start);
    }

    Expr number() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
                ++pos_;
            if (pos_ >= text_.size() ||
                !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                pos_ = mark;  // not an exponent, leave for the caller
            else
                while (pos_ < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
        }
        std::string s = text_.substr(start, pos_ - start);
        if (s == ".") fail("malformed number", start);
        try {
            return lit(std::stod(s));
        } catch (const std::exception&) {
            fail("malformed number '" + s + "'", start);
        }
    }

    Expr identifier() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        Func f;
        if (func_from_name(name, f)) {
            if (!eat('('))
                fail("function '" + name + "' requires '('", pos_);
            Expr arg = expr();
            if (!eat(')')) fail("expected ')'", pos_);
            return apply(f, arg);
        }
        if (peek() == '(')
            fail("unknown function '" + name + "'", start);
        if (name == "pi") return lit(kPi);
        for (const auto& s : symbols_)
            if (s == name) return sym(name);
        std::string allowed;
        for (const auto& s : symbols_) {
            if (!allowed.empty()) allowed += ", ";
            allowed += s;
        }
        fail("unknown symbol '" + name + "' (allowed: " + allowed + ")", start);
    }
};

int precedence(const Expr& e) {
    switch (e->kind) {
        case ExprKind::Add:
        case ExprKind::Sub: return 0;
        case ExprKind::Mul:
        case ExprKind::Div: return 1;
        case ExprKind::Neg: return 2;
        case ExprKind::Pow: return 3;
        default:
            // negative literals reparse like a unary minus application
            if (e->kind == ExprKind::Literal && e->value < 0) return 2;
            return 4;
    }
}

void print_rec(const Expr& e, std::ostringstream& out);

void print_child(const Expr& c, int min_prec, std::ostringstream& out) {
    if (precedence(c) < min_prec) {
        out << '(';
        print_rec(c, out);
        out << ')';
    } else {
        print_rec(c, out);
    }
}

void print_rec(const Expr& e, std::ostringstream& out) {
    switch (e->kind) {
        case ExprKind::Literal: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", e->value);
            out << buf;
            return;
        }
        case ExprKind::Symbol:
            out << e->name;
            return;
        case ExprKind::Add:
            print_child(e->a, 0, out);
            out << " + ";
            print_child(e->b, 0, out);
            return;
        case ExprKind::Sub:
            print_child(e->a, 0, out);
            out << " - ";
            print_child(e->b, 1, out);  // a - (b + c) needs the parens
            return;
        case ExprKind::Mul:
            print_child(e->a, 1, out);
            out << "*";
            print_child(e->b, 2, out);  // a*(b/c) kept unambiguous
            return;
        case ExprKind::Div:
            print_child(e->a, 1, out);
            out << "/";
            print_child(e->b, 2, out);
            return;
        case ExprKind::Neg:
            out << '-';
            print_child(e->a, 2, out);
            return;
        case ExprKind::Pow:
            print_child(e->a, 4, out);  // (x^2)^3 vs x^2^3: always wrap non-atoms
            out << '^';
            print_child(e->b, 4, out);
            return;
        case ExprKind::Apply:
            out << func_name(e->func) << '(';
            print_rec(e->a, out);
            out << ')';
            return;
    }
}

[[noreturn]] void domain_error(const std::string& what, const Expr& at) {
    throw EvalError(what + " in '" + print(at) + "'", print(at));
}

double apply_func(Func f, double x, const Expr& at) {
    switch (f) {
        case Func::Sin: return std::sin(x);
        case Func::Cos: return std::cos(x);
        case Func::Tan: return std::tan(x);
        case Func::Exp: return std::exp(x);
        case Func::Log:
            if (x <= 0.0) domain_error("log of non-positive value", at);
            return std::log(x);
        case Func::Sqrt:
            if (x < 0.0) domain_error("sqrt of negative value", at);
            return std::sqrt(x);
        case Func::Sinh: return std::sinh(x);
        case Func::Cosh: return std::cosh(x);
        case Func::Tanh: return std::tanh(x);
    }
    domain_error("unknown function", at);
}

template <class SymbolValue>
double eval_rec(const Expr& e, SymbolValue&& symbol_value) {
    switch (e->kind) {
        case ExprKind::Literal: return e->value;
        case ExprKind::Symbol: return symbol_value(e);
        case ExprKind::Add:
            return eval_rec(e->a, symbol_value) + eval_rec(e->b, symbol_value);
        case ExprKind::Sub:
            return eval_rec(e->a, symbol_value) - eval_rec(e->b, symbol_value);
        case ExprKind::Mul:
            return eval_rec(e->a, symbol_value) * eval_rec(e->b, symbol_value);
        case ExprKind::Div: {
            double num = eval_rec(e->a, symbol_value);
            double den = eval_rec(e->b, symbol_value);
            if (den == 0.0) domain_error("division by zero", e);
            return num / den;
        }
        case ExprKind::Pow: {
            double base = eval_rec(e->a, symbol_value);
            double ex = eval_rec(e->b, symbol_value);
            double v = std::pow(base, ex);
            if (!std::isfinite(v)) {
                if (base == 0.0 && ex < 0.0)
                    domain_error("zero raised to negative power", e);
                if (base < 0.0 && ex != std::floor(ex))
                    domain_error("negative base with non-integer exponent", e);
                domain_error("non-finite power", e);
            }
            return v;
        }
        case ExprKind::Neg: return -eval_rec(e->a, symbol_value);
        case ExprKind::Apply: {
            double v = apply_func(e->func, eval_rec(e->a, symbol_value), e);
            if (!std::isfinite(v)) domain_error("non-finite result", e);
            return v;
        }
    }
    domain_error("corrupt expression node", e);
}

}  // namespace

Expr parse(const std::string& text, const std::vector<std::string>& symbols) {
    return Parser(text, symbols).run();
}

double eval(const Expr& e, const Env& env) {
    return eval_rec(e, [&](const Expr& s) { return env.get(s->name); });
}

Expr bind_slots(const Expr& e, const std::vector<std::string>& coords) {
    switch (e->kind) {
        case ExprKind::Literal: return e;
        case ExprKind::Symbol: {
            for (size_t i = 0; i < coords.size(); ++i) {
                if (coords[i] == e->name) {
                    ExprNode n = *e;
                    n.slot = static_cast<int>(i);
                    return std::make_shared<const ExprNode>(std::move(n));
                }
            }
            throw EvalError("cannot bind symbol '" + e->name + "'", e->name);
        }
        case ExprKind::Neg: {
            ExprNode n = *e;
            n.a = bind_slots(e->a, coords);
            return std::make_shared<const ExprNode>(std::move(n));
        }
        case ExprKind::Apply: {
            ExprNode n = *e;
            n.a = bind_slots(e->a, coords);
            return std::make_shared<const ExprNode>(std::move(n));
        }
        default: {
            ExprNode n = *e;
            n.a = bind_slots(e->a, coords);
            n.b = bind_slots(e->b, coords);
            return std::make_shared<const ExprNode>(std::move(n));
        }
    }
}

double eval(const Expr& e, std::span<const double> point) {
    return eval_rec(e, [&](const Expr& s) {
        if (s->slot < 0 || static_cast<size_t>(s->slot) >= point.size())
            throw EvalError("symbol '" + s->name + "' not bound", s->name);
        return point[s->slot];
    });
}

Expr diff(const Expr& e, const std::string& symbol) {
    switch (e->kind) {
        case ExprKind::Literal: return lit(0.0);
        case ExprKind::Symbol: return lit(e->name == symbol ? 1.0 : 0.0);
        case ExprKind::Add: return add(diff(e->a, symbol), diff(e->b, symbol));
        case ExprKind::Sub: return sub(diff(e->a, symbol), diff(e->b, symbol));
        case ExprKind::Mul:
            return add(mul(diff(e->a, symbol), e->b),
                       mul(e->a, diff(e->b, symbol)));
        case ExprKind::Div:
            return div(sub(mul(diff(e->a, symbol), e->b),
                           mul(e->a, diff(e->b, symbol))),
                       mul(e->b, e->b));
        case ExprKind::Pow: {
            if (e->b->kind == ExprKind::Literal) {
                double c = e->b->value;
                return mul(mul(lit(c), pow(e->a, lit(c - 1.0))),
                           diff(e->a, symbol));
            }
            // general exponent: (a^b)' = a^b (b' log a + b a'/a)
            return mul(e, add(mul(diff(e->b, symbol), apply(Func::Log, e->a)),
                              div(mul(e->b, diff(e->a, symbol)), e->a)));
        }
        case ExprKind::Neg: return neg(diff(e->a, symbol));
        case ExprKind::Apply: {
            Expr u = e->a;
            Expr du = diff(u, symbol);
            switch (e->func) {
                case Func::Sin: return mul(apply(Func::Cos, u), du);
                case Func::Cos: return neg(mul(apply(Func::Sin, u), du));
                case Func::Tan:
                    return div(du, pow(apply(Func::Cos, u), lit(2.0)));
                case Func::Exp: return mul(apply(Func::Exp, u), du);
                case Func::Log: return div(du, u);
                case Func::Sqrt:
                    return div(du, mul(lit(2.0), apply(Func::Sqrt, u)));
                case Func::Sinh: return mul(apply(Func::Cosh, u), du);
                case Func::Cosh: return mul(apply(Func::Sinh, u), du);
                case Func::Tanh:
                    return div(du, pow(apply(Func::Cosh, u), lit(2.0)));
            }
            break;
        }
    }
    throw EvalError("cannot differentiate corrupt expression", print(e));
}

std::string print(const Expr& e) {
    std::ostringstream out;
    print_rec(e, out);
    return out.str();
}

}  // namespace liftcheck
