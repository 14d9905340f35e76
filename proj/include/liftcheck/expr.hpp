#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace liftcheck {

// Closed-form scalar expressions: immutable trees shared by value.
// All higher-level tensor tables are built from these once per manifold
// and then evaluated many times, so nodes carry a pre-resolved slot
// index for symbols (set by bind_slots()) to keep evaluation allocation-free.

enum class ExprKind { Literal, Symbol, Add, Sub, Mul, Div, Pow, Neg, Apply };

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprKind kind;
    double value = 0.0;   // Literal
    std::string name;     // Symbol
    int slot = -1;        // Symbol: index into the evaluation point after bind_slots()
    Func func = Func::Sin;
    Expr a, b;            // children (a only for Neg/Apply)
};

struct ParseError : std::runtime_error {
    size_t offset;  // byte offset into the input text
    ParseError(const std::string& msg, size_t off)
        : std::runtime_error(msg), offset(off) {}
};

struct EvalError : std::runtime_error {
    std::string subexpr;  // printed form of the offending subexpression
    EvalError(const std::string& msg, std::string sub)
        : std::runtime_error(msg), subexpr(std::move(sub)) {}
};

// Environment for evaluating unbound trees by symbol name.
class Env {
public:
    void set(const std::string& name, double v);
    double get(const std::string& name) const;  // throws EvalError if missing
    bool has(const std::string& name) const;

private:
    std::vector<std::pair<std::string, double>> vars_;
};

// Node builders with light folding: literal arithmetic, x+0, x*0, x*1,
// x^0, x^1, double negation. No canonicalization beyond that.
Expr lit(double v);
Expr sym(const std::string& name);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr pow(Expr a, Expr b);
Expr neg(Expr a);
Expr apply(Func f, Expr a);

// Grammar (whitespace insignificant):
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := "-" factor | power
//   power  := atom ("^" factor)?        (right-associative)
//   atom   := number | symbol | func "(" expr ")" | "(" expr ")"
// "pi" is reserved and parses to its numeric value. Any other identifier
// that is not a function name must appear in `symbols`.
Expr parse(const std::string& text, const std::vector<std::string>& symbols);

// Unbound evaluation by name lookup.
double eval(const Expr& e, const Env& env);

// Slot-resolved evaluation: bind_slots() rewrites symbols to indices into
// `coords`; eval then reads point[slot]. Unknown symbols throw.
Expr bind_slots(const Expr& e, const std::vector<std::string>& coords);
double eval(const Expr& e, std::span<const double> point);

// Exact symbolic derivative with respect to one symbol.
Expr diff(const Expr& e, const std::string& symbol);

// Round-trip printable form: parse(print(e)) evaluates identically to e.
std::string print(const Expr& e);

const char* func_name(Func f);

}  // namespace liftcheck
