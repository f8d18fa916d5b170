#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qtk {

using Value = std::variant<std::int64_t, double, bool>;

std::string value_str(const Value& v);
bool value_equal(const Value& a, const Value& b);

enum class Op : std::uint8_t {
    Int, Float, Bool, Var,
    Neg, Not,
    Add, Sub, Mul, Div, Mod, Shl, Shr, BitAnd, BitOr, BitXor,
    Eq, Ne, Lt, Le, Gt, Ge, And, Or,
    Call,
};

bool is_comparison(Op op);
bool is_binary(Op op);

enum class ExprType { Int, Float, Bool, Unknown };

class ExprError : public std::runtime_error {
public:
    enum class Kind { Parse, Unbound, Type, Arithmetic };
    ExprError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
    Kind kind;
};

struct ExprNode;

/// Immutable classical expression tree. Canonical text is C-like infix.
class Expr {
public:
    Expr() = default;
    Expr(int v);
    Expr(std::int64_t v);
    Expr(double v);
    Expr(bool v);

    static Expr lit(const Value& v);
    static Expr var(std::string name);
    static Expr unary(Op op, Expr a);
    static Expr binary(Op op, Expr a, Expr b);
    static Expr call(std::string fn, std::vector<Expr> args);
    static Expr parse(std::string_view text);

    bool empty() const { return !node_; }
    Op op() const;
    const Value& literal() const;
    const std::string& name() const;
    const std::vector<Expr>& args() const;

    std::string str() const;
    /// Free variable names (including register names passed to len()).
    void collect_vars(std::set<std::string>& out) const;
    std::set<std::string> vars() const;

    bool same(const Expr& other) const;
    friend bool operator==(const Expr& a, const Expr& b) { return a.same(b); }

private:
    explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
    Op op;
    Value lit;
    std::string name;
    std::vector<Expr> args;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator%(Expr a, Expr b);
Expr operator<<(Expr a, Expr b);
Expr operator>>(Expr a, Expr b);
Expr operator&(Expr a, Expr b);
Expr operator|(Expr a, Expr b);
Expr operator^(Expr a, Expr b);
Expr operator-(Expr a);
Expr operator!(Expr a);
Expr eq(Expr a, Expr b);
Expr ne(Expr a, Expr b);
Expr lt(Expr a, Expr b);
Expr le(Expr a, Expr b);
Expr gt(Expr a, Expr b);
Expr ge(Expr a, Expr b);
Expr land(Expr a, Expr b);
Expr lor(Expr a, Expr b);

/// Variable environment for evaluation.
class EvalEnv {
public:
    virtual ~EvalEnv() = default;
    virtual const Value* lookup(const std::string& name) const = 0;
    virtual std::optional<std::int64_t> register_length(const std::string&) const { return std::nullopt; }
};

Value evaluate(const Expr& e, const EvalEnv& env);
std::int64_t as_int(const Value& v, std::string_view what);
double as_float(const Value& v, std::string_view what);
bool as_bool(const Value& v, std::string_view what);

/// Static type of an expression given variable types; Unknown on error.
class TypeEnv {
public:
    virtual ~TypeEnv() = default;
    virtual std::optional<ExprType> var_type(const std::string& name) const = 0;
    virtual bool is_register(const std::string&) const { return false; }
};
/// Throws ExprError(Type or Unbound) on ill-typed expressions.
ExprType infer_type(const Expr& e, const TypeEnv& env);

}  // namespace qtk
