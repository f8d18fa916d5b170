#include "qtk/qir/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>

namespace qtk {

namespace {

struct OpInfo {
    Op op;
    const char* text;
    int prec;  // binary precedence; 0 for non-binary
};

constexpr OpInfo kBinary[] = {
    {Op::Or, "||", 1},   {Op::And, "&&", 2},    {Op::BitOr, "|", 3},  {Op::BitXor, "^", 4},
    {Op::BitAnd, "&", 5}, {Op::Eq, "==", 6},    {Op::Ne, "!=", 6},    {Op::Lt, "<", 7},
    {Op::Le, "<=", 7},   {Op::Gt, ">", 7},      {Op::Ge, ">=", 7},    {Op::Shl, "<<", 8},
    {Op::Shr, ">>", 8},  {Op::Add, "+", 9},     {Op::Sub, "-", 9},    {Op::Mul, "*", 10},
    {Op::Div, "/", 10},  {Op::Mod, "%", 10},
};
constexpr int kUnaryPrec = 11;

const OpInfo* binary_info(Op op) {
    for (const auto& i : kBinary)
        if (i.op == op) return &i;
    return nullptr;
}

std::string float_text(double d) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, d);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

std::string value_str(const Value& v) {
    if (auto i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    if (auto d = std::get_if<double>(&v)) return float_text(*d);
    return std::get<bool>(v) ? "true" : "false";
}

bool value_equal(const Value& a, const Value& b) {
    if (a.index() != b.index()) return false;
    if (auto d = std::get_if<double>(&a)) {
        double e = std::get<double>(b);
        return std::memcmp(d, &e, sizeof(double)) == 0;
    }
    return a == b;
}

bool is_comparison(Op op) { return op >= Op::Eq && op <= Op::Ge; }
bool is_binary(Op op) { return binary_info(op) != nullptr; }

Expr::Expr(int v) : Expr(static_cast<std::int64_t>(v)) {}
Expr::Expr(std::int64_t v) : Expr(lit(Value{v})) {}
Expr::Expr(double v) : Expr(lit(Value{v})) {}
Expr::Expr(bool v) : Expr(lit(Value{v})) {}

Expr Expr::lit(const Value& v) {
    if (auto i = std::get_if<std::int64_t>(&v); i && *i < 0)
        return unary(Op::Neg, lit(Value{-*i}));
    if (auto d = std::get_if<double>(&v); d && std::signbit(*d))
        return unary(Op::Neg, lit(Value{-*d}));
    Op op = std::holds_alternative<std::int64_t>(v) ? Op::Int : std::holds_alternative<double>(v) ? Op::Float : Op::Bool;
    return Expr(std::make_shared<const ExprNode>(ExprNode{op, v, {}, {}}));
}

Expr Expr::var(std::string name) {
    return Expr(std::make_shared<const ExprNode>(ExprNode{Op::Var, Value{std::int64_t{0}}, std::move(name), {}}));
}

Expr Expr::unary(Op op, Expr a) {
    return Expr(std::make_shared<const ExprNode>(ExprNode{op, Value{std::int64_t{0}}, {}, {std::move(a)}}));
}

Expr Expr::binary(Op op, Expr a, Expr b) {
    return Expr(
        std::make_shared<const ExprNode>(ExprNode{op, Value{std::int64_t{0}}, {}, {std::move(a), std::move(b)}}));
}

Expr Expr::call(std::string fn, std::vector<Expr> args) {
    return Expr(std::make_shared<const ExprNode>(ExprNode{Op::Call, Value{std::int64_t{0}}, std::move(fn), std::move(args)}));
}

Op Expr::op() const { return node_->op; }
const Value& Expr::literal() const { return node_->lit; }
const std::string& Expr::name() const { return node_->name; }
const std::vector<Expr>& Expr::args() const { return node_->args; }

bool Expr::same(const Expr& other) const {
    if (node_ == other.node_) return true;
    if (!node_ || !other.node_) return false;
    const auto& a = *node_;
    const auto& b = *other.node_;
    if (a.op != b.op || a.name != b.name || a.args.size() != b.args.size()) return false;
    if ((a.op == Op::Int || a.op == Op::Float || a.op == Op::Bool) && !value_equal(a.lit, b.lit)) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!a.args[i].same(b.args[i])) return false;
    return true;
}

void Expr::collect_vars(std::set<std::string>& out) const {
    if (!node_) return;
    if (node_->op == Op::Var) out.insert(node_->name);
    for (const auto& a : node_->args) a.collect_vars(out);
}

std::set<std::string> Expr::vars() const {
    std::set<std::string> s;
    collect_vars(s);
    return s;
}

namespace {

void print(const Expr& e, int parent_prec, bool right, std::string& out) {
    switch (e.op()) {
        case Op::Int:
        case Op::Float:
        case Op::Bool: out += value_str(e.literal()); return;
        case Op::Var: out += e.name(); return;
        case Op::Neg:
        case Op::Not: {
            bool paren = parent_prec > kUnaryPrec;
            if (paren) out += '(';
            out += e.op() == Op::Neg ? '-' : '!';
            print(e.args()[0], kUnaryPrec, false, out);
            if (paren) out += ')';
            return;
        }
        case Op::Call: {
            out += e.name();
            out += '(';
            for (std::size_t i = 0; i < e.args().size(); ++i) {
                if (i) out += ", ";
                print(e.args()[i], 0, false, out);
            }
            out += ')';
            return;
        }
        default: break;
    }
    const OpInfo* info = binary_info(e.op());
    bool paren = info->prec < parent_prec || (info->prec == parent_prec && right);
    if (paren) out += '(';
    print(e.args()[0], info->prec, false, out);
    out += ' ';
    out += info->text;
    out += ' ';
    print(e.args()[1], info->prec, true, out);
    if (paren) out += ')';
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Expr parse_all() {
        Expr e = parse_binary(1);
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ExprError(ExprError::Kind::Parse,
                        msg + " at position " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    const OpInfo* peek_binary() {
        skip_ws();
        const OpInfo* best = nullptr;
        for (const auto& i : kBinary) {
            std::size_t len = std::strlen(i.text);
            if (s_.substr(pos_, len) == i.text && (!best || len > std::strlen(best->text))) best = &i;
        }
        return best;
    }

    Expr parse_binary(int min_prec) {
        Expr lhs = parse_unary();
        for (;;) {
            const OpInfo* info = peek_binary();
            if (!info || info->prec < min_prec) return lhs;
            pos_ += std::strlen(info->text);
            Expr rhs = parse_binary(info->prec + 1);
            lhs = Expr::binary(info->op, std::move(lhs), std::move(rhs));
        }
    }

    Expr parse_unary() {
        skip_ws();
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '!')) {
            Op op = s_[pos_] == '-' ? Op::Neg : Op::Not;
            ++pos_;
            return Expr::unary(op, parse_unary());
        }
        return parse_primary();
    }

    Expr parse_primary() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_binary(1);
            skip_ws();
            if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
            ++pos_;
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (is_ident_start(c)) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
            std::string id(s_.substr(start, pos_ - start));
            if (id == "true") return Expr(true);
            if (id == "false") return Expr(false);
            if (id == "inf") return Expr::lit(Value{HUGE_VAL});
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == '(') {
                ++pos_;
                std::vector<Expr> args;
                skip_ws();
                if (pos_ < s_.size() && s_[pos_] == ')') {
                    ++pos_;
                    return Expr::call(id, {});
                }
                for (;;) {
                    args.push_back(parse_binary(1));
                    skip_ws();
                    if (pos_ < s_.size() && s_[pos_] == ',') {
                        ++pos_;
                        continue;
                    }
                    if (pos_ < s_.size() && s_[pos_] == ')') {
                        ++pos_;
                        break;
                    }
                    fail("expected ',' or ')'");
                }
                return Expr::call(id, std::move(args));
            }
            return Expr::var(id);
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    Expr parse_number() {
        std::size_t start = pos_;
        bool is_float = false;
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '.') {
                is_float = true;
                ++pos_;
            } else if ((c == 'e' || c == 'E')) {
                is_float = true;
                ++pos_;
                if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            } else {
                break;
            }
        }
        std::string_view tok = s_.substr(start, pos_ - start);
        if (is_float) {
            double d = 0;
            auto res = std::from_chars(tok.data(), tok.data() + tok.size(), d);
            if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) fail("bad float literal");
            return Expr::lit(Value{d});
        }
        std::int64_t v = 0;
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) fail("bad integer literal");
        return Expr::lit(Value{v});
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string Expr::str() const {
    if (!node_) return "";
    std::string out;
    print(*this, 0, false, out);
    return out;
}

Expr Expr::parse(std::string_view text) { return Parser(text).parse_all(); }

Expr operator+(Expr a, Expr b) { return Expr::binary(Op::Add, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::binary(Op::Sub, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::binary(Op::Mul, std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::binary(Op::Div, std::move(a), std::move(b)); }
Expr operator%(Expr a, Expr b) { return Expr::binary(Op::Mod, std::move(a), std::move(b)); }
Expr operator<<(Expr a, Expr b) { return Expr::binary(Op::Shl, std::move(a), std::move(b)); }
Expr operator>>(Expr a, Expr b) { return Expr::binary(Op::Shr, std::move(a), std::move(b)); }
Expr operator&(Expr a, Expr b) { return Expr::binary(Op::BitAnd, std::move(a), std::move(b)); }
Expr operator|(Expr a, Expr b) { return Expr::binary(Op::BitOr, std::move(a), std::move(b)); }
Expr operator^(Expr a, Expr b) { return Expr::binary(Op::BitXor, std::move(a), std::move(b)); }
Expr operator-(Expr a) { return Expr::unary(Op::Neg, std::move(a)); }
Expr operator!(Expr a) { return Expr::unary(Op::Not, std::move(a)); }
Expr eq(Expr a, Expr b) { return Expr::binary(Op::Eq, std::move(a), std::move(b)); }
Expr ne(Expr a, Expr b) { return Expr::binary(Op::Ne, std::move(a), std::move(b)); }
Expr lt(Expr a, Expr b) { return Expr::binary(Op::Lt, std::move(a), std::move(b)); }
Expr le(Expr a, Expr b) { return Expr::binary(Op::Le, std::move(a), std::move(b)); }
Expr gt(Expr a, Expr b) { return Expr::binary(Op::Gt, std::move(a), std::move(b)); }
Expr ge(Expr a, Expr b) { return Expr::binary(Op::Ge, std::move(a), std::move(b)); }
Expr land(Expr a, Expr b) { return Expr::binary(Op::And, std::move(a), std::move(b)); }
Expr lor(Expr a, Expr b) { return Expr::binary(Op::Or, std::move(a), std::move(b)); }

std::int64_t as_int(const Value& v, std::string_view what) {
    if (auto i = std::get_if<std::int64_t>(&v)) return *i;
    throw ExprError(ExprError::Kind::Type, std::string(what) + " must be an integer");
}

double as_float(const Value& v, std::string_view what) {
    if (auto d = std::get_if<double>(&v)) return *d;
    if (auto i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    throw ExprError(ExprError::Kind::Type, std::string(what) + " must be numeric");
}

bool as_bool(const Value& v, std::string_view what) {
    if (auto b = std::get_if<bool>(&v)) return *b;
    throw ExprError(ExprError::Kind::Type, std::string(what) + " must be a boolean");
}

namespace {

[[noreturn]] void arith(const std::string& msg) { throw ExprError(ExprError::Kind::Arithmetic, msg); }

Value eval_call(const Expr& e, const EvalEnv& env) {
    const auto& fn = e.name();
    const auto& args = e.args();
    auto need = [&](std::size_t n) {
        if (args.size() != n) throw ExprError(ExprError::Kind::Type, fn + " expects " + std::to_string(n) + " arguments");
    };
    if (fn == "len") {
        need(1);
        if (args[0].op() != Op::Var) throw ExprError(ExprError::Kind::Type, "len expects a register name");
        auto n = env.register_length(args[0].name());
        if (!n) throw ExprError(ExprError::Kind::Unbound, "unknown register '" + args[0].name() + "'");
        return *n;
    }
    if (fn == "min" || fn == "max") {
        need(2);
        Value a = evaluate(args[0], env), b = evaluate(args[1], env);
        if (std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b)) {
            auto x = std::get<std::int64_t>(a), y = std::get<std::int64_t>(b);
            return fn == "min" ? std::min(x, y) : std::max(x, y);
        }
        double x = as_float(a, fn), y = as_float(b, fn);
        return fn == "min" ? std::min(x, y) : std::max(x, y);
    }
    need(1);
    Value a = evaluate(args[0], env);
    if (fn == "sqrt") {
        double x = as_float(a, fn);
        if (x < 0) arith("sqrt of negative value");
        return std::sqrt(x);
    }
    if (fn == "round") return static_cast<std::int64_t>(std::llround(as_float(a, fn)));
    if (fn == "floor") return static_cast<std::int64_t>(std::floor(as_float(a, fn)));
    if (fn == "float") return as_float(a, fn);
    if (fn == "int") {
        if (auto b = std::get_if<bool>(&a)) return std::int64_t{*b ? 1 : 0};
        return static_cast<std::int64_t>(as_float(a, fn));
    }
    if (fn == "abs") {
        if (auto i = std::get_if<std::int64_t>(&a)) return *i < 0 ? -*i : *i;
        return std::fabs(as_float(a, fn));
    }
    throw ExprError(ExprError::Kind::Unbound, "unknown function '" + fn + "'");
}

}  // namespace

Value evaluate(const Expr& e, const EvalEnv& env) {
    if (e.empty()) throw ExprError(ExprError::Kind::Type, "empty expression");
    switch (e.op()) {
        case Op::Int:
        case Op::Float:
        case Op::Bool: return e.literal();
        case Op::Var: {
            const Value* v = env.lookup(e.name());
            if (!v) throw ExprError(ExprError::Kind::Unbound, "unbound variable '" + e.name() + "'");
            return *v;
        }
        case Op::Call: return eval_call(e, env);
        case Op::Neg: {
            Value a = evaluate(e.args()[0], env);
            if (auto i = std::get_if<std::int64_t>(&a)) return -*i;
            return -as_float(a, "operand of '-'");
        }
        case Op::Not: return !as_bool(evaluate(e.args()[0], env), "operand of '!'");
        default: break;
    }
    const Op op = e.op();
    if (op == Op::And || op == Op::Or) {
        bool a = as_bool(evaluate(e.args()[0], env), "operand of logical operator");
        if (op == Op::And && !a) return false;
        if (op == Op::Or && a) return true;
        return as_bool(evaluate(e.args()[1], env), "operand of logical operator");
    }
    Value a = evaluate(e.args()[0], env);
    Value b = evaluate(e.args()[1], env);
    const bool ints = std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b);
    if (op == Op::Eq || op == Op::Ne) {
        bool equal;
        if (std::holds_alternative<bool>(a) || std::holds_alternative<bool>(b))
            equal = as_bool(a, "comparison operand") == as_bool(b, "comparison operand");
        else if (ints)
            equal = std::get<std::int64_t>(a) == std::get<std::int64_t>(b);
        else
            equal = as_float(a, "comparison operand") == as_float(b, "comparison operand");
        return op == Op::Eq ? equal : !equal;
    }
    if (is_comparison(op)) {
        double x, y;
        if (ints) {
            auto i = std::get<std::int64_t>(a), j = std::get<std::int64_t>(b);
            switch (op) {
                case Op::Lt: return i < j;
                case Op::Le: return i <= j;
                case Op::Gt: return i > j;
                default: return i >= j;
            }
        }
        x = as_float(a, "comparison operand");
        y = as_float(b, "comparison operand");
        switch (op) {
            case Op::Lt: return x < y;
            case Op::Le: return x <= y;
            case Op::Gt: return x > y;
            default: return x >= y;
        }
    }
    if (op == Op::Shl || op == Op::Shr || op == Op::BitAnd || op == Op::BitOr || op == Op::BitXor || op == Op::Mod) {
        auto i = as_int(a, "integer operand");
        auto j = as_int(b, "integer operand");
        switch (op) {
            case Op::Shl:
                if (j < 0 || j > 62) arith("shift amount out of range");
                return i << j;
            case Op::Shr:
                if (j < 0 || j > 63) arith("shift amount out of range");
                return i >> j;
            case Op::BitAnd: return i & j;
            case Op::BitOr: return i | j;
            case Op::BitXor: return i ^ j;
            default:
                if (j == 0) arith("modulo by zero");
                return i % j;
        }
    }
    if (ints) {
        auto i = std::get<std::int64_t>(a), j = std::get<std::int64_t>(b);
        switch (op) {
            case Op::Add: return i + j;
            case Op::Sub: return i - j;
            case Op::Mul: return i * j;
            default:
                if (j == 0) arith("division by zero");
                return i / j;
        }
    }
    double x = as_float(a, "arithmetic operand"), y = as_float(b, "arithmetic operand");
    switch (op) {
        case Op::Add: return x + y;
        case Op::Sub: return x - y;
        case Op::Mul: return x * y;
        default:
            if (y == 0.0) arith("division by zero");
            return x / y;
    }
}

ExprType infer_type(const Expr& e, const TypeEnv& env) {
    auto bad = [](const std::string& m) -> ExprType { throw ExprError(ExprError::Kind::Type, m); };
    auto numeric = [](ExprType t) { return t == ExprType::Int || t == ExprType::Float; };
    switch (e.op()) {
        case Op::Int: return ExprType::Int;
        case Op::Float: return ExprType::Float;
        case Op::Bool: return ExprType::Bool;
        case Op::Var: {
            auto t = env.var_type(e.name());
            if (!t) throw ExprError(ExprError::Kind::Unbound, "unbound variable '" + e.name() + "'");
            return *t;
        }
        case Op::Neg: {
            auto t = infer_type(e.args()[0], env);
            return numeric(t) ? t : bad("'-' needs a number");
        }
        case Op::Not: return infer_type(e.args()[0], env) == ExprType::Bool ? ExprType::Bool : bad("'!' needs a bool");
        case Op::Call: {
            const auto& fn = e.name();
            const auto& args = e.args();
            if (fn == "len") {
                if (args.size() != 1 || args[0].op() != Op::Var || !env.is_register(args[0].name()))
                    return bad("len expects a register");
                return ExprType::Int;
            }
            std::vector<ExprType> ts;
            for (const auto& a : args) ts.push_back(infer_type(a, env));
            if (fn == "min" || fn == "max") {
                if (ts.size() != 2 || !numeric(ts[0]) || !numeric(ts[1])) return bad(fn + " expects two numbers");
                return ts[0] == ExprType::Int && ts[1] == ExprType::Int ? ExprType::Int : ExprType::Float;
            }
            if (ts.size() != 1) return bad(fn + " expects one argument");
            if (fn == "sqrt" || fn == "float") return numeric(ts[0]) ? ExprType::Float : bad(fn + " needs a number");
            if (fn == "round" || fn == "floor") return numeric(ts[0]) ? ExprType::Int : bad(fn + " needs a number");
            if (fn == "int") return ExprType::Int;
            if (fn == "abs") return numeric(ts[0]) ? ts[0] : bad("abs needs a number");
            throw ExprError(ExprError::Kind::Unbound, "unknown function '" + fn + "'");
        }
        default: break;
    }
    const Op op = e.op();
    auto a = infer_type(e.args()[0], env);
    auto b = infer_type(e.args()[1], env);
    if (op == Op::And || op == Op::Or)
        return a == ExprType::Bool && b == ExprType::Bool ? ExprType::Bool : bad("logical operator needs bools");
    if (op == Op::Eq || op == Op::Ne) {
        if ((a == ExprType::Bool) != (b == ExprType::Bool)) return bad("comparing bool with number");
        return ExprType::Bool;
    }
    if (is_comparison(op)) return numeric(a) && numeric(b) ? ExprType::Bool : bad("ordering needs numbers");
    if (op == Op::Shl || op == Op::Shr || op == Op::BitAnd || op == Op::BitOr || op == Op::BitXor || op == Op::Mod)
        return a == ExprType::Int && b == ExprType::Int ? ExprType::Int : bad("integer operator needs integers");
    if (!numeric(a) || !numeric(b)) return bad("arithmetic needs numbers");
    return a == ExprType::Int && b == ExprType::Int ? ExprType::Int : ExprType::Float;
}

}  // namespace qtk
