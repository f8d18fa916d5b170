#include "qtk/qir/serialize.hpp"

#include <nlohmann/json.hpp>
#include <sstream>

namespace qtk {

using json = nlohmann::json;

namespace {

constexpr std::string_view kHeader = "qir/1";

ParamKind param_kind_from(const std::string& s) {
    for (auto k : {ParamKind::Int, ParamKind::Float, ParamKind::Bool, ParamKind::Qubits, ParamKind::Handle})
        if (param_kind_name(k) == s) return k;
    throw FormatError("unknown parameter kind '" + s + "'");
}

Expr parse_expr(const json& j) {
    try {
        return Expr::parse(j.get<std::string>());
    } catch (const ExprError& e) {
        throw FormatError(e.what());
    }
}

json gate_json(const GateApp& g) {
    json j{{"op", "gate"}, {"gate", std::string(gate_name(g.gate))}};
    if (!g.angle.empty()) j["angle"] = g.angle.str();
    json t = json::array();
    for (const auto& r : g.targets) t.push_back(qubit_ref_str(r));
    j["targets"] = std::move(t);
    return j;
}

json call_json(const CallApp& c) {
    json j{{"op", "call"}, {"callee", c.callee}};
    if (c.adjoint) j["adj"] = true;
    json args = json::array();
    for (const auto& a : c.args) {
        switch (a.kind) {
            case ArgExpr::Kind::Classical: args.push_back({{"c", a.value.str()}}); break;
            case ArgExpr::Kind::Qubits: args.push_back({{"q", qarg_str(a.qubits)}}); break;
            case ArgExpr::Kind::Handle: args.push_back({{"h", a.handle}}); break;
        }
    }
    j["args"] = std::move(args);
    if (!c.bind.empty()) j["bind"] = c.bind;
    return j;
}

json record(const Stmt& s) {
    return std::visit(
        [](const auto& n) -> json {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, GateApp>) {
                return gate_json(n);
            } else if constexpr (std::is_same_v<T, CallApp>) {
                return call_json(n);
            } else if constexpr (std::is_same_v<T, ControlledApp>) {
                json ctl = json::array();
                for (const auto& g : n.controls) {
                    json c{{"q", qarg_str(g.qubits)}};
                    if (!g.polarity.empty()) c["pol"] = g.polarity;
                    ctl.push_back(std::move(c));
                }
                json inner = std::holds_alternative<GateApp>(n.inner) ? gate_json(std::get<GateApp>(n.inner))
                                                                      : call_json(std::get<CallApp>(n.inner));
                return {{"op", "ctrl"}, {"controls", std::move(ctl)}, {"inner", std::move(inner)}};
            } else if constexpr (std::is_same_v<T, MeasureInto>) {
                json q = json::array();
                for (const auto& r : n.qubits) q.push_back(qubit_ref_str(r));
                return {{"op", "measure"}, {"var", n.var}, {"qubits", std::move(q)}};
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                return {{"op", "if"}, {"cond", n.cond.str()}};
            } else if constexpr (std::is_same_v<T, ForStmt>) {
                json j{{"op", "for"}, {"var", n.var}, {"lo", n.lo.str()}, {"hi", n.hi.str()}};
                if (n.descending) j["desc"] = true;
                return j;
            } else if constexpr (std::is_same_v<T, RepeatUntil>) {
                return {{"op", "repeat"}, {"until", n.until.str()}, {"max", n.max_iterations}};
            } else if constexpr (std::is_same_v<T, WithinApply>) {
                return {{"op", "within"}};
            } else {
                return {{"op", "assign"}, {"var", n.var}, {"value", n.value.str()}};
            }
        },
        s.node);
}

GateApp gate_from(const json& j) {
    auto g = gate_from_name(j.at("gate").get<std::string>());
    if (!g) throw FormatError("unknown gate '" + j.at("gate").get<std::string>() + "'");
    GateApp out{*g, {}, {}};
    if (j.contains("angle")) out.angle = parse_expr(j["angle"]);
    for (const auto& t : j.at("targets")) out.targets.push_back(parse_qubit_ref(t.get<std::string>()));
    return out;
}

CallApp call_from(const json& j) {
    CallApp c;
    c.callee = j.at("callee").get<std::string>();
    c.adjoint = j.value("adj", false);
    for (const auto& a : j.at("args")) {
        if (a.contains("c"))
            c.args.push_back(ir::carg(parse_expr(a["c"])));
        else if (a.contains("q"))
            c.args.push_back(ir::qarg(parse_qarg(a["q"].get<std::string>())));
        else if (a.contains("h"))
            c.args.push_back(ir::harg(a["h"].get<std::string>()));
        else
            throw FormatError("bad call argument " + a.dump());
    }
    if (j.contains("bind")) c.bind = j["bind"].get<std::vector<std::string>>();
    return c;
}

void emit_block(const Block& b, int depth, std::ostringstream& out);

void emit(const Stmt& s, int depth, std::ostringstream& out) {
    out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << record(s).dump() << '\n';
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    if (auto i = std::get_if<IfStmt>(&s.node)) {
        emit_block(i->then_body, depth + 1, out);
        if (!i->else_body.empty()) {
            out << pad << ":else\n";
            emit_block(i->else_body, depth + 1, out);
        }
    } else if (auto f = std::get_if<ForStmt>(&s.node)) {
        emit_block(f->body, depth + 1, out);
    } else if (auto r = std::get_if<RepeatUntil>(&s.node)) {
        emit_block(r->body, depth + 1, out);
    } else if (auto w = std::get_if<WithinApply>(&s.node)) {
        emit_block(w->within, depth + 1, out);
        out << pad << ":apply\n";
        emit_block(w->apply, depth + 1, out);
    }
}

void emit_block(const Block& b, int depth, std::ostringstream& out) {
    for (const auto& s : b) emit(s, depth, out);
}

struct Line {
    int indent;
    std::string text;
    int number;
};

class Reader {
public:
    explicit Reader(std::vector<Line> lines) : lines_(std::move(lines)) {}

    Block block(int depth) {
        Block out;
        while (pos_ < lines_.size()) {
            const Line& l = lines_[pos_];
            if (l.indent < depth * 2) break;
            if (l.indent != depth * 2) fail(l, "unexpected indentation");
            if (l.text[0] == ':') break;
            ++pos_;
            out.push_back(statement(l, depth));
        }
        return out;
    }

    bool done() const { return pos_ >= lines_.size(); }
    const Line& peek() const { return lines_[pos_]; }

private:
    [[noreturn]] static void fail(const Line& l, const std::string& msg) {
        throw FormatError("line " + std::to_string(l.number) + ": " + msg);
    }

    bool marker(int depth, const char* m) {
        if (pos_ < lines_.size() && lines_[pos_].indent == depth * 2 && lines_[pos_].text == m) {
            ++pos_;
            return true;
        }
        return false;
    }

    Stmt statement(const Line& l, int depth) {
        json j;
        try {
            j = json::parse(l.text);
        } catch (const json::exception& e) {
            fail(l, e.what());
        }
        try {
            const std::string op = j.at("op").get<std::string>();
            if (op == "gate") return Stmt{gate_from(j)};
            if (op == "call") return Stmt{call_from(j)};
            if (op == "ctrl") {
                ControlledApp c;
                for (const auto& g : j.at("controls")) {
                    ControlGroup cg{parse_qarg(g.at("q").get<std::string>()), {}};
                    if (g.contains("pol")) cg.polarity = g["pol"].get<std::vector<int>>();
                    c.controls.push_back(std::move(cg));
                }
                const json& in = j.at("inner");
                if (in.at("op") == "gate")
                    c.inner = gate_from(in);
                else
                    c.inner = call_from(in);
                return Stmt{std::move(c)};
            }
            if (op == "measure") {
                MeasureInto m{j.at("var").get<std::string>(), {}};
                for (const auto& q : j.at("qubits")) m.qubits.push_back(parse_qubit_ref(q.get<std::string>()));
                return Stmt{std::move(m)};
            }
            if (op == "assign") return ir::assign(j.at("var").get<std::string>(), parse_expr(j.at("value")));
            if (op == "if") {
                Expr cond = parse_expr(j.at("cond"));
                Block t = block(depth + 1);
                Block e;
                if (marker(depth, ":else")) e = block(depth + 1);
                return ir::if_(std::move(cond), std::move(t), std::move(e));
            }
            if (op == "for") {
                Block body = block(depth + 1);
                return ir::for_(j.at("var").get<std::string>(), parse_expr(j.at("lo")), parse_expr(j.at("hi")),
                                std::move(body), j.value("desc", false));
            }
            if (op == "repeat") {
                Block body = block(depth + 1);
                return ir::repeat(std::move(body), parse_expr(j.at("until")), j.value("max", 1000));
            }
            if (op == "within") {
                Block u = block(depth + 1);
                if (!marker(depth, ":apply")) fail(l, "within without :apply");
                Block v = block(depth + 1);
                return ir::within(std::move(u), std::move(v));
            }
            fail(l, "unknown op '" + op + "'");
        } catch (const json::exception& e) {
            fail(l, e.what());
        }
    }

    std::vector<Line> lines_;
    std::size_t pos_ = 0;
};

std::vector<std::vector<Line>> split_documents(std::string_view text) {
    std::vector<std::vector<Line>> docs;
    std::vector<Line> cur;
    std::istringstream in{std::string(text)};
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        auto first = raw.find_first_not_of(' ');
        if (first == std::string::npos) continue;
        if (raw.compare(first, std::string::npos, kHeader) == 0 && first == 0) {
            if (!cur.empty()) docs.push_back(std::move(cur));
            cur.clear();
        }
        cur.push_back({static_cast<int>(first), raw.substr(first), number});
    }
    if (!cur.empty()) docs.push_back(std::move(cur));
    return docs;
}

Subroutine parse_document(std::vector<Line> lines) {
    if (lines.empty() || lines[0].text != kHeader) throw FormatError("missing qir/1 header");
    if (lines.size() < 2) throw FormatError("missing signature line");
    Subroutine sub;
    try {
        json sig = json::parse(lines[1].text);
        sub.name = sig.at("name").get<std::string>();
        for (const auto& p : sig.at("params")) {
            Param param{p.at("name").get<std::string>(), param_kind_from(p.at("kind").get<std::string>()), {}, {}};
            if (p.contains("len")) param.length = parse_expr(p["len"]);
            if (p.contains("sig"))
                for (const auto& k : p["sig"]) param.signature.push_back(param_kind_from(k.get<std::string>()));
            sub.params.push_back(std::move(param));
        }
        sub.returns = sig.value("returns", std::vector<std::string>{});
    } catch (const json::exception& e) {
        throw FormatError(std::string("signature: ") + e.what());
    }
    Reader r(std::vector<Line>(lines.begin() + 2, lines.end()));
    sub.body = r.block(0);
    if (!r.done()) throw FormatError("line " + std::to_string(r.peek().number) + ": unexpected content");
    return sub;
}

}  // namespace

std::string qubit_ref_str(const QubitRef& r) { return r.reg + "[" + r.index.str() + "]"; }

QubitRef parse_qubit_ref(std::string_view s) {
    auto open = s.find('[');
    if (open == std::string_view::npos || s.back() != ']') throw FormatError("bad qubit reference '" + std::string(s) + "'");
    try {
        return {std::string(s.substr(0, open)), Expr::parse(s.substr(open + 1, s.size() - open - 2))};
    } catch (const ExprError& e) {
        throw FormatError(e.what());
    }
}

std::string qarg_str(const QArg& q) {
    switch (q.kind) {
        case QArg::Kind::Whole: return q.reg;
        case QArg::Kind::Elem: return q.reg + "[" + q.start.str() + "]";
        case QArg::Kind::Slice: return q.reg + "[" + q.start.str() + ";" + q.length.str() + "]";
    }
    return q.reg;
}

QArg parse_qarg(std::string_view s) {
    auto open = s.find('[');
    if (open == std::string_view::npos) return ir::whole(std::string(s));
    if (s.back() != ']') throw FormatError("bad qubit argument '" + std::string(s) + "'");
    std::string reg(s.substr(0, open));
    std::string_view inside = s.substr(open + 1, s.size() - open - 2);
    try {
        auto semi = inside.find(';');
        if (semi == std::string_view::npos) return ir::elem(reg, Expr::parse(inside));
        return ir::slice(reg, Expr::parse(inside.substr(0, semi)), Expr::parse(inside.substr(semi + 1)));
    } catch (const ExprError& e) {
        throw FormatError(e.what());
    }
}

std::string stmt_record(const Stmt& s) { return record(s).dump(); }

std::string to_text(const Subroutine& sub) {
    json params = json::array();
    for (const auto& p : sub.params) {
        json j{{"name", p.name}, {"kind", std::string(param_kind_name(p.kind))}};
        if (!p.length.empty()) j["len"] = p.length.str();
        if (p.kind == ParamKind::Handle) {
            json sig = json::array();
            for (auto k : p.signature) sig.push_back(std::string(param_kind_name(k)));
            j["sig"] = std::move(sig);
        }
        params.push_back(std::move(j));
    }
    json sig{{"name", sub.name}, {"params", std::move(params)}, {"returns", sub.returns}};
    std::ostringstream out;
    out << kHeader << '\n' << sig.dump() << '\n';
    emit_block(sub.body, 0, out);
    return out.str();
}

Subroutine from_text(std::string_view text) {
    auto docs = split_documents(text);
    if (docs.size() != 1) throw FormatError("expected exactly one subroutine, found " + std::to_string(docs.size()));
    return parse_document(std::move(docs[0]));
}

std::string library_to_text(const Library& lib) {
    std::string out;
    for (const auto& name : lib.names()) {
        if (!out.empty()) out += '\n';
        out += to_text(*lib.get(name));
    }
    return out;
}

Library library_from_text(std::string_view text) {
    Library lib;
    for (auto& d : split_documents(text)) lib.add(parse_document(std::move(d)));
    return lib;
}

}  // namespace qtk
