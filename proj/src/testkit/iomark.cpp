#include "qtk/testkit/iomark.hpp"

#include <cctype>
#include <set>

namespace qtk {

namespace {

class MarkParser {
public:
    explicit MarkParser(std::string_view t) : t_(t) {}

    IOMark parse() {
        IOMark m;
        m.program = ident("program name");
        expect(':');
        m.inputs = list(false);
        skip();
        if (t_.substr(pos_, 2) != "->") fail("expected '->'");
        pos_ += 2;
        m.outputs = list(true);
        skip();
        if (pos_ != t_.size()) fail("trailing text");
        std::set<std::string> seen;
        for (const auto& v : m.inputs)
            if (!seen.insert(v.name).second) throw IOMarkError("duplicate input '" + v.name + "'", 0);
        seen.clear();
        for (const auto& v : m.outputs)
            if (!seen.insert(v.name).second) throw IOMarkError("duplicate output '" + v.name + "'", 0);
        return m;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw IOMarkError(msg, pos_); }

    void skip() {
        while (pos_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
    }

    void expect(char c) {
        skip();
        if (pos_ >= t_.size() || t_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    bool accept(std::string_view s) {
        skip();
        if (t_.substr(pos_, s.size()) == s) {
            pos_ += s.size();
            return true;
        }
        return false;
    }

    std::string ident(const char* what) {
        skip();
        const std::size_t start = pos_;
        while (pos_ < t_.size() && (std::isalnum(static_cast<unsigned char>(t_[pos_])) || t_[pos_] == '_')) ++pos_;
        if (start == pos_ || std::isdigit(static_cast<unsigned char>(t_[start]))) {
            pos_ = start;
            fail(std::string("expected ") + what);
        }
        return std::string(t_.substr(start, pos_ - start));
    }

    std::vector<MarkedVar> list(bool outputs) {
        expect('(');
        std::vector<MarkedVar> out;
        skip();
        if (accept(")")) return out;
        do out.push_back(var(outputs));
        while (accept(","));
        expect(')');
        return out;
    }

    MarkedVar var(bool output) {
        MarkedVar v;
        for (;;) {
            if (accept("sub:")) {
                v.is_subroutine = true;
            } else if (accept("q:")) {
                v.is_quantum = true;
            } else {
                break;
            }
        }
        v.name = ident("variable name");
        const bool primed = pos_ < t_.size() && t_[pos_] == '\'';
        if (primed) ++pos_;
        if (output && !primed) fail("output '" + v.name + "' must end with '");
        if (!output && primed) fail("input '" + v.name + "' must not be primed");
        if (pos_ < t_.size() && t_[pos_] == '^') {
            ++pos_;
            const std::size_t at = pos_;
            std::string e = ident("endian");
            if (e == "BE")
                v.endian = Endian::BE;
            else if (e == "LE")
                v.endian = Endian::LE;
            else {
                pos_ = at;
                fail("endian must be BE or LE");
            }
            if (!v.is_quantum) {
                pos_ = at;
                fail("endian on classical variable '" + v.name + "'");
            }
        }
        return v;
    }

    std::string_view t_;
    std::size_t pos_ = 0;
};

std::string var_str(const MarkedVar& v, bool output) {
    std::string s;
    if (v.is_subroutine) s += "sub:";
    if (v.is_quantum) s += "q:";
    s += v.name;
    if (output) s += "'";
    if (v.endian) s += *v.endian == Endian::BE ? "^BE" : "^LE";
    return s;
}

}  // namespace

IOMark IOMark::parse(std::string_view text) { return MarkParser(text).parse(); }

std::string IOMark::str() const {
    std::string s = program + " : (";
    for (std::size_t i = 0; i < inputs.size(); ++i) s += (i ? ", " : "") + var_str(inputs[i], false);
    s += ") -> (";
    for (std::size_t i = 0; i < outputs.size(); ++i) s += (i ? ", " : "") + var_str(outputs[i], true);
    return s + ")";
}

const MarkedVar* IOMark::input(const std::string& name) const {
    for (const auto& v : inputs)
        if (v.name == name) return &v;
    return nullptr;
}

const MarkedVar* IOMark::output(const std::string& name) const {
    for (const auto& v : outputs)
        if (v.name == name) return &v;
    return nullptr;
}

bool IOMark::is_in_out(const std::string& name) const { return input(name) && output(name); }

IOMark parse_io_mark(std::string_view text) { return IOMark::parse(text); }
std::string format_io_mark(const IOMark& mark) { return mark.str(); }

std::string_view io_type_name(IOType t) {
    switch (t) {
        case IOType::Classical: return "classical";
        case IOType::GenerateQuantum: return "generate-quantum";
        case IOType::DetectQuantum: return "detect-quantum";
        case IOType::Transform: return "transform";
    }
    return "?";
}

IOType classify_io_type(const IOMark& mark) {
    auto quantum = [](const std::vector<MarkedVar>& vs) {
        for (const auto& v : vs)
            if (v.is_quantum) return true;
        return false;
    };
    const bool qin = quantum(mark.inputs), qout = quantum(mark.outputs);
    if (qin && qout) return IOType::Transform;
    if (qout) return IOType::GenerateQuantum;
    if (qin) return IOType::DetectQuantum;
    return IOType::Classical;
}

}  // namespace qtk
