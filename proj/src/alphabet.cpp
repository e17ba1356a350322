#include "defmut/alphabet.hpp"

#include <cctype>

namespace defmut {

Alphabet::Alphabet(const std::vector<std::string>& variables, const std::vector<std::string>& parameters) {
    for (const auto& v : variables) add(v, false);
    for (const auto& p : parameters) add(p, true);
}

int Alphabet::add(const std::string& name, bool parameter) {
    if (auto v = find(name)) return *v;
    if (size() >= kMaxVars) throw Error("alphabet is limited to " + std::to_string(kMaxVars) + " variables");
    if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
        throw Error("invalid variable name: '" + name + "'");
    names_.push_back(name);
    parameter_.push_back(parameter);
    return size() - 1;
}

std::optional<int> Alphabet::find(std::string_view name) const {
    for (int v = 0; v < size(); ++v)
        if (names_[static_cast<std::size_t>(v)] == name) return v;
    return std::nullopt;
}

int Alphabet::index(std::string_view name) const {
    if (auto v = find(name)) return *v;
    throw Error("unknown variable: '" + std::string(name) + "'");
}

std::vector<int> Alphabet::parameters() const {
    std::vector<int> out;
    for (int v = 0; v < size(); ++v)
        if (parameter_[static_cast<std::size_t>(v)]) out.push_back(v);
    return out;
}

std::vector<int> Alphabet::non_parameters() const {
    std::vector<int> out;
    for (int v = 0; v < size(); ++v)
        if (!parameter_[static_cast<std::size_t>(v)]) out.push_back(v);
    return out;
}

std::string Alphabet::format(const Poly& p) const {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : p.terms()) {
        Integer c = t.coeff;
        if (first) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        first = false;
        c = abs(c);
        std::string mono;
        for (int v = 0; v < kMaxVars; ++v) {
            int e = t.mono[v];
            if (e == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += v < size() ? name(v) : "v" + std::to_string(v);
            if (e != 1) mono += "^" + (e < 0 ? "(" + std::to_string(e) + ")" : std::to_string(e));
        }
        if (mono.empty()) {
            out += to_string(c);
        } else if (c == 1) {
            out += mono;
        } else {
            out += to_string(c) + "*" + mono;
        }
    }
    return out;
}

std::string Alphabet::format(const RatFunc& f) const {
    std::string n = format(f.num());
    if (f.den().is_one()) return n;
    if (f.num().size() > 1) n = "(" + n + ")";
    std::string d = format(f.den());
    if (f.den().size() > 1 || !f.den().is_monomial() || f.den().leading().coeff != 1 ||
        f.den().leading().mono.degree() > 1)
        d = "(" + d + ")";
    return n + "/" + d;
}

namespace {

class Parser {
  public:
    Parser(const Alphabet& alphabet, std::string_view text) : alphabet_(alphabet), text_(text) {}

    RatFunc parse() {
        RatFunc r = expression();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected character");
        return r;
    }

  private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what + " at position " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    RatFunc expression() {
        RatFunc r = term();
        while (true) {
            if (accept('+')) {
                r += term();
            } else if (accept('-')) {
                r -= term();
            } else {
                return r;
            }
        }
    }

    RatFunc term() {
        RatFunc r = unary();
        while (true) {
            if (accept('*')) {
                r *= unary();
            } else if (accept('/')) {
                RatFunc d = unary();
                if (d.is_zero()) fail("division by zero");
                r /= d;
            } else {
                return r;
            }
        }
    }

    RatFunc unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    RatFunc power() {
        RatFunc base = primary();
        if (accept('^')) {
            long e = exponent();
            if (e < 0 && base.is_zero()) fail("negative power of zero");
            return base.pow(e);
        }
        return base;
    }

    long exponent() {
        bool paren = accept('(');
        bool negative = accept('-');
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer exponent");
        long e = std::stol(std::string(text_.substr(start, pos_ - start)));
        if (paren && !accept(')')) fail("expected ')'");
        return negative ? -e : e;
    }

    RatFunc primary() {
        skip_space();
        if (accept('(')) {
            RatFunc r = expression();
            if (!accept(')')) fail("expected ')'");
            return r;
        }
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            return RatFunc(Integer(std::string(text_.substr(start, pos_ - start))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string_view name = text_.substr(start, pos_ - start);
            auto v = alphabet_.find(name);
            if (!v) fail("unknown identifier '" + std::string(name) + "'");
            return RatFunc::variable(*v);
        }
        fail("unexpected character");
    }

    const Alphabet& alphabet_;
    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

RatFunc Alphabet::parse(std::string_view text) const { return Parser(*this, text).parse(); }

}  // namespace defmut
