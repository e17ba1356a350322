#include "defmut/bigint.hpp"

#include <cctype>

namespace defmut {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_integer_token(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

std::string to_string(const Integer& z) { return z.get_str(); }

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Integer parse_integer(std::string_view text) {
    auto s = trim(text);
    if (!is_integer_token(s)) throw ParseError("not an integer: '" + std::string(text) + "'");
    if (s.front() == '+') s.remove_prefix(1);
    return Integer(std::string(s));
}

Rational parse_rational(std::string_view text) {
    auto s = trim(text);
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rational(parse_integer(s));
    Integer num = parse_integer(s.substr(0, slash));
    Integer den = parse_integer(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Integer ipow(const Integer& base, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

Rational qpow(const Rational& base, long e) {
    if (e >= 0) {
        Rational r(ipow(base.get_num(), static_cast<unsigned long>(e)),
                   ipow(base.get_den(), static_cast<unsigned long>(e)));
        r.canonicalize();
        return r;
    }
    if (base == 0) throw Error("zero raised to a negative power");
    Rational r(ipow(base.get_den(), static_cast<unsigned long>(-e)),
               ipow(base.get_num(), static_cast<unsigned long>(-e)));
    r.canonicalize();
    return r;
}

}  // namespace defmut
