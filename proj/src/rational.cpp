#include "g2lab/rational.hpp"

#include "g2lab/error.hpp"

#include <cctype>

namespace g2lab {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    Rational value;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw Error(ErrorKind::Parse, "malformed rational '" + std::string(text) + "'");
        mpz_class n(std::string(num), 10), d(std::string(den), 10);
        if (d == 0) throw Error(ErrorKind::Parse, "zero denominator in '" + std::string(text) + "'");
        value = Rational(n, d);
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        auto whole = s.substr(0, dot);
        auto frac = s.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
            (whole.empty() && frac.empty()))
            throw Error(ErrorKind::Parse, "malformed decimal '" + std::string(text) + "'");
        std::string digits = std::string(whole) + std::string(frac);
        mpz_class n(digits.empty() ? std::string("0") : digits, 10);
        mpz_class d;
        mpz_ui_pow_ui(d.get_mpz_t(), 10, frac.size());
        value = Rational(n, d);
    } else {
        if (!all_digits(s)) throw Error(ErrorKind::Parse, "malformed rational '" + std::string(text) + "'");
        value = Rational(mpz_class(std::string(s), 10));
    }
    value.canonicalize();
    return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

std::optional<Rational> exact_root(const Rational& q, unsigned long k) {
    if (q == 0) return Rational(0);
    if (q < 0 && k % 2 == 0) return std::nullopt;
    mpz_class num = abs(q.get_num());
    mpz_class den = q.get_den();
    mpz_class rn, rd;
    if (mpz_root(rn.get_mpz_t(), num.get_mpz_t(), k) == 0) return std::nullopt;
    if (mpz_root(rd.get_mpz_t(), den.get_mpz_t(), k) == 0) return std::nullopt;
    Rational r(rn, rd);
    r.canonicalize();
    if (q < 0) r = -r;
    return r;
}

} // namespace g2lab
