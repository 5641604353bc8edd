#include "g2lab/poly.hpp"

#include "g2lab/error.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace g2lab {

namespace {

struct Registry {
    std::shared_mutex mutex;
    std::unordered_map<std::string, int> ids;
    std::vector<std::string> names;
};

Registry& registry() {
    static Registry r;
    return r;
}

} // namespace

int Variables::intern(std::string_view name) {
    auto& r = registry();
    {
        std::shared_lock lock(r.mutex);
        if (auto it = r.ids.find(std::string(name)); it != r.ids.end()) return it->second;
    }
    std::unique_lock lock(r.mutex);
    auto [it, inserted] = r.ids.try_emplace(std::string(name), static_cast<int>(r.names.size()));
    if (inserted) r.names.emplace_back(name);
    return it->second;
}

std::string Variables::name(int id) {
    auto& r = registry();
    std::shared_lock lock(r.mutex);
    return r.names.at(static_cast<std::size_t>(id));
}

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::variable(int id, int exponent) {
    Monomial m;
    if (exponent != 0) m.powers_.emplace_back(id, exponent);
    return m;
}

bool Monomial::has_negative_exponent() const noexcept {
    return std::any_of(powers_.begin(), powers_.end(), [](const auto& p) { return p.second < 0; });
}

int Monomial::exponent(int id) const noexcept {
    for (const auto& [v, e] : powers_)
        if (v == id) return e;
    return 0;
}

Monomial Monomial::operator*(const Monomial& other) const {
    Monomial out;
    out.powers_.reserve(powers_.size() + other.powers_.size());
    auto a = powers_.begin(), b = other.powers_.begin();
    while (a != powers_.end() || b != other.powers_.end()) {
        if (b == other.powers_.end() || (a != powers_.end() && a->first < b->first)) {
            out.powers_.push_back(*a++);
        } else if (a == powers_.end() || b->first < a->first) {
            out.powers_.push_back(*b++);
        } else {
            int e = a->second + b->second;
            if (e != 0) out.powers_.emplace_back(a->first, e);
            ++a;
            ++b;
        }
    }
    return out;
}

Monomial Monomial::inverse() const {
    Monomial out = *this;
    for (auto& p : out.powers_) p.second = -p.second;
    return out;
}

Monomial Monomial::without(int id) const {
    Monomial out;
    for (const auto& p : powers_)
        if (p.first != id) out.powers_.push_back(p);
    return out;
}

namespace {

using NamedPowers = std::vector<std::pair<std::string, int>>;

NamedPowers named(const Monomial& m) {
    NamedPowers out;
    for (const auto& [v, e] : m.powers()) out.emplace_back(Variables::name(v), e);
    std::sort(out.begin(), out.end());
    return out;
}

std::string format_named(const NamedPowers& np, std::string_view prefix) {
    std::string s;
    for (const auto& [name, e] : np) {
        if (!s.empty()) s += '*';
        s += prefix;
        s += name;
        if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
}

} // namespace

std::string Monomial::to_string(std::string_view atom_prefix) const {
    return format_named(named(*this), atom_prefix);
}

// ---------------------------------------------------------------------------
// Poly

Poly::Poly(const Rational& c) {
    if (c != 0) terms_.emplace(Monomial{}, c);
}

Poly Poly::variable(std::string_view name, int exponent) {
    return term(Rational(1), Monomial::variable(Variables::intern(name), exponent));
}

Poly Poly::term(const Rational& c, const Monomial& m) {
    Poly p;
    if (c != 0) p.terms_.emplace(m, c);
    return p;
}

bool Poly::is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Poly::constant() const {
    if (terms_.empty()) return Rational(0);
    if (!is_constant()) throw Error(ErrorKind::Mode, "polynomial '" + to_string() + "' is not a constant");
    return terms_.begin()->second;
}

Poly Poly::unit_inverse() const {
    if (!is_unit()) throw Error(ErrorKind::NotAUnit, "cannot invert '" + to_string() + "'");
    const auto& [m, c] = *terms_.begin();
    Rational inv = 1 / c;
    return term(inv, m.inverse());
}

void Poly::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly& Poly::operator+=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, Rational(-c));
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, Rational(ca * cb));
    return out;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly& Poly::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

Poly Poly::operator-() const {
    Poly out = *this;
    for (auto& [m, v] : out.terms_) v = -v;
    return out;
}

namespace {

Poly power(const Poly& base, int e) {
    if (e < 0) return power(base.unit_inverse(), -e);
    Poly out(Rational(1));
    Poly b = base;
    while (e > 0) {
        if (e & 1) out *= b;
        e >>= 1;
        if (e) b = b * b;
    }
    return out;
}

} // namespace

Poly Poly::substitute(std::string_view name, const Poly& value) const {
    const int id = Variables::intern(name);
    Poly out;
    std::map<int, Poly> powers;
    for (const auto& [m, c] : terms_) {
        int e = m.exponent(id);
        if (e == 0) {
            out.add_term(m, c);
            continue;
        }
        auto it = powers.find(e);
        if (it == powers.end()) it = powers.emplace(e, power(value, e)).first;
        out += Poly::term(c, m.without(id)) * it->second;
    }
    return out;
}

Poly Poly::substitute(const std::map<std::string, Rational>& values) const {
    Poly out = *this;
    for (const auto& [name, v] : values) out = out.substitute(name, Poly(v));
    return out;
}

Rational Poly::evaluate(const std::map<std::string, Rational>& values) const {
    Poly p = substitute(values);
    if (!p.is_constant())
        throw Error(ErrorKind::Mode, "evaluation leaves free variables in '" + p.to_string() + "'");
    return p.constant();
}

std::set<std::string> Poly::variables() const {
    std::set<std::string> out;
    for (const auto& [m, c] : terms_)
        for (const auto& [v, e] : m.powers()) out.insert(Variables::name(v));
    return out;
}

std::pair<int, int> Poly::exponent_range(std::string_view name) const {
    const int id = Variables::intern(name);
    int lo = 0, hi = 0;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        int e = m.exponent(id);
        if (first) {
            lo = hi = e;
            first = false;
        } else {
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
    }
    return {lo, hi};
}

std::string Poly::to_string(std::string_view atom_prefix) const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<NamedPowers, Rational>> sorted;
    sorted.reserve(terms_.size());
    for (const auto& [m, c] : terms_) sorted.emplace_back(named(m), c);
    // Constants last; otherwise lexicographic on (name, exponent) lists.
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.first.empty() != b.first.empty()) return b.first.empty();
        return a.first < b.first;
    });
    std::string s;
    bool first = true;
    for (const auto& [np, c] : sorted) {
        Rational mag = abs(c);
        if (first) {
            if (c < 0) s += '-';
        } else {
            s += c < 0 ? " - " : " + ";
        }
        first = false;
        if (np.empty()) {
            s += g2lab::to_string(mag);
        } else {
            if (mag != 1) s += g2lab::to_string(mag) + "*";
            s += format_named(np, atom_prefix);
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class PolyParser {
public:
    PolyParser(std::string_view text, std::string_view prefix) : text_(text), prefix_(prefix) {}

    Poly parse_all() {
        Poly p = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected character");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorKind::Parse,
                    what + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    Poly parse_sum() {
        Poly total;
        bool negative = false;
        if (peek('+') || peek('-')) negative = text_[pos_++] == '-';
        Poly t = parse_product();
        total += negative ? -t : t;
        while (peek('+') || peek('-')) {
            negative = text_[pos_++] == '-';
            t = parse_product();
            total += negative ? -t : t;
        }
        return total;
    }

    Poly parse_product() {
        Poly p = parse_power();
        for (;;) {
            if (peek('*')) {
                ++pos_;
                p *= parse_power();
            } else if (peek('/')) {
                ++pos_;
                Poly d = parse_power();
                if (d.is_zero()) fail("division by zero");
                p *= d.unit_inverse();
            } else {
                return p;
            }
        }
    }

    Poly parse_power() {
        Poly base = parse_atom();
        if (peek('^')) {
            ++pos_;
            skip_ws();
            bool neg = false;
            if (pos_ < text_.size() && text_[pos_] == '-') {
                neg = true;
                ++pos_;
            }
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (start == pos_) fail("expected exponent");
            int e = std::stoi(std::string(text_.substr(start, pos_ - start)));
            base = power(base, neg ? -e : e);
        }
        return base;
    }

    Poly parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Poly inner = parse_sum();
            if (!peek(')')) fail("expected ')'");
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
                ++pos_;
            // "p/q" binds tighter than a product so that 1/2*x reads as (1/2)*x.
            if (pos_ + 1 < text_.size() && text_[pos_] == '/' &&
                std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
                ++pos_;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            }
            return Poly(parse_rational(text_.substr(start, pos_ - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            if (!prefix_.empty()) {
                if (text_.substr(pos_, prefix_.size()) != prefix_) fail("expected atom prefix '" + std::string(prefix_) + "'");
                pos_ += prefix_.size();
            }
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            if (start == pos_) fail("empty variable name");
            return Poly::variable(text_.substr(start, pos_ - start));
        }
        fail(std::string("unexpected '") + c + "'");
    }

    std::string_view text_;
    std::string_view prefix_;
    std::size_t pos_ = 0;
};

} // namespace

Poly Poly::parse(std::string_view text, std::string_view atom_prefix) {
    return PolyParser(text, atom_prefix).parse_all();
}

} // namespace g2lab
