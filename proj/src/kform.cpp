#include "g2lab/kform.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace g2lab {

namespace {

struct MaskTables {
    std::array<std::vector<Mask>, kDim + 1> by_degree;
    std::array<int, 128> index{};

    MaskTables() {
        for (unsigned m = 0; m < 128; ++m) by_degree[static_cast<std::size_t>(degree_of(static_cast<Mask>(m)))].push_back(static_cast<Mask>(m));
        for (auto& list : by_degree) {
            std::sort(list.begin(), list.end(), LexLess{});
            for (std::size_t i = 0; i < list.size(); ++i) index[list[i]] = static_cast<int>(i);
        }
    }
};

const MaskTables& tables() {
    static const MaskTables t;
    return t;
}

} // namespace

const std::vector<Mask>& masks_of_degree(int k) {
    if (k < 0 || k > kDim) throw Error(ErrorKind::DegreeMismatch, "degree " + std::to_string(k) + " outside 0..7");
    return tables().by_degree[static_cast<std::size_t>(k)];
}

int index_in_degree(Mask m) { return tables().index[m & kTopMask]; }

std::vector<int> indices_of(Mask m) {
    std::vector<int> out;
    for (int i = 1; i <= kDim; ++i)
        if (m & bit(i)) out.push_back(i);
    return out;
}

Mask mask_from_indices(std::span<const int> indices) {
    Mask m = 0;
    for (int i : indices) {
        if (i < 1 || i > kDim) throw Error(ErrorKind::InvalidArgument, "index " + std::to_string(i) + " outside 1..7");
        if (m & bit(i)) throw Error(ErrorKind::InvalidArgument, "repeated index " + std::to_string(i));
        m = static_cast<Mask>(m | bit(i));
    }
    return m;
}

std::string index_string(Mask m) {
    std::string s;
    for (int i : indices_of(m)) s += static_cast<char>('0' + i);
    return s;
}

// ---------------------------------------------------------------------------
// Formatting

namespace {

/// Returns (negative, magnitude text or "" when the magnitude is 1).
std::pair<bool, std::string> split_coefficient(const Rational& c) {
    Rational mag = abs(c);
    return {c < 0, mag == 1 ? std::string() : to_string(mag)};
}

std::pair<bool, std::string> split_coefficient(double c) {
    double mag = std::abs(c);
    return {c < 0, mag == 1.0 ? std::string() : ScalarTraits<double>::str(mag)};
}

std::pair<bool, std::string> split_coefficient(const Poly& c) {
    if (c.term_count() == 1) {
        const auto& [m, v] = *c.terms().begin();
        Poly mag = Poly::term(abs(v), m);
        if (mag == Poly(Rational(1))) return {v < 0, std::string()};
        return {v < 0, mag.to_string("x")};
    }
    return {false, "(" + c.to_string("x") + ")"};
}

} // namespace

template <class S>
std::string format_form(const KForm<S>& f) {
    if (f.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : f.terms()) {
        auto [negative, mag] = split_coefficient(c);
        if (first)
            s += negative ? "-" : "";
        else
            s += negative ? " - " : " + ";
        first = false;
        if (m == 0) {
            s += mag.empty() ? "1" : mag;
            continue;
        }
        if (!mag.empty()) s += mag + "*";
        s += "e" + index_string(m);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

[[noreturn]] void parse_fail(std::string_view text, const std::string& what) {
    throw Error(ErrorKind::Parse, what + " in form literal '" + std::string(text) + "'");
}

template <class S>
S parse_coefficient(std::string_view text, std::string_view coeff) {
    if constexpr (std::same_as<S, Poly>) {
        return Poly::parse(coeff, "x");
    } else {
        // products of rationals are allowed so that "2*1/3*e12" reads naturally
        Rational value(1);
        std::size_t start = 0;
        for (;;) {
            auto star = coeff.find('*', start);
            auto piece = coeff.substr(start, star == std::string_view::npos ? std::string_view::npos : star - start);
            try {
                value *= parse_rational(piece);
            } catch (const Error&) {
                parse_fail(text, "unparsable coefficient '" + std::string(coeff) + "'");
            }
            if (star == std::string_view::npos) break;
            start = star + 1;
        }
        return ScalarTraits<S>::from_rational(value);
    }
}

std::string strip(std::string_view s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
}

} // namespace

template <class S>
KForm<S> parse_form(std::string_view text) {
    const std::string compact = strip(text);
    if (compact.empty()) parse_fail(text, "empty literal");
    if (compact == "0") return KForm<S>(0);

    // Split at top-level '+'/'-' that are not exponent signs.
    std::vector<std::pair<bool, std::string>> terms;
    int depth = 0;
    bool negative = false;
    std::string current;
    for (std::size_t i = 0; i < compact.size(); ++i) {
        const char c = compact[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        const bool separator = depth == 0 && (c == '+' || c == '-') && !(i > 0 && (compact[i - 1] == '^' || compact[i - 1] == '*' || compact[i - 1] == '/'));
        if (separator) {
            if (!current.empty()) terms.emplace_back(negative, current);
            else if (i != 0) parse_fail(text, "dangling sign");
            current.clear();
            negative = c == '-';
            continue;
        }
        current += c;
    }
    if (depth != 0) parse_fail(text, "unbalanced parentheses");
    if (current.empty()) parse_fail(text, "trailing sign");
    terms.emplace_back(negative, current);

    int degree = -1;
    KForm<S> out(0);
    for (const auto& [neg, body] : terms) {
        // the basis token is the last top-level factor
        std::size_t split = std::string::npos;
        depth = 0;
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (body[i] == '(') ++depth;
            if (body[i] == ')') --depth;
            if (depth == 0 && body[i] == '*') split = i;
        }
        std::string token = split == std::string::npos ? body : body.substr(split + 1);
        std::string coeff = split == std::string::npos ? std::string() : body.substr(0, split);
        const bool basis_token = token.size() >= 2 && token[0] == 'e' && std::isdigit(static_cast<unsigned char>(token[1]));
        if (!basis_token) {
            // a term without e<digits> is a scalar, i.e. part of a 0-form
            if (token.empty()) parse_fail(text, "expected basis token e<digits> after '*'");
            coeff = body;
            token = "e";
        }

        std::vector<int> idx;
        for (std::size_t i = 1; i < token.size(); ++i) {
            const char d = token[i];
            if (d < '1' || d > '7') parse_fail(text, "index '" + std::string(1, d) + "' outside 1..7");
            idx.push_back(d - '0');
        }
        int sign = 1;
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = a + 1; b < idx.size(); ++b) {
                if (idx[a] == idx[b]) parse_fail(text, "repeated index in '" + token + "'");
                if (idx[a] > idx[b]) sign = -sign;
            }
        const Mask m = mask_from_indices(idx);
        const int deg = static_cast<int>(idx.size());
        if (degree == -1) {
            degree = deg;
            out = KForm<S>(deg);
        } else if (deg != degree) {
            parse_fail(text, "mixed degrees " + std::to_string(degree) + " and " + std::to_string(deg));
        }
        S value = coeff.empty() ? ScalarTraits<S>::one() : parse_coefficient<S>(text, coeff);
        if ((sign < 0) != neg) value = -value;
        out.add(m, value);
    }
    return out;
}

template std::string format_form(const KForm<Rational>&);
template std::string format_form(const KForm<double>&);
template std::string format_form(const KForm<Poly>&);
template KForm<Rational> parse_form(std::string_view);
template KForm<double> parse_form(std::string_view);
template KForm<Poly> parse_form(std::string_view);

} // namespace g2lab
