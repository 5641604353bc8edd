#pragma once

#include "g2lab/scalar.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace g2lab {

inline constexpr int kDim = 7;

/// Strictly increasing index tuple (i1 < ... < ik) in 1..7, stored as a bit set
/// (bit i-1 <-> index i).
using Mask = std::uint8_t;

inline constexpr Mask kTopMask = 0x7f;

constexpr int degree_of(Mask m) { return std::popcount(static_cast<unsigned>(m)); }
constexpr Mask bit(int index) { return static_cast<Mask>(1u << (index - 1)); }

/// Lexicographic order on equal-length index tuples, extended by length.
struct LexLess {
    constexpr bool operator()(Mask a, Mask b) const {
        if (degree_of(a) != degree_of(b)) return degree_of(a) < degree_of(b);
        const unsigned diff = static_cast<unsigned>(a ^ b);
        if (diff == 0) return false;
        const unsigned lowest = diff & (~diff + 1u);
        return (a & lowest) != 0;
    }
};

/// All masks of degree k in lexicographic order; index_in_degree is its inverse.
const std::vector<Mask>& masks_of_degree(int k);
int index_in_degree(Mask m);
std::vector<int> indices_of(Mask m);
Mask mask_from_indices(std::span<const int> indices);

/// Sign s with e^a ^ e^b = s e^(a|b), or 0 if a and b overlap.
constexpr int wedge_sign(Mask a, Mask b) {
    if (a & b) return 0;
    int inversions = 0;
    for (unsigned rest = b; rest; rest &= rest - 1) {
        const unsigned low = rest & (~rest + 1u);
        // elements of a above this element of b
        inversions += std::popcount(static_cast<unsigned>(a) & ~((low << 1) - 1u));
    }
    return (inversions & 1) ? -1 : 1;
}

/// Sign of e^I ^ e^{complement(I)} relative to e^{1..7}.
constexpr int complement_sign(Mask m) { return wedge_sign(m, static_cast<Mask>(kTopMask & ~m)); }

/// Components of a vector in the basis (e_1, ..., e_7).
template <class S>
struct Vector7 {
    std::array<S, kDim> c{};

    Vector7() { c.fill(ScalarTraits<S>::zero()); }
    explicit Vector7(std::array<S, kDim> components) : c(std::move(components)) {}
    static Vector7 basis(int index) {
        Vector7 v;
        v.c[static_cast<std::size_t>(index - 1)] = ScalarTraits<S>::one();
        return v;
    }
    S& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    const S& operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
    bool is_zero() const {
        for (const auto& x : c)
            if (!ScalarTraits<S>::is_zero(x)) return false;
        return true;
    }
    bool operator==(const Vector7&) const = default;
};

/// Homogeneous k-form on R^7 with sparse coefficients e^I -> S.
/// Zero coefficients are never stored.
template <class S>
class KForm {
public:
    using Terms = std::map<Mask, S, LexLess>;

    explicit KForm(int degree = 0) : degree_(degree) { check_degree(degree); }
    static KForm zero(int degree) { return KForm(degree); }
    static KForm basis(Mask m, S coeff = ScalarTraits<S>::one()) {
        KForm f(degree_of(m));
        f.set(m, std::move(coeff));
        return f;
    }
    static KForm scalar(S value) { return basis(Mask{0}, std::move(value)); }
    /// e^{1..7}
    static KForm top(S coeff = ScalarTraits<S>::one()) { return basis(kTopMask, std::move(coeff)); }

    int degree() const noexcept { return degree_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    S coeff(Mask m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? ScalarTraits<S>::zero() : it->second;
    }
    void set(Mask m, S value) {
        if (degree_of(m) != degree_)
            throw Error(ErrorKind::DegreeMismatch, "index tuple of degree " + std::to_string(degree_of(m)) +
                                                       " in a " + std::to_string(degree_) + "-form");
        if (ScalarTraits<S>::is_zero(value))
            terms_.erase(m);
        else
            terms_[m] = std::move(value);
    }
    void add(Mask m, const S& value) {
        if (ScalarTraits<S>::is_zero(value)) return;
        auto [it, inserted] = terms_.try_emplace(m, value);
        if (!inserted) {
            it->second = it->second + value;
            if (ScalarTraits<S>::is_zero(it->second)) terms_.erase(it);
        }
    }

    /// Dense coefficient vector in the lexicographic basis of Lambda^k.
    std::vector<S> dense() const {
        std::vector<S> out(masks_of_degree(degree_).size(), ScalarTraits<S>::zero());
        for (const auto& [m, c] : terms_) out[static_cast<std::size_t>(index_in_degree(m))] = c;
        return out;
    }
    static KForm from_dense(int degree, std::span<const S> values) {
        const auto& masks = masks_of_degree(degree);
        if (values.size() != masks.size())
            throw Error(ErrorKind::DegreeMismatch, "dense vector has wrong length for degree " + std::to_string(degree));
        KForm f(degree);
        for (std::size_t i = 0; i < masks.size(); ++i) f.set(masks[i], values[i]);
        return f;
    }

    KForm& operator+=(const KForm& o) {
        require_same_degree(o);
        for (const auto& [m, c] : o.terms_) add(m, c);
        return *this;
    }
    KForm& operator-=(const KForm& o) {
        require_same_degree(o);
        for (const auto& [m, c] : o.terms_) add(m, -c);
        return *this;
    }
    KForm& operator*=(const S& s) {
        if (ScalarTraits<S>::is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto it = terms_.begin(); it != terms_.end();) {
            it->second = it->second * s;
            if (ScalarTraits<S>::is_zero(it->second))
                it = terms_.erase(it);
            else
                ++it;
        }
        return *this;
    }
    friend KForm operator+(KForm a, const KForm& b) { return a += b; }
    friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
    friend KForm operator*(KForm a, const S& s) { return a *= s; }
    friend KForm operator*(const S& s, KForm a) { return a *= s; }
    KForm operator-() const {
        KForm out = *this;
        for (auto& [m, c] : out.terms_) c = -c;
        return out;
    }
    bool operator==(const KForm& o) const { return degree_ == o.degree_ && terms_ == o.terms_; }

    /// Largest |coefficient| (Float64) -- used for closedness checks.
    double max_abs() const {
        double best = 0;
        for (const auto& [m, c] : terms_) best = std::max(best, std::abs(ScalarTraits<S>::to_double(c)));
        return best;
    }

    /// Applies `f` to every coefficient, e.g. to change rings.
    template <class T, class F>
    KForm<T> map(F&& f) const {
        KForm<T> out(degree_);
        for (const auto& [m, c] : terms_) out.set(m, f(c));
        return out;
    }

private:
    static void check_degree(int degree) {
        if (degree < 0 || degree > kDim)
            throw Error(ErrorKind::DegreeMismatch, "degree " + std::to_string(degree) + " outside 0..7");
    }
    void require_same_degree(const KForm& o) const {
        if (o.degree_ != degree_)
            throw Error(ErrorKind::DegreeMismatch, "cannot add a " + std::to_string(o.degree_) + "-form to a " +
                                                       std::to_string(degree_) + "-form");
    }

    int degree_;
    Terms terms_;
};

/// Exterior product. A total degree above 7 yields the zero 7-form.
template <class S>
KForm<S> wedge(const KForm<S>& a, const KForm<S>& b) {
    const int deg = a.degree() + b.degree();
    if (deg > kDim) return KForm<S>(kDim);
    KForm<S> out(deg);
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) {
            const int s = wedge_sign(ma, mb);
            if (s == 0) continue;
            S prod = ca * cb;
            out.add(static_cast<Mask>(ma | mb), s > 0 ? prod : S(-prod));
        }
    }
    return out;
}

/// Interior product iota_v. Contracting a 0-form gives the zero 0-form.
template <class S>
KForm<S> contract(const Vector7<S>& v, const KForm<S>& a) {
    if (a.degree() == 0) return KForm<S>(0);
    KForm<S> out(a.degree() - 1);
    for (const auto& [m, c] : a.terms()) {
        int position = 0;
        for (int i = 1; i <= kDim; ++i) {
            if (!(m & bit(i))) continue;
            const S& vi = v[i - 1];
            if (!ScalarTraits<S>::is_zero(vi)) {
                S term = vi * c;
                out.add(static_cast<Mask>(m & ~bit(i)), (position % 2) ? S(-term) : term);
            }
            ++position;
        }
    }
    return out;
}

/// iota_{e_i} for a basis vector.
template <class S>
KForm<S> contract_basis(int index, const KForm<S>& a) {
    return contract(Vector7<S>::basis(index), a);
}

/// alpha(v_1, ..., v_k) for a k-form and k vectors.
template <class S>
S evaluate(const KForm<S>& a, std::span<const Vector7<S>> vectors) {
    if (static_cast<int>(vectors.size()) != a.degree())
        throw Error(ErrorKind::DegreeMismatch, "evaluating a " + std::to_string(a.degree()) + "-form on " +
                                                   std::to_string(vectors.size()) + " vectors");
    KForm<S> cur = a;
    for (const auto& v : vectors) cur = contract(v, cur);
    return cur.coeff(Mask{0});
}

/// Canonical literal: terms in lexicographic order, "c*e123" with c omitted
/// when it is 1. Polynomial coefficients use "x"-prefixed atoms.
template <class S>
std::string format_form(const KForm<S>& f);

/// Parses a form literal. Throws Error(Parse) for malformed input or mixed
/// degrees.
template <class S>
KForm<S> parse_form(std::string_view text);

std::string index_string(Mask m);

template <class To, class From>
KForm<To> convert(const KForm<From>& f) {
    if constexpr (std::same_as<From, Rational> && std::same_as<To, double>) {
        return f.template map<double>([](const Rational& q) { return q.get_d(); });
    } else if constexpr (std::same_as<From, Rational> && std::same_as<To, Poly>) {
        return f.template map<Poly>([](const Rational& q) { return Poly(q); });
    } else if constexpr (std::same_as<From, Poly>) {
        return f.template map<To>([](const Poly& p) { return from_poly<To>(p); });
    } else {
        static_assert(std::same_as<From, To>, "unsupported ring conversion");
        return f;
    }
}

extern template std::string format_form(const KForm<Rational>&);
extern template std::string format_form(const KForm<double>&);
extern template std::string format_form(const KForm<Poly>&);
extern template KForm<Rational> parse_form(std::string_view);
extern template KForm<double> parse_form(std::string_view);
extern template KForm<Poly> parse_form(std::string_view);

} // namespace g2lab
