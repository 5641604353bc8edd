#pragma once

#include "g2lab/rational.hpp"

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace g2lab {

/// Process-wide table of indeterminate names. Ids are only used internally;
/// everything user-visible is ordered by name so output does not depend on
/// interning order.
class Variables {
public:
    static int intern(std::string_view name);
    static std::string name(int id);
};

/// Product of indeterminates with signed exponents, sorted by variable id.
class Monomial {
public:
    Monomial() = default;
    static Monomial variable(int id, int exponent = 1);

    const std::vector<std::pair<int, int>>& powers() const noexcept { return powers_; }
    bool is_one() const noexcept { return powers_.empty(); }
    bool has_negative_exponent() const noexcept;
    int exponent(int id) const noexcept;

    Monomial operator*(const Monomial& other) const;
    Monomial inverse() const;
    /// Monomial with variable `id` removed.
    Monomial without(int id) const;

    auto operator<=>(const Monomial&) const = default;

    std::string to_string(std::string_view atom_prefix = "") const;

private:
    std::vector<std::pair<int, int>> powers_;
};

/// Multivariate Laurent polynomial over the rationals.
///
/// Negative exponents are allowed so that division by a single-term unit
/// (a nonzero rational times a monomial) stays inside the ring. This is how
/// the non-vanishing parameter guards are carried through elimination.
class Poly {
public:
    Poly() = default;
    Poly(const Rational& c);                  // NOLINT: implicit constant
    Poly(long c) : Poly(Rational(c)) {}       // NOLINT
    static Poly variable(std::string_view name, int exponent = 1);
    static Poly term(const Rational& c, const Monomial& m);

    const std::map<Monomial, Rational>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    /// Value of a constant polynomial; throws Error(Mode) otherwise.
    Rational constant() const;
    std::size_t term_count() const noexcept { return terms_.size(); }

    /// A unit is a single nonzero term.
    bool is_unit() const noexcept { return terms_.size() == 1; }
    Poly unit_inverse() const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    Poly& operator*=(const Rational& c);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
    friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
    Poly operator-() const;
    bool operator==(const Poly& o) const { return terms_ == o.terms_; }

    /// Replaces an indeterminate by a polynomial. Negative powers of the
    /// variable require `value` to be a unit.
    Poly substitute(std::string_view name, const Poly& value) const;
    Poly substitute(const std::map<std::string, Rational>& values) const;
    /// Evaluates at a full assignment; throws if a variable is missing.
    Rational evaluate(const std::map<std::string, Rational>& values) const;

    std::set<std::string> variables() const;
    /// Partial degree structure in one variable: (min exponent, max exponent).
    std::pair<int, int> exponent_range(std::string_view name) const;

    /// Deterministic textual form, e.g. "-1/2*alpha*gamma^-1 + 3". Atoms are
    /// prefixed by `atom_prefix` (form literals use "x").
    std::string to_string(std::string_view atom_prefix = "") const;
    /// Inverse of to_string. Accepts sums of products of rationals, decimals,
    /// atoms with optional integer exponents and parenthesised sub-expressions.
    static Poly parse(std::string_view text, std::string_view atom_prefix = "");

private:
    void add_term(const Monomial& m, const Rational& c);
    std::map<Monomial, Rational> terms_;
};

} // namespace g2lab
