#pragma once

#include "g2lab/error.hpp"
#include "g2lab/poly.hpp"
#include "g2lab/rational.hpp"

#include <cmath>
#include <concepts>
#include <string>

namespace g2lab {

/// Comparison tolerances. Exact rings ignore them; Float64 uses `alg` for
/// algebraic identities and `cmp` for integrated quantities.
struct Tolerance {
    double alg = 1e-9;
    double cmp = 1e-6;
};

/// Per-ring operations the generic algorithms rely on. The scalar ring of a
/// computation is a template parameter, so exact and floating pipelines never
/// mix implicitly.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* mode = "exact";
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_rational(const Rational& q) { return q; }
    static bool is_zero(const Rational& x) { return x == 0; }
    static bool near_zero(const Rational& x, double) { return x == 0; }
    static bool is_unit(const Rational& x) { return x != 0; }
    static Rational inverse(const Rational& x) {
        if (x == 0) throw Error(ErrorKind::NotAUnit, "division by zero");
        return Rational(1 / x);
    }
    /// -1, 0 or +1.
    static int sign(const Rational& x, double) { return sgn(x); }
    static double to_double(const Rational& x) { return x.get_d(); }
    static std::string str(const Rational& x) { return to_string(x); }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static constexpr const char* mode = "float";
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_rational(const Rational& q) { return q.get_d(); }
    static bool is_zero(double x) { return x == 0.0; }
    static bool near_zero(double x, double eps) { return std::abs(x) <= eps; }
    static bool is_unit(double x) { return x != 0.0; }
    static double inverse(double x) {
        if (x == 0.0) throw Error(ErrorKind::NotAUnit, "division by zero");
        return 1.0 / x;
    }
    static int sign(double x, double eps) { return std::abs(x) <= eps ? 0 : (x > 0 ? 1 : -1); }
    static double to_double(double x) { return x; }
    static std::string str(double x);
};

template <>
struct ScalarTraits<Poly> {
    static constexpr bool exact = true;
    static constexpr const char* mode = "poly";
    static Poly zero() { return Poly(); }
    static Poly one() { return Poly(Rational(1)); }
    static Poly from_rational(const Rational& q) { return Poly(q); }
    static bool is_zero(const Poly& x) { return x.is_zero(); }
    static bool near_zero(const Poly& x, double) { return x.is_zero(); }
    static bool is_unit(const Poly& x) { return x.is_unit(); }
    static Poly inverse(const Poly& x) { return x.unit_inverse(); }
    /// Only constants have a decidable sign.
    static int sign(const Poly& x, double) {
        if (!x.is_constant()) throw Error(ErrorKind::Mode, "sign of non-constant polynomial is undecidable");
        return sgn(x.constant());
    }
    static double to_double(const Poly& x) { return x.constant().get_d(); }
    static std::string str(const Poly& x) { return x.to_string(); }
};

template <class S>
concept Scalar = requires { ScalarTraits<S>::exact; };

/// Converts a structure constant (kept as a polynomial in the algebra's
/// parameters) into the target ring. Constant polynomials are required for
/// Rational and double.
template <class S>
S from_poly(const Poly& p) {
    if constexpr (std::same_as<S, Poly>) {
        return p;
    } else {
        if (!p.is_constant())
            throw Error(ErrorKind::Mode, "coefficient '" + p.to_string() +
                                             "' depends on unset parameters; use the polynomial mode");
        return ScalarTraits<S>::from_rational(p.constant());
    }
}

/// Real ninth root. Exact rings succeed only on perfect ninth powers
/// (a single-term monomial with exponents divisible by 9 for Poly) and throw
/// NinthRootIrrational otherwise, so exact certificates never degrade.
Rational ninth_root(const Rational& x);
double ninth_root(double x);
Poly ninth_root(const Poly& x);

} // namespace g2lab
