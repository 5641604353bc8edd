#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace g2lab {

using Rational = mpq_class;

/// Parses "p", "p/q" or a finite decimal such as "-0.125" into a canonical
/// rational. Throws Error(Parse) on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p" or "p/q" form.
std::string to_string(const Rational& q);

/// Exact k-th root of a rational, if both numerator and denominator are perfect
/// k-th powers (a negative value is accepted for odd k).
std::optional<Rational> exact_root(const Rational& q, unsigned long k);

inline Rational rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

} // namespace g2lab
