#pragma once

// Shared generators for the randomized tests. Everything is exact and seeded.

#include "g2lab/g2structure.hpp"
#include "g2lab/liealg.hpp"

#include <random>

namespace g2test {

using namespace g2lab;

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(0x5eed1234abcdULL);
    return gen;
}

inline long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

inline Rational small_rational(long num = 5, long den = 4) { return rational(uniform(-num, num), uniform(1, den)); }

/// Sparse random k-form with small rational coefficients.
inline KForm<Rational> random_form(int k, double density = 0.4) {
    KForm<Rational> f(k);
    std::bernoulli_distribution keep(density);
    for (Mask m : masks_of_degree(k))
        if (keep(rng())) f.set(m, small_rational());
    return f;
}

inline Vector7<Rational> random_vector() {
    Vector7<Rational> v;
    for (int i = 0; i < kDim; ++i) v[i] = small_rational(3, 2);
    return v;
}

/// Random invertible matrix with positive determinant: a product of a few
/// shears and a positive diagonal, so entries stay small.
inline Matrix<Rational> random_gl_plus(int shears = 3) {
    Matrix<Rational> a = Matrix<Rational>::identity(kDim);
    for (int i = 0; i < kDim; ++i) a(i, i) = rational(uniform(1, 3), uniform(1, 2));
    for (int s = 0; s < shears; ++s) {
        Matrix<Rational> e = Matrix<Rational>::identity(kDim);
        const auto r = static_cast<std::size_t>(uniform(0, kDim - 1));
        auto c = static_cast<std::size_t>(uniform(0, kDim - 2));
        if (c >= r) ++c;
        e(r, c) = rational(uniform(-2, 2), uniform(1, 2));
        a = a * e;
    }
    return a;
}

inline Vector7<Rational> column(const Matrix<Rational>& a, int index) {
    Vector7<Rational> v;
    for (int i = 0; i < kDim; ++i) v[i] = a(static_cast<std::size_t>(i), static_cast<std::size_t>(index - 1));
    return v;
}

inline Vector7<Rational> apply(const Matrix<Rational>& a, const Vector7<Rational>& x) {
    Vector7<Rational> y;
    for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j) y[i] += a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) * x[j];
    return y;
}

/// (A^* alpha)(e_I) = alpha(A e_i1, ..., A e_ik), computed by evaluation.
inline KForm<Rational> pullback(const Matrix<Rational>& a, const KForm<Rational>& alpha) {
    KForm<Rational> out(alpha.degree());
    for (Mask m : masks_of_degree(alpha.degree())) {
        std::vector<Vector7<Rational>> cols;
        for (int i : indices_of(m)) cols.push_back(column(a, i));
        out.set(m, evaluate(alpha, std::span<const Vector7<Rational>>(cols)));
    }
    return out;
}

/// The bracket [x, y]' = A^-1 [A x, A y], so that A is an isomorphism from
/// the new algebra onto the old one.
inline LieAlgebra7 conjugate(const LieAlgebra7& algebra, const Matrix<Rational>& a) {
    const Matrix<Rational> a_inv = inverse(a);
    std::vector<Bracket> brackets;
    for (int i = 1; i <= kDim; ++i)
        for (int j = i + 1; j <= kDim; ++j) {
            const Vector7<Rational> br = apply(a_inv, algebra.bracket(column(a, i), column(a, j)));
            for (int k = 1; k <= kDim; ++k)
                if (br[k - 1] != 0) brackets.push_back({i, j, k, Poly(br[k - 1])});
        }
    return LieAlgebra7(algebra.name() + "-conj", brackets);
}

inline KForm<Rational> std_phi() { return standard_phi<Rational>(); }

} // namespace g2test
