#pragma once

#include "g2lab/matrix.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace g2lab {

/// Row reduction result. `basis` spans the kernel; `pivots` are the pivot
/// columns. For polynomial matrices `guards` lists every non-constant pivot
/// that was inverted, i.e. the non-vanishing assumptions the kernel relies on.
template <class S>
struct Kernel {
    std::vector<std::vector<S>> basis;
    std::vector<std::size_t> pivots;
    std::vector<Poly> guards;
    std::size_t rank() const { return pivots.size(); }
};

/// Fraction-free (Bareiss) elimination on the integer-scaled rows, followed by
/// exact back-substitution. Free columns receive coefficient 1 in their own
/// basis vector. `column_order` (optional) fixes the order in which columns are
/// offered as pivots; columns late in the order tend to become free.
Kernel<Rational> kernel(const Matrix<Rational>& a, const std::vector<std::size_t>& column_order = {});

/// Gauss-Jordan with partial pivoting; entries below eps * max|a| count as 0.
Kernel<double> kernel(const Matrix<double>& a, double eps, const std::vector<std::size_t>& column_order = {});

/// Gauss-Jordan over the Laurent polynomial ring. Pivots are taken in order
/// of preference: constants, monomials in `unit_variables`, any monomial, and
/// finally arbitrary polynomials, which are eliminated fraction-free. Every
/// non-constant pivot is recorded in `guards`.
Kernel<Poly> kernel(const Matrix<Poly>& a, const std::vector<std::size_t>& column_order = {},
                    const std::vector<std::string>& unit_variables = {});

std::size_t rank(const Matrix<Rational>& a);
std::size_t rank(const Matrix<double>& a, double eps);

/// Unique solution of a x = b when it exists and is unique; nullopt otherwise.
std::optional<std::vector<Rational>> solve_unique(const Matrix<Rational>& a, const std::vector<Rational>& b);
std::optional<std::vector<double>> solve_unique(const Matrix<double>& a, const std::vector<double>& b, double eps);

template <class S>
Kernel<S> kernel_of(const Matrix<S>& a, double eps, const std::vector<std::size_t>& order = {}) {
    if constexpr (std::same_as<S, double>)
        return kernel(a, eps, order);
    else
        return kernel(a, order);
}

template <class S>
std::size_t rank_of(const Matrix<S>& a, double eps) {
    return kernel_of(a, eps).rank();
}

} // namespace g2lab
