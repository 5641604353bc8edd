#include "g2lab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace g2lab {

namespace {

std::vector<std::size_t> resolve_order(std::size_t cols, const std::vector<std::size_t>& order) {
    if (order.empty()) {
        std::vector<std::size_t> all(cols);
        std::iota(all.begin(), all.end(), std::size_t{0});
        return all;
    }
    if (order.size() != cols) throw Error(ErrorKind::InvalidArgument, "column order must list every column once");
    std::vector<bool> seen(cols, false);
    for (auto c : order) {
        if (c >= cols || seen[c]) throw Error(ErrorKind::InvalidArgument, "column order must list every column once");
        seen[c] = true;
    }
    return order;
}

template <class S>
std::vector<std::vector<S>> kernel_from_rref(const std::vector<std::vector<S>>& rref, const std::vector<std::size_t>& pivots,
                                             std::size_t cols) {
    std::vector<bool> is_pivot(cols, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::vector<S>> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<S> x(cols, ScalarTraits<S>::zero());
        x[f] = ScalarTraits<S>::one();
        for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = -rref[k][f];
        basis.push_back(std::move(x));
    }
    return basis;
}

} // namespace

Kernel<Rational> kernel(const Matrix<Rational>& a, const std::vector<std::size_t>& column_order) {
    const std::size_t m = a.rows(), n = a.cols();
    const auto order = resolve_order(n, column_order);

    // integer-scaled rows
    std::vector<std::vector<mpz_class>> z(m, std::vector<mpz_class>(n));
    for (std::size_t i = 0; i < m; ++i) {
        mpz_class l = 1;
        for (std::size_t j = 0; j < n; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
        for (std::size_t j = 0; j < n; ++j) z[i][j] = a(i, j).get_num() * (l / a(i, j).get_den());
    }

    std::vector<std::size_t> pivots;
    mpz_class prev = 1;
    std::size_t r = 0;
    for (std::size_t c : order) {
        if (r == m) break;
        std::size_t p = r;
        while (p < m && z[p][c] == 0) ++p;
        if (p == m) continue;
        std::swap(z[p], z[r]);
        const mpz_class piv = z[r][c];
        for (std::size_t i = r + 1; i < m; ++i) {
            const mpz_class lead = z[i][c];
            for (std::size_t j = 0; j < n; ++j) {
                mpz_class v = piv * z[i][j] - lead * z[r][j];
                if (!mpz_divisible_p(v.get_mpz_t(), prev.get_mpz_t()))
                    throw Error(ErrorKind::Inconsistency, "Bareiss step produced an inexact division");
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                z[i][j] = std::move(v);
            }
        }
        prev = piv;
        pivots.push_back(c);
        ++r;
    }

    // Back-substitution over Q on the echelon rows gives the reduced form.
    const std::size_t rk = pivots.size();
    std::vector<std::vector<Rational>> rref(rk, std::vector<Rational>(n));
    for (std::size_t k = 0; k < rk; ++k)
        for (std::size_t j = 0; j < n; ++j) rref[k][j] = Rational(z[k][j]);
    for (std::size_t kk = rk; kk-- > 0;) {
        const Rational inv = 1 / rref[kk][pivots[kk]];
        for (auto& v : rref[kk]) v *= inv;
        for (std::size_t up = 0; up < kk; ++up) {
            const Rational f = rref[up][pivots[kk]];
            if (f == 0) continue;
            for (std::size_t j = 0; j < n; ++j) rref[up][j] -= f * rref[kk][j];
        }
    }
    Kernel<Rational> out;
    out.basis = kernel_from_rref(rref, pivots, n);
    out.pivots = pivots;
    return out;
}

Kernel<double> kernel(const Matrix<double>& a, double eps, const std::vector<std::size_t>& column_order) {
    const std::size_t m = a.rows(), n = a.cols();
    const auto order = resolve_order(n, column_order);
    std::vector<std::vector<double>> w(m, std::vector<double>(n));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) w[i][j] = a(i, j);
    const double tol = eps * std::max(1.0, a.max_abs());

    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c : order) {
        if (r == m) break;
        std::size_t p = r;
        for (std::size_t i = r + 1; i < m; ++i)
            if (std::abs(w[i][c]) > std::abs(w[p][c])) p = i;
        if (std::abs(w[p][c]) <= tol) {
            for (std::size_t i = r; i < m; ++i) w[i][c] = 0.0;
            continue;
        }
        std::swap(w[p], w[r]);
        const double inv = 1.0 / w[r][c];
        for (auto& v : w[r]) v *= inv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || w[i][c] == 0.0) continue;
            const double f = w[i][c];
            for (std::size_t j = 0; j < n; ++j) w[i][j] -= f * w[r][j];
            w[i][c] = 0.0;
        }
        pivots.push_back(c);
        ++r;
    }
    w.resize(pivots.size());
    Kernel<double> out;
    out.basis = kernel_from_rref(w, pivots, n);
    out.pivots = pivots;
    return out;
}

Kernel<Poly> kernel(const Matrix<Poly>& a, const std::vector<std::size_t>& column_order,
                    const std::vector<std::string>& unit_variables) {
    const std::size_t m = a.rows(), n = a.cols();
    const auto order = resolve_order(n, column_order);
    std::vector<std::vector<Poly>> w(m, std::vector<Poly>(n));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) w[i][j] = a(i, j);

    // Passes over the columns: constant pivots, monomials in unit_variables,
    // any monomial, then any nonzero pivot. The last kind is used fraction-free:
    // rows are multiplied by it instead of divided, and scale[i] records which
    // such pivots row i has absorbed.
    Kernel<Poly> out;
    std::vector<Poly> big;                            // non-unit pivots
    std::vector<std::vector<std::size_t>> scale(m);   // indices into big
    std::vector<bool> done(n, false);
    std::size_t r = 0;
    auto allowed = [&](const Poly& e) {
        for (const auto& v : e.variables())
            if (std::find(unit_variables.begin(), unit_variables.end(), v) == unit_variables.end()) return false;
        return true;
    };
    auto add_guard = [&](const Poly& g) {
        if (std::find(out.guards.begin(), out.guards.end(), g) == out.guards.end()) out.guards.push_back(g);
    };
    for (int pass = 0; pass < 4; ++pass) {
        for (std::size_t c : order) {
            if (r == m) break;
            if (done[c]) continue;
            std::size_t best = m;
            std::size_t best_cost = 0;
            bool any_nonzero = false;
            for (std::size_t i = r; i < m; ++i) {
                const Poly& e = w[i][c];
                if (e.is_zero()) continue;
                any_nonzero = true;
                std::size_t cost;
                if (e.is_constant())
                    cost = 0;
                else if (pass >= 1 && e.is_unit() && (pass >= 2 || allowed(e)))
                    cost = e.terms().begin()->first.powers().size();
                else if (pass == 3)
                    cost = 100 + e.term_count();
                else
                    continue;
                if (best == m || cost < best_cost) {
                    best = i;
                    best_cost = cost;
                }
            }
            if (!any_nonzero) {
                if (pass == 3) done[c] = true;
                continue;
            }
            if (best == m) continue;  // deferred to a later pass
            std::swap(w[best], w[r]);
            std::swap(scale[best], scale[r]);
            const Poly pivot = w[r][c];
            // only factors absorbed from now on scale the pivot entry
            scale[r].clear();
            if (pivot.is_unit()) {
                if (!pivot.is_constant()) add_guard(Poly::term(Rational(1), pivot.terms().begin()->first));
                const Poly inv = pivot.unit_inverse();
                for (auto& v : w[r])
                    if (!v.is_zero()) v *= inv;
                for (std::size_t i = 0; i < m; ++i) {
                    if (i == r || w[i][c].is_zero()) continue;
                    const Poly f = w[i][c];
                    for (std::size_t j = 0; j < n; ++j)
                        if (!w[r][j].is_zero()) w[i][j] -= f * w[r][j];
                }
            } else {
                add_guard(pivot);
                big.push_back(pivot);
                const std::size_t id = big.size() - 1;
                scale[r].push_back(id);
                for (std::size_t i = 0; i < m; ++i) {
                    if (i == r || w[i][c].is_zero()) continue;
                    const Poly f = w[i][c];
                    for (std::size_t j = 0; j < n; ++j) {
                        Poly v = w[i][j] * pivot;
                        if (!w[r][j].is_zero()) v -= f * w[r][j];
                        w[i][j] = std::move(v);
                    }
                    scale[i].push_back(id);
                }
            }
            out.pivots.push_back(c);
            done[c] = true;
            ++r;
        }
    }
    w.resize(out.pivots.size());
    if (big.empty()) {
        out.basis = kernel_from_rref(w, out.pivots, n);
        return out;
    }
    // row k reads d_k x_{pivot k} + sum_f w[k][f] x_f = 0 with d_k the product
    // of the absorbed pivots; x_f = prod(big) clears every denominator
    std::vector<bool> is_pivot(n, false);
    for (auto p : out.pivots) is_pivot[p] = true;
    Poly all(1);
    for (const auto& b : big) all *= b;
    std::vector<Poly> cofactor(out.pivots.size());
    for (std::size_t k = 0; k < out.pivots.size(); ++k) {
        Poly rest(1);
        for (std::size_t id = 0; id < big.size(); ++id)
            if (std::find(scale[k].begin(), scale[k].end(), id) == scale[k].end()) rest *= big[id];
        // the pivot entry itself is d_k times the constant 1 after unit scaling
        const Poly& d = w[k][out.pivots[k]];
        Poly dk(1);
        for (auto id : scale[k]) dk *= big[id];
        if (d != dk) throw Error(ErrorKind::Inconsistency, "fraction-free elimination lost track of a pivot");
        cofactor[k] = rest;
    }
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Poly> x(n);
        x[f] = all;
        for (std::size_t k = 0; k < out.pivots.size(); ++k) x[out.pivots[k]] = -(w[k][f] * cofactor[k]);
        out.basis.push_back(std::move(x));
    }
    return out;
}

std::size_t rank(const Matrix<Rational>& a) { return kernel(a).rank(); }
std::size_t rank(const Matrix<double>& a, double eps) { return kernel(a, eps).rank(); }

namespace {

template <class S>
Matrix<S> augmented(const Matrix<S>& a, const std::vector<S>& b) {
    if (b.size() != a.rows()) throw Error(ErrorKind::DegreeMismatch, "right-hand side has wrong length");
    Matrix<S> aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = -b[i];
    }
    return aug;
}

template <class S>
std::optional<std::vector<S>> extract_solution(const Kernel<S>& k, std::size_t n) {
    // unique solvability: rank(a) = n and the augmented kernel is spanned by
    // a vector with last coordinate 1
    if (k.basis.size() != 1 || k.basis[0][n] != ScalarTraits<S>::one()) return std::nullopt;
    for (auto p : k.pivots)
        if (p == n) return std::nullopt;
    return std::vector<S>(k.basis[0].begin(), k.basis[0].begin() + static_cast<std::ptrdiff_t>(n));
}

} // namespace

std::optional<std::vector<Rational>> solve_unique(const Matrix<Rational>& a, const std::vector<Rational>& b) {
    return extract_solution(kernel(augmented(a, b)), a.cols());
}

std::optional<std::vector<double>> solve_unique(const Matrix<double>& a, const std::vector<double>& b, double eps) {
    return extract_solution(kernel(augmented(a, b), eps), a.cols());
}

} // namespace g2lab
