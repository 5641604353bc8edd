#include "g2lab/g2structure.hpp"

#include <cmath>

namespace g2lab {

template <class S>
Matrix<S> b_matrix(const KForm<S>& phi) {
    if (phi.degree() != 3) throw Error(ErrorKind::DegreeMismatch, "b_phi needs a 3-form");
    std::array<KForm<S>, kDim> iota;
    std::array<KForm<S>, kDim> iota_phi;
    for (int i = 1; i <= kDim; ++i) {
        iota[static_cast<std::size_t>(i - 1)] = contract_basis(i, phi);
        iota_phi[static_cast<std::size_t>(i - 1)] = wedge(iota[static_cast<std::size_t>(i - 1)], phi);
    }
    const S sixth = ScalarTraits<S>::from_rational(rational(1, 6));
    Matrix<S> b(kDim, kDim);
    for (std::size_t i = 0; i < kDim; ++i)
        for (std::size_t j = 0; j < kDim; ++j) b(i, j) = wedge(iota[j], iota_phi[i]).coeff(kTopMask) * sixth;
    for (std::size_t i = 0; i < kDim; ++i)
        for (std::size_t j = i + 1; j < kDim; ++j) {
            const S diff = b(i, j) - b(j, i);
            bool symmetric;
            if constexpr (std::same_as<S, double>)
                symmetric = std::abs(diff) <= 1e-12 * std::max(1.0, b.max_abs());
            else
                symmetric = ScalarTraits<S>::is_zero(diff);
            if (!symmetric)
                throw Error(ErrorKind::Inconsistency, "b_phi is not symmetric");
        }
    return b;
}

template <class S>
KForm<S> standard_phi() {
    return parse_form<S>("e123 + e145 + e167 + e246 - e257 - e347 - e356");
}

template <class S>
bool positive_definite(const Matrix<S>& a, double eps) {
    const std::size_t n = a.rows();
    if constexpr (std::same_as<S, double>) {
        // Cholesky; a pivot below eps times its diagonal entry counts as a
        // failure (invariant under diagonal rescaling)
        std::vector<double> l(n * n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            double d = a(j, j);
            if (!(d > 0)) return false;
            for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
            if (!(d > eps * a(j, j))) return false;
            const double root = std::sqrt(d);
            l[j * n + j] = root;
            for (std::size_t i = j + 1; i < n; ++i) {
                double s = a(i, j);
                for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
                l[i * n + j] = s / root;
            }
        }
        return true;
    } else if constexpr (std::same_as<S, Poly>) {
        for (std::size_t k = 1; k <= n; ++k) {
            std::vector<int> idx(k);
            for (std::size_t i = 0; i < k; ++i) idx[i] = static_cast<int>(i);
            const Poly m = determinant(a.sub(idx, idx));
            if (!m.is_constant()) throw Error(ErrorKind::Mode, "definiteness of a polynomial matrix is undecidable");
            if (m.constant() <= 0) return false;
        }
        return true;
    } else {
        for (std::size_t k = 1; k <= n; ++k) {
            std::vector<int> idx(k);
            for (std::size_t i = 0; i < k; ++i) idx[i] = static_cast<int>(i);
            if (determinant(a.sub(idx, idx)) <= 0) return false;
        }
        return true;
    }
}

namespace {

template <class S>
bool degenerate(const S& lambda, const Matrix<S>& b, double eps) {
    if constexpr (std::same_as<S, double>) {
        // relative to the Hadamard bound, so uniform rescaling of phi is harmless
        double bound = 1;
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double col = 0;
            for (std::size_t i = 0; i < b.rows(); ++i) col += b(i, j) * b(i, j);
            bound *= std::sqrt(col);
        }
        return !(std::abs(lambda) > eps * bound);
    }
    else
        return ScalarTraits<S>::is_zero(lambda);
}

} // namespace

template <class S>
G2Structure<S>::G2Structure(KForm<S> phi, double eps) : phi_(std::move(phi)), eps_(eps) {
    build(true);
}

template <class S>
G2Structure<S>::G2Structure(KForm<S> phi, double eps, Unchecked) : phi_(std::move(phi)), eps_(eps) {
    build(false);
}

template <class S>
G2Structure<S> G2Structure<S>::assume_positive(KForm<S> phi) {
    return G2Structure(std::move(phi), 1e-9, Unchecked{});
}

template <class S>
void G2Structure<S>::build(bool check_positive) {
    b_ = b_matrix(phi_);
    lambda_ = determinant(b_);
    if (degenerate(lambda_, b_, eps_)) throw Error(ErrorKind::NotPositive, "det(b_phi) = 0: the 3-form is not stable");
    if (check_positive && ScalarTraits<S>::sign(lambda_, 0.0) < 0)
        throw Error(ErrorKind::NotPositive, "the 3-form induces a metric of signature (3,4)");
    vol_scale_ = ninth_root(lambda_);
    g_ = b_ * ScalarTraits<S>::inverse(vol_scale_);
    if (check_positive && !positive_definite(g_, eps_))
        throw Error(ErrorKind::NotPositive, "the 3-form induces a metric of signature (3,4)");
    g_inv_ = inverse(g_);
    orthonormal_ = g_ == Matrix<S>::identity(kDim) && vol_scale_ == ScalarTraits<S>::one();

    for (int k = 0; k <= kDim; ++k) {
        const auto& masks = masks_of_degree(k);
        Matrix<S> gk(masks.size(), masks.size());
        for (std::size_t a = 0; a < masks.size(); ++a) {
            std::vector<int> rows = indices_of(masks[a]);
            for (auto& r : rows) --r;
            for (std::size_t c = a; c < masks.size(); ++c) {
                std::vector<int> cols = indices_of(masks[c]);
                for (auto& x : cols) --x;
                const S v = determinant(g_inv_.sub(rows, cols));
                gk(a, c) = v;
                gk(c, a) = v;
            }
        }
        gram_[static_cast<std::size_t>(k)] = std::move(gk);
    }
}

template <class S>
KForm<S> G2Structure<S>::star_general(const KForm<S>& alpha) const {
    const int k = alpha.degree();
    const auto& masks = masks_of_degree(k);
    const Matrix<S>& gk = gram(k);
    KForm<S> out(kDim - k);
    for (std::size_t a = 0; a < masks.size(); ++a) {
        S acc = ScalarTraits<S>::zero();
        for (const auto& [m, c] : alpha.terms()) {
            const S& e = gk(a, static_cast<std::size_t>(index_in_degree(m)));
            if (!ScalarTraits<S>::is_zero(e)) acc = acc + c * e;
        }
        if (ScalarTraits<S>::is_zero(acc)) continue;
        acc = acc * vol_scale_;
        out.add(static_cast<Mask>(kTopMask & ~masks[a]), complement_sign(masks[a]) > 0 ? acc : S(-acc));
    }
    return out;
}

template <class S>
KForm<S> G2Structure<S>::star(const KForm<S>& alpha) const {
    if (!orthonormal_) return star_general(alpha);
    KForm<S> out(kDim - alpha.degree());
    for (const auto& [m, c] : alpha.terms())
        out.add(static_cast<Mask>(kTopMask & ~m), complement_sign(m) > 0 ? c : S(-c));
    return out;
}

template <class S>
S G2Structure<S>::inner(const KForm<S>& a, const KForm<S>& b) const {
    if (a.degree() != b.degree()) throw Error(ErrorKind::DegreeMismatch, "inner product of forms of different degree");
    const Matrix<S>& gk = gram(a.degree());
    S acc = ScalarTraits<S>::zero();
    for (const auto& [ma, ca] : a.terms()) {
        const auto ia = static_cast<std::size_t>(index_in_degree(ma));
        for (const auto& [mb, cb] : b.terms()) {
            const S& e = gk(ia, static_cast<std::size_t>(index_in_degree(mb)));
            if (!ScalarTraits<S>::is_zero(e)) acc = acc + ca * cb * e;
        }
    }
    return acc;
}

std::string_view stability_name(Stability s) {
    switch (s) {
    case Stability::NotStable: return "NotStable";
    case Stability::PositiveG2: return "PositiveG2";
    case Stability::Signature34: return "Signature34";
    }
    return "?";
}

template <class S>
Classification<S> classify_stability(const KForm<S>& phi, double eps) {
    Classification<S> out;
    const Matrix<S> b = b_matrix(phi);
    out.lambda = determinant(b);
    if (degenerate(out.lambda, b, eps)) return out;
    // lambda^{-1/9} has the sign of lambda, so definiteness can be read off
    // sign(lambda) * B without taking the root.
    const int sign = ScalarTraits<S>::sign(out.lambda, 0.0);
    const Matrix<S> signed_b = sign > 0 ? b : b * ScalarTraits<S>::from_rational(Rational(-1));
    if (!positive_definite(signed_b, eps)) {
        out.kind = Stability::Signature34;
        return out;
    }
    out.kind = Stability::PositiveG2;
    out.structure.emplace(phi, eps);
    return out;
}

template <class S>
Lambda214Check<S> is_in_lambda2_14(const G2Structure<S>& st, const KForm<S>& kappa) {
    if (kappa.degree() != 2) throw Error(ErrorKind::DegreeMismatch, "Lambda^2_14 membership needs a 2-form");
    const KForm<S> w = wedge(kappa, st.star(st.phi()));
    Lambda214Check<S> out;
    out.residual = st.norm_sq(w);
    if constexpr (std::same_as<S, double>)
        out.member = std::sqrt(std::max(out.residual, 0.0)) <= st.eps() * std::max(1.0, kappa.max_abs());
    else
        out.member = w.is_zero();
    return out;
}

template <class S>
S sym2_norm_sq(const G2Structure<S>& st, const Matrix<S>& a) {
    const Matrix<S> m = st.g_inv() * a;
    return trace(m * m);
}

template <class S>
S bilinear(const Matrix<S>& m, const Vector7<S>& v, const Vector7<S>& w) {
    S acc = ScalarTraits<S>::zero();
    for (int i = 0; i < kDim; ++i) {
        if (ScalarTraits<S>::is_zero(v[i])) continue;
        for (int j = 0; j < kDim; ++j) {
            if (ScalarTraits<S>::is_zero(w[j])) continue;
            acc = acc + v[i] * m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) * w[j];
        }
    }
    return acc;
}

template <class S>
S gram_determinant(const Matrix<S>& g, const std::vector<Vector7<S>>& vectors) {
    Matrix<S> m(vectors.size(), vectors.size());
    for (std::size_t a = 0; a < vectors.size(); ++a)
        for (std::size_t b = 0; b < vectors.size(); ++b) m(a, b) = bilinear(g, vectors[a], vectors[b]);
    return determinant(m);
}

#define G2LAB_INSTANTIATE(S)                                                              \
    template Matrix<S> b_matrix(const KForm<S>&);                                         \
    template KForm<S> standard_phi<S>();                                                  \
    template bool positive_definite(const Matrix<S>&, double);                            \
    template class G2Structure<S>;                                                        \
    template Classification<S> classify_stability(const KForm<S>&, double);               \
    template Lambda214Check<S> is_in_lambda2_14(const G2Structure<S>&, const KForm<S>&);  \
    template S sym2_norm_sq(const G2Structure<S>&, const Matrix<S>&);                     \
    template S bilinear(const Matrix<S>&, const Vector7<S>&, const Vector7<S>&);          \
    template S gram_determinant(const Matrix<S>&, const std::vector<Vector7<S>>&);

G2LAB_INSTANTIATE(Rational)
G2LAB_INSTANTIATE(double)
G2LAB_INSTANTIATE(Poly)

#undef G2LAB_INSTANTIATE

} // namespace g2lab
