#pragma once

#include "g2lab/kform.hpp"
#include "g2lab/matrix.hpp"

#include <array>
#include <optional>

namespace g2lab {

/// b_phi(e_i, e_j): the e^{1..7} coefficient of (1/6) iota_i phi ^ iota_j phi ^ phi.
/// Symmetry is checked, not assumed.
template <class S>
Matrix<S> b_matrix(const KForm<S>& phi);

/// phi_std = e123 + e145 + e167 + e246 - e257 - e347 - e356.
template <class S>
KForm<S> standard_phi();

/// A positive 3-form together with everything derived from its metric.
/// All caches are filled at construction; the object is immutable.
template <class S>
class G2Structure {
public:
    /// Throws NotPositive if phi is degenerate or of split signature and
    /// NinthRootIrrational when the exact ninth root does not exist.
    explicit G2Structure(KForm<S> phi, double eps = 1e-9);

    /// Polynomial coefficients have no decidable sign: the caller vouches for
    /// positivity (e.g. on the admissible parameter range).
    static G2Structure assume_positive(KForm<S> phi);

    const KForm<S>& phi() const noexcept { return phi_; }
    const Matrix<S>& b() const noexcept { return b_; }
    const S& lambda() const noexcept { return lambda_; }
    /// lambda^{1/9}: dV = vol_scale * e^{1..7}.
    const S& vol_scale() const noexcept { return vol_scale_; }
    const Matrix<S>& g() const noexcept { return g_; }
    const Matrix<S>& g_inv() const noexcept { return g_inv_; }
    /// Gram matrix of the induced inner product on Lambda^k in the lexicographic basis.
    const Matrix<S>& gram(int k) const { return gram_[static_cast<std::size_t>(k)]; }
    double eps() const noexcept { return eps_; }

    KForm<S> volume_form() const { return KForm<S>::top(vol_scale_); }
    KForm<S> star(const KForm<S>& alpha) const;
    S inner(const KForm<S>& a, const KForm<S>& b) const;
    S norm_sq(const KForm<S>& a) const { return inner(a, a); }

    /// Hodge star through the Gram matrices (no orthonormal shortcut).
    KForm<S> star_general(const KForm<S>& alpha) const;
    bool orthonormal() const noexcept { return orthonormal_; }

private:
    struct Unchecked {};
    G2Structure(KForm<S> phi, double eps, Unchecked);
    void build(bool check_positive);

    KForm<S> phi_;
    double eps_;
    Matrix<S> b_;
    S lambda_;
    S vol_scale_;
    Matrix<S> g_;
    Matrix<S> g_inv_;
    std::array<Matrix<S>, kDim + 1> gram_;
    bool orthonormal_ = false;
};

enum class Stability { NotStable, PositiveG2, Signature34 };

std::string_view stability_name(Stability s);

template <class S>
struct Classification {
    Stability kind = Stability::NotStable;
    S lambda{};
    std::optional<G2Structure<S>> structure;
};

/// NotStable iff det(B) = 0; otherwise the sign pattern of lambda^{-1/9} B
/// decides. Exact rings throw NinthRootIrrational only when a positive
/// structure has to be built and lambda has no rational ninth root.
template <class S>
Classification<S> classify_stability(const KForm<S>& phi, double eps = 1e-9);

/// Leading principal minors (exact) or Cholesky (float).
template <class S>
bool positive_definite(const Matrix<S>& a, double eps = 1e-9);

template <class S>
struct Lambda214Check {
    bool member = false;
    /// |kappa ^ *phi|^2
    S residual{};
};

/// kappa in Lambda^2_14 iff kappa ^ *phi = 0.
template <class S>
Lambda214Check<S> is_in_lambda2_14(const G2Structure<S>& st, const KForm<S>& kappa);

/// g-norm on symmetric 2-tensors: tr(g^-1 A g^-1 A).
template <class S>
S sym2_norm_sq(const G2Structure<S>& st, const Matrix<S>& a);

/// Gram determinant det(g(v_a, v_b)) of a list of vectors.
template <class S>
S gram_determinant(const Matrix<S>& g, const std::vector<Vector7<S>>& vectors);

template <class S>
S bilinear(const Matrix<S>& m, const Vector7<S>& v, const Vector7<S>& w);

extern template class G2Structure<Rational>;
extern template class G2Structure<double>;
extern template class G2Structure<Poly>;

} // namespace g2lab
