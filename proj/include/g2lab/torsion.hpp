#pragma once

#include "g2lab/g2structure.hpp"
#include "g2lab/liealg.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace g2lab {

/// Size of a defect form: the squared g-norm in exact rings (zero iff the
/// form vanishes) and the g-norm in floating point.
template <class S>
S defect(const G2Structure<S>& st, const KForm<S>& form);

/// Whether a defect counts as zero: literally in exact rings, below eps otherwise.
template <class S>
bool negligible(const S& value, double eps);

/// Codifferential (-1)^k * d * on k-forms (dimension 7).
template <class S>
KForm<S> codifferential(const Differential<S>& d, const G2Structure<S>& st, const KForm<S>& alpha);

/// Hodge Laplacian d delta + delta d.
template <class S>
KForm<S> hodge_laplacian(const Differential<S>& d, const G2Structure<S>& st, const KForm<S>& alpha);

/// tau = -* d * phi. Throws NotClosed when d phi does not vanish.
template <class S>
KForm<S> torsion_form(const Differential<S>& d, const G2Structure<S>& st);

/// The unique kappa with kappa ^ phi = d*phi and kappa ^ *phi = 0, found by
/// a linear solve; nullopt when the system is not uniquely solvable (or, for
/// polynomial coefficients, when elimination needs a case split).
template <class S>
std::optional<KForm<S>> torsion_form_linear(const G2Structure<S>& st, const KForm<S>& d_star_phi);

/// Delta phi = d tau for closed phi.
template <class S>
KForm<S> laplacian_phi(const Differential<S>& d, const G2Structure<S>& st);

/// j(beta)(e_i, e_j) = *(iota_i phi ^ iota_j phi ^ beta).
template <class S>
Matrix<S> j_map(const G2Structure<S>& st, const KForm<S>& beta);

/// Ric = |tau|^2/4 g - 1/4 j(d tau - 1/2 *(tau ^ tau)).
template <class S>
Matrix<S> ricci_matrix(const G2Structure<S>& st, const KForm<S>& tau, const KForm<S>& dtau);

template <class S>
struct TorsionReport {
    KForm<S> tau{2};
    S tau_norm_sq{};
    KForm<S> dtau{3};
    Matrix<S> ricci;
    /// -|tau|^2 / 2
    S scal{};
    /// tr(g^-1 Ric), recorded separately as a consistency check
    S scal_trace{};
    /// Named defects (see `defect`): closed, lambda2_14, defining_equation,
    /// coclosed, and tau_routes when the linear route was available.
    std::vector<std::pair<std::string, S>> residuals;
};

/// Full report; throws NotClosed for non-closed phi and Inconsistency when
/// the two torsion routes or the two scalar curvatures disagree.
template <class S>
TorsionReport<S> torsion_report(const Differential<S>& d, const G2Structure<S>& st, Tolerance tol = {});

} // namespace g2lab
