#include "g2lab/torsion.hpp"

#include <cmath>

namespace g2lab {

template <class S>
S defect(const G2Structure<S>& st, const KForm<S>& form) {
    if constexpr (std::same_as<S, double>)
        return std::sqrt(std::max(st.norm_sq(form), 0.0));
    else
        return st.norm_sq(form);
}

template <class S>
bool negligible(const S& value, double eps) {
    if constexpr (std::same_as<S, double>)
        return std::abs(value) <= eps;
    else
        return ScalarTraits<S>::is_zero(value);
}

template <class S>
KForm<S> codifferential(const Differential<S>& d, const G2Structure<S>& st, const KForm<S>& alpha) {
    if (alpha.degree() == 0) return KForm<S>(0);
    KForm<S> out = st.star(d(st.star(alpha)));
    return alpha.degree() % 2 ? -out : out;
}

template <class S>
KForm<S> hodge_laplacian(const Differential<S>& d, const G2Structure<S>& st, const KForm<S>& alpha) {
    KForm<S> out(alpha.degree());
    if (alpha.degree() > 0) out += d(codifferential(d, st, alpha));
    if (alpha.degree() < kDim) out += codifferential(d, st, d(alpha));
    return out;
}

namespace {

template <class S>
void require_closed(const Differential<S>& d, const G2Structure<S>& st) {
    const KForm<S> dphi = d(st.phi());
    const bool closed = std::same_as<S, double> ? dphi.max_abs() <= st.eps() * std::max(1.0, st.phi().max_abs())
                                                : dphi.is_zero();
    if (!closed) throw Error(ErrorKind::NotClosed, "d phi = " + format_form(dphi));
}

} // namespace

template <class S>
KForm<S> torsion_form(const Differential<S>& d, const G2Structure<S>& st) {
    require_closed(d, st);
    return -st.star(d(st.star(st.phi())));
}

template <class S>
std::optional<KForm<S>> torsion_form_linear(const G2Structure<S>& st, const KForm<S>& d_star_phi) {
    if constexpr (std::same_as<S, Poly>) {
        return std::nullopt;
    } else {
        const KForm<S> psi = st.star(st.phi());
        const auto& twos = masks_of_degree(2);
        const std::size_t n5 = masks_of_degree(5).size(), n6 = masks_of_degree(6).size();
        Matrix<S> a(n5 + n6, twos.size());
        for (std::size_t c = 0; c < twos.size(); ++c) {
            const KForm<S> e = KForm<S>::basis(twos[c]);
            const KForm<S> w5 = wedge(e, st.phi());
            const KForm<S> w6 = wedge(e, psi);
            for (const auto& [m, v] : w5.terms()) a(static_cast<std::size_t>(index_in_degree(m)), c) = v;
            for (const auto& [m, v] : w6.terms())
                a(n5 + static_cast<std::size_t>(index_in_degree(m)), c) = v;
        }
        std::vector<S> rhs(n5 + n6, ScalarTraits<S>::zero());
        for (const auto& [m, v] : d_star_phi.terms()) rhs[static_cast<std::size_t>(index_in_degree(m))] = v;
        std::optional<std::vector<S>> x;
        if constexpr (std::same_as<S, double>)
            x = solve_unique(a, rhs, st.eps());
        else
            x = solve_unique(a, rhs);
        if (!x) return std::nullopt;
        return KForm<S>::from_dense(2, *x);
    }
}

template <class S>
KForm<S> laplacian_phi(const Differential<S>& d, const G2Structure<S>& st) {
    return d(torsion_form(d, st));
}

template <class S>
Matrix<S> j_map(const G2Structure<S>& st, const KForm<S>& beta) {
    if (beta.degree() != 3) throw Error(ErrorKind::DegreeMismatch, "j needs a 3-form");
    std::array<KForm<S>, kDim> iota;
    for (int i = 1; i <= kDim; ++i) iota[static_cast<std::size_t>(i - 1)] = contract_basis(i, st.phi());
    const S inv_vol = ScalarTraits<S>::inverse(st.vol_scale());
    Matrix<S> out(kDim, kDim);
    for (std::size_t i = 0; i < kDim; ++i) {
        const KForm<S> ib = wedge(iota[i], beta);
        for (std::size_t j = i; j < kDim; ++j) {
            const S v = wedge(iota[j], ib).coeff(kTopMask) * inv_vol;
            out(i, j) = v;
            out(j, i) = v;
        }
    }
    return out;
}

template <class S>
Matrix<S> ricci_matrix(const G2Structure<S>& st, const KForm<S>& tau, const KForm<S>& dtau) {
    const S quarter = ScalarTraits<S>::from_rational(rational(1, 4));
    const S half = ScalarTraits<S>::from_rational(rational(1, 2));
    const S k = st.norm_sq(tau);
    const KForm<S> beta = dtau - st.star(wedge(tau, tau)) * half;
    return st.g() * (k * quarter) - j_map(st, beta) * quarter;
}

template <class S>
TorsionReport<S> torsion_report(const Differential<S>& d, const G2Structure<S>& st, Tolerance tol) {
    require_closed(d, st);
    TorsionReport<S> r;
    const KForm<S> psi = st.star(st.phi());
    const KForm<S> d_psi = d(psi);
    r.tau = -st.star(d_psi);
    r.tau_norm_sq = st.norm_sq(r.tau);
    r.dtau = d(r.tau);
    r.ricci = ricci_matrix(st, r.tau, r.dtau);
    r.scal = r.tau_norm_sq * ScalarTraits<S>::from_rational(rational(-1, 2));
    r.scal_trace = trace(st.g_inv() * r.ricci);

    r.residuals.emplace_back("closed", defect(st, d(st.phi())));
    r.residuals.emplace_back("lambda2_14", defect(st, wedge(r.tau, psi)));
    r.residuals.emplace_back("defining_equation", defect(st, d_psi - wedge(r.tau, st.phi())));
    r.residuals.emplace_back("coclosed", defect(st, codifferential(d, st, r.tau)));

    const double scale = std::max(1.0, r.tau.max_abs());
    if (auto lin = torsion_form_linear(st, d_psi)) {
        const S gap = defect(st, r.tau - *lin);
        r.residuals.emplace_back("tau_routes", gap);
        if (!negligible(gap, tol.alg * scale))
            throw Error(ErrorKind::Inconsistency, "codifferential and Lambda^2_14 routes give different torsion");
    }
    const S scal_gap = r.scal - r.scal_trace;
    r.residuals.emplace_back("scal_trace", scal_gap);
    if (!negligible(scal_gap, tol.alg * scale * scale))
        throw Error(ErrorKind::Inconsistency, "trace of Ricci differs from -|tau|^2/2");
    return r;
}

#define G2LAB_INSTANTIATE(S)                                                                            \
    template S defect(const G2Structure<S>&, const KForm<S>&);                                          \
    template bool negligible(const S&, double);                                                         \
    template KForm<S> codifferential(const Differential<S>&, const G2Structure<S>&, const KForm<S>&);   \
    template KForm<S> hodge_laplacian(const Differential<S>&, const G2Structure<S>&, const KForm<S>&);  \
    template KForm<S> torsion_form(const Differential<S>&, const G2Structure<S>&);                      \
    template std::optional<KForm<S>> torsion_form_linear(const G2Structure<S>&, const KForm<S>&);       \
    template KForm<S> laplacian_phi(const Differential<S>&, const G2Structure<S>&);                     \
    template Matrix<S> j_map(const G2Structure<S>&, const KForm<S>&);                                   \
    template Matrix<S> ricci_matrix(const G2Structure<S>&, const KForm<S>&, const KForm<S>&);           \
    template TorsionReport<S> torsion_report(const Differential<S>&, const G2Structure<S>&, Tolerance);

G2LAB_INSTANTIATE(Rational)
G2LAB_INSTANTIATE(double)
G2LAB_INSTANTIATE(Poly)

#undef G2LAB_INSTANTIATE

} // namespace g2lab
