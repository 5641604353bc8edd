#include "g2lab/erp.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace g2lab {

bool all_pass(const std::vector<Check>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

namespace {

template <class S>
S from_q(long num, long den = 1) {
    return ScalarTraits<S>::from_rational(rational(num, den));
}

template <class S>
std::string str(const S& x) {
    return ScalarTraits<S>::str(x);
}

/// Sum of squared entries (exact) or the largest |entry| (float).
template <class S>
S entry_defect(const Matrix<S>& m) {
    if constexpr (std::same_as<S, double>) {
        return m.max_abs();
    } else {
        S acc = ScalarTraits<S>::zero();
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) acc = acc + m(i, j) * m(i, j);
        return acc;
    }
}

template <class S>
S scalar_defect(const S& x) {
    if constexpr (std::same_as<S, double>)
        return std::abs(x);
    else
        return x * x;
}

template <class S>
Matrix<S> columns(const std::vector<Vector7<S>>& vs) {
    Matrix<S> m(kDim, vs.size());
    for (std::size_t c = 0; c < vs.size(); ++c)
        for (int i = 0; i < kDim; ++i) m(static_cast<std::size_t>(i), c) = vs[c][i];
    return m;
}

template <class S>
Vector7<S> apply(const Matrix<S>& m, const Vector7<S>& v) {
    Vector7<S> out;
    for (int i = 0; i < kDim; ++i) {
        S acc = ScalarTraits<S>::zero();
        for (int j = 0; j < kDim; ++j) acc = acc + m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) * v[j];
        out[i] = acc;
    }
    return out;
}

class CheckList {
public:
    CheckList(std::vector<Check>& out, double eps) : out_(out), eps_(eps) {}

    template <class S>
    void add(std::string name, const S& residual, std::string detail = {}) {
        out_.push_back({std::move(name), negligible(residual, eps_), str(residual), std::move(detail)});
    }
    void flag(std::string name, bool pass, std::string residual, std::string detail = {}) {
        out_.push_back({std::move(name), pass, std::move(residual), std::move(detail)});
    }

private:
    std::vector<Check>& out_;
    double eps_;
};

Rational rationalize(double x, long max_den) {
    // continued fraction convergents
    long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int iter = 0; iter < 40; ++iter) {
        const double a = std::floor(r);
        if (std::abs(a) > 1e12) break;
        const long ai = static_cast<long>(a);
        const long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        const double frac = r - a;
        if (std::abs(x - static_cast<double>(h1) / static_cast<double>(k1)) < 1e-12 * std::max(1.0, std::abs(x)) ||
            frac < 1e-15)
            break;
        r = 1.0 / frac;
    }
    return rational(h1, k1 == 0 ? 1 : k1);
}

} // namespace

std::vector<double> symmetric_spectrum(const Matrix<double>& a, const Matrix<double>& g) {
    Eigen::MatrixXd ea(a.rows(), a.cols()), eg(g.rows(), g.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            ea(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
            eg(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g(i, j);
        }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(ea, eg, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::Inconsistency, "eigenvalue computation failed");
    std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::vector<Rational>> exact_symmetric_spectrum(const Matrix<Rational>& a, const Matrix<Rational>& g) {
    const auto approx = symmetric_spectrum(a.map<double>([](const Rational& q) { return q.get_d(); }),
                                           g.map<double>([](const Rational& q) { return q.get_d(); }));
    std::vector<Rational> candidates;
    for (double x : approx) {
        const Rational q = rationalize(x, 100000);
        if (std::abs(q.get_d() - x) > 1e-7 * std::max(1.0, std::abs(x))) return std::nullopt;
        if (std::find(candidates.begin(), candidates.end(), q) == candidates.end()) candidates.push_back(q);
    }
    const Matrix<Rational> endo = inverse(g) * a;
    std::vector<Rational> out;
    for (const auto& q : candidates) {
        const std::size_t nullity = a.rows() - rank(endo - Matrix<Rational>::identity(a.rows()) * q);
        for (std::size_t i = 0; i < nullity; ++i) out.push_back(q);
    }
    // the endomorphism is g-self-adjoint, hence diagonalizable: nullities
    // adding up to the dimension certify the whole spectrum
    if (out.size() != a.rows()) return std::nullopt;
    std::sort(out.begin(), out.end());
    return out;
}

template <class S>
ERPCertificate<S> erp_certificate(const Differential<S>& d, const G2Structure<S>& st, Tolerance tol) {
    ERPCertificate<S> c;
    c.torsion = torsion_report(d, st, tol);
    const KForm<S>& tau = c.torsion.tau;
    const KForm<S>& dtau = c.torsion.dtau;
    const S k = c.torsion.tau_norm_sq;
    const double kd = ScalarTraits<S>::to_double(k);
    const double scale = std::max(1.0, kd);
    CheckList checks(c.checks, tol.alg * scale * scale);

    {
        Matrix<double> ric = c.torsion.ricci.template map<double>([](const S& x) { return ScalarTraits<S>::to_double(x); });
        Matrix<double> g = st.g().template map<double>([](const S& x) { return ScalarTraits<S>::to_double(x); });
        c.ricci_spectrum = symmetric_spectrum(ric, g);
        if constexpr (std::same_as<S, Rational>) c.ricci_spectrum_exact = exact_symmetric_spectrum(c.torsion.ricci, st.g());
    }

    if (tau.is_zero() || (!ScalarTraits<S>::exact && tau.max_abs() <= tol.alg)) {
        checks.flag("torsion_nonzero", false, "0", "torsion-free structure: the ERP condition needs tau != 0");
        c.erp = false;
        return c;
    }
    checks.flag("torsion_nonzero", true, str(k));

    const KForm<S> tt = wedge(tau, tau);
    const KForm<S> stt = st.star(tt);
    const S sixth = from_q<S>(1, 6);
    c.erp_residual = defect(st, dtau - st.phi() * (k * sixth) - stt * sixth);
    c.erp = negligible(c.erp_residual, tol.alg * scale);
    checks.add("erp_condition", c.erp_residual, "d tau = |tau|^2/6 phi + 1/6 *(tau^tau)");

    checks.add("tau_cubed_zero", defect(st, wedge(tt, tau)));
    checks.add("tau2_closed", defect(st, d(tt)));
    checks.add("star_tau2_closed", defect(st, d(stt)));
    checks.add("tau2_norm", scalar_defect(S(st.norm_sq(tt) - k * k)), "|tau^tau|^2 = |tau|^4");

    c.P = contraction_kernel(tt, tol.alg);
    c.Q = contraction_kernel(stt, tol.alg);
    checks.flag("tau2_simple", c.P.dim() == 3, std::to_string(c.P.dim()), "dim ker iota(tau^tau) = 3");
    checks.flag("star_tau2_simple", c.Q.dim() == 4, std::to_string(c.Q.dim()), "dim ker iota(*(tau^tau)) = 4");
    if (c.P.dim() != 3 || c.Q.dim() != 4) return c;

    {
        std::vector<Vector7<S>> all = c.P.basis;
        all.insert(all.end(), c.Q.basis.begin(), c.Q.basis.end());
        const std::size_t r = rank_of(columns(all), tol.alg);
        checks.flag("P_Q_complementary", r == 7, std::to_string(r));
        S orth = ScalarTraits<S>::zero();
        for (const auto& p : c.P.basis)
            for (const auto& q : c.Q.basis) {
                const S v = bilinear(st.g(), p, q);
                orth = orth + scalar_defect(v);
            }
        checks.add("P_Q_orthogonal", orth);
    }
    checks.flag("P_bracket_closed", bracket_closed(d.algebra(), c.P, tol.alg), "", "P is a subalgebra");
    checks.flag("Q_bracket_closed", bracket_closed(d.algebra(), c.Q, tol.alg), "", "Q is a subalgebra");

    // calibrations: the restrictions are the g-volume forms of P and Q, i.e.
    // omega(basis)^2 equals the Gram determinant
    {
        const S inv_k = ScalarTraits<S>::inverse(k);
        const KForm<S> omega_p = stt * S(-inv_k);
        const KForm<S> omega_q = tt * S(-inv_k);
        const S vp = evaluate(omega_p, std::span<const Vector7<S>>(c.P.basis));
        const S vq = evaluate(omega_q, std::span<const Vector7<S>>(c.Q.basis));
        checks.add("P_calibration", scalar_defect(S(vp * vp - gram_determinant(st.g(), c.P.basis))),
                   "-|tau|^-2 *(tau^tau) restricts to the volume form of P");
        checks.add("Q_calibration", scalar_defect(S(vq * vq - gram_determinant(st.g(), c.Q.basis))),
                   "-|tau|^-2 tau^tau restricts to the volume form of Q");
    }

    const Matrix<S>& ric = c.torsion.ricci;
    checks.add("ricci_j_formula", entry_defect(Matrix<S>(ric - j_map(st, stt) * from_q<S>(1, 12))),
               "Ric = 1/12 j(*(tau^tau))");
    {
        S on_p = ScalarTraits<S>::zero();
        for (const auto& p : c.P.basis)
            for (const auto& p2 : c.P.basis)
                on_p = on_p + scalar_defect(S(bilinear(ric, p, p2) + k * sixth * bilinear(st.g(), p, p2)));
        checks.add("ricci_on_P", on_p, "Ric = -|tau|^2/6 g on P");
        S on_q = ScalarTraits<S>::zero();
        for (const auto& q : c.Q.basis) {
            const Vector7<S> rq = apply(ric, q);
            for (int i = 0; i < kDim; ++i) on_q = on_q + scalar_defect(rq[i]);
        }
        checks.add("ricci_on_Q", on_q, "Ric vanishes on Q");
    }
    {
        const Matrix<S> endo = st.g_inv() * ric;
        const Matrix<S> shifted = endo + Matrix<S>::identity(kDim) * (k * sixth);
        const std::size_t r = rank_of(endo, tol.alg * scale);
        checks.add("ricci_spectrum", entry_defect(Matrix<S>(endo * shifted)),
                   "(g^-1 Ric)(g^-1 Ric + |tau|^2/6) = 0 with rank " + std::to_string(r));
        checks.flag("ricci_rank", r == 3, std::to_string(r), "eigenvalue -|tau|^2/6 has multiplicity 3");
    }
    checks.add("dtau_norm", scalar_defect(S(st.norm_sq(dtau) - k * k * sixth)), "|d tau|^2 = |tau|^4/6");
    checks.add("tau_laplacian", defect(st, hodge_laplacian(d, st, tau) - tau * (k * sixth)),
               "Delta tau = |tau|^2/6 tau");
    {
        const S scal = c.torsion.scal;
        checks.add("pinching_equality", scalar_defect(S(scal * scal - from_q<S>(3) * sym2_norm_sq(st, ric))),
                   "Scal^2 = 3 |Ric|^2");
    }
    return c;
}

template <class S>
void require_erp(const ERPCertificate<S>& cert) {
    if (!cert.passed())
        throw Error(ErrorKind::NotERP, "ERP certificate failed (residual " + str(cert.erp_residual) + ")");
}

template <class S>
DeformReport<S> deform(const Differential<S>& d, const ERPCertificate<S>& base, const G2Structure<S>& st, const S& a,
                       Tolerance tol) {
    require_erp(base);
    DeformReport<S> rep;
    rep.a = a;
    const S k = base.torsion.tau_norm_sq;
    const S sixth = from_q<S>(1, 6);
    rep.multiplier = ScalarTraits<S>::one() + k * a * sixth;
    const KForm<S>& tau = base.torsion.tau;
    const KForm<S> phi_t = st.phi() + base.torsion.dtau * a;
    rep.lambda = determinant(b_matrix(phi_t));
    const double scale = std::max(1.0, ScalarTraits<S>::to_double(k));
    if (ScalarTraits<S>::sign(rep.multiplier, tol.alg) <= 0)
        throw Error(ErrorKind::NotPositive, "a <= -6/|tau|^2: 1 + |tau|^2 a/6 = " + str(rep.multiplier) +
                                                ", det b = " + str(rep.lambda));
    const G2Structure<S>& s2 = rep.structure.emplace(phi_t, st.eps());
    const S m = rep.multiplier;
    const double m_scale = std::max(1.0, std::abs(ScalarTraits<S>::to_double(m)));
    CheckList checks(rep.checks, tol.alg * scale * scale * m_scale * m_scale);

    S on_p = ScalarTraits<S>::zero(), on_q = ScalarTraits<S>::zero(), mixed = ScalarTraits<S>::zero();
    for (const auto& p : base.P.basis) {
        for (const auto& p2 : base.P.basis)
            on_p = on_p + scalar_defect(S(bilinear(s2.g(), p, p2) - bilinear(st.g(), p, p2)));
        for (const auto& q : base.Q.basis) mixed = mixed + scalar_defect(bilinear(s2.g(), p, q));
    }
    for (const auto& q : base.Q.basis)
        for (const auto& q2 : base.Q.basis)
            on_q = on_q + scalar_defect(S(bilinear(s2.g(), q, q2) - m * bilinear(st.g(), q, q2)));
    checks.add("metric_on_P", on_p, "deformed metric agrees with g on P");
    checks.add("metric_on_Q", on_q, "deformed metric is (1 + |tau|^2 a/6) g on Q");
    checks.add("metric_P_Q_orthogonal", mixed);
    checks.add("volume", scalar_defect(S(s2.vol_scale() - m * m * st.vol_scale())), "dV~ = (1 + |tau|^2 a/6)^2 dV");

    const KForm<S> tt = wedge(tau, tau);
    const KForm<S> psi_pred = (st.star(st.phi()) - tt * (a * sixth)) * m;
    checks.add("star_phi", defect(s2, s2.star(phi_t) - psi_pred), "*~phi~ = (1 + |tau|^2 a/6)(*phi - a/6 tau^tau)");

    const auto r2 = torsion_report(d, s2, tol);
    checks.add("torsion_multiplier", defect(s2, r2.tau - tau * m), "tau~ = (1 + |tau|^2 a/6) tau");
    checks.add("star_tau2", defect(s2, s2.star(wedge(r2.tau, r2.tau)) - st.star(tt)), "*~(tau~^tau~) = *(tau^tau)");
    checks.add("torsion_norm", scalar_defect(S(r2.tau_norm_sq - k)), "|tau~| = |tau|");
    const auto cert2 = erp_certificate(d, s2, tol);
    checks.flag("erp_preserved", cert2.passed(), str(cert2.erp_residual));
    checks.add("ricci_unchanged", entry_defect(Matrix<S>(r2.ricci - base.torsion.ricci)), "Ric(g~) = Ric(g)");
    return rep;
}

double ClosedFormSolution::f(double t) const { return 6.0 / k * std::expm1(k * t / 6.0); }
double ClosedFormSolution::fdot(double t) const { return std::exp(k * t / 6.0); }

template <class S>
ClosedFormSolution closed_form_solution(const ERPCertificate<S>& cert, const G2Structure<S>& st) {
    require_erp(cert);
    auto to_d = [](const S& x) { return ScalarTraits<S>::to_double(x); };
    auto vec_d = [&](const Vector7<S>& v) {
        Vector7<double> out;
        for (int i = 0; i < kDim; ++i) out[i] = to_d(v[i]);
        return out;
    };
    ClosedFormSolution sol;
    sol.phi = st.phi().template map<double>(to_d);
    sol.tau = cert.torsion.tau.template map<double>(to_d);
    sol.dtau = cert.torsion.dtau.template map<double>(to_d);
    sol.k = to_d(cert.torsion.tau_norm_sq);
    sol.g = st.g().template map<double>(to_d);
    sol.vol_scale = to_d(st.vol_scale());
    sol.ricci = cert.torsion.ricci.template map<double>(to_d);
    for (const auto& p : cert.P.basis) sol.P.push_back(vec_d(p));
    for (const auto& q : cert.Q.basis) sol.Q.push_back(vec_d(q));

    // g_P(v, w) = g(pi_P v, pi_P w) through the adapted basis M = [P | Q]
    std::vector<Vector7<double>> all = sol.P;
    all.insert(all.end(), sol.Q.begin(), sol.Q.end());
    const Matrix<double> m = columns(all);
    const Matrix<double> l = inverse(m);
    const Matrix<double> gm = m.transpose() * sol.g * m;
    Matrix<double> bp(kDim, kDim), bq(kDim, kDim);
    for (std::size_t i = 0; i < kDim; ++i)
        for (std::size_t j = 0; j < kDim; ++j) {
            if (i < 3 && j < 3) bp(i, j) = gm(i, j);
            if (i >= 3 && j >= 3) bq(i, j) = gm(i, j);
        }
    sol.g_P = l.transpose() * bp * l;
    sol.g_Q = l.transpose() * bq * l;
    return sol;
}

Snapshot evaluate(const ClosedFormSolution& sol, double t) {
    Snapshot s;
    s.t = t;
    s.f = sol.f(t);
    s.phi = sol.phi + sol.dtau * s.f;
    const double e = std::exp(sol.k * t / 6.0);
    s.tau = sol.tau * e;
    s.g = sol.g_P + sol.g_Q * e;
    s.volume_ratio = std::exp(sol.k * t / 3.0);
    s.p_volume_ratio = 1.0;
    s.q_volume_ratio = s.volume_ratio;
    s.velocity = sol.k / std::sqrt(6.0);
    return s;
}

std::vector<Check> check_snapshot(const Differential<double>& d, const ClosedFormSolution& sol, double t,
                                  Tolerance tol) {
    const Snapshot snap = evaluate(sol, t);
    const G2Structure<double> st(snap.phi, tol.alg);
    const auto r = torsion_report(d, st, tol);
    std::vector<Check> out;
    auto rel = [&](const std::string& name, double got, double want) {
        const double err = std::abs(got - want) / std::max(1.0, std::abs(want));
        out.push_back({name, err <= tol.alg * 100, ScalarTraits<double>::str(err), {}});
    };
    auto rel_abs = [&](const std::string& name, double err, double size) {
        const double e = err / std::max(1.0, size);
        out.push_back({name, e <= tol.alg * 100, ScalarTraits<double>::str(e), {}});
    };
    rel_abs("tau", (r.tau - snap.tau).max_abs(), snap.tau.max_abs());
    rel_abs("metric", (st.g() - snap.g).max_abs(), snap.g.max_abs());
    rel("volume_ratio", st.vol_scale() / sol.vol_scale, snap.volume_ratio);
    rel("p_volume_ratio", std::sqrt(gram_determinant(st.g(), sol.P) / gram_determinant(sol.g, sol.P)), 1.0);
    rel("q_volume_ratio", std::sqrt(gram_determinant(st.g(), sol.Q) / gram_determinant(sol.g, sol.Q)),
        snap.q_volume_ratio);
    rel_abs("ricci", (r.ricci - sol.ricci).max_abs(), sol.ricci.max_abs());
    rel("tau_norm", r.tau_norm_sq, sol.k);
    rel("velocity", std::sqrt(st.norm_sq(r.dtau)), snap.velocity);
    return out;
}

std::vector<Check> verify_flow_reduction(const LieAlgebra7& algebra, const G2Structure<Rational>& st) {
    const Differential<Rational> dq(algebra);
    const auto cert = erp_certificate(dq, st);
    require_erp(cert);
    const Rational k = cert.torsion.tau_norm_sq;
    const KForm<Poly> phi = convert<Poly>(st.phi());
    const KForm<Poly> tau = convert<Poly>(cert.torsion.tau);
    const KForm<Poly> dtau = convert<Poly>(cert.torsion.dtau);
    const Poly m = Poly::variable("m");
    const Poly one(Rational(1));

    std::vector<Check> out;
    const KForm<Poly> phi_m = phi + dtau * (Poly(Rational(6) / k) * (m - one));
    const Poly lambda = determinant(b_matrix(phi_m));
    const Poly lambda_pred = Poly(st.lambda()) * Poly::variable("m", 18);
    out.push_back({"det_b", lambda == lambda_pred, (lambda - lambda_pred).to_string(),
                   "det b(phi_m) = m^18 det b(phi)"});

    const auto st_m = G2Structure<Poly>::assume_positive(phi_m);
    const Differential<Poly> dp(algebra);
    const KForm<Poly> tau_m = torsion_form(dp, st_m);
    const KForm<Poly> dtau_m = dp(tau_m);
    out.push_back({"torsion", tau_m == tau * m, format_form(KForm<Poly>(tau_m - tau * m)), "tau_m = m tau"});
    out.push_back({"laplacian", dtau_m == dtau * m, format_form(KForm<Poly>(dtau_m - dtau * m)),
                   "Delta phi_m = m d tau"});

    // along phi + f d tau:  m = 1 + k f / 6
    const Poly f = Poly::variable("f");
    const Poly fdot = Poly::variable("fdot");
    const Poly m_of_f = one + f * Poly(k / 6);
    KForm<Poly> defect_form(3);
    for (const auto& [mask, c] : dtau_m.terms()) defect_form.add(mask, -c.substitute("m", m_of_f));
    defect_form += dtau * fdot;
    const Poly ode = fdot - one - f * Poly(k / 6);
    const KForm<Poly> predicted = dtau * ode;
    out.push_back({"ode_reduction", defect_form == predicted, format_form(KForm<Poly>(defect_form - predicted)),
                   "f' d tau - Delta phi(t) = (f' - 1 - " + to_string(Rational(k / 6)) + " f) d tau"});

    // the explicit f solves the ODE with f(0) = 0 and stays above -6/k
    ClosedFormSolution sol;
    sol.k = k.get_d();
    double worst = 0;
    for (double t : {-3.0, -1.0, -0.25, 0.0, 0.5, 1.0, 2.0}) {
        const double lhs = sol.fdot(t), rhs = 1 + sol.k * sol.f(t) / 6;
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    out.push_back({"ode_solution", worst <= 1e-12 && sol.f(0) == 0, ScalarTraits<double>::str(worst),
                   "f(t) = 6/k (exp(k t/6) - 1) solves f' = 1 + k f/6, f(0) = 0"});
    return out;
}

template ERPCertificate<Rational> erp_certificate(const Differential<Rational>&, const G2Structure<Rational>&, Tolerance);
template ERPCertificate<double> erp_certificate(const Differential<double>&, const G2Structure<double>&, Tolerance);
template void require_erp(const ERPCertificate<Rational>&);
template void require_erp(const ERPCertificate<double>&);
template DeformReport<Rational> deform(const Differential<Rational>&, const ERPCertificate<Rational>&,
                                       const G2Structure<Rational>&, const Rational&, Tolerance);
template DeformReport<double> deform(const Differential<double>&, const ERPCertificate<double>&,
                                     const G2Structure<double>&, const double&, Tolerance);
template ClosedFormSolution closed_form_solution(const ERPCertificate<Rational>&, const G2Structure<Rational>&);
template ClosedFormSolution closed_form_solution(const ERPCertificate<double>&, const G2Structure<double>&);

} // namespace g2lab
