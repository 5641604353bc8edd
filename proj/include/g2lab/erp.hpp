#pragma once

#include "g2lab/torsion.hpp"

#include <optional>
#include <string>
#include <vector>

namespace g2lab {

/// One named verification step. `residual` is the ring-exact defect rendered
/// as text ("0" means exactly zero in exact rings).
struct Check {
    std::string name;
    bool pass = false;
    std::string residual;
    std::string detail;
};

bool all_pass(const std::vector<Check>& checks);

template <class S>
struct ERPCertificate {
    /// defect of d tau - |tau|^2/6 phi - 1/6 *(tau ^ tau)
    S erp_residual{};
    bool erp = false;
    Subspace<S> P;
    Subspace<S> Q;
    std::vector<Check> checks;
    /// Eigenvalues of g^-1 Ric in increasing order.
    std::vector<double> ricci_spectrum;
    /// Set when every eigenvalue is rational and certified exactly.
    std::optional<std::vector<Rational>> ricci_spectrum_exact;
    TorsionReport<S> torsion;

    bool passed() const { return erp && all_pass(checks); }
};

/// Every algebraic consequence of the ERP condition: tau^3 = 0, closedness and
/// simplicity of tau^2 and *(tau^2), the P/Q splitting with orthogonality,
/// bracket closure and calibrations, the Ricci identities and spectrum,
/// |tau^2|^2 = |tau|^4, |d tau|^2 = |tau|^4/6, Delta tau = |tau|^2/6 tau and
/// Scal^2 = 3|Ric|^2. The certificate is returned even when checks fail.
template <class S>
ERPCertificate<S> erp_certificate(const Differential<S>& d, const G2Structure<S>& st, Tolerance tol = {});

/// Throws NotERP carrying the residual unless the certificate passed.
template <class S>
void require_erp(const ERPCertificate<S>& cert);

/// Eigenvalues of g^-1 A for symmetric A (generalized symmetric problem).
std::vector<double> symmetric_spectrum(const Matrix<double>& a, const Matrix<double>& g);

/// Exact spectrum of the g-self-adjoint endomorphism g^-1 A when all
/// eigenvalues are rational: candidates are read off the floating spectrum
/// and certified by exact nullities summing to 7.
std::optional<std::vector<Rational>> exact_symmetric_spectrum(const Matrix<Rational>& a, const Matrix<Rational>& g);

template <class S>
struct DeformReport {
    S a{};
    /// 1 + |tau|^2 a / 6
    S multiplier{};
    /// det(b) of the deformed form
    S lambda{};
    std::optional<G2Structure<S>> structure;
    std::vector<Check> checks;
    bool passed() const { return structure.has_value() && all_pass(checks); }
};

/// phi + a d tau, verified against the predicted metric, volume, dual form,
/// torsion, ERP property and Ricci tensor. Throws NotPositive for
/// a <= -6/|tau|^2 (the message reports det b, which vanishes at equality).
template <class S>
DeformReport<S> deform(const Differential<S>& d, const ERPCertificate<S>& base, const G2Structure<S>& st, const S& a,
                       Tolerance tol = {});

/// Data of the explicit eternal solution phi(t) = phi + f(t) d tau, kept in
/// floating point because f involves exp.
struct ClosedFormSolution {
    KForm<double> phi{3};
    KForm<double> tau{2};
    KForm<double> dtau{3};
    double k = 0;
    Matrix<double> g;
    Matrix<double> g_P;  // g restricted to P, zero on Q
    Matrix<double> g_Q;  // g restricted to Q, zero on P
    std::vector<Vector7<double>> P;
    std::vector<Vector7<double>> Q;
    double vol_scale = 1;
    Matrix<double> ricci;

    double f(double t) const;
    double fdot(double t) const;
};

/// Throws NotERP when the certificate fails.
template <class S>
ClosedFormSolution closed_form_solution(const ERPCertificate<S>& cert, const G2Structure<S>& st);

/// Predicted state at time t.
struct Snapshot {
    double t = 0;
    double f = 0;
    KForm<double> phi{3};
    KForm<double> tau{2};
    Matrix<double> g;
    double volume_ratio = 1;    // exp(|tau|^2 t / 3)
    double p_volume_ratio = 1;  // 1
    double q_volume_ratio = 1;  // exp(|tau|^2 t / 3)
    double velocity = 0;        // |tau|^2 / sqrt 6
};

Snapshot evaluate(const ClosedFormSolution& sol, double t);

/// Recomputes the structure of phi + f(t) d tau from scratch and compares it
/// with the prediction (torsion, metric, volume, P/Q volume ratios, Ricci,
/// velocity).
std::vector<Check> check_snapshot(const Differential<double>& d, const ClosedFormSolution& sol, double t,
                                  Tolerance tol = {});

/// Reduction of the flow equation along phi + f d tau to the scalar ODE
/// f' = 1 + |tau|^2 f / 6, decided as polynomial identities: with a unit m,
/// phi_m = phi + 6(m-1)/|tau|^2 d tau has tau_m = m tau and d tau_m = m d tau,
/// so after m = 1 + |tau|^2 f / 6 the defect f' d tau - Delta phi_m equals
/// (f' - 1 - |tau|^2 f / 6) d tau coefficientwise.
std::vector<Check> verify_flow_reduction(const LieAlgebra7& algebra, const G2Structure<Rational>& st);

} // namespace g2lab
