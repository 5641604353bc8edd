#pragma once

#include "g2lab/erp.hpp"

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace g2lab {

enum class Integrator { RK4, RK45 };

Integrator parse_integrator(std::string_view name);
std::string_view integrator_name(Integrator i);

struct FlowConfig {
    double t0 = 0;
    double t1 = 1;
    /// Fixed step (RK4) or initial step (RK45); always positive, the sign
    /// follows t1 - t0.
    double step = 1e-3;
    Integrator integrator = Integrator::RK4;
    /// Orthogonal projection (coefficient inner product) onto closed 3-forms
    /// after every step.
    bool project_closed = false;
    Tolerance tol{};
    /// RK45 error control
    double rtol = 1e-10;
    double atol = 1e-12;
    std::size_t max_steps = 10'000'000;
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct FlowRow {
    double t = 0;
    std::vector<double> phi;  // 35 coefficients in lexicographic order
    double tau_norm_sq = 0;
    double scal = 0;
    double vol_scale = 0;
    double velocity = 0;
    double erp_residual = 0;
    double closed_form_dev = kNaN;
    /// |d_t g + 2 Ric - |tau|^2/6 g - 1/4 j(*(tau^tau))|_g with d_t g by
    /// finite differences; one-sided on the boundary rows.
    double metric_evol_residual = kNaN;
    /// |d_t log vol_scale - |tau|^2 / 3|
    double volume_law_residual = kNaN;
    /// max |d phi| coefficient
    double closedness = 0;
    double projection_displacement = 0;
    bool boundary = false;
    Matrix<double> g;
    Matrix<double> ricci;
};

struct FlowTrace {
    std::vector<FlowRow> rows;
    bool blow_up = false;
    double blow_up_time = kNaN;
    std::string blow_up_reason;
    /// Set instead of blow_up when the structure stays positive but the
    /// diagnostics lose consistency (metric too ill-conditioned for doubles).
    bool breakdown = false;
    std::size_t rejected_steps = 0;
    double wall_seconds = 0;
};

/// Integrates d phi/dt = Delta phi = d tau(phi) on the 35 coefficients of phi.
/// Every accepted step recomputes the full torsion report. Leaving the
/// positive cone (or det b reaching 0) truncates the trace with a blow-up
/// marker. When `solution` is given, rows also carry the deviation from it.
FlowTrace integrate(const LieAlgebra7& algebra, const KForm<double>& phi0, const FlowConfig& cfg,
                    const ClosedFormSolution* solution = nullptr);

struct ComparisonReport {
    double max_phi_dev = 0;
    double max_tau_norm_dev = 0;
    double max_scal_dev = 0;
    double max_velocity_dev = 0;
    /// relative deviation of vol_scale(t)/vol_scale(0) from exp(|tau|^2 t/3)
    double max_volume_rel_dev = 0;
    double final_t = 0;
    double final_volume_ratio = 0;
    double max_erp_residual = 0;
    /// interior rows only
    double max_metric_evol_residual = 0;
    double max_volume_law_residual = 0;
    double max_closedness = 0;
    /// max |g(t) - g| on P pairs
    double max_metric_P_dev = 0;
    /// max relative |g(t) - exp(|tau|^2 t/6) g| on Q pairs
    double max_metric_Q_rel_dev = 0;
    std::size_t rows = 0;
};

/// Throws InvalidArgument when the trace does not start at the solution's
/// initial datum.
ComparisonReport compare_closed_form(const FlowTrace& trace, const ClosedFormSolution& sol, double eps = 1e-9);

/// CSV with one row per accepted step, keeping every `sample_every`-th row
/// and the last one.
void write_csv(std::ostream& out, const FlowTrace& trace, std::size_t sample_every = 1);

} // namespace g2lab
