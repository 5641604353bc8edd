#include "g2lab/flow.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <tuple>
#include <cmath>
#include <ostream>

namespace g2lab {

Integrator parse_integrator(std::string_view name) {
    if (name == "rk4" || name == "RK4") return Integrator::RK4;
    if (name == "rk45" || name == "RK45") return Integrator::RK45;
    throw Error(ErrorKind::InvalidArgument, "unknown integrator '" + std::string(name) + "' (rk4 | rk45)");
}

std::string_view integrator_name(Integrator i) { return i == Integrator::RK4 ? "rk4" : "rk45"; }

namespace {

using State = std::vector<double>;

State axpy(const State& y, double h, const State& k) {
    State out(y);
    for (std::size_t i = 0; i < y.size(); ++i) out[i] += h * k[i];
    return out;
}

class FlowSystem {
public:
    FlowSystem(const LieAlgebra7& algebra, const FlowConfig& cfg) : d_(algebra), cfg_(cfg) {
        if (cfg.project_closed) {
            // orthonormal basis of the closed 3-forms (modified Gram-Schmidt)
            for (const auto& form : closed_subspace<double>(algebra, 3, cfg.tol.alg)) {
                State v = form.dense();
                for (const auto& b : closed_basis_) {
                    double dot = 0;
                    for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * b[i];
                    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * b[i];
                }
                double norm = 0;
                for (double x : v) norm += x * x;
                norm = std::sqrt(norm);
                if (norm <= cfg.tol.alg) continue;
                for (double& x : v) x /= norm;
                closed_basis_.push_back(std::move(v));
            }
        }
    }

    const Differential<double>& d() const { return d_; }

    State rhs(const State& y) const {
        const G2Structure<double> st(KForm<double>::from_dense(3, y), cfg_.tol.alg);
        return d_(torsion_form(d_, st)).dense();
    }

    /// Returns the displacement norm.
    double project(State& y) const {
        if (closed_basis_.empty()) return 0;
        State p(y.size(), 0.0);
        for (const auto& b : closed_basis_) {
            double dot = 0;
            for (std::size_t i = 0; i < y.size(); ++i) dot += y[i] * b[i];
            for (std::size_t i = 0; i < y.size(); ++i) p[i] += dot * b[i];
        }
        double disp = 0;
        for (std::size_t i = 0; i < y.size(); ++i) disp += (p[i] - y[i]) * (p[i] - y[i]);
        y = std::move(p);
        return std::sqrt(disp);
    }

    FlowRow row(double t, const State& y, const ClosedFormSolution* sol) const {
        const KForm<double> phi = KForm<double>::from_dense(3, y);
        const G2Structure<double> st(phi, cfg_.tol.alg);
        const auto r = torsion_report(d_, st, cfg_.tol);
        FlowRow row;
        row.t = t;
        row.phi = y;
        row.tau_norm_sq = r.tau_norm_sq;
        row.scal = r.scal;
        row.vol_scale = st.vol_scale();
        row.velocity = std::sqrt(std::max(st.norm_sq(r.dtau), 0.0));
        const KForm<double> stt = st.star(wedge(r.tau, r.tau));
        row.erp_residual = defect(st, r.dtau - phi * (r.tau_norm_sq / 6) - stt * (1.0 / 6));
        row.closedness = d_(phi).max_abs();
        row.g = st.g();
        row.ricci = r.ricci;
        // the metric-evolution right-hand side is stored until neighbours exist
        j_terms_.push_back(st.g() * (r.tau_norm_sq / 6) + j_map(st, stt) * 0.25 - r.ricci * 2.0);
        norms_.push_back(st.g_inv());
        if (sol) {
            const Snapshot snap = evaluate(*sol, t);
            row.closed_form_dev = (phi - snap.phi).max_abs();
        }
        return row;
    }

    /// Fills the finite-difference residuals once all rows are known.
    void finish(std::vector<FlowRow>& rows) const {
        const std::size_t n = rows.size();
        if (n < 2) return;
        for (std::size_t i = 0; i < n; ++i) {
            Matrix<double> dg;
            double dlogv;
            auto logv = [&](std::size_t j) { return std::log(rows[j].vol_scale); };
            if (i == 0 || i == n - 1) {
                const std::size_t a = i == 0 ? 0 : n - 2, b = i == 0 ? 1 : n - 1;
                const double h = rows[b].t - rows[a].t;
                dg = (rows[b].g - rows[a].g) * (1.0 / h);
                dlogv = (logv(b) - logv(a)) / h;
                rows[i].boundary = true;
            } else {
                // three-point derivative on a possibly non-uniform grid
                const double h1 = rows[i].t - rows[i - 1].t, h2 = rows[i + 1].t - rows[i].t;
                const double cm = -h2 / (h1 * (h1 + h2)), c0 = (h2 - h1) / (h1 * h2), cp = h1 / (h2 * (h1 + h2));
                dg = rows[i - 1].g * cm + rows[i].g * c0 + rows[i + 1].g * cp;
                dlogv = cm * logv(i - 1) + c0 * logv(i) + cp * logv(i + 1);
            }
            const Matrix<double> res = dg - j_terms_[i];
            const Matrix<double> m = norms_[i] * res;
            rows[i].metric_evol_residual = std::sqrt(std::max(trace(m * m), 0.0));
            rows[i].volume_law_residual = std::abs(dlogv - rows[i].tau_norm_sq / 3);
        }
    }

private:
    Differential<double> d_;
    FlowConfig cfg_;
    std::vector<State> closed_basis_;
    mutable std::vector<Matrix<double>> j_terms_;
    mutable std::vector<Matrix<double>> norms_;
};

bool truncates(const Error& e) {
    return e.kind() == ErrorKind::NotPositive || e.kind() == ErrorKind::Inconsistency;
}

State rk4_step(const FlowSystem& sys, const State& y, double h) {
    const State k1 = sys.rhs(y);
    const State k2 = sys.rhs(axpy(y, h / 2, k1));
    const State k3 = sys.rhs(axpy(y, h / 2, k2));
    const State k4 = sys.rhs(axpy(y, h, k3));
    State out(y);
    for (std::size_t i = 0; i < y.size(); ++i) out[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return out;
}

/// Dormand-Prince 5(4); returns the 5th-order solution and the error estimate.
std::pair<State, State> dopri_step(const FlowSystem& sys, const State& y, double h) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    const std::size_t n = y.size();
    auto comb = [&](std::initializer_list<std::pair<double, const State*>> terms) {
        State out(y);
        for (const auto& [c, k] : terms)
            for (std::size_t i = 0; i < n; ++i) out[i] += h * c * (*k)[i];
        return out;
    };
    const State k1 = sys.rhs(y);
    const State k2 = sys.rhs(comb({{a21, &k1}}));
    const State k3 = sys.rhs(comb({{a31, &k1}, {a32, &k2}}));
    const State k4 = sys.rhs(comb({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = sys.rhs(comb({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 = sys.rhs(comb({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State y5 = comb({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = sys.rhs(y5);
    State err(n);
    for (std::size_t i = 0; i < n; ++i)
        err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    return {y5, err};
}

} // namespace

FlowTrace integrate(const LieAlgebra7& algebra, const KForm<double>& phi0, const FlowConfig& cfg,
                    const ClosedFormSolution* solution) {
    if (!(cfg.step > 0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
    if (phi0.degree() != 3) throw Error(ErrorKind::DegreeMismatch, "the flow evolves a 3-form");
    const auto start = std::chrono::steady_clock::now();
    FlowSystem sys(algebra, cfg);
    FlowTrace trace;

    State y = phi0.dense();
    {
        const G2Structure<double> st0(phi0, cfg.tol.alg);
        torsion_form(sys.d(), st0);  // NotClosed for a non-closed datum
    }
    trace.rows.push_back(sys.row(cfg.t0, y, solution));

    const double span = cfg.t1 - cfg.t0;
    const double dir = span >= 0 ? 1.0 : -1.0;
    auto blow_up = [&](double t, const Error& e) {
        (e.kind() == ErrorKind::NotPositive ? trace.blow_up : trace.breakdown) = true;
        trace.blow_up_time = t;
        trace.blow_up_reason = e.what();
    };

    try {
        if (cfg.integrator == Integrator::RK4) {
            const auto n = static_cast<std::size_t>(std::max(1.0, std::round(std::abs(span) / cfg.step)));
            if (n > cfg.max_steps) throw Error(ErrorKind::InvalidArgument, "too many steps");
            const double h = span / static_cast<double>(n);
            for (std::size_t i = 1; i <= n; ++i) {
                const double t = cfg.t0 + static_cast<double>(i) * h;
                try {
                    y = rk4_step(sys, y, h);
                    const double disp = sys.project(y);
                    trace.rows.push_back(sys.row(i == n ? cfg.t1 : t, y, solution));
                    trace.rows.back().projection_displacement = disp;
                } catch (const Error& e) {
                    if (!truncates(e)) throw;
                    blow_up(t, e);
                    break;
                }
            }
        } else {
            double t = cfg.t0;
            double h = cfg.step * dir;
            std::size_t steps = 0;
            while (dir * (cfg.t1 - t) > 1e-14 * std::max(1.0, std::abs(cfg.t1))) {
                if (++steps > cfg.max_steps) throw Error(ErrorKind::InvalidArgument, "RK45 exceeded the step budget");
                if (dir * (t + h - cfg.t1) > 0) h = cfg.t1 - t;
                State y5, err;
                try {
                    std::tie(y5, err) = dopri_step(sys, y, h);
                } catch (const Error& e) {
                    if (!truncates(e)) throw;
                    // a stage left the positive cone: shrink, or give up
                    if (std::abs(h) < 1e-12) {
                        blow_up(t, e);
                        break;
                    }
                    h /= 4;
                    ++trace.rejected_steps;
                    continue;
                }
                double norm = 0;
                for (std::size_t i = 0; i < y.size(); ++i) {
                    const double sc = cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
                    norm = std::max(norm, std::abs(err[i]) / sc);
                }
                const double factor = std::clamp(0.9 * std::pow(std::max(norm, 1e-10), -0.2), 0.2, 5.0);
                if (norm <= 1.0) {
                    t = (dir * (t + h - cfg.t1) >= 0) ? cfg.t1 : t + h;
                    y = std::move(y5);
                    const double disp = sys.project(y);
                    try {
                        trace.rows.push_back(sys.row(t, y, solution));
                    } catch (const Error& e) {
                        if (!truncates(e)) throw;
                        blow_up(t, e);
                        break;
                    }
                    trace.rows.back().projection_displacement = disp;
                } else {
                    ++trace.rejected_steps;
                }
                h *= factor;
            }
        }
    } catch (const Error& e) {
        if (!truncates(e)) throw;
        blow_up(trace.rows.back().t, e);
    }
    sys.finish(trace.rows);
    trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return trace;
}

ComparisonReport compare_closed_form(const FlowTrace& trace, const ClosedFormSolution& sol, double eps) {
    if (trace.rows.empty()) throw Error(ErrorKind::InvalidArgument, "empty trace");
    const FlowRow& first = trace.rows.front();
    const Snapshot s0 = evaluate(sol, first.t);
    if ((KForm<double>::from_dense(3, first.phi) - s0.phi).max_abs() > eps * std::max(1.0, s0.phi.max_abs()))
        throw Error(ErrorKind::InvalidArgument, "trace and closed-form solution start from different data");

    ComparisonReport rep;
    rep.rows = trace.rows.size();
    const double k = sol.k;
    const double v0 = first.vol_scale / std::exp(k * first.t / 3);
    for (const auto& r : trace.rows) {
        const Snapshot s = evaluate(sol, r.t);
        rep.max_phi_dev = std::max(rep.max_phi_dev, (KForm<double>::from_dense(3, r.phi) - s.phi).max_abs());
        rep.max_tau_norm_dev = std::max(rep.max_tau_norm_dev, std::abs(r.tau_norm_sq - k));
        rep.max_scal_dev = std::max(rep.max_scal_dev, std::abs(r.scal + k / 2));
        rep.max_velocity_dev = std::max(rep.max_velocity_dev, std::abs(r.velocity - s.velocity));
        rep.max_volume_rel_dev = std::max(rep.max_volume_rel_dev, std::abs(r.vol_scale / v0 / s.volume_ratio - 1));
        rep.max_erp_residual = std::max(rep.max_erp_residual, r.erp_residual);
        rep.max_closedness = std::max(rep.max_closedness, r.closedness);
        if (!r.boundary) {
            rep.max_metric_evol_residual = std::max(rep.max_metric_evol_residual, r.metric_evol_residual);
            rep.max_volume_law_residual = std::max(rep.max_volume_law_residual, r.volume_law_residual);
        }
        const double e = std::exp(k * r.t / 6);
        double gmax = 0;
        for (const auto& q : sol.Q)
            for (const auto& q2 : sol.Q) gmax = std::max(gmax, std::abs(bilinear(sol.g, q, q2)));
        for (const auto& p : sol.P)
            for (const auto& p2 : sol.P)
                rep.max_metric_P_dev = std::max(rep.max_metric_P_dev, std::abs(bilinear(r.g, p, p2) - bilinear(sol.g, p, p2)));
        for (const auto& q : sol.Q)
            for (const auto& q2 : sol.Q)
                rep.max_metric_Q_rel_dev = std::max(
                    rep.max_metric_Q_rel_dev, std::abs(bilinear(r.g, q, q2) - e * bilinear(sol.g, q, q2)) / (e * gmax));
    }
    const FlowRow& last = trace.rows.back();
    rep.final_t = last.t;
    rep.final_volume_ratio = last.vol_scale / first.vol_scale;
    return rep;
}

void write_csv(std::ostream& out, const FlowTrace& trace, std::size_t sample_every) {
    if (sample_every == 0) sample_every = 1;
    out << "t";
    for (Mask m : masks_of_degree(3)) out << ",phi_" << index_string(m);
    out << ",tau_norm_sq,scal,vol_scale,velocity,erp_residual,closed_form_dev,metric_evol_residual\n";
    char buf[64];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    for (std::size_t i = 0; i < trace.rows.size(); ++i) {
        if (i % sample_every != 0 && i + 1 != trace.rows.size()) continue;
        const FlowRow& r = trace.rows[i];
        out << num(r.t);
        for (double c : r.phi) out << ',' << num(c);
        out << ',' << num(r.tau_norm_sq) << ',' << num(r.scal) << ',' << num(r.vol_scale) << ',' << num(r.velocity)
            << ',' << num(r.erp_residual) << ',' << num(r.closed_form_dev) << ',' << num(r.metric_evol_residual)
            << '\n';
    }
}

} // namespace g2lab
