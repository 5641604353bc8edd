#include "doctest.h"
#include "g2lab/catalog.hpp"
#include "g2lab/flow.hpp"
#include "support.hpp"

#include <cmath>
#include <sstream>

using namespace g2lab;

namespace {

ClosedFormSolution solution_for(const char* name) {
    const auto e = catalog_get(name);
    const Differential<Rational> d(e.algebra);
    const G2Structure<Rational> st(g2test::std_phi());
    return closed_form_solution(erp_certificate(d, st), st);
}

FlowConfig config(double t1, double step, Integrator integ = Integrator::RK4) {
    FlowConfig c;
    c.t0 = 0;
    c.t1 = t1;
    c.step = step;
    c.integrator = integ;
    return c;
}

} // namespace

TEST_CASE("integrator names") {
    CHECK(parse_integrator("rk4") == Integrator::RK4);
    CHECK(parse_integrator("RK45") == Integrator::RK45);
    CHECK(integrator_name(Integrator::RK45) == "rk45");
    CHECK_THROWS_AS(parse_integrator("euler"), Error);
}

TEST_CASE("short RK4 run follows the eternal solution") {
    const auto sol = solution_for("bryant-s");
    const auto alg = catalog_get("bryant-s").algebra;
    const auto trace = integrate(alg, sol.phi, config(0.1, 1e-3), &sol);
    REQUIRE_FALSE(trace.blow_up);
    CHECK(trace.rows.size() == 101);
    CHECK(trace.rows.back().t == doctest::Approx(0.1));
    const auto r = compare_closed_form(trace, sol);
    CHECK(r.max_phi_dev < 1e-9);
    CHECK(r.max_scal_dev < 1e-9);
    CHECK(r.max_tau_norm_dev < 1e-9);
    CHECK(r.max_velocity_dev < 1e-9);
    CHECK(r.final_volume_ratio == doctest::Approx(std::exp(18 * 0.1 / 3)).epsilon(1e-9));
    CHECK(r.max_closedness < 1e-12);
    CHECK(r.max_metric_evol_residual < 1e-4);
    CHECK(r.max_metric_P_dev < 1e-8);
    CHECK(r.max_metric_Q_rel_dev < 1e-8);
    for (const auto& row : trace.rows) CHECK(std::abs(row.scal + 9) < 1e-9);
}

TEST_CASE("backward run and step halving") {
    const auto sol = solution_for("lauret-u");
    const auto alg = catalog_get("lauret-u").algebra;
    const auto coarse = compare_closed_form(integrate(alg, sol.phi, config(-0.2, 4e-3), &sol), sol);
    const auto fine = compare_closed_form(integrate(alg, sol.phi, config(-0.2, 2e-3), &sol), sol);
    CHECK(coarse.final_t == doctest::Approx(-0.2));
    CHECK(coarse.max_phi_dev / fine.max_phi_dev > 12);  // fourth order
    CHECK(fine.final_volume_ratio == doctest::Approx(std::exp(-24 * 0.2 / 3)).epsilon(1e-9));
}

TEST_CASE("adaptive RK45 agrees with the closed form") {
    const auto sol = solution_for("bryant-s");
    const auto trace =
        integrate(catalog_get("bryant-s").algebra, sol.phi, config(0.3, 1e-2, Integrator::RK45), &sol);
    REQUIRE_FALSE(trace.blow_up);
    CHECK(compare_closed_form(trace, sol).max_phi_dev < 1e-7);
}

TEST_CASE("projection onto closed forms keeps phi closed") {
    const auto sol = solution_for("bryant-s");
    auto cfg = config(0.05, 1e-3);
    cfg.project_closed = true;
    const auto trace = integrate(catalog_get("bryant-s").algebra, sol.phi, cfg, &sol);
    for (const auto& row : trace.rows) CHECK(row.projection_displacement < 1e-10);
    CHECK(compare_closed_form(trace, sol).max_phi_dev < 1e-9);
}

TEST_CASE("flow input validation") {
    const auto alg = catalog_get("nonsolv-1").algebra;
    try {
        integrate(alg, standard_phi<double>(), config(0.1, 1e-2));
        FAIL("expected NotClosed");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotClosed);
    }
    CHECK_THROWS_AS(integrate(catalog_get("bryant-s").algebra, standard_phi<double>(), config(0.1, -1)), Error);
    CHECK_THROWS_AS(integrate(catalog_get("bryant-s").algebra, KForm<double>(2), config(0.1, 1e-2)), Error);

    // the comparison refuses a trace that starts elsewhere
    const auto sol = solution_for("bryant-s");
    const auto other = integrate(catalog_get("bryant-s").algebra, sol.phi * 2.0, config(0.01, 1e-3));
    CHECK_THROWS_AS(compare_closed_form(other, sol), Error);
}

TEST_CASE("torsion-free flow is stationary") {
    const auto trace = integrate(catalog_get("std-phi").algebra, standard_phi<double>(), config(1, 0.1));
    CHECK_FALSE(trace.blow_up);
    for (double c : trace.rows.back().phi) CHECK(std::isfinite(c));
    CHECK(trace.rows.back().phi == trace.rows.front().phi);
    CHECK(trace.rows.back().vol_scale == doctest::Approx(1));
}

TEST_CASE("CSV layout") {
    const auto sol = solution_for("bryant-s");
    const auto trace = integrate(catalog_get("bryant-s").algebra, sol.phi, config(0.01, 1e-3), &sol);
    std::ostringstream out;
    write_csv(out, trace, 4);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header.starts_with("t,phi_123,phi_124,"));
    CHECK(header.find("phi_567,tau_norm_sq,scal,vol_scale,velocity,erp_residual,closed_form_dev,metric_evol_residual") !=
          std::string::npos);
    std::size_t rows = 0;
    std::string line, last;
    while (std::getline(in, line)) {
        ++rows;
        last = line;
        CHECK(std::count(line.begin(), line.end(), ',') == std::count(header.begin(), header.end(), ','));
    }
    CHECK(rows == 4);  // rows 0, 4, 8 and the last one (10)
    CHECK(std::stod(last.substr(0, last.find(','))) == doctest::Approx(0.01));
}
