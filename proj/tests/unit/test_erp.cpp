#include "doctest.h"
#include "g2lab/catalog.hpp"
#include "g2lab/erp.hpp"
#include "support.hpp"

#include <cmath>

using namespace g2lab;

namespace {

struct Base {
    LieAlgebra7 algebra;
    Differential<Rational> d;
    G2Structure<Rational> st;
    ERPCertificate<Rational> cert;

    explicit Base(const CatalogEntry& e)
        : algebra(e.algebra), d(e.algebra), st(parse_form<Rational>(*e.phi)), cert(erp_certificate(d, st)) {}
};

std::vector<Rational> spectrum_of(Rational k) {
    return {-k / 6, -k / 6, -k / 6, 0, 0, 0, 0};
}

} // namespace

TEST_CASE("ERP certificates of the catalog examples") {
    std::vector<CatalogEntry> entries{catalog_get("bryant-s"), catalog_get("lauret-u")};
    for (const auto& eta : {rational(0), rational(1, 2), rational(1), rational(2)})
        entries.push_back(catalog_get("s-eta", {{"eta", eta}}));
    for (const auto& e : entries) {
        INFO(e.name);
        const Base b(e);
        CHECK(b.cert.erp);
        CHECK(b.cert.erp_residual == 0);
        for (const auto& c : b.cert.checks) {
            INFO(c.name << " " << c.residual);
            CHECK(c.pass);
        }
        CHECK(b.cert.P.dim() == 3);
        CHECK(b.cert.Q.dim() == 4);
        const Rational k = b.cert.torsion.tau_norm_sq;
        CHECK(k == *e.expected.tau_norm_sq);
        REQUIRE(b.cert.ricci_spectrum_exact.has_value());
        CHECK(*b.cert.ricci_spectrum_exact == spectrum_of(k));
        // golden P = <e1,e2,e3>, Q = <e4..e7>: dimensions plus vanishing components
        for (const auto& v : b.cert.P.basis)
            for (int i = 4; i <= 7; ++i) CHECK(v[i - 1] == 0);
        for (const auto& v : b.cert.Q.basis)
            for (int i = 1; i <= 3; ++i) CHECK(v[i - 1] == 0);
    }
}

TEST_CASE("the torsion-free structure is not ERP") {
    const auto e = catalog_get("std-phi");
    const Base b(e);
    CHECK_FALSE(b.cert.passed());
    CHECK_THROWS_AS(require_erp(b.cert), Error);
    CHECK_THROWS_AS(closed_form_solution(b.cert, b.st), Error);
}

TEST_CASE("float certificate agrees with the exact one") {
    const auto e = catalog_get("lauret-u");
    const Differential<double> d(e.algebra);
    const G2Structure<double> st(standard_phi<double>());
    const auto cert = erp_certificate(d, st);
    CHECK(cert.passed());
    REQUIRE(cert.ricci_spectrum.size() == 7);
    for (int i = 0; i < 3; ++i) CHECK(cert.ricci_spectrum[std::size_t(i)] == doctest::Approx(-4.0));
    for (int i = 3; i < 7; ++i) CHECK(std::abs(cert.ricci_spectrum[std::size_t(i)]) < 1e-10);
}

TEST_CASE("deformation phi + a d tau") {
    for (const char* name : {"bryant-s", "lauret-u"}) {
        const Base b(catalog_get(name));
        const Rational k = b.cert.torsion.tau_norm_sq;
        for (const auto& a : {rational(0), rational(1), rational(10), rational(-1, 100)}) {
            INFO(name << " a=" << a);
            const auto r = deform(b.d, b.cert, b.st, a);
            CHECK(r.passed());
            const Rational m = 1 + k * a / 6;
            CHECK(r.multiplier == m);
            // volume form scales by m^2, so det b = lambda^9 scales by m^18
            CHECK(r.structure->vol_scale() == m * m);
            CHECK(torsion_form(b.d, *r.structure) == b.cert.torsion.tau * m);
        }
        // boundary and beyond
        for (const auto& a : {-6 / k, -7 / k}) {
            try {
                deform(b.d, b.cert, b.st, Rational(a));
                FAIL("expected NotPositive");
            } catch (const Error& e) {
                CHECK(e.kind() == ErrorKind::NotPositive);
            }
        }
        // det b of phi - 6/k d tau vanishes exactly
        const auto boundary = b.st.phi() + b.cert.torsion.dtau * Rational(-6 / k);
        CHECK(determinant(b_matrix(boundary)) == 0);
    }
}

TEST_CASE("property: deformations compose as a (+) b = a + b (1 + k a / 6)") {
    const Base b(catalog_get("bryant-s"));
    const Rational k = b.cert.torsion.tau_norm_sq;
    int tested = 0;
    for (int n = 0; n < 40; ++n) {
        const Rational a = g2test::small_rational(3, 8);
        const Rational c = g2test::small_rational(3, 8);
        const Rational m1 = 1 + k * a / 6;
        const Rational composite = a + c * m1;
        if (m1 <= 0 || 1 + k * composite / 6 <= 0) continue;
        const auto first = deform(b.d, b.cert, b.st, a);
        REQUIRE(first.passed());
        const auto cert1 = erp_certificate(b.d, *first.structure);
        REQUIRE(cert1.passed());
        REQUIRE(cert1.torsion.tau_norm_sq == k);  // |tau|_phi is invariant
        const auto second = deform(b.d, cert1, *first.structure, c);
        const auto direct = deform(b.d, b.cert, b.st, composite);
        REQUIRE(second.structure->phi() == direct.structure->phi());
        ++tested;
    }
    CHECK(tested > 5);
}

TEST_CASE("closed-form solution: f is defined for all t and stays above -6/k") {
    const Base b(catalog_get("bryant-s"));
    const auto sol = closed_form_solution(b.cert, b.st);
    CHECK(sol.k == doctest::Approx(18));
    CHECK(sol.f(0) == 0);
    // f decreases towards -6/k without reaching it (in doubles it saturates far back)
    CHECK(sol.f(-50) >= -6.0 / sol.k);
    for (double t : {-5.0, -2.0, -1.0, -0.1, 0.1, 1.0, 3.0}) {
        const double f = sol.f(t);
        CHECK(std::isfinite(f));
        CHECK(f > -6.0 / sol.k);
        CHECK(sol.fdot(t) == doctest::Approx(1 + sol.k * f / 6));
        // numerical derivative
        const double h = 1e-6;
        CHECK((sol.f(t + h) - sol.f(t - h)) / (2 * h) == doctest::Approx(sol.fdot(t)).epsilon(1e-6));
    }
    const auto s1 = evaluate(sol, 1.0);
    CHECK(s1.volume_ratio == doctest::Approx(std::exp(6.0)));
    CHECK(s1.velocity == doctest::Approx(18 / std::sqrt(6.0)));
    const Differential<double> dd(b.algebra);
    for (double t : {-1.0, -0.5, 0.5, 1.0})
        for (const auto& c : check_snapshot(dd, sol, t)) {
            INFO("t=" << t << " " << c.name << " " << c.residual);
            CHECK(c.pass);
        }
}

TEST_CASE("flow reduces to f' = 1 + k f / 6") {
    for (const char* name : {"bryant-s", "lauret-u"}) {
        const Base b(catalog_get(name));
        for (const auto& c : verify_flow_reduction(b.algebra, b.st)) {
            INFO(name << " " << c.name << " " << c.residual);
            CHECK(c.pass);
        }
    }
}

TEST_CASE("exact spectrum needs rational eigenvalues") {
    Matrix<Rational> a(7, 7);
    a(0, 0) = 2;
    a(0, 1) = 1;
    a(1, 0) = 1;
    a(1, 1) = 2;
    const auto spec = exact_symmetric_spectrum(a, Matrix<Rational>::identity(7));
    REQUIRE(spec.has_value());
    CHECK(*spec == std::vector<Rational>{0, 0, 0, 0, 0, 1, 3});
    a(1, 1) = 3;  // eigenvalues (5 +- sqrt 5)/2
    CHECK_FALSE(exact_symmetric_spectrum(a, Matrix<Rational>::identity(7)).has_value());
}
