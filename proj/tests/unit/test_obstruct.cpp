#include "doctest.h"
#include "g2lab/catalog.hpp"
#include "g2lab/obstruct.hpp"
#include "support.hpp"

using namespace g2lab;

namespace {

Mask m3(int i, int j, int k) { return mask_from_indices(std::vector<int>{i, j, k}); }

std::map<std::string, Rational> random_params(const std::vector<std::string>& names) {
    std::map<std::string, Rational> p;
    for (const auto& n : names) {
        Rational v = 0;
        while (v == 0) v = g2test::small_rational(9, 5);
        p[n] = v;
    }
    return p;
}

// random element of the rational closed subspace
KForm<Rational> random_closed(const LieAlgebra7& alg) {
    KForm<Rational> out(3);
    for (const auto& f : closed_subspace<Rational>(alg, 3)) out += f * g2test::small_rational(7, 3);
    return out;
}

} // namespace

TEST_CASE("sign certificate") {
    const Poly x = Poly::variable("x"), y = Poly::variable("y");
    CHECK(certified_nonpositive(-(x * x) - Rational(3) * x * x * y * y));
    CHECK(certified_nonpositive(Poly(0)));
    CHECK_FALSE(certified_nonpositive(-(x * y)));
    CHECK_FALSE(certified_nonpositive(x * x));
    CHECK(*proportionality(Rational(-2) * x * y, x * y) == rational(-2));
    CHECK_FALSE(proportionality(x, y).has_value());
}

TEST_CASE("pencil-4: closed-form relations hold on every rational closed form") {
    // oracle independent of the symbolic elimination: a basis of closed
    // 3-forms at random non-zero parameters
    for (int n = 0; n < 20; ++n) {
        const auto p = random_params({"alpha", "beta", "gamma", "rho", "sigma"});
        const auto alg = catalog_get("pencil-4", p).algebra;
        const auto basis = closed_subspace<Rational>(alg, 3);
        CHECK(basis.size() == 15);
        for (const auto& f : basis) {
            REQUIRE(f.coeff(m3(2, 5, 7)) == p.at("rho") / p.at("sigma") * f.coeff(m3(3, 5, 7)));
            const auto b = b_matrix(f);
            REQUIRE(b(5, 5) + b(6, 6) == 0);
        }
        // b is bilinear in a non-trivial way, so check a random combination too
        const auto b = b_matrix(random_closed(alg));
        REQUIRE(b(5, 5) + b(6, 6) == 0);
    }
}

TEST_CASE("pencil-4: symbolic generic closed form") {
    const auto e = catalog_get("pencil-4");
    const auto gen = generic_closed_3form(e.algebra, printed_free_coefficients("pencil-4"), e.nonzero_params);
    CHECK(gen.free.size() == 15);
    CHECK(Differential<Poly>(e.algebra)(gen.phi).is_zero());
    const Poly rho = Poly::variable("rho"), sigma = Poly::variable("sigma");
    CHECK(gen.phi.coeff(m3(2, 5, 7)) == rho * sigma.unit_inverse() * coefficient_variable(m3(3, 5, 7)));
    const auto b66 = b_diagonal(gen.phi, 6), b77 = b_diagonal(gen.phi, 7);
    CHECK((b66 + b77).is_zero());
    const auto c = proportionality(b66, printed_pencil_b66());
    REQUIRE(c.has_value());
    CHECK(*c == 1);

    // the symbolic form specializes to closed rational forms
    for (int n = 0; n < 10; ++n) {
        const auto params = random_params({"alpha", "beta", "gamma", "rho", "sigma"});
        auto values = params;
        for (Mask m : gen.free) values[coefficient_variable(m).to_string()] = g2test::small_rational();
        const auto alg = catalog_get("pencil-4", params).algebra;
        const auto phi = gen.phi.map<Rational>([&](const Poly& q) { return q.evaluate(values); });
        REQUIRE(Differential<Rational>(alg)(phi).is_zero());
    }
}

TEST_CASE("pencil-5: b66 and b77 have opposite signs but do not cancel") {
    const auto rep = obstruct_entry(catalog_get("pencil-5"));
    REQUIRE(rep.size() == 1);
    CHECK(rep[0].closed3_dim == 15);
    CHECK(rep[0].conclusion == Conclusion::NoStablePositiveClosed3Form);
    const auto& sum = rep[0].identities.at(0);
    CHECK_FALSE(sum.identically_zero);
    REQUIRE(sum.sampled.has_value());
    CHECK(sum.sampled->zero < sum.sampled->points);
    const auto& product = rep[0].identities.at(3);
    CHECK(product.nonpositive == std::optional<bool>(true));

    // rational oracle: on every sampled closed form b66 * b77 <= 0, and a
    // non-zero sum shows up
    bool saw_nonzero_sum = false;
    for (int n = 0; n < 30; ++n) {
        const auto alg = catalog_get("pencil-5", random_params({"alpha", "beta"})).algebra;
        const auto b = b_matrix(random_closed(alg));
        REQUIRE(b(5, 5) * b(6, 6) <= 0);
        saw_nonzero_sum = saw_nonzero_sum || b(5, 5) + b(6, 6) != 0;
    }
    CHECK(saw_nonzero_sum);
}

TEST_CASE("non-solvable 1-3: diagonal vanishing once phi(e5,e6,e7) = 0") {
    for (const char* name : {"nonsolv-1", "nonsolv-2", "nonsolv-3"}) {
        INFO(name);
        const auto rep = nilradical_vanishing_check(catalog_get(name).algebra, {5, 6, 7}, {5, 6, 7});
        CHECK(rep.conclusion == Conclusion::NoStablePositiveClosed3Form);
        for (const auto& id : rep.identities) {
            CHECK(id.identically_zero);
            if (id.sampled) CHECK(id.sampled->zero == id.sampled->points);
        }
    }
    // rational oracle on nonsolv-3 at a specific alpha
    const auto alg = catalog_get("nonsolv-3", {{"alpha", rational(3, 2)}}).algebra;
    for (int n = 0; n < 20; ++n) {
        auto phi = random_closed(alg);
        // impose phi567 = 0 by subtracting a closed form with that coefficient, if any
        const auto basis = closed_subspace<Rational>(alg, 3);
        for (const auto& f : basis)
            if (f.coeff(m3(5, 6, 7)) != 0) {
                phi -= f * (phi.coeff(m3(5, 6, 7)) / f.coeff(m3(5, 6, 7)));
                break;
            }
        REQUIRE(phi.coeff(m3(5, 6, 7)) == 0);
        const auto b = b_matrix(phi);
        for (int i = 4; i < 7; ++i) REQUIRE(b(std::size_t(i), std::size_t(i)) == 0);
    }
}

TEST_CASE("non-solvable 4: no closed simple 4-form on the fixed Q candidates") {
    const auto alg = catalog_get("nonsolv-4").algebra;
    CHECK(closed_subspace<Rational>(alg, 3).size() == 17);
    const auto qs = nonsolv4_q_candidates();
    REQUIRE(qs.size() == 3);
    for (std::size_t i = 1; i < qs.size(); ++i) {
        const auto r = closed_simple_4forms_on_Q(alg, qs[i]);
        CHECK_FALSE(r.coordinate_generator_closed);
        CHECK(r.generic_certified_absent == std::optional<bool>(true));
        CHECK(r.report.conclusion == Conclusion::NoClosedSimple4FormOnQ);
    }
    const auto r0 = closed_simple_4forms_on_Q(alg, qs[0]);
    CHECK_FALSE(r0.coordinate_generator_closed);
}

TEST_CASE("positive controls never obstruct") {
    // Bryant: e4567 is a closed simple 4-form with kernel P
    std::vector<Vector7<Poly>> q;
    for (int i = 4; i <= 7; ++i) q.push_back(Vector7<Poly>::basis(i));
    const auto r = closed_simple_4forms_on_Q(catalog_get("bryant-s").algebra, q);
    CHECK(r.coordinate_generator_closed);
    CHECK(r.report.conclusion == Conclusion::Inconclusive);
    CHECK(Differential<Poly>(catalog_get("bryant-s").algebra)(r.generator).is_zero());

    for (const auto& rep : obstruct_entry(catalog_get("std-phi"))) {
        CHECK(rep.conclusion == Conclusion::Inconclusive);
        for (const auto& id : rep.identities) CHECK_FALSE(id.identically_zero);
    }
    for (const char* name : {"bryant-s", "lauret-u"})
        for (const auto& rep : obstruct_entry(catalog_get(name))) CHECK(rep.conclusion == Conclusion::Inconclusive);
}

TEST_CASE("report JSON carries the polynomials") {
    const auto rep = obstruct_entry(catalog_get("pencil-5"));
    const auto text = rep.at(0).to_json();
    CHECK(text.find("\"closed3_dim\": 15") != std::string::npos);
    CHECK(text.find("phi267") != std::string::npos);
    CHECK(text.find("NoStablePositiveClosed3Form") != std::string::npos);
}
