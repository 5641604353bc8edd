#include "doctest.h"
#include "g2lab/catalog.hpp"
#include "support.hpp"

using namespace g2lab;

namespace {

// de^1..de^7 as printed, transcribed independently of the catalog tables
const std::map<std::string, std::array<std::string, 7>> kPrinted = {
    {"bryant-s", {"0", "-e12", "-e13", "1/2*e14", "1/2*e15", "-1/2*e16 + e25 + e34", "-1/2*e17 + e24 - e35"}},
    {"lauret-u", {"0", "0", "0", "-e14 - e24 - e34", "-e15 + e25 + e35", "e16 - e26 + e36", "e17 + e27 - e37"}},
    {"nonsolv-1", {"-e23", "-2*e12", "2*e13", "0", "-e45", "1/2*e46 - e47", "1/2*e47"}},
    {"nonsolv-4", {"-e23", "-2*e12", "2*e13", "-e14 - e25 - e47", "e15 - e34 - e57", "2*e67", "0"}},
};

} // namespace

TEST_CASE("differential convention: [e1,e2] = e2 gives de2 = -e12") {
    const LieAlgebra7 alg("toy", {Bracket{1, 2, 2, Poly(1)}});
    const Differential<Rational> d(alg);
    CHECK(d(parse_form<Rational>("e2")) == parse_form<Rational>("-e12"));
    CHECK(d(parse_form<Rational>("e1")).is_zero());
    CHECK(alg.structure_equation_strings()[1] == "-e12");
}

TEST_CASE("printed structure equations are reproduced") {
    for (const auto& [name, eqs] : kPrinted) {
        const auto e = catalog_get(name);
        const auto de = e.algebra.structure_equations<Rational>();
        const auto strings = e.algebra.structure_equation_strings();
        for (int i = 0; i < 7; ++i) {
            INFO(name << " de" << i + 1);
            const std::string& printed = eqs[std::size_t(i)];
            if (printed == "0") {
                CHECK(de[std::size_t(i)].is_zero());
                CHECK(strings[std::size_t(i)] == "0");
                continue;
            }
            CHECK(de[std::size_t(i)] == parse_form<Rational>(printed));
            CHECK(parse_form<Rational>(strings[std::size_t(i)]) == parse_form<Rational>(printed));
        }
    }
}

TEST_CASE("every catalog entry satisfies Jacobi and its unimodularity flag") {
    for (const auto& name : catalog_names()) {
        const auto e = name == "s-eta" ? catalog_get(name, {{"eta", rational(1, 3)}}) : catalog_get(name);
        const auto v = validate(e.algebra);
        INFO(name);
        CHECK(v.jacobi);
        CHECK(v.jacobi_failures.empty());
        CHECK(v.unimodular == e.expected.unimodular);
    }
    // symbolic parameters too
    CHECK(validate(catalog_get("pencil-4").algebra).jacobi);
    CHECK(validate(catalog_get("s-eta", {{"eta", rational(2)}}).algebra).jacobi);
}

TEST_CASE("a non-Lie bracket is rejected by validate") {
    // [e1,e2] = e3, [e2,e3] = e1, [e1,e3] = e3: the Jacobi sum on (e1,e2,e3) is -e1
    const LieAlgebra7 bad("bad", {Bracket{1, 2, 3, Poly(1)}, Bracket{2, 3, 1, Poly(1)}, Bracket{1, 3, 3, Poly(1)}});
    const auto v = validate(bad);
    CHECK_FALSE(v.jacobi);
    CHECK_FALSE(v.jacobi_failures.empty());
}

TEST_CASE("s-eta at eta = 0 is bryant-s") {
    const auto s0 = catalog_get("s-eta", {{"eta", rational(0)}});
    const auto b = catalog_get("bryant-s");
    CHECK(s0.algebra.brackets() == b.algebra.brackets());
    CHECK_THROWS_AS(catalog_get("s-eta"), Error);
}

TEST_CASE("catalog parameter validation") {
    CHECK_THROWS_AS(catalog_get("no-such-algebra"), Error);
    try {
        catalog_get("no-such-algebra");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownName);
    }
    CHECK_THROWS_AS(catalog_get("pencil-4", {{"sigma", rational(0)}}), Error);
    CHECK_THROWS_AS(catalog_get("pencil-5", {{"rho", rational(1)}}), Error);
    CHECK_THROWS_AS(catalog_get("nonsolv-3", {{"alpha", rational(-1)}}), Error);
    CHECK_NOTHROW(catalog_get("nonsolv-2", {{"alpha", rational(-1, 2)}}));
    const auto p = catalog_get("pencil-5", {{"alpha", rational(1)}});
    CHECK(p.algebra.free_params() == std::vector<std::string>{"beta"});
}

TEST_CASE("algebra JSON round trip") {
    for (const auto& name : {"bryant-s", "lauret-u", "pencil-4", "nonsolv-3"}) {
        const auto e = catalog_get(name);
        const auto back = LieAlgebra7::from_json(e.algebra.to_json());
        CHECK(back == e.algebra);
    }
}

TEST_CASE("closed subspaces and contraction kernels") {
    const auto b = catalog_get("bryant-s");
    const auto closed3 = closed_subspace<Rational>(b.algebra, 3);
    const Differential<Rational> d(b.algebra);
    for (const auto& f : closed3) CHECK(d(f).is_zero());
    CHECK(closed_subspace<Rational>(catalog_get("std-phi").algebra, 3).size() == 35);
    CHECK_THROWS_AS(closed_subspace<Rational>(catalog_get("pencil-4").algebra, 3), Error);

    const auto ker = contraction_kernel(parse_form<Rational>("e123"));
    CHECK(ker.dim() == 4);
    CHECK(contraction_kernel(g2test::std_phi()).dim() == 0);
}

TEST_CASE("property: d^2 = 0 on every catalog algebra (1000 cases)") {
    std::vector<Differential<Rational>> ds;
    for (const auto& name : catalog_names()) {
        const auto e = name == "s-eta" ? catalog_get(name, {{"eta", rational(1, 2)}}) : catalog_get(name);
        if (e.algebra.free_params().empty()) ds.emplace_back(e.algebra);
    }
    // parametrized entries at admissible rational values
    ds.emplace_back(catalog_get("pencil-4", {{"alpha", rational(1, 3)}, {"beta", rational(-2)}, {"gamma", rational(3)},
                                             {"rho", rational(1, 2)}, {"sigma", rational(-1, 5)}})
                        .algebra);
    ds.emplace_back(catalog_get("pencil-5", {{"alpha", rational(2)}, {"beta", rational(-3, 4)}}).algebra);
    ds.emplace_back(catalog_get("nonsolv-2", {{"alpha", rational(-2, 3)}}).algebra);
    ds.emplace_back(catalog_get("nonsolv-3", {{"alpha", rational(5, 2)}}).algebra);

    for (int n = 0; n < 1000; ++n) {
        const auto& d = ds[std::size_t(n) % ds.size()];
        const auto a = g2test::random_form(int(g2test::uniform(0, 5)), 0.5);
        REQUIRE(d(d(a)).is_zero());
        // Leibniz rule
        const auto b = g2test::random_form(int(g2test::uniform(0, 2)), 0.5);
        const Rational sign = a.degree() % 2 ? -1 : 1;
        REQUIRE(d(wedge(a, b)) == wedge(d(a), b) + wedge(a, d(b)) * sign);
    }
}

TEST_CASE("d commutes with changes of basis") {
    // A^* d = d' A^* for the conjugated bracket
    for (int n = 0; n < 50; ++n) {
        const auto a = g2test::random_gl_plus();
        const auto alg = catalog_get("lauret-u").algebra;
        const auto conj = g2test::conjugate(alg, a);
        const auto form = g2test::random_form(int(g2test::uniform(1, 4)));
        REQUIRE(Differential<Rational>(conj)(g2test::pullback(a, form)) ==
                g2test::pullback(a, Differential<Rational>(alg)(form)));
    }
}
