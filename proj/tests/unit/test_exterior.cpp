#include "doctest.h"
#include "support.hpp"

using namespace g2lab;
using g2test::random_form;
using g2test::random_vector;

TEST_CASE("masks enumerate lexicographically") {
    CHECK(masks_of_degree(0).size() == 1);
    CHECK(masks_of_degree(3).size() == 35);
    CHECK(masks_of_degree(7).size() == 1);
    const auto& m3 = masks_of_degree(3);
    CHECK(index_string(m3.front()) == "123");
    CHECK(index_string(m3[1]) == "124");
    CHECK(index_string(m3.back()) == "567");
    for (int k = 0; k <= kDim; ++k)
        for (std::size_t i = 0; i < masks_of_degree(k).size(); ++i) CHECK(index_in_degree(masks_of_degree(k)[i]) == int(i));
}

TEST_CASE("wedge signs of basis covectors") {
    const auto e = [](const char* s) { return parse_form<Rational>(s); };
    CHECK(wedge(e("e1"), e("e2")) == e("e12"));
    CHECK(wedge(e("e2"), e("e1")) == e("-e12"));
    CHECK(wedge(e("e13"), e("e2")) == e("-e123"));
    CHECK(wedge(e("e1"), e("e1")).is_zero());
    CHECK(complement_sign(mask_from_indices(std::vector<int>{4, 5})) == 1);  // e45 ^ e12367 = e1234567
    CHECK(complement_sign(mask_from_indices(std::vector<int>{2})) == -1);
    CHECK(wedge(e("e1234"), e("e567")).degree() == 7);
    CHECK(wedge(e("e1234"), e("e4567")).is_zero());
}

TEST_CASE("form literals parse and format canonically") {
    const auto phi = parse_form<Rational>("e123 + e145 + e167 + e246 - e257 - e347 - e356");
    CHECK(format_form(phi) == "e123 + e145 + e167 + e246 - e257 - e347 - e356");
    CHECK(format_form(parse_form<Rational>("-2*e45+2*e67-2*e46-2*e57+2*e47-2*e56")) ==
          "-2*e45 - 2*e46 + 2*e47 - 2*e56 - 2*e57 + 2*e67");
    CHECK(format_form(parse_form<Rational>("1/2*e14 - 0.25*e14")) == "1/4*e14");
    // reordered indices pick up the permutation sign
    CHECK(parse_form<Rational>("e21") == parse_form<Rational>("-e12"));
    CHECK(parse_form<Rational>("e12 - e12").is_zero());
    CHECK_THROWS_AS(parse_form<Rational>("e12 + e123"), Error);
    CHECK_THROWS_AS(parse_form<Rational>("e18"), Error);
    CHECK_THROWS_AS(parse_form<Rational>("3*"), Error);
    CHECK_THROWS_AS(parse_form<Rational>("e11"), Error);
    CHECK(parse_form<Rational>("-3/2") == KForm<Rational>::scalar(rational(-3, 2)));

    const auto p = parse_form<Poly>("xalpha*e14 - e15 + xgamma^2*e24");
    CHECK(p.coeff(mask_from_indices(std::vector<int>{1, 4})) == Poly::variable("alpha"));
    CHECK(parse_form<Poly>(format_form(p)) == p);
}

TEST_CASE("rationals parse and print") {
    CHECK(to_string(parse_rational("-0.125")) == "-1/8");
    CHECK(to_string(parse_rational("6/4")) == "3/2");
    CHECK(to_string(parse_rational("7")) == "7");
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("abc"), Error);
    CHECK(exact_root(rational(512, 27), 9) == std::nullopt);
    CHECK(*exact_root(rational(-512), 9) == rational(-2));
    CHECK(*exact_root(rational(1, 512), 9) == rational(1, 2));
}

TEST_CASE("evaluation of 2-forms") {
    const auto w = parse_form<Rational>("e12 + 3*e37");
    std::vector<Vector7<Rational>> vs{Vector7<Rational>::basis(1), Vector7<Rational>::basis(2)};
    CHECK(evaluate(w, std::span<const Vector7<Rational>>(vs)) == 1);
    std::swap(vs[0], vs[1]);
    CHECK(evaluate(w, std::span<const Vector7<Rational>>(vs)) == -1);
    CHECK(contract_basis(7, w) == parse_form<Rational>("-3*e3"));
}

TEST_CASE("property: wedge is associative and graded commutative (1000 cases)") {
    for (int n = 0; n < 1000; ++n) {
        const int p = int(g2test::uniform(0, 3)), q = int(g2test::uniform(0, 3)), r = int(g2test::uniform(0, 2));
        const auto a = random_form(p), b = random_form(q), c = random_form(r);
        REQUIRE(wedge(wedge(a, b), c) == wedge(a, wedge(b, c)));
        const Rational sign = (p * q) % 2 ? -1 : 1;
        REQUIRE(wedge(a, b) == wedge(b, a) * sign);
        // bilinearity
        const Rational s = g2test::small_rational();
        REQUIRE(wedge(a * s + a, b) == wedge(a, b) * (s + 1));
    }
}

TEST_CASE("property: contraction is a graded derivation and squares to zero (1000 cases)") {
    for (int n = 0; n < 1000; ++n) {
        const int p = int(g2test::uniform(1, 4)), q = int(g2test::uniform(0, 3));
        const auto a = random_form(p), b = random_form(q);
        const auto v = random_vector(), w = random_vector();
        const Rational sign = p % 2 ? -1 : 1;
        // iota of a 0-form is zero, so the second term only exists for q > 0
        auto rhs = wedge(contract(v, a), b);
        if (q > 0) rhs += wedge(a, contract(v, b)) * sign;
        REQUIRE(contract(v, wedge(a, b)) == rhs);
        REQUIRE(contract(v, contract(v, a)).is_zero());
        REQUIRE(contract(v, contract(w, a)) == -contract(w, contract(v, a)));
        // iota_v of a 1-form is the pairing
        const auto one = random_form(1, 0.7);
        Rational pairing = 0;
        for (int i = 1; i <= kDim; ++i) pairing += one.coeff(bit(i)) * v[i - 1];
        REQUIRE(contract(v, one).coeff(Mask{0}) == pairing);
    }
}

TEST_CASE("property: parse(format(form)) is the identity (1000 cases)") {
    for (int n = 0; n < 1000; ++n) {
        const auto a = random_form(int(g2test::uniform(0, 7)), 0.5);
        // "0" carries no degree, so the zero form reads back as a 0-form
        const auto back = parse_form<Rational>(format_form(a));
        REQUIRE((a.is_zero() ? back.is_zero() : back == a));
        REQUIRE(KForm<Rational>::from_dense(a.degree(), a.dense()) == a);
    }
}
