#include "doctest.h"
#include "support.hpp"

using namespace g2lab;
using g2test::pullback;
using g2test::random_gl_plus;

namespace {

// An independent b: b(v, w) vol = 1/6 iota_v phi ^ iota_w phi ^ phi, evaluated on
// arbitrary vectors rather than basis pairs.
Rational b_of(const KForm<Rational>& phi, const Vector7<Rational>& v, const Vector7<Rational>& w) {
    return wedge(wedge(contract(v, phi), contract(w, phi)), phi).coeff(kTopMask) / 6;
}

} // namespace

TEST_CASE("standard 3-form: identity metric, unit volume") {
    const G2Structure<Rational> st(g2test::std_phi());
    CHECK(st.lambda() == 1);
    CHECK(st.vol_scale() == 1);
    CHECK(st.g() == Matrix<Rational>::identity(7));
    CHECK(st.orthonormal());
    CHECK(st.star(g2test::std_phi()) ==
          parse_form<Rational>("e4567 + e2367 + e2345 + e1357 - e1346 - e1256 - e1247"));
    CHECK(st.norm_sq(g2test::std_phi()) == 7);
}

TEST_CASE("stability classification") {
    CHECK(classify_stability(g2test::std_phi()).kind == Stability::PositiveG2);
    CHECK(classify_stability(parse_form<Rational>("e123 + e145")).kind == Stability::NotStable);
    // split form: flip the sign of the associative part
    const auto split = parse_form<Rational>("-e123 + e145 + e167 + e246 - e257 - e347 - e356");
    CHECK(classify_stability(split).kind == Stability::Signature34);
    CHECK_THROWS_AS((void)G2Structure<Rational>{split}, Error);
    CHECK_THROWS_AS(G2Structure<Rational>(parse_form<Rational>("e123")), Error);
    // lambda = 2^9 * ... without a rational ninth root
    try {
        (void)G2Structure<Rational>{g2test::std_phi() * rational(2)};
        FAIL("expected NinthRootIrrational");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NinthRootIrrational);
    }
    // the float pipeline handles the same form
    const G2Structure<double> st(convert<double>(KForm<Rational>(g2test::std_phi() * rational(2))));
    CHECK(st.vol_scale() == doctest::Approx(std::pow(2.0, 7.0 / 3.0)));
}

TEST_CASE("Lambda^2_14 membership") {
    const G2Structure<Rational> st(g2test::std_phi());
    CHECK(is_in_lambda2_14(st, parse_form<Rational>("3*e45 - 3*e67")).member);
    CHECK_FALSE(is_in_lambda2_14(st, parse_form<Rational>("e23 + e45 + e67")).member);
}

TEST_CASE("property: b, metric and volume transform naturally (1000 cases)") {
    for (int n = 0; n < 1000; ++n) {
        const auto a = random_gl_plus();
        const auto phi = pullback(a, g2test::std_phi());
        const G2Structure<Rational> st(phi);
        const Rational det = determinant(a);
        // oracle: g = A^T A, vol = det A
        REQUIRE(st.g() == a.transpose() * a);
        REQUIRE(st.vol_scale() == det);
        const auto v = g2test::random_vector(), w = g2test::random_vector();
        REQUIRE(bilinear(st.b(), v, w) == b_of(phi, v, w));
    }
}

TEST_CASE("property: ** = id and alpha ^ *beta = <alpha, beta> vol (1000 cases)") {
    std::vector<G2Structure<Rational>> structures;
    for (int i = 0; i < 25; ++i) structures.emplace_back(pullback(random_gl_plus(), g2test::std_phi()));
    for (int n = 0; n < 1000; ++n) {
        const auto& st = structures[std::size_t(n) % structures.size()];
        const int k = int(g2test::uniform(0, 7));
        const auto alpha = g2test::random_form(k), beta = g2test::random_form(k);
        REQUIRE(st.star(st.star(alpha)) == alpha);
        REQUIRE(st.star(alpha) == st.star_general(alpha));
        const auto ab = wedge(alpha, st.star(beta));
        REQUIRE(ab == wedge(beta, st.star(alpha)));
        REQUIRE(ab == st.volume_form() * st.inner(alpha, beta));
        REQUIRE(st.norm_sq(alpha) >= 0);
        REQUIRE((st.norm_sq(alpha) == 0) == alpha.is_zero());
    }
}

TEST_CASE("property: G2 identities of phi and *phi (200 cases)") {
    for (int n = 0; n < 200; ++n) {
        const G2Structure<Rational> st(pullback(random_gl_plus(), g2test::std_phi()));
        const auto psi = st.star(st.phi());
        REQUIRE(wedge(st.phi(), psi) == st.volume_form() * Rational(7));
        REQUIRE(st.norm_sq(st.phi()) == 7);
        // 2-forms split as 7 + 14: kappa = iota_v phi lies in Lambda^2_7, not in 14
        const auto v = g2test::random_vector();
        if (!v.is_zero()) REQUIRE_FALSE(is_in_lambda2_14(st, contract(v, st.phi())).member);
    }
}

TEST_CASE("float positivity tests are scale invariant") {
    for (double s : {1e-6, 1.0, 1e6}) {
        KForm<double> phi = convert<double>(g2test::std_phi()) * s;
        CHECK_NOTHROW((void)G2Structure<double>{phi});
    }
    Matrix<double> m = Matrix<double>::identity(3);
    CHECK(positive_definite(m));
    m(2, 2) = -1e-20;
    CHECK_FALSE(positive_definite(m));
}
