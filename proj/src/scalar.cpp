#include "g2lab/scalar.hpp"

#include <cstdio>

namespace g2lab {

std::string ScalarTraits<double>::str(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Rational ninth_root(const Rational& x) {
    if (auto r = exact_root(x, 9)) return *r;
    throw Error(ErrorKind::NinthRootIrrational,
                "det(b) = " + to_string(x) + " is not a rational ninth power; rerun in float mode");
}

double ninth_root(double x) {
    return x < 0 ? -std::pow(-x, 1.0 / 9.0) : std::pow(x, 1.0 / 9.0);
}

Poly ninth_root(const Poly& x) {
    if (x.is_zero()) return Poly();
    if (x.term_count() == 1) {
        const auto& [m, c] = *x.terms().begin();
        auto rc = exact_root(c, 9);
        bool divisible = true;
        Monomial root;
        for (const auto& [v, e] : m.powers()) {
            if (e % 9 != 0) {
                divisible = false;
                break;
            }
            root = root * Monomial::variable(v, e / 9);
        }
        if (rc && divisible) return Poly::term(*rc, root);
    }
    throw Error(ErrorKind::NinthRootIrrational,
                "det(b) = " + x.to_string() + " is not a ninth power of a monomial");
}

} // namespace g2lab
