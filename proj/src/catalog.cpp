#include "g2lab/catalog.hpp"

#include <functional>

namespace g2lab {

namespace {

using Eqs = std::array<std::string, 7>;

const char* const kStdPhi = "e123 + e145 + e167 + e246 - e257 - e347 - e356";

struct Spec {
    std::string name;
    std::string description;
    Eqs equations;
    std::vector<std::string> params;
    std::optional<std::string> phi;
    Expected expected;
    /// Throws for parameter values outside the admissible range.
    std::function<void(const std::map<std::string, Rational>&)> check;
    bool requires_all_params = false;
    std::vector<std::string> nonzero_params = {};
};

void require_nonzero(const std::map<std::string, Rational>& p, const std::string& name) {
    auto it = p.find(name);
    if (it != p.end() && it->second == 0)
        throw Error(ErrorKind::GuardViolation, "parameter " + name + " must be non-zero");
}

const std::vector<Spec>& specs() {
    static const std::vector<Spec> all = [] {
        std::vector<Spec> v;
        Expected bryant{rational(18), "3*e45 - 3*e67", std::vector<int>{1, 2, 3}, std::vector<int>{4, 5, 6, 7}, false, true};
        Expected lauret{rational(24), "-2*e45+2*e67-2*e46-2*e57+2*e47-2*e56", std::vector<int>{1, 2, 3},
                        std::vector<int>{4, 5, 6, 7}, true, true};

        v.push_back({"std-phi", "abelian R^7 with the standard positive 3-form (torsion-free)",
                     {"0", "0", "0", "0", "0", "0", "0"}, {}, kStdPhi,
                     Expected{rational(0), "0", std::nullopt, std::nullopt, true, false}, nullptr});
        v.push_back({"bryant-s", "Bryant's solvable algebra r x R^4 with the exact ERP structure",
                     {"0", "-e12", "-e13", "1/2*e14", "1/2*e15", "-1/2*e16 + e25 + e34", "-1/2*e17 + e24 - e35"},
                     {}, kStdPhi, bryant, nullptr});
        v.push_back({"s-eta", "one-parameter family r_eta x R^4; eta = 0 is bryant-s",
                     {"0", "-e12 + xeta*e13", "-xeta*e12 - e13", "1/2*e14", "1/2*e15",
                      "-1/2*e16 - xeta*e17 + e25 + e34", "xeta*e16 - 1/2*e17 + e24 - e35"},
                     {"eta"}, kStdPhi, bryant, nullptr, true});
        v.push_back({"lauret-u", "Lauret's unimodular solvable algebra",
                     {"0", "0", "0", "-e14 - e24 - e34", "-e15 + e25 + e35", "e16 - e26 + e36", "e17 + e27 - e37"}, {},
                     kStdPhi, lauret, nullptr});
        v.push_back({"pencil-4", "unimodular solvable pencil with abelian 4-dimensional nilradical (gamma, sigma != 0)",
                     {"0", "0", "0", "xalpha*e14 - e15 + xgamma*e24", "e14 + xalpha*e15 + xgamma*e25",
                      "-xalpha*e16 - xbeta*e17 - xgamma*e26 - xrho*e27 - xsigma*e37",
                      "xbeta*e16 - xalpha*e17 + xrho*e26 - xgamma*e27 + xsigma*e36"},
                     {"alpha", "beta", "gamma", "rho", "sigma"}, std::nullopt,
                     Expected{std::nullopt, std::nullopt, std::nullopt, std::nullopt, true, false},
                     [](const auto& p) {
                         require_nonzero(p, "gamma");
                         require_nonzero(p, "sigma");
                     }});
        v.back().nonzero_params = {"gamma", "sigma"};
        v.push_back({"pencil-5", "unimodular solvable pencil with abelian 4-dimensional nilradical (beta != 0)",
                     {"0", "0", "0", "1/2*xalpha*e14 - e15 + 1/2*xbeta*e24", "e14 + 1/2*xalpha*e15 + 1/2*xbeta*e25",
                      "-e36", "-xalpha*e17 - xbeta*e27 + e37"},
                     {"alpha", "beta"}, std::nullopt,
                     Expected{std::nullopt, std::nullopt, std::nullopt, std::nullopt, true, false},
                     [](const auto& p) { require_nonzero(p, "beta"); }});
        v.back().nonzero_params = {"beta"};
        const Expected nonsolv{std::nullopt, std::nullopt, std::nullopt, std::nullopt, true, false};
        v.push_back({"nonsolv-1", "non-solvable unimodular sl(2,R) x R^4 type algebra",
                     {"-e23", "-2*e12", "2*e13", "0", "-e45", "1/2*e46 - e47", "1/2*e47"}, {}, std::nullopt, nonsolv,
                     nullptr});
        v.push_back({"nonsolv-2", "non-solvable unimodular family, -1 < alpha <= -1/2",
                     {"-e23", "-2*e12", "2*e13", "0", "-e45", "-xalpha*e46", "(1 + xalpha)*e47"}, {"alpha"},
                     std::nullopt, nonsolv, [](const auto& p) {
                         auto it = p.find("alpha");
                         if (it != p.end() && !(it->second > -1 && it->second <= rational(-1, 2)))
                             throw Error(ErrorKind::InvalidArgument, "alpha must satisfy -1 < alpha <= -1/2");
                     }});
        v.push_back({"nonsolv-3", "non-solvable unimodular family, alpha > 0",
                     {"-e23", "-2*e12", "2*e13", "0", "-xalpha*e45", "1/2*xalpha*e46 - e47", "e46 + 1/2*xalpha*e47"},
                     {"alpha"}, std::nullopt, nonsolv, [](const auto& p) {
                         auto it = p.find("alpha");
                         if (it != p.end() && !(it->second > 0))
                             throw Error(ErrorKind::InvalidArgument, "alpha must be positive");
                     }});
        v.push_back({"nonsolv-4", "non-solvable unimodular algebra with nilradical <e4, e5, e6>",
                     {"-e23", "-2*e12", "2*e13", "-e14 - e25 - e47", "e15 - e34 - e57", "2*e67", "0"}, {}, std::nullopt,
                     nonsolv, nullptr});
        return v;
    }();
    return all;
}

} // namespace

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& s : specs()) n.push_back(s.name);
        return n;
    }();
    return names;
}

CatalogEntry catalog_get(const std::string& name, const std::map<std::string, Rational>& params) {
    const Spec* spec = nullptr;
    for (const auto& s : specs())
        if (s.name == name) spec = &s;
    if (!spec) throw Error(ErrorKind::UnknownName, "no catalog entry named '" + name + "'");

    LieAlgebra7::Params declared;
    for (const auto& p : spec->params) declared[p] = std::nullopt;
    for (const auto& [k, value] : params) {
        if (!declared.contains(k))
            throw Error(ErrorKind::InvalidArgument, "'" + name + "' has no parameter '" + k + "'");
        declared[k] = value;
    }
    if (spec->requires_all_params)
        for (const auto& [k, value] : declared)
            if (!value) throw Error(ErrorKind::InvalidArgument, "'" + name + "' requires a value for " + k);
    if (spec->check) spec->check(params);

    CatalogEntry e;
    e.name = spec->name;
    e.description = spec->description;
    e.algebra = LieAlgebra7::from_structure_equations(spec->name, spec->equations, declared);
    e.phi = spec->phi;
    e.expected = spec->expected;
    e.structure_equations = spec->equations;
    e.nonzero_params = spec->nonzero_params;
    return e;
}

} // namespace g2lab
