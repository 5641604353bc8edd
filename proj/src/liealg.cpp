#include "g2lab/liealg.hpp"

#include "json.hpp"

#include <algorithm>
#include <tuple>

namespace g2lab {

LieAlgebra7::LieAlgebra7(std::string name, std::vector<Bracket> brackets, Params params)
    : name_(std::move(name)), brackets_(std::move(brackets)), params_(std::move(params)) {
    normalize();
}

void LieAlgebra7::normalize() {
    std::map<std::tuple<int, int, int>, Poly> merged;
    for (auto& b : brackets_) {
        if (b.i == b.j) throw Error(ErrorKind::InvalidArgument, "bracket [e_i, e_i] must vanish");
        if (b.i > b.j) {
            std::swap(b.i, b.j);
            b.c = -b.c;
        }
        for (int idx : {b.i, b.j, b.k})
            if (idx < 1 || idx > kDim) throw Error(ErrorKind::InvalidArgument, "bracket index outside 1..7");
        merged[{b.i, b.j, b.k}] += b.c;
    }
    std::map<std::string, Rational> assigned;
    for (const auto& [name, v] : params_)
        if (v) assigned.emplace(name, *v);
    brackets_.clear();
    for (auto& [key, c] : merged) {
        if (!assigned.empty()) c = c.substitute(assigned);
        if (c.is_zero()) continue;
        auto [i, j, k] = key;
        brackets_.push_back({i, j, k, c});
    }
    for (const auto& b : brackets_)
        for (const auto& v : b.c.variables())
            if (!params_.contains(v))
                throw Error(ErrorKind::InvalidArgument, "structure constant uses undeclared parameter '" + v + "'");
}

LieAlgebra7 LieAlgebra7::from_structure_equations(std::string name, const std::array<std::string, 7>& de,
                                                  Params params) {
    std::vector<Bracket> brackets;
    for (int k = 1; k <= kDim; ++k) {
        const KForm<Poly> form = parse_form<Poly>(de[static_cast<std::size_t>(k - 1)]);
        if (!form.is_zero() && form.degree() != 2)
            throw Error(ErrorKind::Parse, "de^" + std::to_string(k) + " must be a 2-form");
        for (const auto& [m, a] : form.terms()) {
            auto idx = indices_of(m);
            brackets.push_back({idx[0], idx[1], k, -a});
        }
    }
    return LieAlgebra7(std::move(name), std::move(brackets), std::move(params));
}

std::vector<std::string> LieAlgebra7::free_params() const {
    std::vector<std::string> out;
    for (const auto& [name, v] : params_)
        if (!v) out.push_back(name);
    return out;
}

LieAlgebra7 LieAlgebra7::with_params(const std::map<std::string, Rational>& values) const {
    Params p = params_;
    for (const auto& [name, v] : values) {
        auto it = p.find(name);
        if (it == p.end()) throw Error(ErrorKind::InvalidArgument, "unknown parameter '" + name + "' for " + name_);
        it->second = v;
    }
    return LieAlgebra7(name_, brackets_, std::move(p));
}

Poly LieAlgebra7::constant(int i, int j, int k) const {
    int sign = 1;
    if (i > j) {
        std::swap(i, j);
        sign = -1;
    }
    for (const auto& b : brackets_)
        if (b.i == i && b.j == j && b.k == k) return sign > 0 ? b.c : -b.c;
    return Poly();
}

template <class S>
std::array<KForm<S>, 7> LieAlgebra7::structure_equations() const {
    std::array<KForm<S>, 7> de;
    de.fill(KForm<S>(2));
    for (const auto& b : brackets_) {
        const S c = from_poly<S>(constant(b.i, b.j, b.k));
        de[static_cast<std::size_t>(b.k - 1)].add(static_cast<Mask>(bit(b.i) | bit(b.j)), -c);
    }
    return de;
}

template <class S>
Vector7<S> LieAlgebra7::bracket(const Vector7<S>& x, const Vector7<S>& y) const {
    Vector7<S> out;
    for (const auto& b : brackets_) {
        S coef = x[b.i - 1] * y[b.j - 1] - x[b.j - 1] * y[b.i - 1];
        if (ScalarTraits<S>::is_zero(coef)) continue;
        out[b.k - 1] = out[b.k - 1] + coef * from_poly<S>(constant(b.i, b.j, b.k));
    }
    return out;
}

std::array<std::string, 7> LieAlgebra7::structure_equation_strings() const {
    const auto de = structure_equations<Poly>();
    std::array<std::string, 7> out;
    for (std::size_t k = 0; k < 7; ++k) out[k] = format_form(de[k]);
    return out;
}

std::string LieAlgebra7::to_json() const {
    nlohmann::ordered_json j;
    j["name"] = name_;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [name, v] : params_) params[name] = v ? nlohmann::ordered_json(to_string(*v)) : nlohmann::ordered_json();
    j["params"] = params;
    nlohmann::ordered_json brackets = nlohmann::ordered_json::array();
    for (const auto& b : brackets_)
        brackets.push_back({{"i", b.i}, {"j", b.j}, {"k", b.k}, {"c", b.c.to_string()}});
    j["brackets"] = brackets;
    return j.dump(2);
}

LieAlgebra7 LieAlgebra7::from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("algebra JSON: ") + e.what());
    }
    try {
        Params params;
        if (j.contains("params")) {
            for (const auto& [name, v] : j.at("params").items()) {
                if (v.is_null())
                    params[name] = std::nullopt;
                else
                    params[name] = parse_rational(v.get<std::string>());
            }
        }
        std::vector<Bracket> brackets;
        for (const auto& b : j.at("brackets")) {
            brackets.push_back({b.at("i").get<int>(), b.at("j").get<int>(), b.at("k").get<int>(),
                                Poly::parse(b.at("c").get<std::string>())});
        }
        return LieAlgebra7(j.at("name").get<std::string>(), std::move(brackets), std::move(params));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("algebra JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

template <class S>
Differential<S>::Differential(const LieAlgebra7& algebra) : algebra_(algebra) {
    const auto de = algebra.structure_equations<S>();
    table_[0] = KForm<S>(1);
    for (int deg = 1; deg <= kDim; ++deg) {
        for (Mask m : masks_of_degree(deg)) {
            const Mask low = static_cast<Mask>(m & (~m + 1u));
            const Mask rest = static_cast<Mask>(m & ~low);
            const int low_index = std::countr_zero(static_cast<unsigned>(low)) + 1;
            // d(e^i ^ w) = de^i ^ w - e^i ^ dw
            KForm<S> value = wedge(de[static_cast<std::size_t>(low_index - 1)], KForm<S>::basis(rest));
            if (deg < kDim) {
                value -= wedge(KForm<S>::basis(low), table_[rest]);
            }
            table_[m] = std::move(value);
        }
    }
}

template <class S>
KForm<S> Differential<S>::operator()(const KForm<S>& alpha) const {
    KForm<S> out(std::min(alpha.degree() + 1, kDim));
    if (alpha.degree() == kDim) return out;
    for (const auto& [m, c] : alpha.terms())
        for (const auto& [mm, cc] : table_[m].terms()) out.add(mm, c * cc);
    return out;
}

template <class S>
Matrix<S> Differential<S>::matrix(int k) const {
    const auto& cols = masks_of_degree(k);
    const auto& rows = masks_of_degree(k + 1);
    Matrix<S> out(rows.size(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (const auto& [m, v] : table_[cols[c]].terms()) out(static_cast<std::size_t>(index_in_degree(m)), c) = v;
    return out;
}

template class Differential<Rational>;
template class Differential<double>;
template class Differential<Poly>;

template <class S>
Matrix<S> Subspace<S>::as_columns() const {
    Matrix<S> out(kDim, basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (int i = 0; i < kDim; ++i) out(static_cast<std::size_t>(i), j) = basis[j][i];
    return out;
}

namespace {

template <class S>
bool in_span(const Subspace<S>& sub, const Vector7<S>& w, double eps) {
    if (w.is_zero()) return true;
    Subspace<S> extended = sub;
    extended.basis.push_back(w);
    return rank_of(extended.as_columns(), eps) == rank_of(sub.as_columns(), eps);
}

} // namespace

ValidationReport validate(const LieAlgebra7& algebra, const Subspace<Rational>* subspace) {
    ValidationReport report;
    const Differential<Poly> d(algebra);
    report.jacobi = true;
    for (int k = 1; k <= kDim; ++k) {
        const KForm<Poly> dd = d(d.on_basis(bit(k)));
        if (!dd.is_zero()) {
            report.jacobi = false;
            report.jacobi_failures.emplace_back(k, format_form(dd));
        }
    }
    report.unimodular = true;
    for (int i = 1; i <= kDim; ++i) {
        Poly tr;
        for (int k = 1; k <= kDim; ++k)
            if (k != i) tr += algebra.constant(i, k, k);
        report.ad_traces[static_cast<std::size_t>(i - 1)] = tr.to_string();
        if (!tr.is_zero()) report.unimodular = false;
    }
    if (subspace) {
        SubspaceCheck sc;
        sc.subalgebra = bracket_closed(algebra, *subspace);
        sc.ideal = true;
        for (int i = 1; i <= kDim && sc.ideal; ++i)
            for (const auto& v : subspace->basis)
                if (!in_span(*subspace, algebra.bracket(Vector7<Rational>::basis(i), v), 0.0)) {
                    sc.ideal = false;
                    break;
                }
        report.subspace = sc;
    }
    return report;
}

template <class S>
std::vector<KForm<S>> closed_subspace(const LieAlgebra7& algebra, int k, double eps) {
    if constexpr (!std::same_as<S, Poly>) {
        if (!algebra.free_params().empty())
            throw Error(ErrorKind::Mode, algebra.name() + " has free parameters; use the polynomial mode");
    }
    if (k < 0 || k > kDim) throw Error(ErrorKind::DegreeMismatch, "degree outside 0..7");
    if (k == kDim) return {KForm<S>::top()};
    const Differential<S> d(algebra);
    const auto ker = kernel_of(d.matrix(k), eps);
    std::vector<KForm<S>> out;
    for (const auto& v : ker.basis) out.push_back(KForm<S>::from_dense(k, v));
    return out;
}

template <class S>
Subspace<S> contraction_kernel(const KForm<S>& omega, double eps) {
    if (omega.degree() == 0) {
        Subspace<S> all;
        for (int i = 1; i <= kDim; ++i) all.basis.push_back(Vector7<S>::basis(i));
        return all;
    }
    const auto& rows = masks_of_degree(omega.degree() - 1);
    Matrix<S> a(rows.size(), kDim);
    for (int i = 1; i <= kDim; ++i) {
        const KForm<S> contracted = contract_basis(i, omega);
        for (const auto& [m, c] : contracted.terms())
            a(static_cast<std::size_t>(index_in_degree(m)), static_cast<std::size_t>(i - 1)) = c;
    }
    const auto ker = kernel_of(a, eps);
    Subspace<S> out;
    for (const auto& v : ker.basis) {
        Vector7<S> w;
        for (int i = 0; i < kDim; ++i) w[i] = v[static_cast<std::size_t>(i)];
        out.basis.push_back(w);
    }
    return out;
}

template <class S>
bool bracket_closed(const LieAlgebra7& algebra, const Subspace<S>& sub, double eps) {
    for (std::size_t a = 0; a < sub.basis.size(); ++a)
        for (std::size_t b = a + 1; b < sub.basis.size(); ++b)
            if (!in_span(sub, algebra.bracket(sub.basis[a], sub.basis[b]), eps)) return false;
    return true;
}

template std::array<KForm<Rational>, 7> LieAlgebra7::structure_equations<Rational>() const;
template std::array<KForm<double>, 7> LieAlgebra7::structure_equations<double>() const;
template std::array<KForm<Poly>, 7> LieAlgebra7::structure_equations<Poly>() const;
template Vector7<Rational> LieAlgebra7::bracket(const Vector7<Rational>&, const Vector7<Rational>&) const;
template Vector7<double> LieAlgebra7::bracket(const Vector7<double>&, const Vector7<double>&) const;
template Vector7<Poly> LieAlgebra7::bracket(const Vector7<Poly>&, const Vector7<Poly>&) const;
template struct Subspace<Rational>;
template struct Subspace<double>;
template struct Subspace<Poly>;
template std::vector<KForm<Rational>> closed_subspace(const LieAlgebra7&, int, double);
template std::vector<KForm<double>> closed_subspace(const LieAlgebra7&, int, double);
template std::vector<KForm<Poly>> closed_subspace(const LieAlgebra7&, int, double);
template Subspace<Rational> contraction_kernel(const KForm<Rational>&, double);
template Subspace<double> contraction_kernel(const KForm<double>&, double);
template Subspace<Poly> contraction_kernel(const KForm<Poly>&, double);
template bool bracket_closed(const LieAlgebra7&, const Subspace<Rational>&, double);
template bool bracket_closed(const LieAlgebra7&, const Subspace<double>&, double);
template bool bracket_closed(const LieAlgebra7&, const Subspace<Poly>&, double);

} // namespace g2lab
