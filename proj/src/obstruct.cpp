#include "g2lab/obstruct.hpp"

#include "json.hpp"

#include <algorithm>
#include <random>

namespace g2lab {

std::string_view conclusion_name(Conclusion c) {
    switch (c) {
    case Conclusion::NoStablePositiveClosed3Form: return "NoStablePositiveClosed3Form";
    case Conclusion::NoClosedSimple4FormOnQ: return "NoClosedSimple4FormOnQ";
    case Conclusion::Inconclusive: return "Inconclusive";
    }
    return "?";
}

std::string ObstructionReport::to_json() const {
    nlohmann::ordered_json j;
    j["algebra"] = algebra;
    j["assumptions"] = assumptions;
    j["closed3_dim"] = closed3_dim;
    j["identities"] = nlohmann::ordered_json::array();
    for (const auto& id : identities) {
        nlohmann::ordered_json e;
        e["description"] = id.description;
        e["polynomial"] = id.polynomial.to_string();
        e["is_identically_zero"] = id.identically_zero;
        if (id.nonpositive) e["nonpositive"] = *id.nonpositive;
        if (id.sampled) e["sampled"] = {{"points", id.sampled->points}, {"vanished", id.sampled->zero}};
        j["identities"].push_back(std::move(e));
    }
    j["conclusion"] = std::string(conclusion_name(conclusion));
    j["summary"] = summary;
    return j.dump(2);
}

Poly coefficient_variable(Mask m) { return Poly::variable("phi" + index_string(m)); }

namespace {

/// d restricted to Lambda^3 with extra rows forcing the coefficients on
/// `zero_masks` to vanish.
template <class S>
Matrix<S> constrained_d3(const LieAlgebra7& algebra, const std::vector<Mask>& zero_masks) {
    const Matrix<S> d3 = Differential<S>(algebra).matrix(3);
    Matrix<S> a(d3.rows() + zero_masks.size(), d3.cols());
    for (std::size_t i = 0; i < d3.rows(); ++i)
        for (std::size_t j = 0; j < d3.cols(); ++j) a(i, j) = d3(i, j);
    for (std::size_t r = 0; r < zero_masks.size(); ++r)
        a(d3.rows() + r, static_cast<std::size_t>(index_in_degree(zero_masks[r]))) = ScalarTraits<S>::one();
    return a;
}

std::vector<std::size_t> preferred_order(const std::vector<Mask>& preferred_free) {
    std::vector<std::size_t> late;
    for (Mask m : preferred_free) late.push_back(static_cast<std::size_t>(index_in_degree(m)));
    std::vector<std::size_t> order;
    for (std::size_t c = 0; c < masks_of_degree(3).size(); ++c)
        if (std::find(late.begin(), late.end(), c) == late.end()) order.push_back(c);
    order.insert(order.end(), late.begin(), late.end());
    return order;
}

GenericClosed3Form generic_form(const LieAlgebra7& algebra, const std::vector<Mask>& zero_masks,
                                const std::vector<Mask>& preferred_free, const std::vector<std::string>& nonzero) {
    const auto ker = kernel(constrained_d3<Poly>(algebra, zero_masks), preferred_order(preferred_free), nonzero);
    const auto& masks = masks_of_degree(3);
    GenericClosed3Form out;
    out.guards = ker.guards;
    for (std::size_t c = 0; c < masks.size(); ++c) {
        if (std::find(ker.pivots.begin(), ker.pivots.end(), c) != ker.pivots.end()) continue;
        out.free.push_back(masks[c]);
    }
    // kernel_from_rref puts 1 on the free column of each basis vector, in
    // increasing column order
    for (std::size_t b = 0; b < ker.basis.size(); ++b) {
        const Poly var = coefficient_variable(out.free[b]);
        for (std::size_t c = 0; c < masks.size(); ++c)
            if (!ker.basis[b][c].is_zero()) out.phi.add(masks[c], ker.basis[b][c] * var);
    }
    if (!Differential<Poly>(algebra)(out.phi).is_zero())
        throw Error(ErrorKind::Inconsistency, "generic closed 3-form is not closed");
    return out;
}

std::vector<std::string> guard_strings(const std::vector<Poly>& guards) {
    std::vector<std::string> out;
    for (const auto& g : guards) out.push_back(g.to_string() + " != 0");
    return out;
}

std::vector<std::string> parameter_assumptions(const LieAlgebra7& algebra) {
    std::vector<std::string> out;
    for (const auto& [name, value] : algebra.params()) {
        if (value)
            out.push_back(name + " = " + value->get_str());
        else
            out.push_back(name + " symbolic");
    }
    return out;
}

Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-40, 40), den(1, 17);
    long p = 0;
    while (p == 0) p = num(rng);
    return rational(p, den(rng));
}

/// Random closed 3-form (with the given coefficients forced to zero) at
/// random nonzero parameter values, through the rational pipeline.
KForm<Rational> sample_closed_form(const LieAlgebra7& algebra, const std::vector<Mask>& zero_masks,
                                   std::mt19937_64& rng) {
    std::map<std::string, Rational> values;
    for (const auto& name : algebra.free_params()) values[name] = random_rational(rng);
    const LieAlgebra7 concrete = algebra.with_params(values);
    const auto ker = kernel(constrained_d3<Rational>(concrete, zero_masks));
    std::vector<Rational> dense(masks_of_degree(3).size(), Rational(0));
    for (const auto& v : ker.basis) {
        const Rational c = random_rational(rng);
        for (std::size_t i = 0; i < dense.size(); ++i) dense[i] += c * v[i];
    }
    return KForm<Rational>::from_dense(3, dense);
}

template <class S>
S b_diag_generic(const KForm<S>& phi, int i) {
    const KForm<S> ip = contract_basis(i, phi);
    return wedge(ip, wedge(ip, phi)).coeff(kTopMask) * ScalarTraits<S>::from_rational(rational(1, 6));
}

} // namespace

GenericClosed3Form generic_closed_3form(const LieAlgebra7& algebra, const std::vector<Mask>& preferred_free,
                                        const std::vector<std::string>& nonzero_params) {
    return generic_form(algebra, {}, preferred_free, nonzero_params);
}

Poly b_diagonal(const KForm<Poly>& phi, int i) { return b_diag_generic(phi, i); }

bool certified_nonpositive(const Poly& p) {
    for (const auto& [m, c] : p.terms()) {
        if (c >= 0) return false;
        for (const auto& [var, e] : m.powers())
            if (e % 2 != 0) return false;
    }
    return true;
}

std::optional<Rational> proportionality(const Poly& a, const Poly& b) {
    if (b.is_zero()) return std::nullopt;
    const auto& [m, cb] = *b.terms().begin();
    const auto it = a.terms().find(m);
    if (it == a.terms().end()) return std::nullopt;
    const Rational c = it->second / cb;
    if (a - b * c != Poly()) return std::nullopt;
    return c;
}

ObstructionReport b_diag_identity_check(const LieAlgebra7& algebra, int i, int j,
                                        const std::vector<Mask>& preferred_free,
                                        const std::vector<std::string>& nonzero_params,
                                        std::optional<SamplingOptions> sampling) {
    const GenericClosed3Form gen = generic_closed_3form(algebra, preferred_free, nonzero_params);
    ObstructionReport rep;
    rep.algebra = algebra.name();
    rep.assumptions = parameter_assumptions(algebra);
    for (auto& g : guard_strings(gen.guards)) rep.assumptions.push_back(std::move(g));
    rep.closed3_dim = gen.free.size();

    const Poly bi = b_diagonal(gen.phi, i), bj = b_diagonal(gen.phi, j);
    const std::string si = std::to_string(i), sj = std::to_string(j);
    Identity sum{"b(e" + si + ",e" + si + ") + b(e" + sj + ",e" + sj + ")", bi + bj, (bi + bj).is_zero(), {}, {}};
    if (sampling) {
        std::mt19937_64 rng(sampling->seed);
        SampleCheck sc;
        for (std::size_t p = 0; p < sampling->points; ++p) {
            const KForm<Rational> phi = sample_closed_form(algebra, {}, rng);
            ++sc.points;
            if (b_diag_generic(phi, i) + b_diag_generic(phi, j) == 0) ++sc.zero;
        }
        sum.sampled = sc;
    }
    rep.identities.push_back(std::move(sum));
    rep.identities.push_back({"b(e" + si + ",e" + si + ")", bi, bi.is_zero(), {}, {}});
    rep.identities.push_back({"b(e" + sj + ",e" + sj + ")", bj, bj.is_zero(), {}, {}});
    const Poly product = bi * bj;
    Identity sign{"b(e" + si + ",e" + si + ") * b(e" + sj + ",e" + sj + ") <= 0", product, product.is_zero(), {}, {}};
    sign.nonpositive = certified_nonpositive(product);
    rep.identities.push_back(sign);
    if (rep.identities.front().identically_zero) {
        rep.conclusion = Conclusion::NoStablePositiveClosed3Form;
        rep.summary = "b(e" + si + ",e" + si + ") = -b(e" + sj + ",e" + sj +
                      ") on every closed 3-form, so b is never definite";
    } else if (*sign.nonpositive) {
        rep.conclusion = Conclusion::NoStablePositiveClosed3Form;
        rep.summary = "b(e" + si + ",e" + si + ") and b(e" + sj + ",e" + sj +
                      ") never share a strict sign, so b is never definite (their sum does not vanish identically)";
    } else {
        rep.summary = "the diagonal entries neither cancel identically nor have opposite signs";
    }
    return rep;
}

ObstructionReport nilradical_vanishing_check(const LieAlgebra7& algebra, const std::vector<int>& n_indices,
                                             const std::vector<int>& diag_indices,
                                             std::optional<SamplingOptions> sampling) {
    if (n_indices.size() != 3)
        throw Error(ErrorKind::InvalidArgument, "the nilradical must be spanned by three basis vectors");
    for (int i : n_indices)
        if (i < 1 || i > kDim) throw Error(ErrorKind::InvalidArgument, "basis index outside 1..7");
    const Mask n_mask = mask_from_indices(n_indices);
    const GenericClosed3Form full = generic_closed_3form(algebra);
    const GenericClosed3Form gen = generic_form(algebra, {n_mask}, {}, {});

    ObstructionReport rep;
    rep.algebra = algebra.name();
    rep.assumptions = parameter_assumptions(algebra);
    rep.assumptions.push_back("phi" + index_string(n_mask) + " = 0");
    for (auto& g : guard_strings(gen.guards)) rep.assumptions.push_back(std::move(g));
    rep.closed3_dim = full.free.size();

    std::mt19937_64 rng(sampling ? sampling->seed : 0);
    std::vector<KForm<Rational>> samples;
    if (sampling)
        for (std::size_t p = 0; p < sampling->points; ++p) samples.push_back(sample_closed_form(algebra, {n_mask}, rng));

    bool all_zero = true;
    for (int i : diag_indices) {
        const Poly b = b_diagonal(gen.phi, i);
        Identity id{"b(e" + std::to_string(i) + ",e" + std::to_string(i) + ") with phi" + index_string(n_mask) + " = 0",
                    b, b.is_zero(), {}, {}};
        if (sampling) {
            SampleCheck sc;
            for (const auto& phi : samples) {
                ++sc.points;
                if (b_diag_generic(phi, i) == 0) ++sc.zero;
            }
            id.sampled = sc;
        }
        all_zero = all_zero && id.identically_zero;
        rep.identities.push_back(std::move(id));
    }
    if (all_zero && !diag_indices.empty()) {
        rep.conclusion = Conclusion::NoStablePositiveClosed3Form;
        rep.summary = "closed 3-forms vanishing on the nilradical have zero diagonal entries of b";
    } else {
        rep.summary = "some listed diagonal entry of b survives the constraint";
    }
    return rep;
}

Simple4FormResult closed_simple_4forms_on_Q(const LieAlgebra7& algebra, const std::vector<Vector7<Poly>>& Q) {
    if (Q.size() != 4) throw Error(ErrorKind::InvalidArgument, "Q must be 4-dimensional");

    // complete Q by coordinate vectors with a unit determinant
    Matrix<Poly> basis(kDim, kDim);
    std::vector<int> complement;
    for (Mask m : masks_of_degree(3)) {
        const auto idx = indices_of(m);
        Matrix<Poly> trial(kDim, kDim);
        for (int a = 0; a < 4; ++a)
            for (int r = 0; r < kDim; ++r) trial(static_cast<std::size_t>(r), static_cast<std::size_t>(a)) = Q[static_cast<std::size_t>(a)][r];
        for (int c = 0; c < 3; ++c)
            trial(static_cast<std::size_t>(idx[static_cast<std::size_t>(c)] - 1), static_cast<std::size_t>(4 + c)) = Poly(1);
        if (determinant(trial).is_unit()) {
            basis = trial;
            complement = idx;
            break;
        }
    }
    if (complement.empty())
        throw Error(ErrorKind::Inconclusive, "no coordinate complement of Q with a unit determinant");
    const Matrix<Poly> dual = inverse(basis);  // rows: dual covectors

    auto covector = [&](std::size_t row) {
        KForm<Poly> t(1);
        for (int j = 0; j < kDim; ++j) t.add(bit(j + 1), dual(row, static_cast<std::size_t>(j)));
        return t;
    };
    std::array<KForm<Poly>, 4> theta;
    std::array<KForm<Poly>, 3> eta;
    for (std::size_t a = 0; a < 4; ++a) theta[a] = covector(a);
    for (std::size_t c = 0; c < 3; ++c) eta[c] = covector(4 + c);

    const Differential<Poly> d(algebra);
    Simple4FormResult out;
    out.generator = wedge(wedge(theta[0], theta[1]), wedge(theta[2], theta[3]));
    const KForm<Poly> dgen = d(out.generator);
    out.coordinate_generator_closed = dgen.is_zero();

    ObstructionReport& rep = out.report;
    rep.algebra = algebra.name();
    rep.assumptions = parameter_assumptions(algebra);
    {
        std::string q = "Q = <";
        for (std::size_t a = 0; a < 4; ++a) {
            KForm<Poly> v(1);
            for (int r = 0; r < kDim; ++r) v.add(bit(r + 1), Q[a][r]);
            q += (a ? ", " : "") + format_form(v);
        }
        rep.assumptions.push_back(q + "> (vectors written in the e^i slots)");
        std::string c = "coordinate complement <";
        for (std::size_t k = 0; k < complement.size(); ++k) c += (k ? ", e" : "e") + std::to_string(complement[k]);
        rep.assumptions.push_back(c + ">");
    }
    try {
        rep.closed3_dim = generic_closed_3form(algebra).free.size();
    } catch (const Error&) {
        rep.closed3_dim = 0;
    }

    const std::string gen_text = format_form(out.generator);
    if (dgen.is_zero()) {
        rep.identities.push_back({"d(" + gen_text + ")", Poly(), true, {}, {}});
    } else {
        for (const auto& [m, c] : dgen.terms())
            rep.identities.push_back({"coefficient of e" + index_string(m) + " in d(" + gen_text + ")", c, false, {}, {}});
    }

    // generic complement: theta_a + sum_c u<a><c> eta_c
    KForm<Poly> omega = KForm<Poly>::scalar(Poly(1));
    for (std::size_t a = 0; a < 4; ++a) {
        KForm<Poly> t = theta[a];
        for (std::size_t c = 0; c < 3; ++c)
            t += eta[c] * Poly::variable("u" + std::to_string(a + 1) + std::to_string(c + 1));
        omega = wedge(omega, t);
    }
    const KForm<Poly> domega = d(omega);
    std::optional<std::pair<Mask, Poly>> witness;
    for (const auto& [m, c] : domega.terms()) {
        bool free_of_u = true;
        for (const auto& v : c.variables())
            if (v.starts_with("u")) free_of_u = false;
        // a unit without complement coordinates never vanishes
        if (free_of_u && c.is_unit()) {
            witness.emplace(m, c);
            break;
        }
    }
    if (witness) {
        out.generic_certified_absent = true;
        rep.identities.push_back({"coefficient of e" + index_string(witness->first) +
                                      " in d(omega) for an arbitrary complement (never zero)",
                                  witness->second, false, {}, {}});
    } else if (domega.is_zero()) {
        out.generic_certified_absent = false;
    }

    if (!out.coordinate_generator_closed) {
        rep.conclusion = Conclusion::NoClosedSimple4FormOnQ;
        rep.summary = witness ? "no simple 4-form with kernel complementary to Q is closed"
                              : "the generator of Lambda^4(Q*) for the coordinate complement is not closed";
    } else {
        rep.summary = "the generator " + gen_text + " is a nonzero closed simple 4-form";
    }
    return out;
}

namespace {

std::vector<Mask> masks(std::initializer_list<const char*> literals) {
    std::vector<Mask> out;
    for (const char* l : literals) {
        std::vector<int> idx;
        for (const char* c = l; *c; ++c) idx.push_back(*c - '0');
        out.push_back(mask_from_indices(idx));
    }
    return out;
}

Poly var(const char* indices) { return coefficient_variable(masks({indices}).front()); }

} // namespace

std::vector<Mask> printed_free_coefficients(const std::string& catalog_name) {
    if (catalog_name == "pencil-4")
        return masks({"123", "124", "125", "135", "136", "137", "147", "157", "235", "236", "237", "245", "267", "347",
                      "357"});
    if (catalog_name == "pencil-5")
        return masks({"123", "124", "125", "135", "136", "137", "235", "236", "237", "245", "267", "346", "347", "356",
                      "357"});
    if (catalog_name == "nonsolv-4")
        return masks({"123", "127", "137", "234", "235", "236", "237", "247", "257", "267", "347", "357", "367", "456",
                      "457", "467", "567"});
    return {};
}

Poly printed_pencil_b66() { return -(var("267") * (var("147") * var("357") - var("157") * var("347"))); }

std::vector<std::vector<Vector7<Poly>>> nonsolv4_q_candidates() {
    auto e = [](int i) { return Vector7<Poly>::basis(i); };
    const Poly a = var("567"), b = var("467");
    Vector7<Poly> v;
    v[0] = Poly(1);
    v[1] = a * b.unit_inverse();
    v[2] = -(b * a.unit_inverse());
    return {{e(4), e(5), e(6), v}, {e(4), e(5), e(6), e(2)}, {e(4), e(5), e(6), e(3)}};
}

std::vector<ObstructionReport> obstruct_entry(const CatalogEntry& entry, std::optional<SamplingOptions> sampling) {
    std::vector<ObstructionReport> out;
    const std::string& n = entry.name;
    if (n == "pencil-4" || n == "pencil-5") {
        auto rep = b_diag_identity_check(entry.algebra, 6, 7, printed_free_coefficients(n), entry.nonzero_params, sampling);
        if (n == "pencil-4") {
            const Poly& b66 = rep.identities[1].polynomial;
            const Poly printed = printed_pencil_b66();
            const auto c = proportionality(b66, printed);
            const Poly diff = c ? b66 - printed * *c : b66 - printed;
            rep.identities.push_back({"b(e6,e6) - (" + (c ? c->get_str() : std::string("1")) + ") * (" +
                                          printed.to_string() + ")",
                                      diff, diff.is_zero(), {}, {}});
        }
        out.push_back(std::move(rep));
    } else if (n == "nonsolv-1" || n == "nonsolv-2" || n == "nonsolv-3") {
        out.push_back(nilradical_vanishing_check(entry.algebra, {5, 6, 7}, {5, 6, 7}, sampling));
    } else if (n == "nonsolv-4") {
        for (const auto& q : nonsolv4_q_candidates()) {
            auto r = closed_simple_4forms_on_Q(entry.algebra, q).report;
            if (!q[3][1].is_constant()) r.assumptions.push_back("phi467 != 0, phi567 != 0");
            out.push_back(std::move(r));
        }
    } else if (n == "bryant-s" || n == "lauret-u" || n == "s-eta") {
        std::vector<Vector7<Poly>> q;
        for (int i = 4; i <= 7; ++i) q.push_back(Vector7<Poly>::basis(i));
        out.push_back(closed_simple_4forms_on_Q(entry.algebra, q).report);
    } else if (n == "std-phi") {
        out.push_back(b_diag_identity_check(entry.algebra, 6, 7, {}, {}, sampling));
        out.push_back(nilradical_vanishing_check(entry.algebra, {5, 6, 7}, {5}, sampling));
    }
    return out;
}

} // namespace g2lab
