#include "g2lab/suites.hpp"

#include "g2lab/catalog.hpp"
#include "g2lab/obstruct.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace g2lab {

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"erp-properties", "prop-4-2", "thm-4-1", "thm-6-5"};
    return names;
}

unsigned worker_threads() {
    if (const char* env = std::getenv("G2LAB_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& task) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

namespace {

struct Subject {
    std::string label;
    std::string name;
    std::map<std::string, Rational> params;
};

Check flag(std::string name, bool pass, std::string residual = {}, std::string detail = {}) {
    return Check{std::move(name), pass, std::move(residual), std::move(detail)};
}

void append_prefixed(std::vector<Check>& out, const std::string& prefix, const std::vector<Check>& checks) {
    for (auto c : checks) {
        c.name = prefix + ": " + c.name;
        out.push_back(std::move(c));
    }
}

/// Runs one task per subject and concatenates the checks in subject order.
template <class T, class F>
std::vector<Check> fan_out(const std::vector<T>& subjects, unsigned threads, F&& run) {
    std::vector<std::vector<Check>> parts(subjects.size());
    parallel_for(subjects.size(), threads, [&](std::size_t i) { parts[i] = run(subjects[i]); });
    std::vector<Check> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

bool in_coordinate_span(const Subspace<Rational>& s, const std::vector<int>& indices) {
    if (s.dim() != indices.size()) return false;
    for (const auto& v : s.basis)
        for (int i = 1; i <= kDim; ++i)
            if (v[i - 1] != 0 && std::find(indices.begin(), indices.end(), i) == indices.end()) return false;
    return true;
}

struct Erp {
    CatalogEntry entry;
    Differential<Rational> d;
    G2Structure<Rational> st;
    ERPCertificate<Rational> cert;

    Erp(const Subject& s, Tolerance tol)
        : entry(catalog_get(s.name, s.params)), d(entry.algebra), st(parse_form<Rational>(*entry.phi), tol.alg),
          cert(erp_certificate(d, st, tol)) {}
};

std::vector<Check> erp_properties(const Subject& s, Tolerance tol) {
    const Erp e(s, tol);
    std::vector<Check> out;
    append_prefixed(out, s.label, e.cert.checks);
    const auto& ex = e.entry.expected;
    const Rational k = e.cert.torsion.tau_norm_sq;
    auto add = [&](std::string name, bool pass, std::string residual, std::string detail = {}) {
        out.push_back(flag(s.label + ": " + std::move(name), pass, std::move(residual), std::move(detail)));
    };
    if (ex.tau_norm_sq) add("golden_tau_norm_sq", k == *ex.tau_norm_sq, k.get_str(), "expected " + ex.tau_norm_sq->get_str());
    if (ex.tau) {
        const KForm<Rational> expected = parse_form<Rational>(*ex.tau);
        add("golden_tau", e.cert.torsion.tau == expected, format_form(e.cert.torsion.tau), "expected " + *ex.tau);
    }
    const Rational scal = e.cert.torsion.scal;
    add("scalar_curvature", scal == -k / 2, scal.get_str(), "Scal = -|tau|^2/2");
    {
        std::vector<Rational> want(3, -k / 6);
        want.resize(7, Rational(0));
        const auto& got = e.cert.ricci_spectrum_exact;
        std::string text;
        if (got)
            for (const auto& q : *got) text += (text.empty() ? "" : " ") + q.get_str();
        add("ricci_eigenvalues", got && *got == want, got ? text : "not rational",
            "-|tau|^2/6 (x3), 0 (x4)");
    }
    if (ex.p_basis) add("P_span", in_coordinate_span(e.cert.P, *ex.p_basis), std::to_string(e.cert.P.dim()));
    if (ex.q_basis) add("Q_span", in_coordinate_span(e.cert.Q, *ex.q_basis), std::to_string(e.cert.Q.dim()));
    if (s.name == "s-eta" && s.params.at("eta") == 0)
        add("coincides_with_bryant", e.entry.algebra.brackets() == catalog_get("bryant-s").algebra.brackets(), "");
    if (ex.erp) add("erp_flag", e.cert.passed() == *ex.erp, e.cert.erp_residual.get_str());
    return out;
}

std::vector<Check> prop_4_2(const Subject& s, Tolerance tol) {
    const Erp e(s, tol);
    std::vector<Check> out;
    const Rational k = e.cert.torsion.tau_norm_sq;
    std::vector<Rational> as{rational(-1, 4), rational(0), rational(1), rational(10)};
    for (const auto& a : as) {
        const std::string label = s.label + " a=" + a.get_str();
        const Rational m = 1 + k * a / 6;
        if (m <= 0) {
            const Rational lambda = determinant(b_matrix(e.st.phi() + e.cert.torsion.dtau * a));
            out.push_back(flag(label + ": boundary_det_b", m == 0 && lambda == 0, lambda.get_str(),
                               "a = -6/|tau|^2 is the boundary of the family; det b vanishes there"));
            continue;
        }
        const auto rep = deform(e.d, e.cert, e.st, a, tol);
        append_prefixed(out, label, rep.checks);
        out.push_back(flag(label + ": deformed_positive", rep.structure.has_value(), m.get_str()));
    }
    const Rational boundary = Rational(-6) / k;
    const Rational lambda = determinant(b_matrix(e.st.phi() + e.cert.torsion.dtau * boundary));
    out.push_back(flag(s.label + " a=" + boundary.get_str() + ": boundary_det_b", lambda == 0, lambda.get_str(),
                       "det b = 0 at a = -6/|tau|^2"));
    bool threw = false;
    try {
        (void)deform(e.d, e.cert, e.st, boundary, tol);
    } catch (const Error& err) {
        threw = err.kind() == ErrorKind::NotPositive;
    }
    out.push_back(flag(s.label + " a=" + boundary.get_str() + ": boundary_rejected", threw, ""));
    return out;
}

std::vector<Check> thm_4_1(const Subject& s, Tolerance tol) {
    const Erp e(s, tol);
    std::vector<Check> out;
    append_prefixed(out, s.label, verify_flow_reduction(e.entry.algebra, e.st));
    const ClosedFormSolution sol = closed_form_solution(e.cert, e.st);
    const Differential<double> dd(e.entry.algebra);
    for (double t : {-1.0, -0.5, 0.5, 1.0}) {
        char label[64];
        std::snprintf(label, sizeof label, "%s t=%g", s.label.c_str(), t);
        append_prefixed(out, label, check_snapshot(dd, sol, t, tol));
    }
    return out;
}

std::vector<Check> thm_6_5(const Subject& s, Tolerance) {
    const CatalogEntry entry = catalog_get(s.name, s.params);
    const auto reports = obstruct_entry(entry);
    std::vector<Check> out;
    auto add = [&](std::string name, bool pass, std::string residual, std::string detail = {}) {
        out.push_back(flag(s.label + ": " + std::move(name), pass, std::move(residual), std::move(detail)));
    };
    auto sampled_ok = [](const Identity& id) {
        if (!id.sampled) return true;
        return id.identically_zero ? id.sampled->zero == id.sampled->points : id.sampled->zero < id.sampled->points;
    };
    auto poly = [](const Identity& id) { return id.polynomial.to_string(); };
    const std::string& n = s.name;
    if (n == "pencil-4" || n == "pencil-5") {
        const auto& r = reports.at(0);
        add("closed3_dim", r.closed3_dim == 15, std::to_string(r.closed3_dim), "free coefficients of the printed form");
        add("b66_plus_b77_identically_zero", r.identities[0].identically_zero, poly(r.identities[0]),
            r.identities[0].identically_zero ? "" : "not a polynomial identity on this pencil");
        add("sampling_agrees", sampled_ok(r.identities[0]),
            std::to_string(r.identities[0].sampled ? r.identities[0].sampled->zero : 0) + " of " +
                std::to_string(r.identities[0].sampled ? r.identities[0].sampled->points : 0) + " vanished");
        if (n == "pencil-4")
            add("b66_printed_product", r.identities.back().identically_zero, poly(r.identities.back()),
                r.identities.back().description);
        else
            add("b66_b77_nonpositive", r.identities[3].nonpositive.value_or(false), poly(r.identities[3]),
                "every term of -b66*b77 is an even monomial with positive coefficient");
        add("no_stable_closed_form", r.conclusion == Conclusion::NoStablePositiveClosed3Form,
            std::string(conclusion_name(r.conclusion)), r.summary);
    } else if (n == "nonsolv-1" || n == "nonsolv-2" || n == "nonsolv-3") {
        const auto& r = reports.at(0);
        for (const auto& id : r.identities) {
            add(id.description.substr(0, id.description.find(' ')) + "_vanishes", id.identically_zero, poly(id),
                id.description);
            add(id.description.substr(0, id.description.find(' ')) + "_sampling_agrees", sampled_ok(id),
                std::to_string(id.sampled ? id.sampled->zero : 0) + " vanished");
        }
        add("no_stable_closed_form_vanishing_on_n", r.conclusion == Conclusion::NoStablePositiveClosed3Form,
            std::string(conclusion_name(r.conclusion)), r.summary);
    } else if (n == "nonsolv-4") {
        const char* labels[] = {"Q=<e4,e5,e6,e1+(phi567/phi467)e2-(phi467/phi567)e3>", "Q=<e4,e5,e6,e2>",
                                "Q=<e4,e5,e6,e3>"};
        for (std::size_t i = 0; i < reports.size(); ++i)
            add(std::string(labels[i]) + " no_closed_simple_4form",
                reports[i].conclusion == Conclusion::NoClosedSimple4FormOnQ,
                reports[i].identities.empty() ? "" : poly(reports[i].identities.front()), reports[i].summary);
        add("closed3_dim", reports.at(0).closed3_dim == 17, std::to_string(reports.at(0).closed3_dim));
    } else if (n == "bryant-s") {
        const auto& r = reports.at(0);
        add("control Q=<e4,e5,e6,e7> closed_simple_4form_found",
            r.conclusion == Conclusion::Inconclusive && r.identities.at(0).identically_zero, poly(r.identities.at(0)),
            r.summary);
    } else if (n == "std-phi") {
        const auto& diag = reports.at(0);
        add("control b66_plus_b77_not_identity", !diag.identities[0].identically_zero && sampled_ok(diag.identities[0]),
            poly(diag.identities[0]));
        add("control no_false_obstruction", diag.conclusion == Conclusion::Inconclusive,
            std::string(conclusion_name(diag.conclusion)));
        const auto& nil = reports.at(1);
        add("control b55_survives_phi567_zero", !nil.identities[0].identically_zero && sampled_ok(nil.identities[0]),
            poly(nil.identities[0]));
        add("control nilradical_no_false_obstruction", nil.conclusion == Conclusion::Inconclusive,
            std::string(conclusion_name(nil.conclusion)));
    }
    return out;
}

std::vector<Subject> erp_subjects(bool with_family) {
    std::vector<Subject> out{{"bryant-s", "bryant-s", {}}, {"lauret-u", "lauret-u", {}}};
    if (with_family)
        for (const auto& eta : {rational(0), rational(1, 2), rational(1), rational(2)})
            out.push_back({"s-eta(eta=" + eta.get_str() + ")", "s-eta", {{"eta", eta}}});
    return out;
}

} // namespace

SuiteResult run_suite(const std::string& name, Tolerance tol, unsigned threads) {
    const auto start = std::chrono::steady_clock::now();
    SuiteResult res;
    res.suite = name;
    if (name == "erp-properties") {
        res.checks = fan_out(erp_subjects(true), threads, [&](const Subject& s) { return erp_properties(s, tol); });
    } else if (name == "prop-4-2") {
        res.checks = fan_out(erp_subjects(false), threads, [&](const Subject& s) { return prop_4_2(s, tol); });
    } else if (name == "thm-4-1") {
        res.checks = fan_out(erp_subjects(false), threads, [&](const Subject& s) { return thm_4_1(s, tol); });
    } else if (name == "thm-6-5") {
        std::vector<Subject> subjects;
        for (const char* n : {"pencil-4", "pencil-5", "nonsolv-1", "nonsolv-2", "nonsolv-3", "nonsolv-4", "bryant-s",
                              "std-phi"})
            subjects.push_back({n, n, {}});
        res.checks = fan_out(subjects, threads, [&](const Subject& s) { return thm_6_5(s, tol); });
    } else {
        throw Error(ErrorKind::UnknownName, "no suite named '" + name + "'");
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

} // namespace g2lab
