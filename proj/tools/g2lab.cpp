// g2lab: command-line front end (analysis, flow runs, verification suites,
// deformations and obstruction reports).

#include "g2lab/catalog.hpp"
#include "g2lab/erp.hpp"
#include "g2lab/flow.hpp"
#include "g2lab/obstruct.hpp"
#include "g2lab/suites.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace g2lab;
using json = nlohmann::ordered_json;

namespace {

struct Common {
    std::string algebra;
    std::vector<std::string> params;
    std::string phi;
    std::string mode;
    double eps_alg = 1e-9;
    double eps_cmp = 1e-6;

    Tolerance tol() const { return {eps_alg, eps_cmp}; }
};

void add_common(CLI::App* app, Common& c, bool need_algebra, const std::string& default_mode) {
    c.mode = default_mode;
    auto* alg = app->add_option("--algebra", c.algebra, "catalog entry name");
    if (need_algebra) alg->required();
    app->add_option("--param", c.params, "parameter value k=v (repeatable)");
    app->add_option("--phi", c.phi, "3-form: a literal, 'std', or a file containing a literal");
    app->add_option("--mode", c.mode, "exact | float")->check(CLI::IsMember({"exact", "float"}));
    app->add_option("--eps-alg", c.eps_alg, "algebraic tolerance (float mode)");
    app->add_option("--eps-cmp", c.eps_cmp, "comparison tolerance");
}

std::map<std::string, Rational> parse_params(const std::vector<std::string>& items) {
    std::map<std::string, Rational> out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Error(ErrorKind::InvalidArgument, "parameter '" + item + "' is not of the form k=v");
        out[item.substr(0, eq)] = parse_rational(item.substr(eq + 1));
    }
    return out;
}

std::string phi_literal(const Common& c, const CatalogEntry& e) {
    if (c.phi.empty()) {
        if (!e.phi) throw Error(ErrorKind::InvalidArgument, e.name + " has no built-in 3-form; pass --phi");
        return *e.phi;
    }
    if (c.phi == "std") return "e123 + e145 + e167 + e246 - e257 - e347 - e356";
    std::error_code ec;
    if (std::filesystem::is_regular_file(c.phi, ec)) {
        std::ifstream in(c.phi);
        if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + c.phi);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    return c.phi;
}

json scalar(const Rational& q) { return to_string(q); }
json scalar(double x) { return x; }

template <class S>
json matrix_json(const Matrix<S>& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class S>
json subspace_json(const Subspace<S>& s) {
    json out = json::array();
    for (const auto& v : s.basis) {
        json vec = json::array();
        for (int i = 0; i < kDim; ++i) vec.push_back(scalar(v[i]));
        out.push_back(std::move(vec));
    }
    return out;
}

json checks_json(const std::vector<Check>& checks) {
    json out = json::array();
    for (const auto& c : checks)
        out.push_back({{"name", c.name}, {"pass", c.pass}, {"residual", c.residual}, {"detail", c.detail}});
    return out;
}

template <class S>
json torsion_json(const TorsionReport<S>& r) {
    json j;
    j["tau"] = format_form(r.tau);
    j["tau_norm_sq"] = scalar(r.tau_norm_sq);
    j["dtau"] = format_form(r.dtau);
    j["scal"] = scalar(r.scal);
    j["scal_trace"] = scalar(r.scal_trace);
    j["ricci"] = matrix_json(r.ricci);
    json res;
    for (const auto& [name, v] : r.residuals) res[name] = scalar(v);
    j["residuals"] = res;
    return j;
}

template <class S>
json erp_json(const ERPCertificate<S>& c) {
    json j;
    j["erp"] = c.erp;
    j["passed"] = c.passed();
    j["erp_residual"] = scalar(c.erp_residual);
    j["P"] = subspace_json(c.P);
    j["Q"] = subspace_json(c.Q);
    j["ricci_eigenvalues"] = c.ricci_spectrum;
    if (c.ricci_spectrum_exact) {
        json ex = json::array();
        for (const auto& q : *c.ricci_spectrum_exact) ex.push_back(to_string(q));
        j["ricci_eigenvalues_exact"] = ex;
    }
    j["checks"] = checks_json(c.checks);
    return j;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

json header(const std::string& command) { return {{"schema", 1}, {"command", command}}; }

template <class S>
int analyze_as(const CatalogEntry& e, const std::string& literal, const Common& c) {
    KForm<S> phi = convert<S>(parse_form<Rational>(literal));
    const Differential<S> d(e.algebra);
    const G2Structure<S> st(phi, c.eps_alg);
    const auto cert = erp_certificate(d, st, c.tol());
    json j = header("analyze");
    j["algebra"] = e.name;
    j["mode"] = c.mode;
    j["phi"] = format_form(phi);
    j["torsion"] = torsion_json(cert.torsion);
    j["erp_certificate"] = erp_json(cert);
    emit(j);
    return cert.passed() ? 0 : 1;
}

int run_analyze(const Common& c) {
    const CatalogEntry e = catalog_get(c.algebra, parse_params(c.params));
    const std::string literal = phi_literal(c, e);
    return c.mode == "exact" ? analyze_as<Rational>(e, literal, c) : analyze_as<double>(e, literal, c);
}

template <class S>
int deform_as(const CatalogEntry& e, const std::string& literal, const Rational& a, const Common& c) {
    const KForm<S> phi = convert<S>(parse_form<Rational>(literal));
    const Differential<S> d(e.algebra);
    const G2Structure<S> st(phi, c.eps_alg);
    const auto cert = erp_certificate(d, st, c.tol());
    S a_s;
    if constexpr (std::same_as<S, Rational>)
        a_s = a;
    else
        a_s = a.get_d();
    json j = header("deform");
    j["algebra"] = e.name;
    j["mode"] = c.mode;
    j["a"] = to_string(a);
    try {
        const auto rep = deform(d, cert, st, a_s, c.tol());
        j["multiplier"] = scalar(rep.multiplier);
        j["det_b"] = scalar(rep.lambda);
        j["phi"] = format_form(rep.structure->phi());
        j["checks"] = checks_json(rep.checks);
        j["passed"] = rep.passed();
        emit(j);
        return rep.passed() ? 0 : 1;
    } catch (const Error& err) {
        if (err.kind() != ErrorKind::NotPositive) throw;
        j["passed"] = false;
        j["error"] = std::string(err.name());
        j["message"] = err.what();
        emit(j);
        return 1;
    }
}

int run_deform(const Common& c, const std::string& a_text) {
    const CatalogEntry e = catalog_get(c.algebra, parse_params(c.params));
    const std::string literal = phi_literal(c, e);
    const Rational a = parse_rational(a_text);
    return c.mode == "exact" ? deform_as<Rational>(e, literal, a, c) : deform_as<double>(e, literal, a, c);
}

struct FlowArgs {
    double t0 = 0, t1 = 1, step = 1e-3;
    std::string integrator = "rk4";
    std::size_t sample_every = 1;
    std::string out;
    bool project = false;
};

int run_flow(const Common& c, const FlowArgs& f) {
    const CatalogEntry e = catalog_get(c.algebra, parse_params(c.params));
    const std::string literal = phi_literal(c, e);
    const KForm<Rational> phi_q = parse_form<Rational>(literal);

    FlowConfig cfg;
    cfg.t0 = f.t0;
    cfg.t1 = f.t1;
    cfg.step = f.step;
    cfg.integrator = parse_integrator(f.integrator);
    cfg.project_closed = f.project;
    cfg.tol = c.tol();

    // closed-form comparison whenever the initial datum is certified ERP
    std::optional<ClosedFormSolution> sol;
    if (c.mode == "exact" || e.algebra.free_params().empty()) {
        try {
            const Differential<Rational> d(e.algebra);
            const G2Structure<Rational> st(phi_q);
            const auto cert = erp_certificate(d, st, c.tol());
            if (cert.passed()) sol = closed_form_solution(cert, st);
        } catch (const Error& err) {
            if (err.kind() != ErrorKind::NinthRootIrrational) throw;
        }
    }
    const FlowTrace trace = integrate(e.algebra, convert<double>(phi_q), cfg, sol ? &*sol : nullptr);

    if (!f.out.empty()) {
        std::ofstream out(f.out);
        if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + f.out);
        write_csv(out, trace, f.sample_every);
    }

    json j = header("flow");
    j["algebra"] = e.name;
    j["integrator"] = std::string(integrator_name(cfg.integrator));
    j["t0"] = cfg.t0;
    j["t1"] = cfg.t1;
    j["step"] = cfg.step;
    j["rows"] = trace.rows.size();
    j["rejected_steps"] = trace.rejected_steps;
    j["blow_up"] = trace.blow_up;
    j["breakdown"] = trace.breakdown;
    if (trace.blow_up || trace.breakdown) {
        j["blow_up_time"] = trace.blow_up_time;
        j["blow_up_reason"] = trace.blow_up_reason;
    }
    const FlowRow& last = trace.rows.back();
    j["final"] = {{"t", last.t},
                  {"vol_scale", last.vol_scale},
                  {"tau_norm_sq", last.tau_norm_sq},
                  {"scal", last.scal},
                  {"velocity", last.velocity}};
    j["wall_seconds"] = trace.wall_seconds;
    if (!f.out.empty()) j["csv"] = f.out;

    bool ok = !trace.blow_up && !trace.breakdown;
    if (sol) {
        const ComparisonReport r = compare_closed_form(trace, *sol);
        j["comparison"] = {{"max_phi_dev", r.max_phi_dev},
                           {"max_tau_norm_dev", r.max_tau_norm_dev},
                           {"max_scal_dev", r.max_scal_dev},
                           {"max_velocity_dev", r.max_velocity_dev},
                           {"max_volume_rel_dev", r.max_volume_rel_dev},
                           {"final_t", r.final_t},
                           {"final_volume_ratio", r.final_volume_ratio},
                           {"max_erp_residual", r.max_erp_residual},
                           {"max_metric_evol_residual", r.max_metric_evol_residual},
                           {"max_volume_law_residual", r.max_volume_law_residual},
                           {"max_closedness", r.max_closedness},
                           {"max_metric_P_dev", r.max_metric_P_dev},
                           {"max_metric_Q_rel_dev", r.max_metric_Q_rel_dev},
                           {"tolerance", c.eps_cmp}};
        ok = ok && r.max_phi_dev <= c.eps_cmp && r.max_scal_dev <= c.eps_cmp && r.max_velocity_dev <= c.eps_cmp;
        j["comparison"]["passed"] = ok;
    }
    emit(j);
    return ok ? 0 : 1;
}

int run_verify(const std::string& suite, bool as_json, const Common& c) {
    std::vector<std::string> names;
    if (suite == "all")
        names = suite_names();
    else
        names.push_back(suite);
    const unsigned threads = worker_threads();
    bool ok = true;
    json j = header("verify");
    j["suites"] = json::array();
    for (const auto& name : names) {
        const SuiteResult r = run_suite(name, c.tol(), threads);
        ok = ok && r.passed();
        if (as_json) {
            j["suites"].push_back({{"suite", r.suite}, {"passed", r.passed()}, {"seconds", r.seconds},
                                   {"checks", checks_json(r.checks)}});
            continue;
        }
        std::size_t failed = 0;
        for (const auto& ch : r.checks) {
            std::cout << (ch.pass ? "PASS " : "FAIL ") << r.suite << " | " << ch.name;
            if (!ch.residual.empty()) std::cout << " | " << ch.residual;
            if (!ch.pass && !ch.detail.empty()) std::cout << " | " << ch.detail;
            std::cout << "\n";
            failed += ch.pass ? 0 : 1;
        }
        std::cout << "== " << r.suite << ": " << r.checks.size() - failed << "/" << r.checks.size() << " passed ("
                  << r.seconds << " s)\n";
    }
    if (as_json) emit(j);
    return ok ? 0 : 1;
}

int run_obstruct(const Common& c) {
    const CatalogEntry e = catalog_get(c.algebra, parse_params(c.params));
    const auto reports = obstruct_entry(e);
    json j = header("obstruct");
    j["algebra"] = e.name;
    j["reports"] = json::array();
    bool ok = true;
    const bool target = e.name.starts_with("pencil") || e.name.starts_with("nonsolv");
    for (const auto& r : reports) {
        j["reports"].push_back(json::parse(r.to_json()));
        for (const auto& id : r.identities)
            if (id.sampled && (id.identically_zero ? id.sampled->zero != id.sampled->points
                                                   : id.sampled->zero == id.sampled->points))
                ok = false;
        if (target && r.conclusion == Conclusion::Inconclusive) ok = false;
    }
    if (reports.empty()) j["note"] = "no obstruction computation applies to this entry";
    emit(j);
    return ok ? 0 : 1;
}

int run_catalog_list() {
    json j = header("catalog list");
    j["entries"] = json::array();
    for (const auto& name : catalog_names()) {
        const CatalogEntry e = name == "s-eta" ? catalog_get(name, {{"eta", Rational(0)}}) : catalog_get(name);
        json params = json::array();
        for (const auto& [p, v] : e.algebra.params()) params.push_back(p);
        if (name == "s-eta") params = json::array({"eta"});
        j["entries"].push_back({{"name", name}, {"description", e.description}, {"params", params}});
    }
    emit(j);
    return 0;
}

int run_catalog_show(const std::string& name, const std::vector<std::string>& params) {
    const CatalogEntry e = catalog_get(name, parse_params(params));
    json j = header("catalog show");
    j["name"] = e.name;
    j["description"] = e.description;
    j["algebra"] = json::parse(e.algebra.to_json());
    j["structure_equations"] = e.algebra.structure_equation_strings();
    if (e.phi) j["phi"] = *e.phi;
    json ex;
    if (e.expected.tau_norm_sq) ex["tau_norm_sq"] = to_string(*e.expected.tau_norm_sq);
    if (e.expected.tau) ex["tau"] = *e.expected.tau;
    if (e.expected.p_basis) ex["P"] = *e.expected.p_basis;
    if (e.expected.q_basis) ex["Q"] = *e.expected.q_basis;
    ex["unimodular"] = e.expected.unimodular;
    if (e.expected.erp) ex["erp"] = *e.expected.erp;
    j["expected"] = ex;
    if (!e.nonzero_params.empty()) j["nonzero_params"] = e.nonzero_params;
    emit(j);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"g2lab: closed G2-structures, ERP certificates and the Laplacian flow on 7-dimensional Lie algebras"};
    app.require_subcommand(1);

    auto* catalog = app.add_subcommand("catalog", "built-in algebras and forms");
    catalog->require_subcommand(1);
    catalog->add_subcommand("list", "list entries");
    auto* show = catalog->add_subcommand("show", "show one entry");
    std::string show_name;
    std::vector<std::string> show_params;
    show->add_option("name", show_name, "entry name")->required();
    show->add_option("--param", show_params, "parameter value k=v (repeatable)");

    Common analyze_c, flow_c, verify_c, deform_c, obstruct_c;
    auto* analyze = app.add_subcommand("analyze", "torsion report and ERP certificate (JSON)");
    add_common(analyze, analyze_c, true, "exact");

    auto* flow = app.add_subcommand("flow", "integrate the Laplacian flow (CSV trace + JSON comparison)");
    add_common(flow, flow_c, true, "float");
    FlowArgs fargs;
    flow->add_option("--t0", fargs.t0);
    flow->add_option("--t1", fargs.t1);
    flow->add_option("--step", fargs.step)->check(CLI::PositiveNumber);
    flow->add_option("--integrator", fargs.integrator)->check(CLI::IsMember({"rk4", "rk45"}));
    flow->add_option("--sample-every", fargs.sample_every)->check(CLI::PositiveNumber);
    flow->add_option("--out", fargs.out, "CSV path");
    flow->add_flag("--project", fargs.project, "project onto closed 3-forms after each step");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    add_common(verify, verify_c, false, "exact");
    std::string suite;
    bool verify_json = false;
    std::vector<std::string> suites = suite_names();
    suites.push_back("all");
    verify->add_option("--suite", suite, "erp-properties | prop-4-2 | thm-4-1 | thm-6-5 | all")
        ->required()
        ->check(CLI::IsMember(suites));
    verify->add_flag("--json", verify_json, "JSON instead of one line per check");

    auto* deform_cmd = app.add_subcommand("deform", "phi + a d tau with the predicted invariants");
    add_common(deform_cmd, deform_c, true, "exact");
    std::string a_text;
    deform_cmd->add_option("--a", a_text, "rational deformation parameter")->required();

    auto* obstruct = app.add_subcommand("obstruct", "obstruction report (JSON)");
    add_common(obstruct, obstruct_c, true, "exact");

    CLI11_PARSE(app, argc, argv);

    try {
        if (catalog->got_subcommand("list")) return run_catalog_list();
        if (catalog->got_subcommand("show")) return run_catalog_show(show_name, show_params);
        if (analyze->parsed()) return run_analyze(analyze_c);
        if (flow->parsed()) return run_flow(flow_c, fargs);
        if (verify->parsed()) return run_verify(suite, verify_json, verify_c);
        if (deform_cmd->parsed()) return run_deform(deform_c, a_text);
        if (obstruct->parsed()) return run_obstruct(obstruct_c);
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        json j = header("error");
        j["error"] = std::string(err.name());
        j["message"] = err.what();
        std::cout << j.dump(2) << "\n";
        return 2;
    }
    return 1;
}
