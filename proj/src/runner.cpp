#include "cosoliton/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace cosoliton {

using nlohmann::json;

double default_tolerance(const std::string& suite) {
    static const std::map<std::string, double> defaults = {
        {"axioms", 1e-10},
        {"nijenhuis", 1e-5},
        {"alpha_cosymplectic", 1e-5},
        {"connection", 1e-5},
        {"torsion", 1e-5},
        {"curvature_identities", 1e-3},
        {"theorem_3_1", 1e-3},
        {"soliton", 1e-2},
        {"constants", 1e-12},
        {"laplacian", 1e-2},
        {"classify", 1e-10},
        {"conformal_killing", 1e-5},
    };
    const auto it = defaults.find(suite);
    if (it == defaults.end()) throw InputError("unknown suite '" + suite + "'");
    return it->second;
}

std::vector<std::string> resolve_suites(const std::vector<std::string>& requested) {
    const auto& order = suite_names();
    std::vector<bool> wanted(order.size(), false);
    for (const auto& name : requested) {
        if (name == "all") {
            std::fill(wanted.begin(), wanted.end(), true);
            continue;
        }
        const auto it = std::find(order.begin(), order.end(), name);
        if (it == order.end()) throw InputError("unknown suite '" + name + "'");
        wanted[static_cast<std::size_t>(it - order.begin())] = true;
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (wanted[i]) out.push_back(order[i]);
    }
    return out;
}

namespace {

struct Context {
    ManifoldSpecDocument doc;
    Fixture fx;
    std::vector<Point> points;
    SweepOptions sweep;
    SolitonParameters params;
    bool lambda_given = false;
    VectorFieldSpec field_spec;
    std::optional<double> theta;
    ConnectionKind kind = ConnectionKind::quarter_symmetric;
    SignConvention convention = SignConvention::paper;
    bool has_alpha = false;

    std::optional<std::vector<PointGeometry>> geometry_cache;
    std::optional<std::vector<double>> divergence_cache;

    const FrameManifold& m() const { return *fx.manifold; }
    const AlmostContactStructure& s() const { return *fx.structure; }
    int n() const { return fx.manifold->dimension(); }
    double alpha() const { return fx.structure->alpha(); }

    void require_alpha() const {
        if (!has_alpha) throw InputError("parameter \"alpha\" is required for this suite");
    }

    const std::vector<PointGeometry>& geometry() {
        if (!geometry_cache) {
            std::vector<PointGeometry> out;
            for (const Point& p : points) out.push_back(evaluate_geometry(m(), s(), p));
            geometry_cache = std::move(out);
        }
        return *geometry_cache;
    }

    const std::vector<double>& divergences() {
        if (!divergence_cache) {
            const auto lc = ConnectionField::levi_civita(m());
            const VectorField xi = [this](const Point& p) { return s().xi(m(), p); };
            std::vector<double> out;
            for (const Point& p : points) out.push_back(divergence(lc, xi, p));
            divergence_cache = std::move(out);
        }
        return *divergence_cache;
    }

    /// Lambda from the document, or chosen so Lambda + mu meets the relation
    /// at the sampled mean scalar curvature.
    void resolve_lambda() {
        if (lambda_given) return;
        params.lambda = relation_sum(constant_inputs()) - params.mu;
    }

    ConstantInputs constant_inputs() {
        ConstantInputs in;
        in.n = n();
        in.alpha = alpha();
        in.rho = params.rho;
        in.q = params.q;
        in.r = mean_r().first;
        in.div_xi = mean_of(divergences()).first;
        return in;
    }

    static std::pair<double, double> mean_of(const std::vector<double>& xs) {
        if (xs.empty()) return {0.0, 0.0};
        double sum = 0.0;
        for (double x : xs) sum += x;
        const double mean = sum / static_cast<double>(xs.size());
        double spread = 0.0;
        for (double x : xs) spread = std::max(spread, std::abs(x - mean));
        return {mean, spread};
    }

    std::pair<double, double> mean_r() {
        std::vector<double> rs;
        for (const auto& g : geometry()) rs.push_back(g.r);
        return mean_of(rs);
    }
};

json entries_json(const std::vector<IdentityResult>& entries) {
    json out = json::object();
    for (const auto& e : entries) out[e.label] = e.max_residual;
    return out;
}

double max_of(const std::vector<IdentityResult>& entries) {
    double m = 0.0;
    for (const auto& e : entries) {
        if (std::isnan(e.max_residual)) return e.max_residual;
        m = std::max(m, e.max_residual);
    }
    return m;
}

// Worst residual across labelled per-point checks.
class Tally {
public:
    void observe(const std::string& label, double value) {
        auto [it, inserted] = worst_.try_emplace(label, value);
        if (!inserted && (std::isnan(value) || value > it->second)) it->second = value;
    }
    double max() const {
        double m = 0.0;
        for (const auto& [label, v] : worst_) {
            if (std::isnan(v)) return v;
            m = std::max(m, v);
        }
        return m;
    }
    json to_json() const {
        json out = json::object();
        for (const auto& [label, v] : worst_) out[label] = v;
        return out;
    }

private:
    std::map<std::string, double> worst_;
};

void finish(SuiteResult& r) { r.pass = !std::isnan(r.max_residual) && r.max_residual <= r.tolerance; }

void suite_axioms(Context& cx, SuiteResult& r) {
    const auto rep = check_axioms(cx.s(), cx.m(), cx.points, r.tolerance, cx.sweep);
    r.max_residual = rep.max_residual();
    r.details = entries_json(rep.entries);
    finish(r);
}

void suite_nijenhuis(Context& cx, SuiteResult& r) {
    const int n = cx.n();
    Tally t;
    for (const Point& p : cx.points) {
        const Mat g = cx.m().metric(p);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const Vec nv = nijenhuis(cx.s(), cx.m(), constant_field(unit_vector(n, i)),
                                         constant_field(unit_vector(n, j)), p);
                t.observe("normality", metric_norm(nv, g));
            }
        }
    }
    r.max_residual = t.max();
    r.details = t.to_json();
    finish(r);
}

void suite_alpha_cosymplectic(Context& cx, SuiteResult& r) {
    cx.require_alpha();
    const auto lc = ConnectionField::levi_civita(cx.m());
    const auto rep = verify_alpha_cosymplectic(cx.s(), cx.m(), lc, cx.points, r.tolerance, cx.sweep);
    r.max_residual = rep.max_residual();
    r.details = entries_json(rep.entries);
    r.details["alpha"] = cx.alpha();
    finish(r);
}

void suite_connection(Context& cx, SuiteResult& r) {
    const auto lc = ConnectionField::levi_civita(cx.m());
    const auto qs = ConnectionField::quarter_symmetric(cx.m(), cx.s());
    Tally t;
    for (const Point& p : cx.points) {
        t.observe("levi_civita_metric_compatibility", metric_compatibility(lc, p));
        t.observe("quarter_symmetric_metric_compatibility", metric_compatibility(qs, p));
        t.observe("levi_civita_torsion_free", torsion_free_residual(lc, p));
        t.observe("jacobi_identity", jacobi_residual(cx.m(), p));
        if (const auto d = structure_constants_discrepancy(cx.m(), p)) t.observe("structure_constants_closed_form", *d);
    }
    r.max_residual = t.max();
    r.details = t.to_json();
    finish(r);
}

void suite_torsion(Context& cx, SuiteResult& r) {
    const auto qs = ConnectionField::quarter_symmetric(cx.m(), cx.s());
    const int n = cx.n();
    Tally t;
    for (const Point& p : cx.points) {
        t.observe("quarter_symmetric_torsion", quarter_symmetric_torsion_residual(qs, cx.s(), p));
        const Tensor3 c = structure_constants(cx.m(), p);
        double skew = 0.0;
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) skew = std::max(skew, std::abs(c(k, i, j) + c(k, j, i)));
            }
        }
        t.observe("bracket_antisymmetry", skew);
    }
    r.max_residual = t.max();
    r.details = t.to_json();
    finish(r);
}

void suite_curvature(Context& cx, SuiteResult& r) {
    cx.require_alpha();
    const auto rep = check_levi_civita_identities(cx.m(), cx.s(), cx.points, r.tolerance, cx.sweep);
    r.max_residual = max_of(rep);
    r.details = entries_json(rep);
    const auto [r_mean, r_spread] = cx.mean_r();
    r.details["scalar_curvature_mean"] = r_mean;
    r.details["scalar_curvature_spread"] = r_spread;
    r.details["star_scalar_curvature_mean"] = star_scalar(r_mean, cx.alpha(), cx.n());
    finish(r);
}

void suite_theorem(Context& cx, SuiteResult& r) {
    cx.require_alpha();
    const auto rep = check_quarter_symmetric_identities(cx.m(), cx.s(), cx.points, r.tolerance, cx.sweep);
    r.max_residual = max_of(rep);
    r.details = entries_json(rep);
    std::vector<double> rq;
    for (const auto& g : cx.geometry()) rq.push_back(g.r_qs);
    r.details["qs_scalar_curvature_mean"] = Context::mean_of(rq).first;
    finish(r);
}

json params_json(const SolitonParameters& p) {
    return json{{"lambda", p.lambda}, {"mu", p.mu}, {"rho", p.rho}, {"q", p.q}, {"preset", to_string(p.preset)}};
}

void suite_soliton(Context& cx, SuiteResult& r) {
    cx.require_alpha();
    cx.resolve_lambda();
    const VectorField v = build_vector_field(cx.field_spec, cx.fx);
    const auto rep = soliton_sweep(cx.params, cx.m(), cx.s(), v, cx.kind, cx.points, r.tolerance, cx.sweep);
    r.max_residual = std::max({rep.max_residual_xi, rep.discrepancy_residual, rep.lie_route_residual});
    r.details = params_json(cx.params);
    r.details["lambda_source"] = cx.lambda_given ? "given" : "derived";
    r.details["connection"] = to_string(rep.kind);
    r.details["residual_with_xi"] = rep.max_residual_xi;
    r.details["residual_full_tensor"] = rep.max_residual;
    r.details["connection_discrepancy"] = rep.discrepancy_residual;
    r.details["lie_derivative_routes"] = rep.lie_route_residual;
    r.details["relation_residual"] = rep.relation_residual;
    r.details["scalar_curvature_mean"] = rep.r_mean;
    r.details["classification"] = to_string(rep.classification);
    if (rep.warning) r.details["warning"] = *rep.warning;
    r.pass = rep.pass() && !std::isnan(r.max_residual);
}

void suite_constants(Context& cx, SuiteResult& r) {
    cx.require_alpha();
    const ConstantInputs in = cx.constant_inputs();
    const double relation = relation_sum(in);
    const double nm1 = in.n - 1;
    const double expected_gap = in.q * in.alpha * in.alpha * nm1 * nm1;
    const double scale = std::max({1.0, std::abs(relation), std::abs(expected_gap)});

    r.details = json::object();
    r.details["lambda_plus_mu"] = relation;
    r.details["scalar_curvature_mean"] = in.r;
    r.details["scalar_curvature_spread"] = cx.mean_r().second;
    r.details["div_xi_mean"] = in.div_xi;
    r.details["div_xi_spread"] = Context::mean_of(cx.divergences()).second;
    r.details["rho"] = in.rho;
    r.details["q"] = in.q;
    double worst = 0.0;
    for (auto mode : {ConstantsMode::relation_4_9, ConstantsMode::corollary_4_3_verbatim,
                      ConstantsMode::corollary_4_3_rederived}) {
        const SolvedConstants sc = solve_constants(in, mode);
        json j{{"sum", sc.sum}, {"relation_deviation", sc.relation_deviation},
               {"satisfies_relation", sc.satisfies_relation}};
        if (sc.lambda) j["lambda"] = *sc.lambda;
        if (sc.mu) j["mu"] = *sc.mu;
        r.details[std::string(to_string(mode))] = j;
        if (mode == ConstantsMode::corollary_4_3_rederived) {
            worst = std::max(worst, std::abs(sc.relation_deviation) / scale);
        } else if (mode == ConstantsMode::corollary_4_3_verbatim) {
            r.details["verbatim_expected_deviation"] = expected_gap;
            worst = std::max(worst, std::abs(sc.relation_deviation - expected_gap) / scale);
        }
    }
    r.max_residual = worst;
    finish(r);
}

void suite_laplacian(Context& cx, SuiteResult& r) {
    cx.require_alpha();
    cx.resolve_lambda();
    const ConstantInputs in = cx.constant_inputs();
    const SolvedConstants sc = solve_constants(in, ConstantsMode::corollary_4_3_rederived);
    SolitonParameters rederived = cx.params;
    rederived.lambda = *sc.lambda;
    rederived.mu = *sc.mu;
    const double bound_rederived = laplacian_bound(rederived, in.n, in.alpha, in.r);
    const double div_expected = in.alpha * (in.n - 1);

    Tally t;
    for (double d : cx.divergences()) t.observe("div_xi_vs_alpha_cosymplectic", std::abs(d - div_expected));
    t.observe("laplacian_vs_div_xi", std::abs(bound_rederived - in.div_xi));
    r.max_residual = t.max();
    r.details = t.to_json();
    r.details["laplacian_given_constants"] = laplacian_bound(cx.params, in.n, in.alpha, in.r);
    r.details["laplacian_rederived_constants"] = bound_rederived;
    r.details["div_xi_mean"] = in.div_xi;
    for (auto p : {Preset::ricci, Preset::yamabe, Preset::einstein}) {
        const auto pp = SolitonParameters::from_preset(p, cx.params.lambda, cx.params.mu);
        r.details["laplacian_" + std::string(to_string(p))] = laplacian_bound(pp, in.n, in.alpha, in.r);
    }
    finish(r);
}

void suite_classify(Context& cx, SuiteResult& r) {
    cx.require_alpha();
    cx.resolve_lambda();
    const auto [r_mean, r_spread] = cx.mean_r();
    const int n = cx.n();
    const auto hc = classify_harmonic(cx.params, n, cx.alpha(), r_mean, cx.convention);
    SolitonParameters at_harmonic = cx.params;
    at_harmonic.lambda = hc.lambda_harmonic;
    const double bound = laplacian_bound(at_harmonic, n, cx.alpha(), r_mean);
    const double scale = std::max({1.0, std::abs(hc.lhs), std::abs(hc.rhs), std::abs(hc.lambda_harmonic) * n});
    r.max_residual = std::abs(bound) / scale;
    r.details = json{
        {"lhs", hc.lhs},
        {"rhs", hc.rhs},
        {"by_inequality", to_string(hc.by_inequality)},
        {"lambda_harmonic", hc.lambda_harmonic},
        {"by_lambda", to_string(hc.by_lambda)},
        {"convention", to_string(hc.convention)},
        {"routes_agree", hc.routes_agree},
        {"given_lambda_classification",
         to_string(classify_lambda(cx.params.lambda, 1e-12 * std::max(1.0, std::abs(cx.params.lambda)),
                                   cx.convention))},
        {"scalar_curvature_mean", r_mean},
    };
    if (hc.asserted) {
        r.details["asserted"] = to_string(*hc.asserted);
        r.details["assertion_agrees"] = *hc.assertion_agrees;
    }
    finish(r);
}

void suite_conformal_killing(Context& cx, SuiteResult& r) {
    cx.require_alpha();
    cx.resolve_lambda();
    const VectorField v = build_vector_field(cx.field_spec, cx.fx);
    const auto lc = ConnectionField::levi_civita(cx.m());
    const auto qs = ConnectionField::quarter_symmetric(cx.m(), cx.s());
    Tally t;
    for (const Point& p : cx.points) {
        const Mat lie = lie_derivative_matrix(lc, v, p);
        const Mat direct = lie_derivative_matrix_qs_direct(qs, v, p);
        const Mat formula = lie_derivative_matrix_qs_formula(lie, cx.m().metric(p), cx.s().phi(cx.m(), p),
                                                             cx.s().eta(cx.m(), p), v(p));
        t.observe("qs_lie_derivative_routes", (direct - formula).cwiseAbs().maxCoeff());
    }
    const auto ck = conformal_killing(cx.m(), cx.s(), cx.params, v, cx.theta, cx.points, r.tolerance, cx.sweep);
    r.max_residual = t.max();
    r.details = t.to_json();
    r.details["theta"] = ck.theta;
    r.details["theta_supplied"] = ck.theta_supplied;
    r.details["theta_spread"] = ck.theta_spread;
    r.details["fit_residual"] = ck.fit_residual;
    r.details["conformal"] = ck.conformal;
    r.details["killing"] = ck.killing;
    r.details["homothetic"] = ck.homothetic;
    r.details["kappa"] = ck.kappa;
    r.details["phi_v_minus_kappa_xi"] = ck.residual;
    r.details["componentwise_residual"] = ck.residual_component;
    finish(r);
}

using SuiteFn = void (*)(Context&, SuiteResult&);

SuiteFn suite_function(const std::string& name) {
    static const std::map<std::string, SuiteFn> table = {
        {"axioms", suite_axioms},
        {"nijenhuis", suite_nijenhuis},
        {"alpha_cosymplectic", suite_alpha_cosymplectic},
        {"connection", suite_connection},
        {"torsion", suite_torsion},
        {"curvature_identities", suite_curvature},
        {"theorem_3_1", suite_theorem},
        {"soliton", suite_soliton},
        {"constants", suite_constants},
        {"laplacian", suite_laplacian},
        {"classify", suite_classify},
        {"conformal_killing", suite_conformal_killing},
    };
    return table.at(name);
}

Context make_context(const ManifoldSpecDocument& doc_in, const RunOptions& opts) {
    Context cx;
    cx.doc = doc_in;
    ManifoldSpecDocument& doc = cx.doc;
    if (opts.alpha) {
        if (!std::isfinite(*opts.alpha)) throw InputError("--alpha must be finite");
        doc.parameters["alpha"] = *opts.alpha;
    }
    cx.has_alpha = doc.parameters.count("alpha") > 0;
    if (opts.seed) doc.sample.seed = *opts.seed;
    if (opts.points) {
        if (*opts.points < 1) throw InputError("--points must be at least 1");
        if (doc.sample.is_explicit()) {
            if (*opts.points < doc.sample.points.size()) doc.sample.points.resize(*opts.points);
        } else {
            doc.sample.count = *opts.points;
        }
    }
    cx.fx = build_fixture(doc);
    cx.points = doc.sample.generate(doc.dimension);
    cx.sweep.seed = doc.sample.is_explicit() ? SweepOptions{}.seed : doc.sample.seed;

    if (doc.soliton) {
        const SolitonSpec& sp = *doc.soliton;
        cx.params.preset = sp.preset;
        if (sp.rho) cx.params.rho = *sp.rho;
        if (sp.q) cx.params.q = *sp.q;
        if (sp.mu) cx.params.mu = *sp.mu;
        if (sp.lambda) {
            cx.params.lambda = *sp.lambda;
            cx.lambda_given = true;
        }
        cx.field_spec = sp.vector_field;
        cx.theta = sp.theta;
        cx.kind = sp.connection;
        cx.convention = sp.convention;
    }
    if (opts.rho || opts.q) cx.params.preset = Preset::custom;
    if (opts.rho) cx.params.rho = *opts.rho;
    if (opts.q) cx.params.q = *opts.q;
    if (opts.mu) cx.params.mu = *opts.mu;
    if (opts.lambda) {
        cx.params.lambda = *opts.lambda;
        cx.lambda_given = true;
    }
    for (double x : {cx.params.rho, cx.params.q, cx.params.mu, cx.params.lambda}) {
        if (!std::isfinite(x)) throw InputError("soliton parameters must be finite");
    }
    return cx;
}

} // namespace

RunReport run(const ManifoldSpecDocument& doc, const RunOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> requested = opts.suites;
    if (requested.empty()) requested = doc.checks.empty() ? std::vector<std::string>{"all"} : doc.checks;
    const auto suites = resolve_suites(requested);
    if (opts.tol && !(*opts.tol > 0.0 && std::isfinite(*opts.tol))) throw InputError("--tol must be positive");

    Context cx = make_context(doc, opts);

    RunReport report;
    report.fixture = doc.name;
    for (const auto& [k, v] : cx.doc.parameters) report.parameters[k] = v;

    for (const auto& name : suites) {
        SuiteResult r;
        r.name = name;
        r.tolerance = opts.tol ? *opts.tol : opts.default_tol ? *opts.default_tol : default_tolerance(name);
        try {
            suite_function(name)(cx, r);
            if (!r.pass) r.failure = SuiteFailure::check;
        } catch (const InputError& e) {
            r.pass = false;
            r.failure = SuiteFailure::input;
            r.max_residual = std::nan("");
            r.details = json{{"error", e.what()}};
        } catch (const NumericalError& e) {
            r.pass = false;
            r.failure = SuiteFailure::numerical;
            r.max_residual = std::nan("");
            r.details = json{{"error", e.what()}};
        }
        report.suites.push_back(std::move(r));
    }

    report.parameters["soliton"] = params_json(cx.params);
    report.parameters["seed"] = cx.doc.sample.seed;
    report.parameters["points"] = cx.points.size();
    report.pass = std::all_of(report.suites.begin(), report.suites.end(), [](const auto& s) { return s.pass; });
    if (!opts.deterministic) {
        report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return report;
}

json to_json(const RunReport& report) {
    json suites = json::array();
    for (const auto& s : report.suites) {
        json j;
        j["name"] = s.name;
        // NaN has no JSON form; a failed evaluation reports null.
        j["max_residual"] = std::isnan(s.max_residual) ? json(nullptr) : json(s.max_residual);
        j["tolerance"] = s.tolerance;
        j["pass"] = s.pass;
        j["details"] = s.details;
        suites.push_back(std::move(j));
    }
    json out;
    out["version"] = report.version;
    out["fixture"] = report.fixture;
    out["parameters"] = report.parameters;
    out["suites"] = std::move(suites);
    out["pass"] = report.pass;
    if (report.wall_time_s) out["wall_time_s"] = *report.wall_time_s;
    return out;
}

std::string to_text(const RunReport& report) {
    std::ostringstream os;
    os << "cosoliton " << report.version << "  fixture: " << report.fixture << "\n";
    os.precision(6);
    for (const auto& s : report.suites) {
        os << (s.pass ? "PASS  " : "FAIL  ") << s.name << "  max_residual=";
        if (std::isnan(s.max_residual)) {
            os << "n/a";
        } else {
            os << std::scientific << s.max_residual;
        }
        os << "  tol=" << std::scientific << s.tolerance << std::defaultfloat << "\n";
        if (s.details.contains("error")) os << "      error: " << s.details["error"].get<std::string>() << "\n";
        if (s.details.contains("warning")) os << "      warning: " << s.details["warning"].get<std::string>() << "\n";
    }
    os << (report.pass ? "overall: PASS" : "overall: FAIL") << "\n";
    if (report.wall_time_s) os << "wall time: " << std::fixed << *report.wall_time_s << " s\n";
    return os.str();
}

int exit_status(const RunReport& report) {
    int status = 0;
    for (const auto& s : report.suites) {
        switch (s.failure) {
        case SuiteFailure::none: break;
        case SuiteFailure::check: status = std::max(status, 1); break;
        case SuiteFailure::input: status = std::max(status, 2); break;
        case SuiteFailure::numerical: status = std::max(status, 3); break;
        }
    }
    return status;
}

} // namespace cosoliton
