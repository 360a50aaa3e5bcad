#include "cosoliton/solitons.hpp"

#include <algorithm>
#include <cmath>

namespace cosoliton {

std::string_view to_string(Preset p) {
    switch (p) {
    case Preset::ricci: return "ricci";
    case Preset::yamabe: return "yamabe";
    case Preset::einstein: return "einstein";
    case Preset::custom: return "custom";
    }
    return "custom";
}

std::optional<Preset> preset_from_string(std::string_view name) {
    for (Preset p : {Preset::ricci, Preset::yamabe, Preset::einstein, Preset::custom}) {
        if (to_string(p) == name) return p;
    }
    return std::nullopt;
}

SolitonParameters SolitonParameters::from_preset(Preset p, double lambda, double mu) {
    SolitonParameters out;
    out.lambda = lambda;
    out.mu = mu;
    out.apply_preset(p);
    return out;
}

void SolitonParameters::apply_preset(Preset p) {
    preset = p;
    switch (p) {
    case Preset::ricci: rho = 1.0; q = 0.0; break;
    case Preset::yamabe: rho = 0.0; q = 1.0; break;
    case Preset::einstein: rho = 1.0; q = -1.0; break;
    case Preset::custom: break;
    }
}

std::optional<std::string> SolitonParameters::warning() const {
    if (preset != Preset::custom) {
        const auto pinned = from_preset(preset);
        if (pinned.rho != rho || pinned.q != q) {
            return "preset " + std::string(to_string(preset)) + " requires (rho, q) = (" +
                   std::to_string(pinned.rho) + ", " + std::to_string(pinned.q) + ")";
        }
    }
    if (rho == 0.0) return std::string("rho = 0 does not define a *-eta-Ricci-Yamabe soliton");
    return std::nullopt;
}

std::string_view to_string(SolitonClass c) {
    switch (c) {
    case SolitonClass::expanding: return "expanding";
    case SolitonClass::steady: return "steady";
    case SolitonClass::shrinking: return "shrinking";
    }
    return "steady";
}

std::string_view to_string(SignConvention c) { return c == SignConvention::paper ? "paper" : "standard"; }

std::optional<SignConvention> convention_from_string(std::string_view name) {
    if (name == "paper") return SignConvention::paper;
    if (name == "standard") return SignConvention::standard;
    return std::nullopt;
}

SolitonClass classify_lambda(double lambda, double threshold, SignConvention convention) {
    if (std::abs(lambda) <= threshold) return SolitonClass::steady;
    const bool negative = lambda < 0.0;
    if (convention == SignConvention::paper) return negative ? SolitonClass::expanding : SolitonClass::shrinking;
    return negative ? SolitonClass::shrinking : SolitonClass::expanding;
}

Mat covariant_jacobian(const ConnectionField& nabla, const VectorField& v, const Point& p) {
    const auto& m = nabla.manifold();
    const int n = m.dimension();
    const Mat e = m.frame(p);
    const Mat dv = coordinate_jacobian(v, p);
    const Tensor3 gamma = nabla.coefficients(p);
    const Vec vp = v(p);
    Mat d = dv * e.transpose();
    for (int i = 0; i < n; ++i) d.col(i) += contract(gamma, unit_vector(n, i), vp);
    return d;
}

namespace {

Mat symmetrized(const Mat& gram, const Mat& d) {
    const Mat gd = gram * d;
    // gd(j, i) = g(nabla_i V, e_j)
    return gd.transpose() + gd;
}

void require_levi_civita(const ConnectionField& nabla, const char* what) {
    if (nabla.kind() != ConnectionKind::levi_civita) {
        throw InputError(std::string(what) + " requires the Levi-Civita connection");
    }
}

} // namespace

Mat lie_derivative_matrix(const ConnectionField& lc, const VectorField& v, const Point& p) {
    require_levi_civita(lc, "lie_derivative_metric");
    return symmetrized(lc.manifold().metric(p), covariant_jacobian(lc, v, p));
}

Mat lie_derivative_matrix_qs_direct(const ConnectionField& qs, const VectorField& v, const Point& p) {
    return symmetrized(qs.manifold().metric(p), covariant_jacobian(qs, v, p));
}

Mat lie_derivative_matrix_qs_formula(const Mat& lie, const Mat& gram, const Mat& phi, const Vec& eta,
                                     const Vec& v_at_p) {
    const Vec g_phi_v = gram * (phi * v_at_p);
    return lie - eta * g_phi_v.transpose() - g_phi_v * eta.transpose();
}

double lie_derivative_metric(const ConnectionField& lc, const VectorField& v, const Vec& y, const Vec& z,
                             const Point& p) {
    return (y.transpose() * lie_derivative_matrix(lc, v, p) * z).value();
}

QsLieDerivative lie_derivative_metric_qs(const ConnectionField& qs, const AlmostContactStructure& s,
                                         const VectorField& v, const Vec& y, const Vec& z, const Point& p) {
    if (qs.kind() != ConnectionKind::quarter_symmetric) {
        throw InputError("lie_derivative_metric_qs requires the quarter-symmetric connection");
    }
    const auto& m = qs.manifold();
    const auto lc = ConnectionField::levi_civita(m);
    const Mat lie = lie_derivative_matrix(lc, v, p);
    const Mat formula = lie_derivative_matrix_qs_formula(lie, m.metric(p), s.phi(m, p), s.eta(m, p), v(p));
    QsLieDerivative out;
    out.direct = (y.transpose() * lie_derivative_matrix_qs_direct(qs, v, p) * z).value();
    out.formula = (y.transpose() * formula * z).value();
    return out;
}

Mat soliton_tensor(const SolitonParameters& params, const PointGeometry& geo, const Mat& lie, ConnectionKind kind) {
    const double a2 = geo.alpha * geo.alpha;
    const double n = geo.n;
    const Mat eta_eta = geo.eta * geo.eta.transpose();
    if (kind == ConnectionKind::levi_civita) {
        const Mat s_star = geo.ricci + a2 * (n - 2) * geo.gram + a2 * eta_eta;
        return lie + 2.0 * params.rho * s_star + (2.0 * params.lambda - params.q * geo.r_star()) * geo.gram +
               2.0 * params.mu * eta_eta;
    }
    const double g_coeff = 2.0 * params.lambda + 2.0 * a2 * params.rho * (n - 2) - params.q * geo.r_qs -
                           params.q * a2 * (n - 1) * (n - 1);
    return lie + 2.0 * params.rho * geo.ricci_qs + g_coeff * geo.gram +
           (2.0 * params.mu + 2.0 * a2 * params.rho) * eta_eta;
}

double soliton_residual(const SolitonParameters& params, const FrameManifold& m, const AlmostContactStructure& s,
                        const VectorField& v, ConnectionKind kind, const Vec& y, const Vec& z, const Point& p) {
    const PointGeometry geo = evaluate_geometry(m, s, p);
    Mat lie;
    if (kind == ConnectionKind::levi_civita) {
        lie = lie_derivative_matrix(ConnectionField::levi_civita(m), v, p);
    } else {
        lie = lie_derivative_matrix_qs_direct(ConnectionField::quarter_symmetric(m, s), v, p);
    }
    return (y.transpose() * soliton_tensor(params, geo, lie, kind) * z).value();
}

std::string_view to_string(ConstantsMode m) {
    switch (m) {
    case ConstantsMode::relation_4_9: return "relation_4_9";
    case ConstantsMode::corollary_4_3_verbatim: return "corollary_4_3_verbatim";
    case ConstantsMode::corollary_4_3_rederived: return "corollary_4_3_rederived";
    }
    return "relation_4_9";
}

std::optional<ConstantsMode> constants_mode_from_string(std::string_view name) {
    for (auto m : {ConstantsMode::relation_4_9, ConstantsMode::corollary_4_3_verbatim,
                   ConstantsMode::corollary_4_3_rederived}) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

double relation_sum(const ConstantInputs& in) {
    const double nm1 = in.n - 1;
    return in.q * in.r / 2.0 + in.q * in.alpha * in.alpha * nm1 * nm1 / 2.0;
}

SolvedConstants solve_constants(const ConstantInputs& in, ConstantsMode mode) {
    if (in.n <= 1) throw InputError("soliton constants need dimension n > 1");
    const double nm1 = in.n - 1;
    const double a2 = in.alpha * in.alpha;
    const double relation = relation_sum(in);
    const double trace_part = a2 * in.rho * nm1 + (in.div_xi + in.rho * in.r) / nm1;

    SolvedConstants out;
    out.mode = mode;
    switch (mode) {
    case ConstantsMode::relation_4_9:
        out.sum = relation;
        break;
    case ConstantsMode::corollary_4_3_verbatim:
        out.lambda = in.q * in.r / 2.0 - in.q * a2 * nm1 * nm1 / 2.0 - trace_part;
        out.mu = trace_part;
        out.sum = *out.lambda + *out.mu;
        break;
    case ConstantsMode::corollary_4_3_rederived:
        out.lambda = relation - trace_part;
        out.mu = trace_part;
        out.sum = *out.lambda + *out.mu;
        break;
    }
    out.relation_deviation = relation - out.sum;
    out.satisfies_relation = std::abs(out.relation_deviation) <= 1e-12 * std::max(1.0, std::abs(relation));
    return out;
}

double divergence(const ConnectionField& lc, const VectorField& v, const Point& p) {
    require_levi_civita(lc, "divergence");
    const Mat gram = lc.manifold().metric(p);
    const Mat basis = orthonormal_basis(gram);
    const Mat d = covariant_jacobian(lc, v, p);
    double div = 0.0;
    for (int a = 0; a < basis.cols(); ++a) {
        const Vec f = basis.col(a);
        div += (f.transpose() * gram * (d * f)).value();
    }
    return div;
}

double laplacian_bound(const SolitonParameters& params, int n, double alpha, double r) {
    const double a2 = alpha * alpha;
    const double nm1 = n - 1;
    const double bracket = params.lambda + a2 * params.rho * (n - 2) - params.q * r / 2.0 -
                           params.q * a2 * nm1 * nm1 / 2.0;
    return -n * bracket - params.mu - params.rho * (a2 + r);
}

HarmonicClassification classify_harmonic(const SolitonParameters& params, int n, double alpha, double r,
                                         SignConvention convention, double rel_threshold) {
    const double a2 = alpha * alpha;
    const double nm1 = n - 1;
    HarmonicClassification out;
    out.convention = convention;
    out.lhs = params.q / 2.0 * (r + a2 * nm1 * nm1);
    const double trace_part = params.mu + params.rho * (a2 + r);
    out.rhs = trace_part + a2 * params.rho * (n - 2);

    const double gap = out.lhs - out.rhs;
    const double threshold = rel_threshold * std::max(std::abs(out.lhs), std::abs(out.rhs));
    if (std::abs(gap) <= threshold) {
        out.by_inequality = SolitonClass::steady;
    } else {
        out.by_inequality = gap > 0.0 ? SolitonClass::expanding : SolitonClass::shrinking;
    }

    const double shift = a2 * params.rho * (n - 2);
    const double scaled = trace_part / n;
    out.lambda_harmonic = out.lhs - shift - scaled;
    const double lambda_threshold =
        rel_threshold * std::max({std::abs(out.lhs), std::abs(shift), std::abs(scaled)});
    out.by_lambda = classify_lambda(out.lambda_harmonic, lambda_threshold, convention);
    out.routes_agree = out.by_lambda == out.by_inequality;

    const bool ricci = params.rho == 1.0 && params.q == 0.0;
    const bool einstein = params.rho == 1.0 && params.q == -1.0;
    if (ricci || einstein) {
        out.asserted = SolitonClass::shrinking;
        out.assertion_agrees = out.by_inequality == SolitonClass::shrinking;
    }
    return out;
}

ConformalFit fit_conformal_factor(const Mat& lie, const Mat& gram, double noise) {
    ConformalFit fit;
    if (lie.norm() <= noise) {
        fit.killing = true;
        fit.residual = lie.norm();
        return fit;
    }
    fit.theta = (lie.array() * gram.array()).sum() / (2.0 * gram.squaredNorm());
    fit.residual = (lie - 2.0 * fit.theta * gram).norm();
    return fit;
}

ConformalKillingResult conformal_killing(const FrameManifold& m, const AlmostContactStructure& s,
                                         const SolitonParameters& params, const VectorField& v,
                                         std::optional<double> theta, const std::vector<Point>& points, double tol,
                                         const SweepOptions& opts) {
    ConformalKillingResult out;
    out.theta_supplied = theta.has_value();
    if (points.empty()) return out;
    const auto lc = ConnectionField::levi_civita(m);
    const int n = m.dimension();
    const double a2 = s.alpha() * s.alpha();
    const double nm1 = n - 1;

    std::vector<double> thetas;
    std::vector<double> kappas;
    bool all_killing = true;
    Rng rng(opts.seed);
    for (const Point& p : points) {
        const Mat gram = m.metric(p);
        const Mat lie = lie_derivative_matrix(lc, v, p);
        const ConformalFit fit = fit_conformal_factor(lie, gram, tol);
        out.fit_residual = std::max(out.fit_residual, fit.residual);
        all_killing = all_killing && fit.killing;
        const double th = theta ? *theta : fit.theta;
        thetas.push_back(fit.theta);

        const PointGeometry geo = evaluate_geometry(m, s, p);
        const double kappa = 2.0 * th + 2.0 * params.lambda + 2.0 * params.mu - params.q * geo.r -
                             params.q * a2 * nm1 * nm1;
        kappas.push_back(kappa);
        const Vec phi_v = geo.phi * v(p);
        out.residual = std::max(out.residual, metric_norm(phi_v - kappa * geo.xi, gram));
        for (int i = 0; i < n + opts.random_vectors; ++i) {
            const Vec y = i < n ? unit_vector(n, i) : random_unit_vector(rng, gram);
            out.residual_component =
                std::max(out.residual_component, std::abs(geo.g(y, phi_v) - kappa * geo.eta.dot(y)));
        }
        ++out.samples;
    }

    auto mean_of = [](const std::vector<double>& xs) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s / static_cast<double>(xs.size());
    };
    const double fit_mean = mean_of(thetas);
    for (double t : thetas) out.theta_spread = std::max(out.theta_spread, std::abs(t - fit_mean));
    out.theta = theta ? *theta : fit_mean;
    out.kappa = mean_of(kappas);
    out.conformal = out.fit_residual <= tol;
    out.killing = all_killing;
    out.homothetic = out.conformal && out.theta_spread <= tol;
    return out;
}

bool SolitonReport::pass() const {
    if (warning) return false;
    return max_residual_xi <= tolerance && discrepancy_residual <= tolerance && lie_route_residual <= tolerance;
}

SolitonReport soliton_sweep(const SolitonParameters& params, const FrameManifold& m, const AlmostContactStructure& s,
                            const VectorField& v, ConnectionKind kind, const std::vector<Point>& points, double tol,
                            const SweepOptions& opts) {
    SolitonReport out;
    out.kind = kind;
    out.params = params;
    out.tolerance = tol;
    out.warning = params.warning();
    if (points.empty()) return out;

    const auto lc = ConnectionField::levi_civita(m);
    const auto qs = ConnectionField::quarter_symmetric(m, s);
    const int n = m.dimension();

    std::vector<double> rs;
    Rng rng(opts.seed);
    for (const Point& p : points) {
        const PointGeometry geo = evaluate_geometry(m, s, p);
        rs.push_back(geo.r);
        const Mat lie = lie_derivative_matrix(lc, v, p);
        const Mat lie_qs = lie_derivative_matrix_qs_direct(qs, v, p);
        const Mat lie_qs_formula = lie_derivative_matrix_qs_formula(lie, geo.gram, geo.phi, geo.eta, v(p));
        const Mat t_lc = soliton_tensor(params, geo, lie, ConnectionKind::levi_civita);
        const Mat t_qs = soliton_tensor(params, geo, lie_qs, ConnectionKind::quarter_symmetric);
        const Mat& t = kind == ConnectionKind::levi_civita ? t_lc : t_qs;

        std::vector<Vec> probes;
        for (int i = 0; i < n; ++i) probes.push_back(unit_vector(n, i));
        for (int i = 0; i < opts.random_vectors; ++i) probes.push_back(random_unit_vector(rng, geo.gram));

        for (const Vec& y : probes) {
            out.max_residual_xi = std::max(out.max_residual_xi, std::abs((y.transpose() * t * geo.xi).value()));
            for (const Vec& z : probes) {
                out.max_residual = std::max(out.max_residual, std::abs((y.transpose() * t * z).value()));
                const double diff = (y.transpose() * (t_qs - t_lc - (lie_qs - lie)) * z).value();
                const double expected = 2.0 * geo.alpha * params.rho * geo.g(geo.phi * y, z);
                out.discrepancy_residual = std::max(out.discrepancy_residual, std::abs(diff - expected));
                out.lie_route_residual = std::max(
                    out.lie_route_residual, std::abs((y.transpose() * (lie_qs - lie_qs_formula) * z).value()));
            }
        }
        ++out.samples;
    }

    double sum = 0.0;
    for (double r : rs) sum += r;
    out.r_mean = sum / static_cast<double>(rs.size());
    for (double r : rs) out.r_spread = std::max(out.r_spread, std::abs(r - out.r_mean));

    ConstantInputs in;
    in.n = n;
    in.alpha = s.alpha();
    in.rho = params.rho;
    in.q = params.q;
    in.r = out.r_mean;
    out.relation_residual = std::abs(params.lambda + params.mu - relation_sum(in));
    out.classification = classify_lambda(params.lambda, 1e-12 * std::max(1.0, std::abs(params.lambda)));
    return out;
}

} // namespace cosoliton
