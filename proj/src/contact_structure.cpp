#include "cosoliton/contact_structure.hpp"

#include "cosoliton/connections.hpp"

#include <cmath>

namespace cosoliton {

namespace {

void require_square_phi(const ExprMatrix& phi) {
    const std::size_t n = phi.size();
    if (n == 0) throw InputError("phi must be a non-empty square matrix");
    for (std::size_t r = 0; r < n; ++r) {
        if (phi[r].size() != n) {
            throw InputError("phi row " + std::to_string(r) + " has " + std::to_string(phi[r].size()) +
                             " entries, expected " + std::to_string(n));
        }
    }
}

// Flattened (column-major) Jacobian of phi: row (j*n + k) holds d phi(k,j) / d x^a.
Mat phi_jacobian(const AlmostContactStructure& s, const FrameManifold& m, const Point& p) {
    return coordinate_jacobian(
        [&](const Point& q) {
            const Mat ph = s.phi(m, q);
            return Vec(Eigen::Map<const Vec>(ph.data(), ph.size()));
        },
        p);
}

// X(phi) as a matrix, for X given in coordinate components.
Mat phi_derivative_along(const Mat& jac, const Vec& x_coord, int n) {
    const Vec flat = jac * x_coord;
    return Eigen::Map<const Mat>(flat.data(), n, n);
}

// Frame vectors at which identities are probed: all e_i, then random g-unit vectors.
std::vector<Vec> probe_vectors(Rng& rng, const Mat& gram, int random_count) {
    const int n = static_cast<int>(gram.rows());
    std::vector<Vec> out;
    for (int i = 0; i < n; ++i) out.push_back(unit_vector(n, i));
    for (int r = 0; r < random_count; ++r) out.push_back(random_unit_vector(rng, gram));
    return out;
}

} // namespace

AlmostContactStructure::AlmostContactStructure(ExprMatrix phi, int xi_index, double alpha)
    : phi_(std::move(phi)), xi_index_(xi_index), alpha_(alpha) {
    require_square_phi(phi_);
    if (xi_index < 0 || xi_index >= dimension()) throw InputError("xi index out of range");
    if (!std::isfinite(alpha)) throw InputError("alpha is not finite");
}

AlmostContactStructure::AlmostContactStructure(ExprMatrix phi, std::vector<Expression> xi_components, double alpha)
    : phi_(std::move(phi)), xi_components_(std::move(xi_components)), alpha_(alpha) {
    require_square_phi(phi_);
    if (static_cast<int>(xi_components_.size()) != dimension()) {
        throw InputError("xi has " + std::to_string(xi_components_.size()) + " components, expected " +
                         std::to_string(dimension()));
    }
    if (!std::isfinite(alpha)) throw InputError("alpha is not finite");
}

void AlmostContactStructure::check_compatible(const FrameManifold& m) const {
    if (m.dimension() != dimension()) {
        throw InputError("structure dimension " + std::to_string(dimension()) + " does not match manifold dimension " +
                         std::to_string(m.dimension()));
    }
    for (int k = 0; k < dimension(); ++k) {
        for (int j = 0; j < dimension(); ++j) m.check_identifiers(phi_[k][j], "phi");
    }
    for (const auto& x : xi_components_) m.check_identifiers(x, "xi");
}

Mat AlmostContactStructure::phi(const FrameManifold& m, const Point& p) const { return m.evaluate(phi_, p); }

Vec AlmostContactStructure::xi(const FrameManifold& m, const Point& p) const {
    if (xi_index_) return unit_vector(dimension(), *xi_index_);
    const Bindings b = m.bindings(p);
    Vec v(dimension());
    for (int i = 0; i < dimension(); ++i) v(i) = xi_components_[i].evaluate(b);
    return v;
}

Vec AlmostContactStructure::eta(const FrameManifold& m, const Point& p) const { return m.metric(p) * xi(m, p); }

Vec random_unit_vector(Rng& rng, const Mat& gram) {
    const int n = static_cast<int>(gram.rows());
    for (;;) {
        Vec v = rng.vector(n);
        const double norm = metric_norm(v, gram);
        if (norm > 1e-3) return v / norm;
    }
}

StructureCheckReport check_axioms(const AlmostContactStructure& s, const FrameManifold& m,
                                  const std::vector<Point>& points, double tol, const SweepOptions& opts) {
    s.check_compatible(m);
    StructureCheckReport report;
    report.tolerance = tol;
    IdentityResult phi_squared{"phi_squared", 0.0, tol};
    IdentityResult eta_xi{"eta_of_xi", 0.0, tol};
    IdentityResult eta_phi{"eta_after_phi", 0.0, tol};
    IdentityResult phi_xi{"phi_of_xi", 0.0, tol};
    IdentityResult metric_phi{"metric_under_phi", 0.0, tol};
    IdentityResult phi_skew{"phi_skew_adjoint", 0.0, tol};
    IdentityResult eta_metric{"eta_is_metric_dual", 0.0, tol};
    IdentityResult form_skew{"fundamental_form_skew", 0.0, tol};

    Rng rng(opts.seed);
    for (const Point& p : points) {
        const Mat g = m.metric(p);
        const Mat phi = s.phi(m, p);
        const Vec xi = s.xi(m, p);
        const Vec eta = s.eta(m, p);

        eta_xi.observe(std::abs(eta.dot(xi) - 1.0));
        phi_xi.observe(metric_norm(phi * xi, g));

        const auto probes = probe_vectors(rng, g, opts.random_vectors);
        for (const Vec& x : probes) {
            phi_squared.observe(metric_norm(phi * (phi * x) + x - eta.dot(x) * xi, g));
            eta_phi.observe(std::abs(eta.dot(phi * x)));
            eta_metric.observe(std::abs((x.transpose() * g * xi).value() - eta.dot(x)));
        }
        for (std::size_t a = 0; a < probes.size(); ++a) {
            for (std::size_t b = a; b < probes.size(); ++b) {
                const Vec& x = probes[a];
                const Vec& y = probes[b];
                const double gxy = (x.transpose() * g * y).value();
                const double g_phix_phiy = ((phi * x).transpose() * g * (phi * y)).value();
                metric_phi.observe(std::abs(g_phix_phiy - gxy + eta.dot(x) * eta.dot(y)));
                const double g_x_phiy = (x.transpose() * g * (phi * y)).value();
                const double g_phix_y = ((phi * x).transpose() * g * y).value();
                phi_skew.observe(std::abs(g_x_phiy + g_phix_y));
                const double form_xy = g_phix_y;
                const double form_yx = ((phi * y).transpose() * g * x).value();
                form_skew.observe(std::abs(form_xy + form_yx));
            }
        }
    }
    report.entries = {phi_squared, eta_xi, eta_phi, phi_xi, metric_phi, phi_skew, eta_metric, form_skew};
    return report;
}

Vec nijenhuis(const AlmostContactStructure& s, const FrameManifold& m, const VectorField& x,
              const VectorField& y, const Point& p) {
    s.check_compatible(m);
    const VectorField phi_x = [&](const Point& q) { return Vec(s.phi(m, q) * x(q)); };
    const VectorField phi_y = [&](const Point& q) { return Vec(s.phi(m, q) * y(q)); };
    const Mat phi = s.phi(m, p);
    const Vec xy = bracket(m, x, y, p);

    Vec n_phi = bracket(m, phi_x, phi_y, p) - phi * bracket(m, phi_x, y, p) - phi * bracket(m, x, phi_y, p) +
                phi * (phi * xy);

    const ScalarField eta_x = [&](const Point& q) { return s.eta(m, q).dot(x(q)); };
    const ScalarField eta_y = [&](const Point& q) { return s.eta(m, q).dot(y(q)); };
    const double d_eta = 0.5 * (directional_derivative(m, eta_y, x(p), p) -
                                directional_derivative(m, eta_x, y(p), p) - s.eta(m, p).dot(xy));
    return n_phi + 2.0 * d_eta * s.xi(m, p);
}

Vec phi_covariant_derivative(const AlmostContactStructure& s, const FrameManifold& m,
                             const ConnectionField& nabla, const Vec& x, const Vec& y, const Point& p) {
    const int n = m.dimension();
    const Mat e = m.frame(p);
    const Mat phi = s.phi(m, p);
    const Tensor3 gamma = nabla.coefficients(p);
    const Mat dphi = phi_derivative_along(phi_jacobian(s, m, p), e.transpose() * x, n);
    return dphi * y + contract(gamma, x, phi * y) - phi * contract(gamma, x, y);
}

StructureCheckReport verify_alpha_cosymplectic(const AlmostContactStructure& s, const FrameManifold& m,
                                               const ConnectionField& nabla, const std::vector<Point>& points,
                                               double tol, const SweepOptions& opts) {
    s.check_compatible(m);
    if (nabla.kind() != ConnectionKind::levi_civita) {
        throw InputError("alpha-cosymplectic check requires the Levi-Civita connection");
    }
    const int n = m.dimension();
    const double alpha = s.alpha();
    StructureCheckReport report;
    report.tolerance = tol;
    IdentityResult phi_rel{"phi_derivative", 0.0, tol};
    IdentityResult xi_rel{"xi_derivative", 0.0, tol};

    Rng rng(opts.seed);
    const VectorField xi_field = [&](const Point& q) { return s.xi(m, q); };
    for (const Point& p : points) {
        const Mat e = m.frame(p);
        const Mat g = m.metric(p);
        const Mat phi = s.phi(m, p);
        const Vec xi = s.xi(m, p);
        const Vec eta = s.eta(m, p);
        const Tensor3 gamma = nabla.coefficients(p);
        const Mat jac = phi_jacobian(s, m, p);
        const Mat dxi = coordinate_jacobian(xi_field, p);

        const auto probes = probe_vectors(rng, g, opts.random_vectors);
        for (const Vec& x : probes) {
            const Vec x_coord = e.transpose() * x;
            const Vec nabla_xi = dxi * x_coord + contract(gamma, x, xi);
            xi_rel.observe(metric_norm(nabla_xi - alpha * (x - eta.dot(x) * xi), g));

            const Mat dphi = phi_derivative_along(jac, x_coord, n);
            for (const Vec& y : probes) {
                const Vec lhs = dphi * y + contract(gamma, x, phi * y) - phi * contract(gamma, x, y);
                const double g_phix_y = ((phi * x).transpose() * g * y).value();
                const Vec rhs = alpha * (g_phix_y * xi - eta.dot(y) * (phi * x));
                phi_rel.observe(metric_norm(lhs - rhs, g));
            }
        }
    }
    report.entries = {phi_rel, xi_rel};
    return report;
}

} // namespace cosoliton
