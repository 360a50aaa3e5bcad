#include "cosoliton/connections.hpp"

#include <algorithm>
#include <cmath>

namespace cosoliton {

std::string_view to_string(ConnectionKind kind) {
    return kind == ConnectionKind::levi_civita ? "levi_civita" : "quarter_symmetric";
}

std::vector<double> metric_derivatives(const FrameManifold& m, const Point& p) {
    const int n = m.dimension();
    std::vector<double> out(static_cast<std::size_t>(n) * n * n, 0.0);
    if (m.orthonormal()) return out;
    const Mat e = m.frame(p);
    const Mat jac = coordinate_jacobian(
        [&](const Point& q) {
            const Mat g = m.evaluate(*m.metric_expressions(), q);
            return Vec(Eigen::Map<const Vec>(g.data(), g.size()));
        },
        p);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                // column-major flattening: g(j,k) sits at k*n + j
                out[(static_cast<std::size_t>(i) * n + j) * n + k] = e.row(i).dot(jac.row(k * n + j));
            }
        }
    }
    return out;
}

Tensor3 levi_civita(const FrameManifold& m, const Point& p) {
    const int n = m.dimension();
    const Mat g = m.metric(p);
    const Tensor3 c = structure_constants(m, p);
    const auto dg = metric_derivatives(m, p);
    auto d = [&](int i, int j, int k) { return dg[(static_cast<std::size_t>(i) * n + j) * n + k]; };
    // g(e_a, [e_b, e_c])
    auto gb = [&](int a, int b, int cc) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += g(a, l) * c(l, b, cc);
        return s;
    };
    const Eigen::LDLT<Mat> solver(g);
    if (solver.info() != Eigen::Success) throw NumericalError("metric Gram matrix factorization failed");

    Tensor3 gamma(n);
    Vec rhs(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                rhs(k) = 0.5 * (d(i, j, k) + d(j, k, i) - d(k, i, j) - gb(i, j, k) - gb(j, i, k) + gb(k, i, j));
            }
            const Vec col = solver.solve(rhs);
            for (int k = 0; k < n; ++k) gamma(k, i, j) = col(k);
        }
    }
    return gamma;
}

Tensor3 quarter_symmetric(const Tensor3& lc, const AlmostContactStructure& s, const FrameManifold& m,
                          const Point& p) {
    const int n = lc.size();
    const Mat phi = s.phi(m, p);
    const Vec eta = s.eta(m, p);
    Tensor3 out = lc;
    for (int i = 0; i < n; ++i) {
        if (eta(i) == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) out(k, i, j) -= eta(i) * phi(k, j);
        }
    }
    return out;
}

ConnectionField ConnectionField::levi_civita(const FrameManifold& m) {
    return ConnectionField(ConnectionKind::levi_civita, &m, nullptr);
}

ConnectionField ConnectionField::quarter_symmetric(const FrameManifold& m, const AlmostContactStructure& s) {
    s.check_compatible(m);
    return ConnectionField(ConnectionKind::quarter_symmetric, &m, &s);
}

Tensor3 ConnectionField::coefficients(const Point& p) const {
    Tensor3 lc = cosoliton::levi_civita(*manifold_, p);
    if (kind_ == ConnectionKind::levi_civita) return lc;
    return cosoliton::quarter_symmetric(lc, *structure_, *manifold_, p);
}

Vec ConnectionField::covariant_derivative(const Vec& x, const VectorField& v, const Point& p) const {
    const Mat e = manifold_->frame(p);
    const Mat dv = coordinate_jacobian(v, p);
    return dv * (e.transpose() * x) + contract(coefficients(p), x, v(p));
}

Vec contract(const Tensor3& gamma, const Vec& x, const Vec& y) {
    const int n = gamma.size();
    Vec out = Vec::Zero(n);
    for (int i = 0; i < n; ++i) {
        if (x(i) == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            if (y(j) == 0.0) continue;
            const double w = x(i) * y(j);
            for (int k = 0; k < n; ++k) out(k) += w * gamma(k, i, j);
        }
    }
    return out;
}

Vec torsion(const ConnectionField& nabla, int i, int j, const Point& p) {
    const auto& m = nabla.manifold();
    const int n = m.dimension();
    if (i < 0 || i >= n || j < 0 || j >= n) throw InputError("frame index out of range");
    const Tensor3 gamma = nabla.coefficients(p);
    const Tensor3 c = structure_constants(m, p);
    Vec t(n);
    for (int k = 0; k < n; ++k) t(k) = gamma(k, i, j) - gamma(k, j, i) - c(k, i, j);
    return t;
}

double metric_compatibility(const ConnectionField& nabla, const Point& p) {
    const auto& m = nabla.manifold();
    const int n = m.dimension();
    const Mat g = m.metric(p);
    const Tensor3 gamma = nabla.coefficients(p);
    const auto dg = metric_derivatives(m, p);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                double r = dg[(static_cast<std::size_t>(i) * n + j) * n + k];
                for (int l = 0; l < n; ++l) r -= gamma(l, i, j) * g(l, k) + gamma(l, i, k) * g(j, l);
                worst = std::max(worst, std::abs(r));
            }
        }
    }
    return worst;
}

double torsion_free_residual(const ConnectionField& nabla, const Point& p) {
    const auto& m = nabla.manifold();
    const int n = m.dimension();
    const Tensor3 gamma = nabla.coefficients(p);
    const Tensor3 c = structure_constants(m, p);
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                worst = std::max(worst, std::abs(gamma(k, i, j) - gamma(k, j, i) - c(k, i, j)));
            }
        }
    }
    return worst;
}

double quarter_symmetric_torsion_residual(const ConnectionField& nabla, const AlmostContactStructure& s,
                                          const Point& p) {
    const auto& m = nabla.manifold();
    const int n = m.dimension();
    const Tensor3 gamma = nabla.coefficients(p);
    const Tensor3 c = structure_constants(m, p);
    const Mat g = m.metric(p);
    const Mat phi = s.phi(m, p);
    const Vec eta = s.eta(m, p);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Vec t(n);
            for (int k = 0; k < n; ++k) t(k) = gamma(k, i, j) - gamma(k, j, i) - c(k, i, j);
            const Vec expected = eta(j) * phi.col(i) - eta(i) * phi.col(j);
            worst = std::max(worst, metric_norm(t - expected, g));
        }
    }
    return worst;
}

} // namespace cosoliton
