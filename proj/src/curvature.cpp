#include "cosoliton/curvature.hpp"

#include <cmath>

namespace cosoliton {

Tensor4 curvature_tensor(const ConnectionField& nabla, const Point& p) {
    const auto& m = nabla.manifold();
    const int n = m.dimension();
    const Mat e = m.frame(p);
    const Tensor3 gamma = nabla.coefficients(p);
    const Tensor3 c = structure_constants(m, p);
    const Mat dgamma = coordinate_jacobian(
        [&](const Point& q) {
            const Tensor3 gq = nabla.coefficients(q);
            return Vec(Eigen::Map<const Vec>(gq.data().data(), static_cast<Eigen::Index>(gq.data().size())));
        },
        p, kNestedDerivativeStep);

    // e_i(Gamma(l,j,k)); flattened index of (l,j,k) matches Tensor3 storage.
    auto d = [&](int i, int l, int j, int k) {
        const auto row = (static_cast<Eigen::Index>(l) * n + j) * n + k;
        return dgamma.row(row).dot(e.row(i));
    };

    Tensor4 r(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            for (int k = 0; k < n; ++k) {
                for (int l = 0; l < n; ++l) {
                    double v = d(i, l, j, k) - d(j, l, i, k);
                    for (int mm = 0; mm < n; ++mm) {
                        v += gamma(mm, j, k) * gamma(l, i, mm) - gamma(mm, i, k) * gamma(l, j, mm) -
                             c(mm, i, j) * gamma(l, mm, k);
                    }
                    r(l, i, j, k) = v;
                }
            }
        }
    }
    return r;
}

Vec apply_curvature(const Tensor4& r, const Vec& x, const Vec& y, const Vec& z) {
    const int n = r.size();
    Vec out = Vec::Zero(n);
    for (int i = 0; i < n; ++i) {
        if (x(i) == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            if (y(j) == 0.0) continue;
            for (int k = 0; k < n; ++k) {
                const double w = x(i) * y(j) * z(k);
                if (w == 0.0) continue;
                for (int l = 0; l < n; ++l) out(l) += w * r(l, i, j, k);
            }
        }
    }
    return out;
}

Vec curvature(const ConnectionField& nabla, const Vec& x, const Vec& y, const Vec& z, const Point& p) {
    return apply_curvature(curvature_tensor(nabla, p), x, y, z);
}

Vec curvature_qs_direct(const ConnectionField& qs, const Vec& x, const Vec& y, const Vec& z, const Point& p) {
    if (qs.kind() != ConnectionKind::quarter_symmetric) {
        throw InputError("curvature_qs_direct needs the quarter-symmetric connection");
    }
    return curvature(qs, x, y, z, p);
}

namespace {

Vec qs_correction(double alpha, const Mat& gram, const Mat& phi, const Vec& xi, const Vec& eta, const Vec& x,
                  const Vec& y, const Vec& z) {
    const double ex = eta.dot(x);
    const double ey = eta.dot(y);
    const double ez = eta.dot(z);
    const double g_phiy_z = ((phi * y).transpose() * gram * z).value();
    const double g_phix_z = ((phi * x).transpose() * gram * z).value();
    return alpha * (ex * g_phiy_z * xi - ey * g_phix_z * xi - ex * ez * (phi * y) + ey * ez * (phi * x));
}

// The lowered quarter-symmetric curvature predicted from R(X,Y,Z,W).
double lowered_prediction(const PointGeometry& geo, double r_xyzw, const Vec& x, const Vec& y, const Vec& z,
                          const Vec& w) {
    const double a = geo.alpha;
    const double ex = geo.eta.dot(x);
    const double ey = geo.eta.dot(y);
    const double ez = geo.eta.dot(z);
    const double ew = geo.eta.dot(w);
    return r_xyzw + a * ex * ew * geo.g(geo.phi * y, z) - a * ey * ew * geo.g(geo.phi * x, z) -
           a * ex * ez * geo.g(geo.phi * y, w) + a * ey * ez * geo.g(geo.phi * x, w);
}

} // namespace

Vec curvature_qs_from_levi_civita(const Vec& r_xyz, const AlmostContactStructure& s, const FrameManifold& m,
                                  const Vec& x, const Vec& y, const Vec& z, const Point& p) {
    return r_xyz + qs_correction(s.alpha(), m.metric(p), s.phi(m, p), s.xi(m, p), s.eta(m, p), x, y, z);
}

Vec curvature_qs_from_levi_civita(const PointGeometry& geo, const Vec& x, const Vec& y, const Vec& z) {
    return apply_curvature(geo.riemann, x, y, z) +
           qs_correction(geo.alpha, geo.gram, geo.phi, geo.xi, geo.eta, x, y, z);
}

Mat ricci_matrix(const Tensor4& r, const Mat& gram) {
    const int n = r.size();
    const Mat basis = orthonormal_basis(gram);
    Mat s = Mat::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        const Vec f = basis.col(a);
        const Vec gf = gram * f;
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                s(j, k) += gf.dot(apply_curvature(r, f, unit_vector(n, j), unit_vector(n, k)));
            }
        }
    }
    return s;
}

double ricci(const ConnectionField& nabla, const Vec& y, const Vec& z, const Point& p) {
    const Mat s = ricci_matrix(curvature_tensor(nabla, p), nabla.manifold().metric(p));
    return (y.transpose() * s * z).value();
}

double metric_trace(const Mat& form, const Mat& gram) {
    const Mat basis = orthonormal_basis(gram);
    double t = 0.0;
    for (int a = 0; a < basis.cols(); ++a) t += (basis.col(a).transpose() * form * basis.col(a)).value();
    return t;
}

double star_scalar(double r, double alpha, int n) {
    const double nm1 = n - 1;
    return r + alpha * alpha * nm1 * nm1;
}

ScalarPair scalar_curvatures(const ConnectionField& lc, const ConnectionField& qs, const AlmostContactStructure& s,
                             const Point& p) {
    const auto& m = lc.manifold();
    const Mat g = m.metric(p);
    ScalarPair out;
    out.r = metric_trace(ricci_matrix(curvature_tensor(lc, p), g), g);
    out.r_qs = metric_trace(ricci_matrix(curvature_tensor(qs, p), g), g);
    out.r_star = star_scalar(out.r, s.alpha(), m.dimension());
    return out;
}

double star_ricci(double s_yz, const AlmostContactStructure& s, const FrameManifold& m, const Vec& y, const Vec& z,
                  const Point& p) {
    const double a2 = s.alpha() * s.alpha();
    const Mat g = m.metric(p);
    const Vec eta = s.eta(m, p);
    return s_yz + a2 * (m.dimension() - 2) * (y.transpose() * g * z).value() + a2 * eta.dot(y) * eta.dot(z);
}

double PointGeometry::s_star(const Vec& y, const Vec& z) const {
    const double a2 = alpha * alpha;
    return s(y, z) + a2 * (n - 2) * g(y, z) + a2 * eta.dot(y) * eta.dot(z);
}

PointGeometry evaluate_geometry(const FrameManifold& m, const AlmostContactStructure& s, const Point& p) {
    s.check_compatible(m);
    const auto lc = ConnectionField::levi_civita(m);
    const auto qs = ConnectionField::quarter_symmetric(m, s);
    PointGeometry geo;
    geo.point = p;
    geo.n = m.dimension();
    geo.alpha = s.alpha();
    geo.frame = m.frame(p);
    geo.gram = m.metric(p);
    geo.basis = orthonormal_basis(geo.gram);
    geo.phi = s.phi(m, p);
    geo.xi = s.xi(m, p);
    geo.eta = geo.gram * geo.xi;
    geo.c = structure_constants(m, p);
    geo.gamma = levi_civita(m, p);
    geo.gamma_qs = quarter_symmetric(geo.gamma, s, m, p);
    geo.riemann = curvature_tensor(lc, p);
    geo.riemann_qs = curvature_tensor(qs, p);
    geo.ricci = ricci_matrix(geo.riemann, geo.gram);
    geo.ricci_qs = ricci_matrix(geo.riemann_qs, geo.gram);
    geo.r = metric_trace(geo.ricci, geo.gram);
    geo.r_qs = metric_trace(geo.ricci_qs, geo.gram);
    return geo;
}

double ricci_asymmetry(const PointGeometry& geo, const Vec& y, const Vec& z) {
    return std::abs(geo.s_qs(y, z) - geo.s_qs(z, y));
}

namespace {

struct Probe {
    Vec x, y, z, w;
};

// Frame-vector quadruples: every (e_i, e_j, e_k, e_l) with l == k rotated,
// plus random g-unit quadruples.
std::vector<Probe> make_probes(Rng& rng, const Mat& gram, int random_count) {
    const int n = static_cast<int>(gram.rows());
    std::vector<Probe> out;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                out.push_back({unit_vector(n, i), unit_vector(n, j), unit_vector(n, k), unit_vector(n, (i + j + k) % n)});
            }
        }
    }
    for (int r = 0; r < random_count; ++r) {
        out.push_back({random_unit_vector(rng, gram), random_unit_vector(rng, gram), random_unit_vector(rng, gram),
                       random_unit_vector(rng, gram)});
    }
    return out;
}

} // namespace

std::vector<CurvatureReport> check_levi_civita_identities(const FrameManifold& m, const AlmostContactStructure& s,
                                                          const std::vector<Point>& points, double tol,
                                                          const SweepOptions& opts) {
    CurvatureReport r_xi{"curvature_with_xi_last", 0.0, tol};
    CurvatureReport r_xi_first{"curvature_with_xi_first", 0.0, tol};
    CurvatureReport r_xi_xi{"curvature_with_xi_twice", 0.0, tol};
    CurvatureReport eta_r{"eta_of_curvature", 0.0, tol};
    CurvatureReport s_xi{"ricci_with_xi", 0.0, tol};
    CurvatureReport bianchi{"first_bianchi", 0.0, tol};

    Rng rng(opts.seed);
    for (const Point& p : points) {
        const PointGeometry geo = evaluate_geometry(m, s, p);
        const double a2 = geo.alpha * geo.alpha;
        const Vec& xi = geo.xi;
        auto norm = [&](const Vec& v) { return metric_norm(v, geo.gram); };
        for (const Probe& pr : make_probes(rng, geo.gram, opts.random_vectors)) {
            const Vec& x = pr.x;
            const Vec& y = pr.y;
            const Vec& z = pr.z;
            const double ex = geo.eta.dot(x);
            const double ey = geo.eta.dot(y);
            r_xi.observe(norm(apply_curvature(geo.riemann, x, y, xi) - a2 * (ex * y - ey * x)));
            r_xi_first.observe(norm(apply_curvature(geo.riemann, xi, x, y) - a2 * (ey * x - geo.g(x, y) * xi)));
            r_xi_xi.observe(norm(apply_curvature(geo.riemann, xi, x, xi) - a2 * (x - ex * xi)));
            const Vec rxyz = apply_curvature(geo.riemann, x, y, z);
            eta_r.observe(std::abs(geo.eta.dot(rxyz) - a2 * (ey * geo.g(x, z) - ex * geo.g(y, z))));
            s_xi.observe(std::abs(geo.s(x, xi) + a2 * (geo.n - 1) * ex));
            const Vec cyc = rxyz + apply_curvature(geo.riemann, y, z, x) + apply_curvature(geo.riemann, z, x, y);
            bianchi.observe(norm(cyc));
        }
    }
    return {r_xi, r_xi_first, r_xi_xi, eta_r, s_xi, bianchi};
}

std::vector<CurvatureReport> check_quarter_symmetric_identities(const FrameManifold& m,
                                                                const AlmostContactStructure& s,
                                                                const std::vector<Point>& points, double tol,
                                                                const SweepOptions& opts) {
    CurvatureReport skew_last{"qs_skew_last_pair", 0.0, tol};
    CurvatureReport skew_first{"qs_skew_first_pair", 0.0, tol};
    CurvatureReport ricci_xi{"qs_ricci_with_xi", 0.0, tol};
    CurvatureReport asym{"qs_ricci_asymmetry", 0.0, tol};
    CurvatureReport scalar{"qs_scalar_equals_lc", 0.0, tol};
    CurvatureReport routes{"qs_curvature_two_routes", 0.0, tol};
    CurvatureReport lowered{"qs_curvature_lowered", 0.0, tol};
    CurvatureReport shift{"qs_ricci_shift", 0.0, tol};
    CurvatureReport shift_contracted{"qs_ricci_shift_contracted", 0.0, tol};

    Rng rng(opts.seed);
    for (const Point& p : points) {
        const PointGeometry geo = evaluate_geometry(m, s, p);
        const double a = geo.alpha;
        const double a2 = a * a;
        scalar.observe(std::abs(geo.r_qs - geo.r));
        for (const Probe& pr : make_probes(rng, geo.gram, opts.random_vectors)) {
            const Vec& x = pr.x;
            const Vec& y = pr.y;
            const Vec& z = pr.z;
            const Vec& w = pr.w;
            const Vec rq_xyz = apply_curvature(geo.riemann_qs, x, y, z);
            const double rq_xyzw = geo.g(rq_xyz, w);
            skew_last.observe(std::abs(rq_xyzw + geo.g(apply_curvature(geo.riemann_qs, x, y, w), z)));
            skew_first.observe(std::abs(rq_xyzw + geo.g(apply_curvature(geo.riemann_qs, y, x, z), w)));
            ricci_xi.observe(std::abs(geo.s_qs(y, geo.xi) + a2 * (geo.n - 1) * geo.eta.dot(y)));
            ricci_xi.observe(std::abs(geo.s_qs(y, geo.xi) - geo.s(y, geo.xi)));
            asym.observe(std::abs(ricci_asymmetry(geo, y, z) - 2.0 * std::abs(a) * std::abs(geo.g(geo.phi * y, z))));
            routes.observe(metric_norm(rq_xyz - curvature_qs_from_levi_civita(geo, x, y, z), geo.gram));
            const double r_xyzw = geo.g(apply_curvature(geo.riemann, x, y, z), w);
            lowered.observe(std::abs(rq_xyzw - lowered_prediction(geo, r_xyzw, x, y, z, w)));
            const double predicted_shift = geo.s(y, z) + a * geo.g(geo.phi * y, z);
            shift.observe(std::abs(geo.s_qs(y, z) - predicted_shift));
            double contracted = 0.0;
            for (int b = 0; b < geo.n; ++b) {
                const Vec f = geo.basis.col(b);
                const double r_fyzf = geo.g(apply_curvature(geo.riemann, f, y, z), f);
                contracted += lowered_prediction(geo, r_fyzf, f, y, z, f);
            }
            shift_contracted.observe(std::abs(contracted - predicted_shift));
        }
    }
    return {skew_last, skew_first, ricci_xi, asym, scalar, routes, lowered, shift, shift_contracted};
}

std::vector<CurvatureReport> check_identities(const FrameManifold& m, const AlmostContactStructure& s,
                                              const std::vector<Point>& points, double tol,
                                              const SweepOptions& opts) {
    auto out = check_levi_civita_identities(m, s, points, tol, opts);
    auto qs = check_quarter_symmetric_identities(m, s, points, tol, opts);
    out.insert(out.end(), qs.begin(), qs.end());
    return out;
}

} // namespace cosoliton
