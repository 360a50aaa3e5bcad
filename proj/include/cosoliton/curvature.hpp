#pragma once

// Curvature of a point-evaluable connection, Ricci contractions and the
// identity sweeps for Levi-Civita and quarter-symmetric curvature.
//
// Conventions:
//   R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
//   S(Y,Z)  = sum_a g(R(f_a, Y) Z, f_a) over a g-orthonormal basis {f_a}
//   r       = sum_a S(f_a, f_a)

#include "cosoliton/connections.hpp"
#include "cosoliton/contact_structure.hpp"
#include "cosoliton/report.hpp"
#include "cosoliton/tensor.hpp"

#include <vector>

namespace cosoliton {

/// R(l,i,j,k) = [R(e_i,e_j)e_k]^l at p. The outer derivative differentiates
/// connection coefficients recomputed on a central stencil with relative
/// step kNestedDerivativeStep.
Tensor4 curvature_tensor(const ConnectionField& nabla, const Point& p);

/// R(X,Y)Z from precomputed components.
Vec apply_curvature(const Tensor4& r, const Vec& x, const Vec& y, const Vec& z);

/// R(X,Y)Z at p for constant-component X, Y, Z.
Vec curvature(const ConnectionField& nabla, const Vec& x, const Vec& y, const Vec& z, const Point& p);

/// R~(X,Y)Z computed straight from the quarter-symmetric coefficients.
Vec curvature_qs_direct(const ConnectionField& qs, const Vec& x, const Vec& y, const Vec& z, const Point& p);

/// R~(X,Y)Z reconstructed from the Levi-Civita value r_xyz = R(X,Y)Z:
///   R + a eta(X) g(phi Y,Z) xi - a eta(Y) g(phi X,Z) xi
///     - a eta(X) eta(Z) phi Y + a eta(Y) eta(Z) phi X.
Vec curvature_qs_from_levi_civita(const Vec& r_xyz, const AlmostContactStructure& s, const FrameManifold& m,
                                  const Vec& x, const Vec& y, const Vec& z, const Point& p);

/// Ricci matrix: S(j,k) = sum_a g(R(f_a, e_j) e_k, f_a).
Mat ricci_matrix(const Tensor4& r, const Mat& gram);

/// S(Y,Z) at p for the given connection.
double ricci(const ConnectionField& nabla, const Vec& y, const Vec& z, const Point& p);

/// Trace of a (possibly non-symmetric) bilinear form over a g-orthonormal basis.
double metric_trace(const Mat& form, const Mat& gram);

struct ScalarPair {
    double r = 0.0;       ///< Levi-Civita scalar curvature
    double r_qs = 0.0;    ///< quarter-symmetric scalar curvature
    double r_star = 0.0;  ///< r + alpha^2 (n-1)^2
};

ScalarPair scalar_curvatures(const ConnectionField& lc, const ConnectionField& qs, const AlmostContactStructure& s,
                             const Point& p);

/// S*(Y,Z) = S(Y,Z) + alpha^2 (n-2) g(Y,Z) + alpha^2 eta(Y) eta(Z).
double star_ricci(double s_yz, const AlmostContactStructure& s, const FrameManifold& m, const Vec& y, const Vec& z,
                  const Point& p);

/// r* = r + alpha^2 (n-1)^2.
double star_scalar(double r, double alpha, int n);

/// Everything the identity and soliton sweeps need at one point, computed once.
struct PointGeometry {
    Point point;
    int n = 0;
    double alpha = 0.0;
    Mat frame;
    Mat gram;
    Mat basis;  ///< columns: g-orthonormal frame (frame components)
    Mat phi;
    Vec xi;
    Vec eta;
    Tensor3 c;
    Tensor3 gamma;
    Tensor3 gamma_qs;
    Tensor4 riemann;
    Tensor4 riemann_qs;
    Mat ricci;
    Mat ricci_qs;
    double r = 0.0;
    double r_qs = 0.0;

    double g(const Vec& a, const Vec& b) const { return (a.transpose() * gram * b).value(); }
    double s(const Vec& y, const Vec& z) const { return (y.transpose() * ricci * z).value(); }
    double s_qs(const Vec& y, const Vec& z) const { return (y.transpose() * ricci_qs * z).value(); }
    double s_star(const Vec& y, const Vec& z) const;
    double r_star() const { return star_scalar(r, alpha, n); }
};

PointGeometry evaluate_geometry(const FrameManifold& m, const AlmostContactStructure& s, const Point& p);

/// R~ via the Levi-Civita curvature, from cached geometry.
Vec curvature_qs_from_levi_civita(const PointGeometry& geo, const Vec& x, const Vec& y, const Vec& z);

/// Identities of the Levi-Civita curvature of an alpha-cosymplectic
/// structure: R(X,Y)xi, R(xi,X)Y, R(xi,X)xi, eta(R(X,Y)Z), S(X,xi) and the
/// first Bianchi identity.
std::vector<CurvatureReport> check_levi_civita_identities(const FrameManifold& m, const AlmostContactStructure& s,
                                                          const std::vector<Point>& points, double tol,
                                                          const SweepOptions& opts = {});

/// Identities of the quarter-symmetric curvature: skewness in both index
/// pairs, S~(Y,xi), the Ricci asymmetry witness, r~ = r, both routes to R~,
/// the lowered form and the Ricci shift S~ - S = alpha g(phi Y, Z).
std::vector<CurvatureReport> check_quarter_symmetric_identities(const FrameManifold& m,
                                                                const AlmostContactStructure& s,
                                                                const std::vector<Point>& points, double tol,
                                                                const SweepOptions& opts = {});

/// Both of the above.
std::vector<CurvatureReport> check_identities(const FrameManifold& m, const AlmostContactStructure& s,
                                              const std::vector<Point>& points, double tol,
                                              const SweepOptions& opts = {});

/// |S~(Y,Z) - S~(Z,Y)| at cached geometry.
double ricci_asymmetry(const PointGeometry& geo, const Vec& y, const Vec& z);

} // namespace cosoliton
