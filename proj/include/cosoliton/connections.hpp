#pragma once

#include "cosoliton/contact_structure.hpp"
#include "cosoliton/frame_manifold.hpp"

namespace cosoliton {

enum class ConnectionKind { levi_civita, quarter_symmetric };

std::string_view to_string(ConnectionKind kind);

/// Levi-Civita coefficients at p from the Koszul formula:
///   2 g(nabla_i e_j, e_k) = e_i(g_jk) + e_j(g_ki) - e_k(g_ij)
///                           - g(e_i,[e_j,e_k]) - g(e_j,[e_i,e_k]) + g(e_k,[e_i,e_j])
/// solved against the Gram matrix.
Tensor3 levi_civita(const FrameManifold& m, const Point& p);

/// Gamma~(k,i,j) = Gamma(k,i,j) - eta(e_i) (phi e_j)^k, i.e.
/// nabla~_X Y = nabla_X Y - eta(X) phi Y.
Tensor3 quarter_symmetric(const Tensor3& levi_civita_coefficients, const AlmostContactStructure& s,
                          const FrameManifold& m, const Point& p);

/// Point-evaluable connection. Holds references: the manifold (and structure)
/// must outlive it. Coefficients are recomputed at every call because the
/// curvature stencil needs them away from the sample points.
class ConnectionField {
public:
    static ConnectionField levi_civita(const FrameManifold& m);
    static ConnectionField quarter_symmetric(const FrameManifold& m, const AlmostContactStructure& s);

    ConnectionKind kind() const noexcept { return kind_; }
    const FrameManifold& manifold() const noexcept { return *manifold_; }
    const AlmostContactStructure* structure() const noexcept { return structure_; }

    /// Gamma(k,i,j) with nabla_{e_i} e_j = sum_k Gamma(k,i,j) e_k.
    Tensor3 coefficients(const Point& p) const;

    /// nabla_X V at p for constant-component X and a frame-component field V.
    Vec covariant_derivative(const Vec& x, const VectorField& v, const Point& p) const;

private:
    ConnectionField(ConnectionKind kind, const FrameManifold* m, const AlmostContactStructure* s)
        : kind_(kind), manifold_(m), structure_(s) {}

    ConnectionKind kind_;
    const FrameManifold* manifold_;
    const AlmostContactStructure* structure_;
};

/// sum_{ij} x^i y^j Gamma(., i, j): nabla_X Y for constant-component X, Y.
Vec contract(const Tensor3& gamma, const Vec& x, const Vec& y);

/// T(e_i, e_j) = nabla_{e_i} e_j - nabla_{e_j} e_i - [e_i, e_j] at p.
Vec torsion(const ConnectionField& nabla, int i, int j, const Point& p);

/// max_{ijk} |e_i(g_jk) - g(nabla_i e_j, e_k) - g(e_j, nabla_i e_k)| at p.
double metric_compatibility(const ConnectionField& nabla, const Point& p);

/// max_{kij} |Gamma(k,i,j) - Gamma(k,j,i) - c(k,i,j)| at p.
double torsion_free_residual(const ConnectionField& nabla, const Point& p);

/// max_{ij} g-norm of T(e_i,e_j) - [eta(e_j) phi e_i - eta(e_i) phi e_j] at p.
double quarter_symmetric_torsion_residual(const ConnectionField& nabla, const AlmostContactStructure& s,
                                          const Point& p);

/// e_i(g_jk) at p, entry (i*n + j)*n + k. All zero for orthonormal frames.
std::vector<double> metric_derivatives(const FrameManifold& m, const Point& p);

} // namespace cosoliton
