#pragma once

// Almost contact metric structure (phi, xi, eta, g) written in a frame.
//
// phi is stored column-wise: column j holds the frame components of phi(e_j).
// eta is never supplied: eta(X) = g(X, xi) always.

#include "cosoliton/frame_manifold.hpp"
#include "cosoliton/report.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace cosoliton {

class ConnectionField;

class AlmostContactStructure {
public:
    /// xi = e_{xi_index} (0-based).
    AlmostContactStructure(ExprMatrix phi, int xi_index, double alpha);
    /// xi given by explicit frame components.
    AlmostContactStructure(ExprMatrix phi, std::vector<Expression> xi_components, double alpha);

    int dimension() const noexcept { return static_cast<int>(phi_.size()); }
    double alpha() const noexcept { return alpha_; }
    void set_alpha(double alpha) { alpha_ = alpha; }

    const ExprMatrix& phi_expressions() const noexcept { return phi_; }
    std::optional<int> xi_index() const noexcept { return xi_index_; }
    const std::vector<Expression>& xi_expressions() const noexcept { return xi_components_; }

    /// Throws InputError if the structure does not fit the manifold.
    void check_compatible(const FrameManifold& m) const;

    Mat phi(const FrameManifold& m, const Point& p) const;
    Vec xi(const FrameManifold& m, const Point& p) const;
    /// eta(e_i) = g(e_i, xi), as a covector in the frame.
    Vec eta(const FrameManifold& m, const Point& p) const;

private:
    ExprMatrix phi_;
    std::optional<int> xi_index_;
    std::vector<Expression> xi_components_;
    double alpha_ = 0.0;
};

/// Options shared by the pointwise identity sweeps.
struct SweepOptions {
    /// Random vectors (or vector pairs/triples) drawn per sample point, in
    /// addition to the frame vectors themselves.
    int random_vectors = 8;
    std::uint64_t seed = 7;
};

/// Checks phi^2 = -I + eta (x) xi, eta(xi) = 1, eta o phi = 0, phi xi = 0,
/// g(phi X, phi Y) = g(X,Y) - eta(X)eta(Y), skewness of phi w.r.t. g,
/// g(X, xi) = eta(X) and skewness of Phi(X,Y) = g(phi X, Y).
///
/// Vector residuals use the g-norm; random vectors are g-unit.
StructureCheckReport check_axioms(const AlmostContactStructure& s, const FrameManifold& m,
                                  const std::vector<Point>& points, double tol,
                                  const SweepOptions& opts = {});

/// N_phi(X,Y) + 2 d eta(X,Y) xi at p, with
/// d eta(X,Y) = (X(eta(Y)) - Y(eta(X)) - eta([X,Y])) / 2.
Vec nijenhuis(const AlmostContactStructure& s, const FrameManifold& m, const VectorField& x,
              const VectorField& y, const Point& p);

/// (nabla_X phi) Y for constant-component X, Y at p.
Vec phi_covariant_derivative(const AlmostContactStructure& s, const FrameManifold& m,
                             const ConnectionField& nabla, const Vec& x, const Vec& y, const Point& p);

/// Checks (nabla_X phi)Y = alpha (g(phi X, Y) xi - eta(Y) phi X) and
/// nabla_X xi = alpha (X - eta(X) xi) against the Levi-Civita connection.
StructureCheckReport verify_alpha_cosymplectic(const AlmostContactStructure& s, const FrameManifold& m,
                                               const ConnectionField& nabla,
                                               const std::vector<Point>& points, double tol,
                                               const SweepOptions& opts = {});

/// Random frame vector with unit g-norm at p.
Vec random_unit_vector(Rng& rng, const Mat& gram);

} // namespace cosoliton
