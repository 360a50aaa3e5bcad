#pragma once

// A single chart of dimension n carrying a frame {e_1, ..., e_n} whose
// coordinate components are closed-form expressions, plus the metric written
// in that frame. All vector quantities below are frame components unless a
// name says otherwise. Frame indices in this API are 0-based.

#include "cosoliton/expr.hpp"
#include "cosoliton/sampling.hpp"
#include "cosoliton/tensor.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cosoliton {

using ExprMatrix = std::vector<std::vector<Expression>>;
using ScalarField = std::function<double(const Point&)>;
/// Point -> frame components.
using VectorField = std::function<Vec(const Point&)>;

/// Relative step for first derivatives: h = 1e-6 * max(1, |p_a|).
inline constexpr double kFirstDerivativeStep = 1e-6;
/// Relative step for the outer derivative of a nested (second-order) stencil.
inline constexpr double kNestedDerivativeStep = 1e-4;

/// Closed-form structure constant c^k_{ij} for i < j (0-based).
struct StructureConstantEntry {
    int k = 0;
    int i = 0;
    int j = 0;
    Expression value;
};

class FrameManifold {
public:
    /// `frame[i][a]` is the a-th coordinate component of e_i. An absent
    /// metric means the frame is orthonormal. Throws InputError on shape
    /// problems, duplicate or reserved names, and unresolvable identifiers.
    FrameManifold(std::vector<std::string> coordinates, std::map<std::string, double> parameters,
                  ExprMatrix frame, std::optional<ExprMatrix> metric = std::nullopt);

    int dimension() const noexcept { return static_cast<int>(coordinates_.size()); }
    const std::vector<std::string>& coordinates() const noexcept { return coordinates_; }
    const std::map<std::string, double>& parameters() const noexcept { return parameters_; }
    bool has_parameter(std::string_view name) const;
    double parameter(std::string_view name) const;
    /// Overrides (or adds) a parameter. Coordinates and constants cannot be shadowed.
    void set_parameter(const std::string& name, double value);

    const ExprMatrix& frame_expressions() const noexcept { return frame_; }
    const std::optional<ExprMatrix>& metric_expressions() const noexcept { return metric_; }
    bool orthonormal() const noexcept { return !metric_.has_value(); }

    void set_structure_constants(std::vector<StructureConstantEntry> entries);
    const std::optional<std::vector<StructureConstantEntry>>& closed_form_structure_constants() const noexcept {
        return structure_constants_;
    }

    Bindings bindings(const Point& p) const;
    double evaluate(const Expression& e, const Point& p) const;
    Mat evaluate(const ExprMatrix& m, const Point& p) const;

    /// Row i = coordinate components of e_i at p. Throws NumericalError if
    /// the matrix is singular or ill-conditioned.
    Mat frame(const Point& p) const;

    /// Gram matrix g(e_i, e_j) at p. Identity for orthonormal frames;
    /// otherwise checked to be symmetric positive definite.
    Mat metric(const Point& p) const;

    /// Throws InputError if identifiers in `e` are not coordinates,
    /// parameters or constants of this chart.
    void check_identifiers(const Expression& e, std::string_view where) const;

private:
    std::vector<std::string> coordinates_;
    std::map<std::string, double> parameters_;
    ExprMatrix frame_;
    std::optional<ExprMatrix> metric_;
    std::optional<std::vector<StructureConstantEntry>> structure_constants_;
};

Mat evaluate_frame(const FrameManifold& m, const Point& p);

/// Central-difference coordinate gradient of f at p with per-axis step
/// h_a = rel_step * max(1, |p_a|).
Vec coordinate_gradient(const ScalarField& f, const Point& p, double rel_step = kFirstDerivativeStep);

/// Central-difference Jacobian (outputs x coordinates) of a vector-valued map.
Mat coordinate_jacobian(const std::function<Vec(const Point&)>& f, const Point& p,
                        double rel_step = kFirstDerivativeStep);

/// e_i(f)(p).
double directional_derivative(const FrameManifold& m, const ScalarField& f, int i, const Point& p);

/// X(f)(p) for a frame-component vector X at p.
double directional_derivative(const FrameManifold& m, const ScalarField& f, const Vec& x, const Point& p);

/// [e_i, e_j] at p in frame components, by finite differences of the frame.
Vec lie_bracket(const FrameManifold& m, int i, int j, const Point& p);

/// c(k,i,j) at p. Uses the closed-form constants when the manifold carries
/// them, finite differences otherwise. Antisymmetric in (i, j) exactly.
Tensor3 structure_constants(const FrameManifold& m, const Point& p);

/// Always the finite-difference route, regardless of closed-form constants.
Tensor3 structure_constants_numeric(const FrameManifold& m, const Point& p);

/// Max |closed form - finite difference| at p; nullopt without closed forms.
std::optional<double> structure_constants_discrepancy(const FrameManifold& m, const Point& p);

/// [U, W] at p for frame-component vector fields.
Vec bracket(const FrameManifold& m, const VectorField& u, const VectorField& w, const Point& p);

/// Max over i<j<k of the g-norm of the cyclic sum [e_i,[e_j,e_k]] + ... at p.
double jacobi_residual(const FrameManifold& m, const Point& p);

/// Columns are frame components of a g-orthonormal basis obtained by
/// Gram-Schmidt on e_1..e_n. Identity when G is.
Mat orthonormal_basis(const Mat& gram);

/// sqrt(v^T G v).
double metric_norm(const Vec& v, const Mat& gram);

VectorField constant_field(Vec components);

/// Frame-component field whose entries are expressions in the chart.
VectorField frame_field(const FrameManifold& m, std::vector<Expression> components);

/// Field given by coordinate components, converted to frame components by
/// solving E(p)^T c = v.
VectorField coordinate_field(const FrameManifold& m, std::vector<Expression> components);

} // namespace cosoliton
