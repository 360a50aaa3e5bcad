#pragma once

// *-eta-Ricci-Yamabe soliton residuals under the Levi-Civita and the
// quarter-symmetric connection, soliton constants, the Laplacian of a
// gradient potential, harmonic classification and conformal Killing checks.
//
// Soliton tensor, Levi-Civita form:
//   (L_V g) + 2 rho S* + (2 Lambda - q r*) g + 2 mu eta (x) eta
// Quarter-symmetric form:
//   (L~_V g) + 2 rho S~ + [2 Lambda + 2 a^2 rho (n-2) - q r~ - q a^2 (n-1)^2] g
//     + (2 mu + 2 a^2 rho) eta (x) eta

#include "cosoliton/connections.hpp"
#include "cosoliton/curvature.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace cosoliton {

enum class Preset { ricci, yamabe, einstein, custom };

std::string_view to_string(Preset p);
std::optional<Preset> preset_from_string(std::string_view name);

struct SolitonParameters {
    double lambda = 0.0;
    double mu = 0.0;
    double rho = 1.0;
    double q = 0.0;
    Preset preset = Preset::custom;

    /// Presets pin (rho, q): ricci (1, 0), yamabe (0, 1), einstein (1, -1).
    static SolitonParameters from_preset(Preset p, double lambda = 0.0, double mu = 0.0);

    /// Sets rho and q from `p`; custom leaves them untouched.
    void apply_preset(Preset p);

    /// Warning text when the parameters cannot describe a *-eta-Ricci-Yamabe
    /// soliton (rho = 0), or when a preset tag disagrees with (rho, q).
    std::optional<std::string> warning() const;
};

enum class SolitonClass { expanding, steady, shrinking };
std::string_view to_string(SolitonClass c);

/// paper: Lambda < 0 expanding, Lambda > 0 shrinking. standard: the reverse.
enum class SignConvention { paper, standard };
std::string_view to_string(SignConvention c);
std::optional<SignConvention> convention_from_string(std::string_view name);

/// Classifies by the sign of lambda, with |lambda| <= threshold counted as steady.
SolitonClass classify_lambda(double lambda, double threshold, SignConvention convention = SignConvention::paper);

/// D with column i = nabla_{e_i} V at p.
Mat covariant_jacobian(const ConnectionField& nabla, const VectorField& v, const Point& p);

/// (L_V g)(e_i, e_j) at p. Requires the Levi-Civita connection.
Mat lie_derivative_matrix(const ConnectionField& lc, const VectorField& v, const Point& p);

/// (L~_V g)(e_i, e_j) = g(nabla~_{e_i} V, e_j) + g(e_i, nabla~_{e_j} V).
Mat lie_derivative_matrix_qs_direct(const ConnectionField& qs, const VectorField& v, const Point& p);

/// (L_V g) - eta (x) g(phi V, .) - g(., phi V) (x) eta.
Mat lie_derivative_matrix_qs_formula(const Mat& lie, const Mat& gram, const Mat& phi, const Vec& eta,
                                     const Vec& v_at_p);

/// (L_V g)(Y, Z) = g(nabla_Y V, Z) + g(Y, nabla_Z V).
double lie_derivative_metric(const ConnectionField& lc, const VectorField& v, const Vec& y, const Vec& z,
                             const Point& p);

struct QsLieDerivative {
    double direct = 0.0;   ///< from nabla~ itself
    double formula = 0.0;  ///< from L_V g and the eta/phi correction
    double discrepancy() const { return std::abs(direct - formula); }
};

QsLieDerivative lie_derivative_metric_qs(const ConnectionField& qs, const AlmostContactStructure& s,
                                         const VectorField& v, const Vec& y, const Vec& z, const Point& p);

/// Soliton tensor (frame components) for a precomputed Lie derivative of g.
/// `lie` must belong to the connection `kind`.
Mat soliton_tensor(const SolitonParameters& params, const PointGeometry& geo, const Mat& lie, ConnectionKind kind);

/// Soliton tensor evaluated on (Y, Z) at p.
double soliton_residual(const SolitonParameters& params, const FrameManifold& m, const AlmostContactStructure& s,
                        const VectorField& v, ConnectionKind kind, const Vec& y, const Vec& z, const Point& p);

enum class ConstantsMode { relation_4_9, corollary_4_3_verbatim, corollary_4_3_rederived };
std::string_view to_string(ConstantsMode m);
std::optional<ConstantsMode> constants_mode_from_string(std::string_view name);

struct ConstantInputs {
    int n = 0;
    double alpha = 0.0;
    double rho = 0.0;
    double q = 0.0;
    double r = 0.0;
    double div_xi = 0.0;
};

struct SolvedConstants {
    ConstantsMode mode = ConstantsMode::relation_4_9;
    double sum = 0.0;  ///< Lambda + mu
    std::optional<double> lambda;
    std::optional<double> mu;
    /// Lambda + mu required by the relation mode, minus `sum`.
    double relation_deviation = 0.0;
    /// |relation_deviation| <= 1e-12 * max(1, |relation value|).
    bool satisfies_relation = false;
};

/// Lambda + mu = q r / 2 + q a^2 (n-1)^2 / 2.
double relation_sum(const ConstantInputs& in);

/// Throws InputError for n <= 1.
SolvedConstants solve_constants(const ConstantInputs& in, ConstantsMode mode);

/// div V = sum_a g(nabla_{f_a} V, f_a) over a g-orthonormal basis.
double divergence(const ConnectionField& lc, const VectorField& v, const Point& p);

/// Delta f = -n [Lambda + a^2 rho (n-2) - q r/2 - q a^2 (n-1)^2 / 2] - mu - rho (a^2 + r).
double laplacian_bound(const SolitonParameters& params, int n, double alpha, double r);

struct HarmonicClassification {
    double lhs = 0.0;  ///< (q/2)(r + a^2 (n-1)^2)
    double rhs = 0.0;  ///< mu + rho (a^2 + r) + a^2 rho (n-2)
    SolitonClass by_inequality = SolitonClass::steady;
    /// Lambda that makes Delta f vanish, and its classification.
    double lambda_harmonic = 0.0;
    SolitonClass by_lambda = SolitonClass::steady;
    SignConvention convention = SignConvention::paper;
    bool routes_agree = true;
    /// Unconditional "shrinking" stated for the Ricci and Einstein presets.
    std::optional<SolitonClass> asserted;
    std::optional<bool> assertion_agrees;
};

/// lhs > rhs expanding, lhs < rhs shrinking, |lhs - rhs| <= rel_threshold *
/// max(|lhs|, |rhs|) steady.
HarmonicClassification classify_harmonic(const SolitonParameters& params, int n, double alpha, double r,
                                         SignConvention convention = SignConvention::paper,
                                         double rel_threshold = 1e-12);

/// Per-point least-squares fit of (L_V g) = 2 theta g.
struct ConformalFit {
    double theta = 0.0;
    double residual = 0.0;  ///< Frobenius norm of L_V g - 2 theta g
    bool killing = false;   ///< |L_V g| below the noise floor; theta reported as 0
};

ConformalFit fit_conformal_factor(const Mat& lie, const Mat& gram, double noise);

struct ConformalKillingResult {
    bool theta_supplied = false;
    double theta = 0.0;          ///< supplied value, or the mean of the per-point fits
    double theta_spread = 0.0;   ///< max deviation of per-point fits from the mean
    double fit_residual = 0.0;   ///< max over points
    bool conformal = false;      ///< fit_residual within tolerance
    bool killing = false;
    bool homothetic = false;     ///< conformal with constant theta
    double kappa = 0.0;          ///< mean over points
    double residual = 0.0;       ///< max g-norm of phi V - kappa xi
    double residual_component = 0.0;  ///< max |g(Y, phi V) - kappa eta(Y)| over probes
    std::size_t samples = 0;
};

ConformalKillingResult conformal_killing(const FrameManifold& m, const AlmostContactStructure& s,
                                         const SolitonParameters& params, const VectorField& v,
                                         std::optional<double> theta, const std::vector<Point>& points, double tol,
                                         const SweepOptions& opts = {});

struct SolitonReport {
    ConnectionKind kind = ConnectionKind::quarter_symmetric;
    SolitonParameters params;
    double tolerance = 0.0;
    /// Max |T(Y, xi)| over frame vectors and random unit Y.
    double max_residual_xi = 0.0;
    /// Max |T(Y, Z)| over all probe pairs.
    double max_residual = 0.0;
    /// |Lambda + mu - relation_sum| with r averaged over the sample.
    double relation_residual = 0.0;
    double r_mean = 0.0;
    double r_spread = 0.0;
    /// Max |T~(Y,Z) - T(Y,Z) - (L~ - L)(Y,Z) - 2 a rho g(phi Y, Z)|.
    double discrepancy_residual = 0.0;
    /// Max |(L~_V g) direct - formula| over probe pairs.
    double lie_route_residual = 0.0;
    SolitonClass classification = SolitonClass::steady;
    std::optional<std::string> warning;
    std::size_t samples = 0;

    bool pass() const;
};

/// Sweeps the soliton equation for `kind` over the sample points.
SolitonReport soliton_sweep(const SolitonParameters& params, const FrameManifold& m, const AlmostContactStructure& s,
                            const VectorField& v, ConnectionKind kind, const std::vector<Point>& points, double tol,
                            const SweepOptions& opts = {});

} // namespace cosoliton
