#include "cosoliton/frame_manifold.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace cosoliton {

namespace {

constexpr double kMinFrameRcond = 1e-12;

std::string index_label(int i, int j) { return "[" + std::to_string(i) + "][" + std::to_string(j) + "]"; }

void require_square(const ExprMatrix& m, int n, const char* what) {
    if (static_cast<int>(m.size()) != n) {
        throw InputError(std::string(what) + " has " + std::to_string(m.size()) + " rows, expected " +
                         std::to_string(n));
    }
    for (std::size_t r = 0; r < m.size(); ++r) {
        if (static_cast<int>(m[r].size()) != n) {
            throw InputError(std::string(what) + " row " + std::to_string(r) + " has " +
                             std::to_string(m[r].size()) + " entries, expected " + std::to_string(n));
        }
    }
}

// e_i(E_j^a) for all i, j, a, from one Jacobian of the flattened frame.
// Entry (i*n + j)*n + a.
std::vector<double> frame_derivatives(const FrameManifold& m, const Point& p, const Mat& e) {
    const int n = m.dimension();
    const Mat jac = coordinate_jacobian(
        [&](const Point& q) {
            const Mat eq = m.evaluate(m.frame_expressions(), q);
            return Vec(Eigen::Map<const Vec>(eq.data(), eq.size()));
        },
        p);
    // Eigen storage is column-major: flattened index of E(j,a) is a*n + j.
    std::vector<double> out(static_cast<std::size_t>(n) * n * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int a = 0; a < n; ++a) {
                out[(static_cast<std::size_t>(i) * n + j) * n + a] = e.row(i).dot(jac.row(a * n + j));
            }
        }
    }
    return out;
}

Vec bracket_from_derivatives(const std::vector<double>& de, const Mat& e, int i, int j) {
    const int n = static_cast<int>(e.rows());
    Vec coord(n);
    for (int a = 0; a < n; ++a) {
        coord(a) = de[(static_cast<std::size_t>(i) * n + j) * n + a] - de[(static_cast<std::size_t>(j) * n + i) * n + a];
    }
    return e.transpose().partialPivLu().solve(coord);
}

} // namespace

FrameManifold::FrameManifold(std::vector<std::string> coordinates, std::map<std::string, double> parameters,
                             ExprMatrix frame, std::optional<ExprMatrix> metric)
    : coordinates_(std::move(coordinates)),
      parameters_(std::move(parameters)),
      frame_(std::move(frame)),
      metric_(std::move(metric)) {
    const int n = dimension();
    if (n < 1) throw InputError("dimension must be positive");
    std::set<std::string> seen;
    for (const auto& c : coordinates_) {
        if (c.empty()) throw InputError("empty coordinate name");
        if (is_reserved_constant(c)) throw InputError("coordinate name '" + c + "' is a reserved constant");
        if (!seen.insert(c).second) throw InputError("duplicate coordinate name '" + c + "'");
    }
    for (const auto& [name, value] : parameters_) {
        if (is_reserved_constant(name)) throw InputError("parameter name '" + name + "' is a reserved constant");
        if (seen.count(name)) throw InputError("parameter '" + name + "' shadows a coordinate");
        if (!std::isfinite(value)) throw InputError("parameter '" + name + "' is not finite");
    }
    require_square(frame_, n, "frame");
    for (int i = 0; i < n; ++i) {
        for (int a = 0; a < n; ++a) check_identifiers(frame_[i][a], "frame" + index_label(i, a));
    }
    if (metric_) {
        require_square(*metric_, n, "metric");
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) check_identifiers((*metric_)[i][j], "metric" + index_label(i, j));
        }
    }
}

bool FrameManifold::has_parameter(std::string_view name) const {
    return parameters_.find(std::string(name)) != parameters_.end();
}

double FrameManifold::parameter(std::string_view name) const {
    auto it = parameters_.find(std::string(name));
    if (it == parameters_.end()) throw InputError("missing parameter '" + std::string(name) + "'");
    return it->second;
}

void FrameManifold::set_parameter(const std::string& name, double value) {
    if (is_reserved_constant(name)) throw InputError("cannot override constant '" + name + "'");
    if (std::find(coordinates_.begin(), coordinates_.end(), name) != coordinates_.end()) {
        throw InputError("cannot override coordinate '" + name + "'");
    }
    if (!std::isfinite(value)) throw InputError("parameter '" + name + "' is not finite");
    parameters_[name] = value;
}

void FrameManifold::set_structure_constants(std::vector<StructureConstantEntry> entries) {
    const int n = dimension();
    for (const auto& e : entries) {
        if (e.k < 0 || e.k >= n || e.i < 0 || e.i >= n || e.j < 0 || e.j >= n) {
            throw InputError("structure constant index out of range");
        }
        if (e.i >= e.j) throw InputError("structure constants must be given with i < j");
        check_identifiers(e.value, "structure_constants");
    }
    structure_constants_ = std::move(entries);
}

void FrameManifold::check_identifiers(const Expression& e, std::string_view where) const {
    for (const auto& name : e.identifiers()) {
        if (is_reserved_constant(name)) continue;
        if (std::find(coordinates_.begin(), coordinates_.end(), name) != coordinates_.end()) continue;
        if (parameters_.count(name)) continue;
        throw InputError(std::string(where) + ": unknown identifier '" + name + "'");
    }
}

Bindings FrameManifold::bindings(const Point& p) const {
    if (p.size() != dimension()) {
        throw InputError("point has " + std::to_string(p.size()) + " coordinates, expected " +
                         std::to_string(dimension()));
    }
    Bindings b;
    for (int a = 0; a < dimension(); ++a) b.set(coordinates_[a], p(a));
    for (const auto& [name, value] : parameters_) b.set(name, value);
    return b;
}

double FrameManifold::evaluate(const Expression& e, const Point& p) const { return e.evaluate(bindings(p)); }

Mat FrameManifold::evaluate(const ExprMatrix& m, const Point& p) const {
    const Bindings b = bindings(p);
    Mat out(m.size(), m.empty() ? 0 : m.front().size());
    for (std::size_t r = 0; r < m.size(); ++r) {
        for (std::size_t c = 0; c < m[r].size(); ++c) out(r, c) = m[r][c].evaluate(b);
    }
    return out;
}

Mat FrameManifold::frame(const Point& p) const {
    Mat e = evaluate(frame_, p);
    const Eigen::PartialPivLU<Mat> lu(e);
    if (!(lu.rcond() > kMinFrameRcond)) {
        throw NumericalError("frame matrix is singular or ill-conditioned at sample point");
    }
    return e;
}

Mat FrameManifold::metric(const Point& p) const {
    const int n = dimension();
    if (!metric_) return Mat::Identity(n, n);
    Mat g = evaluate(*metric_, p);
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw NumericalError("metric is not symmetric at sample point");
    }
    const Eigen::SelfAdjointEigenSolver<Mat> eig(g, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > 1e10) {
        throw NumericalError("metric is not positive definite (or is ill-conditioned) at sample point");
    }
    return g;
}

Mat evaluate_frame(const FrameManifold& m, const Point& p) { return m.frame(p); }

Vec coordinate_gradient(const ScalarField& f, const Point& p, double rel_step) {
    const int n = static_cast<int>(p.size());
    Vec grad(n);
    Point q = p;
    for (int a = 0; a < n; ++a) {
        const double h = rel_step * std::max(1.0, std::abs(p(a)));
        const double hi = p(a) + h;
        const double lo = p(a) - h;
        q(a) = hi;
        const double fp = f(q);
        q(a) = lo;
        const double fm = f(q);
        q(a) = p(a);
        grad(a) = (fp - fm) / (hi - lo);
    }
    return grad;
}

Mat coordinate_jacobian(const std::function<Vec(const Point&)>& f, const Point& p, double rel_step) {
    const int n = static_cast<int>(p.size());
    Mat jac;
    Point q = p;
    for (int a = 0; a < n; ++a) {
        const double h = rel_step * std::max(1.0, std::abs(p(a)));
        const double hi = p(a) + h;
        const double lo = p(a) - h;
        q(a) = hi;
        const Vec fp = f(q);
        q(a) = lo;
        const Vec fm = f(q);
        q(a) = p(a);
        if (a == 0) jac.resize(fp.size(), n);
        jac.col(a) = (fp - fm) / (hi - lo);
    }
    return jac;
}

double directional_derivative(const FrameManifold& m, const ScalarField& f, int i, const Point& p) {
    if (i < 0 || i >= m.dimension()) throw InputError("frame index out of range");
    const Mat e = m.frame(p);
    return e.row(i).dot(coordinate_gradient(f, p));
}

double directional_derivative(const FrameManifold& m, const ScalarField& f, const Vec& x, const Point& p) {
    const Mat e = m.frame(p);
    return (e.transpose() * x).dot(coordinate_gradient(f, p));
}

Vec lie_bracket(const FrameManifold& m, int i, int j, const Point& p) {
    const int n = m.dimension();
    if (i < 0 || i >= n || j < 0 || j >= n) throw InputError("frame index out of range");
    if (i == j) return Vec::Zero(n);
    const Mat e = m.frame(p);
    const auto de = frame_derivatives(m, p, e);
    return bracket_from_derivatives(de, e, i, j);
}

Tensor3 structure_constants_numeric(const FrameManifold& m, const Point& p) {
    const int n = m.dimension();
    const Mat e = m.frame(p);
    const auto de = frame_derivatives(m, p, e);
    Tensor3 c(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Vec b = bracket_from_derivatives(de, e, i, j);
            for (int k = 0; k < n; ++k) {
                c(k, i, j) = b(k);
                c(k, j, i) = -b(k);
            }
        }
    }
    return c;
}

Tensor3 structure_constants(const FrameManifold& m, const Point& p) {
    const auto& closed = m.closed_form_structure_constants();
    if (!closed) return structure_constants_numeric(m, p);
    const Bindings b = m.bindings(p);
    Tensor3 c(m.dimension());
    for (const auto& entry : *closed) {
        const double v = entry.value.evaluate(b);
        c(entry.k, entry.i, entry.j) = v;
        c(entry.k, entry.j, entry.i) = -v;
    }
    return c;
}

std::optional<double> structure_constants_discrepancy(const FrameManifold& m, const Point& p) {
    if (!m.closed_form_structure_constants()) return std::nullopt;
    const Tensor3 closed = structure_constants(m, p);
    const Tensor3 numeric = structure_constants_numeric(m, p);
    double worst = 0.0;
    for (std::size_t s = 0; s < closed.data().size(); ++s) {
        worst = std::max(worst, std::abs(closed.data()[s] - numeric.data()[s]));
    }
    return worst;
}

Vec bracket(const FrameManifold& m, const VectorField& u, const VectorField& w, const Point& p) {
    const int n = m.dimension();
    const Mat e = m.frame(p);
    const Vec uc = u(p);
    const Vec wc = w(p);
    // Coordinate components of U and W at p, for U(w^k) = (E^T u) . grad w^k.
    const Vec u_coord = e.transpose() * uc;
    const Vec w_coord = e.transpose() * wc;
    const Mat dw = coordinate_jacobian(w, p);
    const Mat du = coordinate_jacobian(u, p);
    const Tensor3 c = structure_constants(m, p);
    Vec out = dw * u_coord - du * w_coord;
    for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) s += uc(i) * wc(j) * c(k, i, j);
        }
        out(k) += s;
    }
    return out;
}

double jacobi_residual(const FrameManifold& m, const Point& p) {
    const int n = m.dimension();
    const Mat e = m.frame(p);
    const Mat g = m.metric(p);
    const Tensor3 c = structure_constants(m, p);
    const Mat dc = coordinate_jacobian(
        [&](const Point& q) {
            const Tensor3 cq = structure_constants(m, q);
            return Vec(Eigen::Map<const Vec>(cq.data().data(), static_cast<Eigen::Index>(cq.data().size())));
        },
        p, kNestedDerivativeStep);
    // [e_i, [e_j, e_k]] = e_i(c^m_jk) e_m + c^m_jk c^l_im e_l
    auto nested = [&](int i, int j, int k) {
        Vec out(n);
        const Vec dir = e.row(i).transpose();
        for (int l = 0; l < n; ++l) {
            const auto flat = (static_cast<Eigen::Index>(l) * n + j) * n + k;
            double s = dc.row(flat).dot(dir);
            for (int mm = 0; mm < n; ++mm) s += c(mm, j, k) * c(l, i, mm);
            out(l) = s;
        }
        return out;
    };
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int k = j + 1; k < n; ++k) {
                const Vec cyc = nested(i, j, k) + nested(j, k, i) + nested(k, i, j);
                worst = std::max(worst, metric_norm(cyc, g));
            }
        }
    }
    return worst;
}

Mat orthonormal_basis(const Mat& gram) {
    const int n = static_cast<int>(gram.rows());
    Mat basis = Mat::Identity(n, n);
    for (int a = 0; a < n; ++a) {
        Vec v = basis.col(a);
        for (int b = 0; b < a; ++b) {
            const Vec f = basis.col(b);
            v -= (f.transpose() * gram * v).value() * f;
        }
        const double norm = metric_norm(v, gram);
        if (!(norm > 0.0)) throw NumericalError("Gram-Schmidt breakdown: degenerate metric");
        basis.col(a) = v / norm;
    }
    return basis;
}

double metric_norm(const Vec& v, const Mat& gram) {
    return std::sqrt(std::max(0.0, (v.transpose() * gram * v).value()));
}

VectorField constant_field(Vec components) {
    return [c = std::move(components)](const Point&) { return c; };
}

VectorField frame_field(const FrameManifold& m, std::vector<Expression> components) {
    if (static_cast<int>(components.size()) != m.dimension()) {
        throw InputError("vector field needs " + std::to_string(m.dimension()) + " components");
    }
    for (const auto& c : components) m.check_identifiers(c, "vector_field");
    return [&m, comps = std::move(components)](const Point& p) {
        const Bindings b = m.bindings(p);
        Vec v(static_cast<Eigen::Index>(comps.size()));
        for (std::size_t i = 0; i < comps.size(); ++i) v(static_cast<Eigen::Index>(i)) = comps[i].evaluate(b);
        return v;
    };
}

VectorField coordinate_field(const FrameManifold& m, std::vector<Expression> components) {
    if (static_cast<int>(components.size()) != m.dimension()) {
        throw InputError("vector field needs " + std::to_string(m.dimension()) + " components");
    }
    for (const auto& c : components) m.check_identifiers(c, "vector_field");
    return [&m, comps = std::move(components)](const Point& p) {
        const Bindings b = m.bindings(p);
        Vec v(static_cast<Eigen::Index>(comps.size()));
        for (std::size_t i = 0; i < comps.size(); ++i) v(static_cast<Eigen::Index>(i)) = comps[i].evaluate(b);
        return Vec(m.frame(p).transpose().partialPivLu().solve(v));
    };
}

} // namespace cosoliton
