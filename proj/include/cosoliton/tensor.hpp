#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace cosoliton {

using Point = Eigen::VectorXd;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Dense rank-3 array of side n, indexed (k, i, j).
///
/// Used for connection coefficients Γ(k,i,j) with ∇_{e_i} e_j = Σ_k Γ(k,i,j) e_k
/// and structure constants c(k,i,j) with [e_i, e_j] = Σ_k c(k,i,j) e_k.
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}

    int size() const noexcept { return n_; }
    double& operator()(int k, int i, int j) { return data_[index(k, i, j)]; }
    double operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }

    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }

    /// Column vector (k = 0..n-1) for fixed (i, j).
    Vec column(int i, int j) const {
        Vec v(n_);
        for (int k = 0; k < n_; ++k) v(k) = (*this)(k, i, j);
        return v;
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : data_) m = std::max(m, std::abs(x));
        return m;
    }

private:
    std::size_t index(int k, int i, int j) const {
        return (static_cast<std::size_t>(k) * n_ + i) * n_ + j;
    }

    int n_ = 0;
    std::vector<double> data_;
};

/// Dense rank-4 array of side n, indexed (l, i, j, k).
///
/// Holds curvature components R(l,i,j,k) = [R(e_i, e_j) e_k]^l.
class Tensor4 {
public:
    Tensor4() = default;
    explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

    int size() const noexcept { return n_; }
    double& operator()(int l, int i, int j, int k) { return data_[index(l, i, j, k)]; }
    double operator()(int l, int i, int j, int k) const { return data_[index(l, i, j, k)]; }

private:
    std::size_t index(int l, int i, int j, int k) const {
        return ((static_cast<std::size_t>(l) * n_ + i) * n_ + j) * n_ + k;
    }

    int n_ = 0;
    std::vector<double> data_;
};

inline Vec unit_vector(int n, int i) {
    Vec v = Vec::Zero(n);
    v(i) = 1.0;
    return v;
}

} // namespace cosoliton
