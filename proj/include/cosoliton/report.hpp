#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace cosoliton {

/// Worst residual of one named identity over all sampled points and vectors.
struct IdentityResult {
    std::string label;
    double max_residual = 0.0;
    double tolerance = 0.0;
    std::size_t samples = 0;

    bool pass() const { return max_residual <= tolerance; }

    /// Folds one more residual in. NaN sticks, so a broken evaluation can
    /// never pass.
    void observe(double residual) {
        ++samples;
        if (std::isnan(residual)) {
            max_residual = residual;
        } else if (!std::isnan(max_residual)) {
            max_residual = std::max(max_residual, residual);
        }
    }
};

using CurvatureReport = IdentityResult;

struct StructureCheckReport {
    std::vector<IdentityResult> entries;
    double tolerance = 0.0;

    bool pass() const {
        return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.pass(); });
    }

    double max_residual() const {
        double m = 0.0;
        for (const auto& e : entries) {
            if (std::isnan(e.max_residual)) return e.max_residual;
            m = std::max(m, e.max_residual);
        }
        return m;
    }

    const IdentityResult* find(const std::string& label) const {
        for (const auto& e : entries) {
            if (e.label == label) return &e;
        }
        return nullptr;
    }
};

} // namespace cosoliton
