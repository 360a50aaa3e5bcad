#pragma once

#include "cosoliton/connections.hpp"
#include "cosoliton/contact_structure.hpp"
#include "cosoliton/curvature.hpp"
#include "cosoliton/frame_manifold.hpp"

#include <memory>
#include <string>
#include <vector>

namespace testing {

using namespace cosoliton;

inline ExprMatrix matrix(const std::vector<std::vector<std::string>>& rows) {
    ExprMatrix out;
    for (const auto& row : rows) {
        std::vector<Expression> r;
        for (const auto& s : row) r.push_back(Expression::parse(s));
        out.push_back(std::move(r));
    }
    return out;
}

struct Geometry {
    std::unique_ptr<FrameManifold> m;
    std::unique_ptr<AlmostContactStructure> s;
};

/// The 5-dimensional example: e_i = exp(alpha v) d_i (i <= 4), e_5 = -d_v.
inline Geometry five_dim(double alpha) {
    const std::string a = "exp(alpha*v)";
    Geometry g;
    g.m = std::make_unique<FrameManifold>(
        std::vector<std::string>{"x", "y", "z", "u", "v"}, std::map<std::string, double>{{"alpha", alpha}},
        matrix({{a, "0", "0", "0", "0"},
                {"0", a, "0", "0", "0"},
                {"0", "0", a, "0", "0"},
                {"0", "0", "0", a, "0"},
                {"0", "0", "0", "0", "-1"}}));
    g.s = std::make_unique<AlmostContactStructure>(matrix({{"0", "1", "0", "0", "0"},
                                                           {"-1", "0", "0", "0", "0"},
                                                           {"0", "0", "0", "1", "0"},
                                                           {"0", "0", "-1", "0", "0"},
                                                           {"0", "0", "0", "0", "0"}}),
                                                   4, alpha);
    return g;
}

/// Unit 2-sphere times a line, orthonormal frame e1 = d_t, e2 = d_p / sin t,
/// e3 = d_z with xi = e3. Sectional curvature 1 on the sphere, r = 2.
inline Geometry sphere_line() {
    Geometry g;
    g.m = std::make_unique<FrameManifold>(std::vector<std::string>{"t", "p", "z"}, std::map<std::string, double>{},
                                          matrix({{"1", "0", "0"}, {"0", "1/sin(t)", "0"}, {"0", "0", "1"}}));
    // phi e1 = -e2, phi e2 = e1
    g.s = std::make_unique<AlmostContactStructure>(matrix({{"0", "1", "0"}, {"-1", "0", "0"}, {"0", "0", "0"}}), 2,
                                                   0.0);
    return g;
}

/// The same geometry written in the coordinate frame d_t, d_p, d_z with
/// metric diag(1, sin^2 t, 1).
inline Geometry sphere_line_coordinate_frame() {
    Geometry g;
    g.m = std::make_unique<FrameManifold>(
        std::vector<std::string>{"t", "p", "z"}, std::map<std::string, double>{},
        matrix({{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}),
        matrix({{"1", "0", "0"}, {"0", "sin(t)^2", "0"}, {"0", "0", "1"}}));
    // phi d_t = -d_p / sin t, phi d_p = sin t d_t
    g.s = std::make_unique<AlmostContactStructure>(
        matrix({{"0", "sin(t)", "0"}, {"-1/sin(t)", "0", "0"}, {"0", "0", "0"}}), 2, 0.0);
    return g;
}

inline std::vector<Point> sphere_points(std::size_t count, std::uint64_t seed) {
    return SamplePlan::random_box(count, {{0.5, 2.5}, {-3.0, 3.0}, {-1.0, 1.0}}, seed).generate(3);
}

inline std::vector<Point> cube_points(std::size_t count, std::uint64_t seed, int n = 5) {
    return SamplePlan::random_cube(count, n, -1.0, 1.0, seed).generate(n);
}

inline Vec e(int n, int one_based) { return unit_vector(n, one_based - 1); }

} // namespace testing
