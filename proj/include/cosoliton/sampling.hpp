#pragma once

#include "cosoliton/tensor.hpp"

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace cosoliton {

/// Seeded generator with a fixed, platform-independent mapping to doubles.
/// std::mt19937_64's output sequence is fixed by the standard; the
/// distributions in <random> are not, so uniform draws are done by hand.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    /// Components uniform in [-1, 1).
    Vec vector(int n) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v(i) = uniform(-1.0, 1.0);
        return v;
    }

private:
    std::mt19937_64 engine_;
};

/// Where identities are checked: an explicit list of chart points, or a
/// seeded uniform draw from a coordinate box.
struct SamplePlan {
    std::vector<Point> points;
    std::size_t count = 0;
    std::vector<std::pair<double, double>> box;
    std::uint64_t seed = 0;

    static SamplePlan explicit_points(std::vector<Point> pts);
    static SamplePlan random_box(std::size_t count, std::vector<std::pair<double, double>> box,
                                 std::uint64_t seed);
    /// Same box in every axis.
    static SamplePlan random_cube(std::size_t count, int dimension, double lo, double hi,
                                  std::uint64_t seed);

    bool is_explicit() const noexcept { return !points.empty(); }

    /// Throws InputError if the plan is empty, has a non-finite bound, or its
    /// points do not have `dimension` coordinates.
    void validate(int dimension) const;

    /// Identical output for identical (count, box, seed).
    std::vector<Point> generate(int dimension) const;
};

} // namespace cosoliton
