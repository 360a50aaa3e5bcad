#include "cosoliton/sampling.hpp"

#include "cosoliton/errors.hpp"

#include <cmath>
#include <string>

namespace cosoliton {

SamplePlan SamplePlan::explicit_points(std::vector<Point> pts) {
    SamplePlan plan;
    plan.points = std::move(pts);
    plan.count = plan.points.size();
    return plan;
}

SamplePlan SamplePlan::random_box(std::size_t count, std::vector<std::pair<double, double>> box,
                                  std::uint64_t seed) {
    SamplePlan plan;
    plan.count = count;
    plan.box = std::move(box);
    plan.seed = seed;
    return plan;
}

SamplePlan SamplePlan::random_cube(std::size_t count, int dimension, double lo, double hi,
                                   std::uint64_t seed) {
    return random_box(count, std::vector<std::pair<double, double>>(dimension, {lo, hi}), seed);
}

void SamplePlan::validate(int dimension) const {
    if (is_explicit()) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (points[i].size() != dimension) {
                throw InputError("sample point " + std::to_string(i) + " has " +
                                 std::to_string(points[i].size()) + " coordinates, expected " +
                                 std::to_string(dimension));
            }
            if (!points[i].allFinite()) throw InputError("sample point " + std::to_string(i) + " is not finite");
        }
        return;
    }
    if (count < 1) throw InputError("sample count must be at least 1");
    if (static_cast<int>(box.size()) != dimension) {
        throw InputError("sample box has " + std::to_string(box.size()) + " axes, expected " +
                         std::to_string(dimension));
    }
    for (const auto& [lo, hi] : box) {
        if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
            throw InputError("sample box bounds must be finite with lo <= hi");
        }
    }
}

std::vector<Point> SamplePlan::generate(int dimension) const {
    validate(dimension);
    if (is_explicit()) return points;
    Rng rng(seed);
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        Point p(dimension);
        for (int a = 0; a < dimension; ++a) p(a) = rng.uniform(box[a].first, box[a].second);
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace cosoliton
