#include "cosoliton/builtins.hpp"

namespace cosoliton {

namespace {

nlohmann::json alpha_cosymplectic(const std::string& name, double alpha) {
    using nlohmann::json;
    const std::string s = "exp(alpha*v)";
    return json{
        {"name", name},
        {"dimension", 5},
        {"coordinates", {"x", "y", "z", "u", "v"}},
        {"parameters", {{"alpha", alpha}}},
        {"frame",
         {{s, "0", "0", "0", "0"},
          {"0", s, "0", "0", "0"},
          {"0", "0", s, "0", "0"},
          {"0", "0", "0", s, "0"},
          {"0", "0", "0", "0", "-1"}}},
        {"metric_frame", "orthonormal"},
        // column j is phi(e_j): phi e1 = -e2, phi e2 = e1, phi e3 = -e4, phi e4 = e3
        {"phi",
         {{"0", "1", "0", "0", "0"},
          {"-1", "0", "0", "0", "0"},
          {"0", "0", "0", "1", "0"},
          {"0", "0", "-1", "0", "0"},
          {"0", "0", "0", "0", "0"}}},
        {"xi_index", 5},
        {"sample", {{"count", 16}, {"box", {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}}}, {"seed", 42}}},
        {"checks", {"all"}},
        {"soliton", {{"rho", 1}, {"q", 1}, {"mu", 0}, {"vector_field", "xi"}}},
    };
}

} // namespace

std::vector<std::string> builtin_names() { return {"alpha_cosymplectic_5d", "cosymplectic_flat_5d"}; }

std::optional<nlohmann::json> builtin_spec(const std::string& name) {
    if (name == "alpha_cosymplectic_5d") return alpha_cosymplectic(name, 0.7);
    if (name == "cosymplectic_flat_5d") return alpha_cosymplectic(name, 0.0);
    return std::nullopt;
}

} // namespace cosoliton
