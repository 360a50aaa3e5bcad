#pragma once

// JSON manifold spec documents: loading, validation with field paths, and
// conversion into the geometry objects.

#include "cosoliton/contact_structure.hpp"
#include "cosoliton/frame_manifold.hpp"
#include "cosoliton/solitons.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cosoliton {

/// InputError carrying the JSON path of the offending field, e.g. "frame[3]".
class SpecError : public InputError {
public:
    SpecError(const std::string& path, const std::string& message);
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

struct VectorFieldSpec {
    enum class Kind { xi, frame, coordinate };
    Kind kind = Kind::xi;
    std::vector<Expression> components;
};

struct SolitonSpec {
    std::optional<double> rho;
    std::optional<double> q;
    std::optional<double> lambda;
    std::optional<double> mu;
    Preset preset = Preset::custom;
    VectorFieldSpec vector_field;
    std::optional<double> theta;
    ConnectionKind connection = ConnectionKind::quarter_symmetric;
    SignConvention convention = SignConvention::paper;
};

struct ManifoldSpecDocument {
    std::string name;
    int dimension = 0;
    std::vector<std::string> coordinates;
    std::map<std::string, double> parameters;
    ExprMatrix frame;
    std::optional<ExprMatrix> metric;  ///< absent: orthonormal
    ExprMatrix phi;
    std::optional<int> xi_index;       ///< 0-based once loaded
    std::vector<Expression> xi;
    std::optional<std::vector<StructureConstantEntry>> structure_constants;
    SamplePlan sample;
    std::vector<std::string> checks;
    std::optional<SolitonSpec> soliton;
};

/// Suite names accepted by "checks" and --suite, in execution order.
const std::vector<std::string>& suite_names();

/// Validates and converts a parsed document. Throws SpecError.
ManifoldSpecDocument parse_spec(const nlohmann::json& doc);

/// Reads a file, or a built-in fixture when `path` is "builtin:NAME".
ManifoldSpecDocument load_spec(const std::string& path);

/// The geometry a document describes. The structure refers to the manifold,
/// so both live together.
struct Fixture {
    std::unique_ptr<FrameManifold> manifold;
    std::unique_ptr<AlmostContactStructure> structure;
};

/// alpha is read from the "alpha" parameter (0 when absent).
Fixture build_fixture(const ManifoldSpecDocument& doc);

/// Frame-component field for a vector field spec on the fixture.
VectorField build_vector_field(const VectorFieldSpec& spec, const Fixture& fx);

} // namespace cosoliton
