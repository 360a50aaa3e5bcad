#include "cosoliton/spec_document.hpp"

#include "cosoliton/builtins.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cosoliton {

SpecError::SpecError(const std::string& path, const std::string& message)
    : InputError(path.empty() ? message : path + ": " + message), path_(path) {}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "axioms",       "nijenhuis", "alpha_cosymplectic", "connection", "torsion",  "curvature_identities",
        "theorem_3_1",  "soliton",   "constants",          "laplacian",  "classify", "conformal_killing",
    };
    return names;
}

namespace {

using nlohmann::json;

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

std::string key_path(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void reject_unknown_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!known) throw SpecError(key_path(path, key), "unknown field");
    }
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw SpecError(key_path(path, key), "missing required field");
    return *it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw SpecError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw SpecError(path, "expected a finite number");
    return v;
}

long long as_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer() && !j.is_number_unsigned()) throw SpecError(path, "expected an integer");
    return j.get<long long>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw SpecError(path, "expected a string");
    return j.get<std::string>();
}

const json& as_array(const json& j, const std::string& path, std::optional<std::size_t> size = std::nullopt) {
    if (!j.is_array()) throw SpecError(path, "expected an array");
    if (size && j.size() != *size) {
        throw SpecError(path, "dimension mismatch: " + std::to_string(j.size()) + " entries, expected " +
                                  std::to_string(*size));
    }
    return j;
}

Expression as_expression(const json& j, const std::string& path) {
    if (j.is_number()) return Expression::number(as_number(j, path));
    const std::string text = as_string(j, path);
    try {
        return Expression::parse(text);
    } catch (const ParseError& e) {
        throw SpecError(path, "expression \"" + text + "\" at offset " + std::to_string(e.offset()) + ": " +
                                  e.what());
    }
}

std::vector<Expression> expression_vector(const json& j, std::size_t n, const std::string& path) {
    as_array(j, path, n);
    std::vector<Expression> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(as_expression(j[i], index_path(path, i)));
    return out;
}

ExprMatrix expression_matrix(const json& j, std::size_t n, const std::string& path) {
    as_array(j, path, n);
    ExprMatrix out;
    for (std::size_t r = 0; r < n; ++r) out.push_back(expression_vector(j[r], n, index_path(path, r)));
    return out;
}

SamplePlan parse_sample(const json& j, int n, const std::string& path) {
    if (!j.is_object()) throw SpecError(path, "expected an object");
    reject_unknown_keys(j, path, {"points", "count", "box", "seed"});
    if (j.contains("points")) {
        if (j.contains("count") || j.contains("box")) {
            throw SpecError(path, "use either points or {count, box, seed}");
        }
        const std::string pp = key_path(path, "points");
        const json& pts = as_array(j["points"], pp);
        if (pts.empty()) throw SpecError(pp, "at least one point is required");
        std::vector<Point> points;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const std::string ip = index_path(pp, i);
            as_array(pts[i], ip, static_cast<std::size_t>(n));
            Point p(n);
            for (int a = 0; a < n; ++a) p(a) = as_number(pts[i][a], index_path(ip, a));
            points.push_back(p);
        }
        return SamplePlan::explicit_points(std::move(points));
    }
    const long long count = as_integer(require(j, "count", path), key_path(path, "count"));
    if (count < 1) throw SpecError(key_path(path, "count"), "must be at least 1");
    const std::string bp = key_path(path, "box");
    const json& box = as_array(require(j, "box", path), bp, static_cast<std::size_t>(n));
    std::vector<std::pair<double, double>> bounds;
    for (std::size_t a = 0; a < box.size(); ++a) {
        const std::string ap = index_path(bp, a);
        as_array(box[a], ap, 2);
        const double lo = as_number(box[a][0], index_path(ap, 0));
        const double hi = as_number(box[a][1], index_path(ap, 1));
        if (lo > hi) throw SpecError(ap, "lower bound exceeds upper bound");
        bounds.emplace_back(lo, hi);
    }
    const long long seed = as_integer(require(j, "seed", path), key_path(path, "seed"));
    if (seed < 0) throw SpecError(key_path(path, "seed"), "must be non-negative");
    return SamplePlan::random_box(static_cast<std::size_t>(count), std::move(bounds),
                                  static_cast<std::uint64_t>(seed));
}

VectorFieldSpec parse_vector_field(const json& j, int n, const std::string& path) {
    VectorFieldSpec out;
    if (j.is_string()) {
        if (j.get<std::string>() != "xi") throw SpecError(path, "expected \"xi\", {frame: [...]} or {coordinate: [...]}");
        return out;
    }
    if (!j.is_object() || j.size() != 1) {
        throw SpecError(path, "expected \"xi\", {frame: [...]} or {coordinate: [...]}");
    }
    if (j.contains("frame")) {
        out.kind = VectorFieldSpec::Kind::frame;
        out.components = expression_vector(j["frame"], static_cast<std::size_t>(n), key_path(path, "frame"));
    } else if (j.contains("coordinate")) {
        out.kind = VectorFieldSpec::Kind::coordinate;
        out.components =
            expression_vector(j["coordinate"], static_cast<std::size_t>(n), key_path(path, "coordinate"));
    } else {
        throw SpecError(path, "expected \"xi\", {frame: [...]} or {coordinate: [...]}");
    }
    return out;
}

SolitonSpec parse_soliton(const json& j, int n, const std::string& path) {
    if (!j.is_object()) throw SpecError(path, "expected an object");
    reject_unknown_keys(j, path,
                        {"rho", "q", "lambda", "mu", "preset", "vector_field", "theta", "connection", "convention"});
    SolitonSpec out;
    auto number = [&](const char* key) -> std::optional<double> {
        if (!j.contains(key)) return std::nullopt;
        return as_number(j[key], key_path(path, key));
    };
    out.rho = number("rho");
    out.q = number("q");
    out.lambda = number("lambda");
    out.mu = number("mu");
    out.theta = number("theta");
    if (j.contains("preset")) {
        const std::string pp = key_path(path, "preset");
        const auto preset = preset_from_string(as_string(j["preset"], pp));
        if (!preset) throw SpecError(pp, "expected ricci, yamabe, einstein or custom");
        out.preset = *preset;
        const auto pinned = SolitonParameters::from_preset(*preset);
        if (*preset != Preset::custom) {
            if (out.rho && *out.rho != pinned.rho) throw SpecError(key_path(path, "rho"), "conflicts with preset");
            if (out.q && *out.q != pinned.q) throw SpecError(key_path(path, "q"), "conflicts with preset");
            out.rho = pinned.rho;
            out.q = pinned.q;
        }
    }
    if (j.contains("vector_field")) out.vector_field = parse_vector_field(j["vector_field"], n, key_path(path, "vector_field"));
    if (j.contains("connection")) {
        const std::string cp = key_path(path, "connection");
        const std::string c = as_string(j["connection"], cp);
        if (c == "levi_civita") {
            out.connection = ConnectionKind::levi_civita;
        } else if (c == "quarter_symmetric") {
            out.connection = ConnectionKind::quarter_symmetric;
        } else {
            throw SpecError(cp, "expected levi_civita or quarter_symmetric");
        }
    }
    if (j.contains("convention")) {
        const std::string cp = key_path(path, "convention");
        const auto c = convention_from_string(as_string(j["convention"], cp));
        if (!c) throw SpecError(cp, "expected paper or standard");
        out.convention = *c;
    }
    return out;
}

} // namespace

ManifoldSpecDocument parse_spec(const json& doc) {
    if (!doc.is_object()) throw SpecError("", "spec document must be a JSON object");
    reject_unknown_keys(doc, "",
                        {"name", "description", "dimension", "coordinates", "parameters", "frame", "metric_frame",
                         "phi", "xi_index", "xi", "structure_constants", "sample", "checks", "soliton"});
    ManifoldSpecDocument out;
    out.name = as_string(require(doc, "name", ""), "name");
    const long long dim = as_integer(require(doc, "dimension", ""), "dimension");
    if (dim < 1 || dim > 64) throw SpecError("dimension", "must be between 1 and 64");
    out.dimension = static_cast<int>(dim);
    const auto n = static_cast<std::size_t>(dim);

    const json& coords = as_array(require(doc, "coordinates", ""), "coordinates", n);
    for (std::size_t i = 0; i < n; ++i) out.coordinates.push_back(as_string(coords[i], index_path("coordinates", i)));

    if (doc.contains("parameters")) {
        const json& params = doc["parameters"];
        if (!params.is_object()) throw SpecError("parameters", "expected an object");
        for (const auto& [key, value] : params.items()) {
            out.parameters[key] = as_number(value, key_path("parameters", key));
        }
    }

    out.frame = expression_matrix(require(doc, "frame", ""), n, "frame");
    if (doc.contains("metric_frame")) {
        const json& mf = doc["metric_frame"];
        if (mf.is_string()) {
            if (mf.get<std::string>() != "orthonormal") {
                throw SpecError("metric_frame", "expected \"orthonormal\" or an n x n matrix");
            }
        } else {
            out.metric = expression_matrix(mf, n, "metric_frame");
        }
    }
    out.phi = expression_matrix(require(doc, "phi", ""), n, "phi");

    const bool has_index = doc.contains("xi_index");
    const bool has_xi = doc.contains("xi");
    if (has_index == has_xi) throw SpecError("xi_index", "exactly one of xi_index or xi is required");
    if (has_index) {
        const long long idx = as_integer(doc["xi_index"], "xi_index");
        if (idx < 1 || idx > dim) throw SpecError("xi_index", "must be a 1-based frame index in [1, " + std::to_string(dim) + "]");
        out.xi_index = static_cast<int>(idx - 1);
    } else {
        out.xi = expression_vector(doc["xi"], n, "xi");
    }

    if (doc.contains("structure_constants")) {
        const json& sc = as_array(doc["structure_constants"], "structure_constants");
        std::vector<StructureConstantEntry> entries;
        for (std::size_t e = 0; e < sc.size(); ++e) {
            const std::string ep = index_path("structure_constants", e);
            if (!sc[e].is_object()) throw SpecError(ep, "expected {k, i, j, value}");
            reject_unknown_keys(sc[e], ep, {"k", "i", "j", "value"});
            StructureConstantEntry entry;
            auto index = [&](const char* key) {
                const long long v = as_integer(require(sc[e], key, ep), key_path(ep, key));
                if (v < 1 || v > dim) throw SpecError(key_path(ep, key), "1-based frame index out of range");
                return static_cast<int>(v - 1);
            };
            entry.k = index("k");
            entry.i = index("i");
            entry.j = index("j");
            if (entry.i >= entry.j) throw SpecError(ep, "entries must have i < j");
            entry.value = as_expression(require(sc[e], "value", ep), key_path(ep, "value"));
            entries.push_back(std::move(entry));
        }
        out.structure_constants = std::move(entries);
    }

    out.sample = parse_sample(require(doc, "sample", ""), out.dimension, "sample");

    if (doc.contains("checks")) {
        const json& checks = as_array(doc["checks"], "checks");
        for (std::size_t i = 0; i < checks.size(); ++i) {
            const std::string name = as_string(checks[i], index_path("checks", i));
            const auto& known = suite_names();
            if (name != "all" && std::find(known.begin(), known.end(), name) == known.end()) {
                throw SpecError(index_path("checks", i), "unknown suite '" + name + "'");
            }
            out.checks.push_back(name);
        }
    }
    if (doc.contains("soliton")) out.soliton = parse_soliton(doc["soliton"], out.dimension, "soliton");

    // Semantic validation: names, identifiers and structure fit.
    try {
        build_fixture(out);
    } catch (const SpecError&) {
        throw;
    } catch (const InputError& e) {
        throw SpecError("", e.what());
    }
    return out;
}

ManifoldSpecDocument load_spec(const std::string& path) {
    static const std::string prefix = "builtin:";
    if (path.rfind(prefix, 0) == 0) {
        const std::string name = path.substr(prefix.size());
        const auto doc = builtin_spec(name);
        if (!doc) throw InputError("unknown built-in fixture '" + name + "'");
        return parse_spec(*doc);
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open spec file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    json doc;
    try {
        doc = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw InputError(path + ": invalid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return parse_spec(doc);
}

Fixture build_fixture(const ManifoldSpecDocument& doc) {
    Fixture fx;
    fx.manifold = std::make_unique<FrameManifold>(doc.coordinates, doc.parameters, doc.frame, doc.metric);
    if (doc.structure_constants) fx.manifold->set_structure_constants(*doc.structure_constants);
    const auto it = doc.parameters.find("alpha");
    const double alpha = it == doc.parameters.end() ? 0.0 : it->second;
    if (doc.xi_index) {
        fx.structure = std::make_unique<AlmostContactStructure>(doc.phi, *doc.xi_index, alpha);
    } else {
        fx.structure = std::make_unique<AlmostContactStructure>(doc.phi, doc.xi, alpha);
    }
    fx.structure->check_compatible(*fx.manifold);
    if (doc.soliton) build_vector_field(doc.soliton->vector_field, fx);
    return fx;
}

VectorField build_vector_field(const VectorFieldSpec& spec, const Fixture& fx) {
    const FrameManifold& m = *fx.manifold;
    switch (spec.kind) {
    case VectorFieldSpec::Kind::xi: {
        const AlmostContactStructure& s = *fx.structure;
        return [&m, &s](const Point& p) { return s.xi(m, p); };
    }
    case VectorFieldSpec::Kind::frame: return frame_field(m, spec.components);
    case VectorFieldSpec::Kind::coordinate: return coordinate_field(m, spec.components);
    }
    throw InputError("unknown vector field kind");
}

} // namespace cosoliton
