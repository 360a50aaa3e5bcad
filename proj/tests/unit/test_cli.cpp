#include "cosoliton/builtins.hpp"
#include "cosoliton/runner.hpp"
#include "cosoliton/spec_document.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace cosoliton;
using nlohmann::json;

namespace {

json five_dim_doc() { return *builtin_spec("alpha_cosymplectic_5d"); }

std::string error_path(const json& doc) {
    try {
        parse_spec(doc);
    } catch (const SpecError& e) {
        return e.path();
    }
    return "<no error>";
}

std::string error_text(const json& doc) {
    try {
        parse_spec(doc);
    } catch (const InputError& e) {
        return e.what();
    }
    return "<no error>";
}

const SuiteResult& suite(const RunReport& r, const std::string& name) {
    for (const auto& s : r.suites) {
        if (s.name == name) return s;
    }
    throw std::runtime_error("suite not in report: " + name);
}

} // namespace

TEST_CASE("built-in fixtures load") {
    CHECK(builtin_names() == std::vector<std::string>{"alpha_cosymplectic_5d", "cosymplectic_flat_5d"});
    const auto doc = load_spec("builtin:alpha_cosymplectic_5d");
    CHECK(doc.dimension == 5);
    CHECK(doc.coordinates == std::vector<std::string>{"x", "y", "z", "u", "v"});
    CHECK(doc.xi_index == 4);
    CHECK(doc.parameters.at("alpha") == 0.7);
    CHECK(load_spec("builtin:cosymplectic_flat_5d").parameters.at("alpha") == 0.0);
    CHECK_THROWS_AS(load_spec("builtin:nope"), InputError);
    CHECK_FALSE(builtin_spec("nope").has_value());
}

TEST_CASE("schema errors name the field") {
    auto doc = five_dim_doc();
    doc.erase("frame");
    CHECK(error_path(doc) == "frame");
    CHECK(error_text(doc).find("missing required field") != std::string::npos);

    doc = five_dim_doc();
    doc["frame"].erase(doc["frame"].size() - 1);
    CHECK(error_path(doc) == "frame");
    CHECK(error_text(doc).find("dimension mismatch") != std::string::npos);

    doc = five_dim_doc();
    doc["phi"][2][1] = "1 +";
    CHECK(error_path(doc) == "phi[2][1]");
    CHECK(error_text(doc).find("offset 3") != std::string::npos);

    doc = five_dim_doc();
    doc["colour"] = "blue";
    CHECK(error_path(doc) == "colour");

    doc = five_dim_doc();
    doc["sample"].erase("seed");
    CHECK(error_path(doc) == "sample.seed");

    doc = five_dim_doc();
    doc["xi"] = {"0", "0", "0", "0", "1"};
    CHECK(error_path(doc) == "xi_index");

    doc = five_dim_doc();
    doc["checks"] = {"axioms", "gravity"};
    CHECK(error_path(doc) == "checks[1]");

    doc = five_dim_doc();
    doc["soliton"]["preset"] = "ricci";
    doc["soliton"]["q"] = 1;
    CHECK(error_path(doc) == "soliton.q");

    doc = five_dim_doc();
    doc["frame"][0][0] = "exp(beta*v)";
    CHECK(error_text(doc).find("beta") != std::string::npos);
}

TEST_CASE("explicit xi components and metric load") {
    auto doc = five_dim_doc();
    doc.erase("xi_index");
    doc["xi"] = {"0", "0", "0", "0", "1"};
    doc["metric_frame"] = json::array();
    for (int i = 0; i < 5; ++i) {
        json row = json::array();
        for (int j = 0; j < 5; ++j) row.push_back(i == j ? "1" : "0");
        doc["metric_frame"].push_back(row);
    }
    const auto parsed = parse_spec(doc);
    CHECK_FALSE(parsed.xi_index.has_value());
    CHECK(parsed.metric.has_value());
    RunOptions opts;
    opts.suites = {"axioms", "connection"};
    const auto report = run(parsed, opts);
    CHECK(report.pass);
}

TEST_CASE("structure constants in the document are one-based") {
    auto doc = five_dim_doc();
    doc["structure_constants"] = json::array();
    for (int k = 1; k <= 4; ++k) doc["structure_constants"].push_back({{"k", k}, {"i", k}, {"j", 5}, {"value", "alpha"}});
    const auto parsed = parse_spec(doc);
    REQUIRE(parsed.structure_constants.has_value());
    CHECK(parsed.structure_constants->front().k == 0);
    CHECK(parsed.structure_constants->front().j == 4);
    RunOptions opts;
    opts.suites = {"connection"};
    const auto report = run(parsed, opts);
    CHECK(report.pass);
    CHECK(suite(report, "connection").details.contains("structure_constants_closed_form"));
}

TEST_CASE("all suites pass on the five-dimensional example") {
    RunOptions opts;
    opts.suites = {"all"};
    opts.alpha = 0.7;
    const auto report = run(load_spec("builtin:alpha_cosymplectic_5d"), opts);
    for (const auto& s : report.suites) {
        INFO(s.name << " " << s.max_residual << " " << s.details.dump());
        CHECK(s.pass);
    }
    CHECK(report.suites.size() == 12);
    CHECK(report.pass);
    CHECK(exit_status(report) == 0);
    const double r = suite(report, "curvature_identities").details["scalar_curvature_mean"].get<double>();
    CHECK(std::abs(r + 9.8) <= 0.05);
}

TEST_CASE("constants suite with rho 1 and q 2") {
    RunOptions opts;
    opts.suites = {"constants"};
    opts.rho = 1.0;
    opts.q = 2.0;
    const auto report = run(load_spec("builtin:alpha_cosymplectic_5d"), opts);
    const auto& s = suite(report, "constants");
    CHECK(s.pass);
    CHECK(std::abs(s.details["lambda_plus_mu"].get<double>() + 1.96) <= 1e-2);
    CHECK(std::abs(s.details["corollary_4_3_verbatim"]["relation_deviation"].get<double>() - 15.68) <= 1e-2);
    CHECK(s.details["corollary_4_3_rederived"]["satisfies_relation"].get<bool>());
    CHECK(report.parameters["soliton"]["preset"] == "custom");
}

TEST_CASE("phi = 0 fails the axioms suite with exit status 1") {
    auto doc = five_dim_doc();
    for (auto& row : doc["phi"]) {
        for (auto& v : row) v = "0";
    }
    RunOptions opts;
    opts.suites = {"axioms"};
    const auto report = run(parse_spec(doc), opts);
    CHECK_FALSE(report.pass);
    CHECK(suite(report, "axioms").failure == SuiteFailure::check);
    CHECK(exit_status(report) == 1);
}

TEST_CASE("upstream failures stay inside their suite") {
    auto doc = five_dim_doc();
    doc["frame"][0][0] = "log(x)";
    RunOptions opts;
    opts.suites = {"axioms", "connection", "constants"};
    const auto report = run(parse_spec(doc), opts);
    CHECK(suite(report, "connection").failure == SuiteFailure::numerical);
    CHECK(std::isnan(suite(report, "connection").max_residual));
    CHECK(report.suites.size() == 3);
    CHECK(exit_status(report) == 3);
    CHECK(to_json(report)["suites"][1]["max_residual"].is_null());
}

TEST_CASE("suites needing alpha report an input failure without it") {
    auto doc = five_dim_doc();
    doc["parameters"].erase("alpha");
    for (auto& row : doc["frame"]) {
        for (auto& v : row) {
            if (v == "exp(alpha*v)") v = "1";
        }
    }
    RunOptions opts;
    opts.suites = {"axioms", "alpha_cosymplectic"};
    const auto report = run(parse_spec(doc), opts);
    CHECK(suite(report, "axioms").pass);
    CHECK(suite(report, "alpha_cosymplectic").failure == SuiteFailure::input);
    CHECK(exit_status(report) == 2);
}

TEST_CASE("suite resolution") {
    CHECK(resolve_suites({"all"}) == suite_names());
    CHECK(resolve_suites({"torsion", "axioms", "torsion"}) == std::vector<std::string>{"axioms", "torsion"});
    CHECK_THROWS_AS(resolve_suites({"gravity"}), InputError);
}

TEST_CASE("tolerance precedence") {
    const auto doc = load_spec("builtin:alpha_cosymplectic_5d");
    RunOptions opts;
    opts.suites = {"axioms", "soliton"};
    auto r = run(doc, opts);
    CHECK(suite(r, "axioms").tolerance == 1e-10);
    CHECK(suite(r, "soliton").tolerance == 1e-2);
    opts.default_tol = 1e-4;
    r = run(doc, opts);
    CHECK(suite(r, "axioms").tolerance == 1e-4);
    opts.tol = 0.5;
    r = run(doc, opts);
    CHECK(suite(r, "soliton").tolerance == 0.5);
    opts.tol = -1.0;
    CHECK_THROWS_AS(run(doc, opts), InputError);
}

TEST_CASE("overrides take precedence over the document") {
    const auto doc = load_spec("builtin:alpha_cosymplectic_5d");
    RunOptions opts;
    opts.suites = {"alpha_cosymplectic"};
    opts.alpha = 0.25;
    opts.seed = 9;
    opts.points = 3;
    opts.lambda = 0.5;
    opts.mu = -0.5;
    const auto report = run(doc, opts);
    CHECK(report.parameters["alpha"] == 0.25);
    CHECK(report.parameters["seed"] == 9);
    CHECK(report.parameters["points"] == 3);
    CHECK(report.parameters["soliton"]["lambda"] == 0.5);
    CHECK(report.parameters["soliton"]["mu"] == -0.5);
    CHECK(report.pass);
}

TEST_CASE("deterministic reports are byte-identical") {
    const auto doc = load_spec("builtin:alpha_cosymplectic_5d");
    RunOptions opts;
    opts.deterministic = true;
    const std::string a = to_json(run(doc, opts)).dump(2);
    const std::string b = to_json(run(doc, opts)).dump(2);
    CHECK(a == b);
    CHECK(a.find("wall_time_s") == std::string::npos);
    opts.deterministic = false;
    CHECK(to_json(run(doc, opts)).contains("wall_time_s"));
}

TEST_CASE("text report lists every suite and its residual") {
    RunOptions opts;
    opts.deterministic = true;
    const auto report = run(load_spec("builtin:alpha_cosymplectic_5d"), opts);
    const std::string text = to_text(report);
    for (const auto& s : report.suites) {
        CHECK(text.find("  " + s.name + "  max_residual=") != std::string::npos);
    }
    CHECK(text.find("overall: PASS") != std::string::npos);
}

TEST_CASE("flat built-in passes with vanishing residuals") {
    RunOptions opts;
    const auto report = run(load_spec("builtin:cosymplectic_flat_5d"), opts);
    for (const auto& s : report.suites) {
        INFO(s.name);
        CHECK(s.pass);
    }
}

TEST_CASE("invalid JSON and missing files are input errors") {
    CHECK_THROWS_AS(load_spec("/nonexistent/spec.json"), InputError);
    CHECK_THROWS_AS(parse_spec(json::array()), SpecError);
}
