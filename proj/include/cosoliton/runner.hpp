#pragma once

// Runs check suites over a spec document and assembles the report.

#include "cosoliton/spec_document.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cosoliton {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunOptions {
    /// Empty: the document's "checks" (or all suites when it lists none).
    std::vector<std::string> suites;
    std::optional<double> alpha;
    std::optional<double> rho;
    std::optional<double> q;
    std::optional<double> lambda;
    std::optional<double> mu;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> points;
    /// Overrides every suite tolerance.
    std::optional<double> tol;
    /// Replaces the built-in defaults (COSOLITON_TOL); --tol still wins.
    std::optional<double> default_tol;
    bool deterministic = false;
};

enum class SuiteFailure { none, check, input, numerical };

struct SuiteResult {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    nlohmann::json details = nlohmann::json::object();
    SuiteFailure failure = SuiteFailure::none;
};

struct RunReport {
    std::string version = kToolVersion;
    std::string fixture;
    nlohmann::json parameters = nlohmann::json::object();
    std::vector<SuiteResult> suites;
    bool pass = false;
    std::optional<double> wall_time_s;
};

/// Default tolerance of a suite.
double default_tolerance(const std::string& suite);

/// Expands "all", rejects unknown names, removes duplicates and orders by
/// execution order. Throws InputError.
std::vector<std::string> resolve_suites(const std::vector<std::string>& requested);

/// Upstream failures inside a suite are recorded in that suite and do not
/// stop the others.
RunReport run(const ManifoldSpecDocument& doc, const RunOptions& opts);

nlohmann::json to_json(const RunReport& report);
std::string to_text(const RunReport& report);

/// 0 all pass, 1 check failure, 2 input error, 3 numerical failure; the most
/// severe suite outcome wins.
int exit_status(const RunReport& report);

} // namespace cosoliton
