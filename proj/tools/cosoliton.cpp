// cosoliton: check alpha-cosymplectic structures, quarter-symmetric
// connections and *-eta-Ricci-Yamabe soliton relations on frame manifolds.

#include "cosoliton/builtins.hpp"
#include "cosoliton/runner.hpp"
#include "cosoliton/spec_document.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

std::optional<double> env_tolerance() {
    const char* raw = std::getenv("COSOLITON_TOL");
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(raw, &end);
    if (end == raw || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
        throw cosoliton::InputError(std::string("COSOLITON_TOL is not a positive number: ") + raw);
    }
    return v;
}

int write_examples(const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (const auto& name : cosoliton::builtin_names()) {
        const fs::path path = fs::path(dir) / (name + ".json");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw cosoliton::InputError("cannot write " + path.string());
        out << cosoliton::builtin_spec(name)->dump(2) << "\n";
        std::cout << path.string() << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frame-manifold checks for alpha-cosymplectic solitons"};
    app.require_subcommand(1);
    app.set_version_flag("--version", cosoliton::kToolVersion);

    auto* run_cmd = app.add_subcommand("run", "Run check suites on a spec document");
    std::string spec_path;
    cosoliton::RunOptions opts;
    std::string format = "json";
    double alpha = 0, rho = 0, q = 0, lambda = 0, mu = 0, tol = 0;
    std::uint64_t seed = 0;
    std::size_t points = 0;
    run_cmd->add_option("spec", spec_path, "Spec file, or builtin:NAME")->required();
    run_cmd->add_option("--suite", opts.suites, "Suite to run (repeatable); default: the document's checks");
    auto* o_alpha = run_cmd->add_option("--alpha", alpha, "Override parameter alpha");
    auto* o_rho = run_cmd->add_option("--rho", rho, "Override soliton rho");
    auto* o_q = run_cmd->add_option("--q", q, "Override soliton q");
    auto* o_lambda = run_cmd->add_option("--lambda", lambda, "Override soliton lambda");
    auto* o_mu = run_cmd->add_option("--mu", mu, "Override soliton mu");
    auto* o_seed = run_cmd->add_option("--seed", seed, "Override sampling seed");
    auto* o_points = run_cmd->add_option("--points", points, "Override number of sample points");
    auto* o_tol = run_cmd->add_option("--tol", tol, "Tolerance for every suite");
    run_cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
    run_cmd->add_flag("--deterministic", opts.deterministic, "Omit wall time from the report");

    auto* validate_cmd = app.add_subcommand("validate", "Validate a spec document");
    std::string validate_path;
    validate_cmd->add_option("spec", validate_path, "Spec file, or builtin:NAME")->required();

    auto* init_cmd = app.add_subcommand("init-examples", "Write the built-in fixtures as spec files");
    std::string init_dir = "examples";
    init_cmd->add_option("dir", init_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*init_cmd) return write_examples(init_dir);
        if (*validate_cmd) {
            const auto doc = cosoliton::load_spec(validate_path);
            std::cout << "ok: " << doc.name << " (dimension " << doc.dimension << ")\n";
            return 0;
        }

        if (*o_alpha) opts.alpha = alpha;
        if (*o_rho) opts.rho = rho;
        if (*o_q) opts.q = q;
        if (*o_lambda) opts.lambda = lambda;
        if (*o_mu) opts.mu = mu;
        if (*o_seed) opts.seed = seed;
        if (*o_points) opts.points = points;
        if (*o_tol) opts.tol = tol;
        opts.default_tol = env_tolerance();

        const auto doc = cosoliton::load_spec(spec_path);
        const auto report = cosoliton::run(doc, opts);
        if (format == "json") {
            std::cout << cosoliton::to_json(report).dump(2) << "\n";
        } else {
            std::cout << cosoliton::to_text(report);
        }
        return cosoliton::exit_status(report);
    } catch (const cosoliton::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cosoliton::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
