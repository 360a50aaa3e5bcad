// Acceptance criteria 1-11: one PASS/FAIL line each, exit status 1 if any fails.

#include "fixtures.hpp"
#include "five_dim_tables.hpp"
#include "parser_corpus.hpp"

#include "cosoliton/solitons.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace testing;

namespace {

struct Line {
    int id;
    bool pass;
    std::string summary;
    std::vector<std::string> notes;
};

std::string sci(double v) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(2) << v;
    return os.str();
}

double diff3(const Tensor3& a, const Tensor3& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

double worst_of(const std::vector<CurvatureReport>& reps, const std::vector<std::string>& labels) {
    double m = 0.0;
    for (const auto& r : reps) {
        for (const auto& l : labels) {
            if (r.label == l) m = std::max(m, r.max_residual);
        }
    }
    return m;
}

Line criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double a : {-0.3, 0.5, 1.0}) {
        auto g = five_dim(a);
        const Tensor3 expected = table(a).gamma;
        for (const auto& p : cube_points(32, 101)) worst = std::max(worst, diff3(levi_civita(*g.m, p), expected));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {1, worst <= 1e-5 && secs <= 5.0,
            "Levi-Civita table, alpha in {-0.3,0.5,1.0}, 32 points: max |Gamma - table| = " + sci(worst) +
                " (tol 1e-5), runtime " + sci(secs) + " s (limit 5 s)",
            {}};
}

Line criterion_2() {
    double table_err = 0.0, other_err = 0.0;
    for (double a : {-0.3, 0.5, 0.7, 1.0}) {
        auto g = five_dim(a);
        const Tensor3 expected = table(a).gamma_qs;
        for (const auto& p : cube_points(32, 102)) {
            const Tensor3 lc = levi_civita(*g.m, p);
            const Tensor3 qs = quarter_symmetric(lc, *g.s, *g.m, p);
            for (int k = 0; k < 5; ++k) {
                for (int i = 0; i < 5; ++i) {
                    for (int j = 0; j < 5; ++j) {
                        if (i == 4 && j < 4) {
                            table_err = std::max(table_err, std::abs(qs(k, i, j) - expected(k, i, j)));
                        } else {
                            other_err = std::max(other_err, std::abs(qs(k, i, j) - lc(k, i, j)));
                        }
                    }
                }
            }
        }
    }
    return {2, table_err <= 1e-5 && other_err <= 1e-8,
            "quarter-symmetric table: nabla~_{e5} e_j error " + sci(table_err) +
                " (tol 1e-5), other Gamma~ - Gamma " + sci(other_err) + " (tol 1e-8)",
            {}};
}

Line criterion_3() {
    double printed = 0.0, full = 0.0, routes = 0.0;
    for (double a : {0.7, -0.3, 1.0}) {
        auto g = five_dim(a);
        const Table t = table(a);
        const Tensor4 r_exact = constant_curvature(t.gamma, t.c);
        const Tensor4 rq_exact = constant_curvature(t.gamma_qs, t.c);
        for (const auto& p : cube_points(4, 103)) {
            const PointGeometry geo = evaluate_geometry(*g.m, *g.s, p);
            for (const auto& row : printed_lc()) {
                const Vec got = apply_curvature(geo.riemann, e(5, row.i), e(5, row.j), e(5, row.k));
                printed = std::max(printed, (got - expected(row, a)).cwiseAbs().maxCoeff());
            }
            for (const auto& row : printed_qs()) {
                const Vec got = apply_curvature(geo.riemann_qs, e(5, row.i), e(5, row.j), e(5, row.k));
                printed = std::max(printed, (got - expected(row, a)).cwiseAbs().maxCoeff());
            }
            full = std::max({full, max_diff(geo.riemann, r_exact), max_diff(geo.riemann_qs, rq_exact)});
        }
    }
    auto g = five_dim(0.7);
    const auto qs = ConnectionField::quarter_symmetric(*g.m, *g.s);
    const auto lc = ConnectionField::levi_civita(*g.m);
    Rng rng(104);
    const auto pts = cube_points(200, 105);
    for (const auto& p : pts) {
        const Vec x = rng.vector(5), y = rng.vector(5), z = rng.vector(5);
        const Vec direct = curvature_qs_direct(qs, x, y, z, p);
        const Vec via = curvature_qs_from_levi_civita(curvature(lc, x, y, z, p), *g.s, *g.m, x, y, z, p);
        routes = std::max(routes, (direct - via).cwiseAbs().maxCoeff());
    }
    return {3, printed <= 1e-3 && full <= 1e-3 && routes <= 1e-3,
            "curvature tables: printed entries " + sci(printed) + ", full tensors " + sci(full) +
                ", direct vs formula on 200 random triples " + sci(routes) + " (tol 1e-3)",
            {}};
}

Line criterion_4() {
    double s_err = 0.0, r_err = 0.0, rq_err = 0.0, star_err = 0.0;
    for (double a : {0.7, -0.3, 1.0}) {
        auto g = five_dim(a);
        const double a2 = a * a;
        for (const auto& p : cube_points(16, 106)) {
            const PointGeometry geo = evaluate_geometry(*g.m, *g.s, p);
            for (int i = 1; i <= 5; ++i) s_err = std::max(s_err, std::abs(geo.s(e(5, i), e(5, i)) + 4 * a2));
            r_err = std::max(r_err, std::abs(geo.r + 20 * a2));
            rq_err = std::max(rq_err, std::abs(geo.r_qs - geo.r));
            star_err = std::max(star_err, std::abs(geo.r_star() - (geo.r + 16 * a2)));
        }
    }
    return {4, s_err <= 1e-2 && r_err <= 5e-2 && rq_err <= 5e-2 && star_err <= 1e-2,
            "Ricci/scalar: S(e_i,e_i)+4a^2 " + sci(s_err) + " (1e-2), r+20a^2 " + sci(r_err) + " (5e-2), r~-r " +
                sci(rq_err) + " (5e-2), r*-r-16a^2 " + sci(star_err) + " (1e-2)",
            {}};
}

Line criterion_5() {
    auto g = five_dim(0.7);
    const auto pts = cube_points(16, 107);
    const double axioms = check_axioms(*g.s, *g.m, pts, 1e-10).max_residual();
    const auto lc_reps = check_levi_civita_identities(*g.m, *g.s, pts, 1e-3);
    const auto qs_reps = check_quarter_symmetric_identities(*g.m, *g.s, pts, 1e-3);
    const double lc = worst_of(lc_reps, {"curvature_with_xi_last", "curvature_with_xi_first", "curvature_with_xi_twice",
                                         "eta_of_curvature", "ricci_with_xi"});
    const double thm = worst_of(qs_reps, {"qs_skew_last_pair", "qs_skew_first_pair", "qs_ricci_with_xi",
                                          "qs_scalar_equals_lc"});
    Rng rng(108);
    double witness = 0.0;
    for (int t = 0; t < 100; ++t) {
        const PointGeometry geo = evaluate_geometry(*g.m, *g.s, pts[t % pts.size()]);
        const Vec y = rng.vector(5), z = rng.vector(5);
        const double expected = 2 * 0.7 * std::abs(geo.g(geo.phi * y, z));
        witness = std::max(witness, std::abs(ricci_asymmetry(geo, y, z) - expected));
    }
    return {5, axioms <= 1e-10 && lc <= 1e-3 && thm <= 1e-3 && witness <= 1e-2,
            "identities: structure axioms " + sci(axioms) + " (1e-10), Levi-Civita curvature relations " + sci(lc) +
                " (1e-3), quarter-symmetric skewness, S~(Y,xi) and r~ = r " + sci(thm) + " (1e-3), asymmetry witness " +
                sci(witness) + " (1e-2)",
            {}};
}

Line criterion_6() {
    double exact = 0.0, numeric = 0.0, rederived = 0.0, verbatim = 0.0;
    for (double a : {0.7, -0.3, 1.0}) {
        auto g = five_dim(a);
        const double a2 = a * a;
        double r_mean = 0.0;
        const auto pts = cube_points(16, 109);
        for (const auto& p : pts) r_mean += evaluate_geometry(*g.m, *g.s, p).r;
        r_mean /= static_cast<double>(pts.size());
        for (double q : {-1.0, 0.0, 1.0, 2.0}) {
            const ConstantInputs in{5, a, 1.0, q, -20 * a2, 4 * a};
            exact = std::max(exact, std::abs(solve_constants(in, ConstantsMode::relation_4_9).sum + 2 * a2 * q));
            ConstantInputs num = in;
            num.r = r_mean;
            numeric = std::max(numeric, std::abs(solve_constants(num, ConstantsMode::relation_4_9).sum + 2 * a2 * q));
            rederived = std::max(rederived,
                                 std::abs(solve_constants(in, ConstantsMode::corollary_4_3_rederived).relation_deviation));
            verbatim = std::max(verbatim, std::abs(solve_constants(in, ConstantsMode::corollary_4_3_verbatim).relation_deviation -
                                                   q * a2 * 16));
        }
    }
    return {6, exact <= 1e-12 && numeric <= 1e-2 && rederived <= 1e-12 && verbatim <= 1e-12,
            "constants: exact r " + sci(exact) + " (1e-12), numeric r " + sci(numeric) + " (1e-2), rederived " +
                sci(rederived) + " (1e-12), verbatim deviation - q a^2 (n-1)^2 " + sci(verbatim) + " (1e-12)",
            {}};
}

Line criterion_7() {
    auto d1 = [](double l, double m, double a, double r, int n) { return -n * (l + a * a * (n - 2)) - m - (a * a + r); };
    auto d2 = [](double l, double m, double a, double r, int n) {
        return -n * (l - r / 2 - a * a * (n - 1) * (n - 1) / 2) - m;
    };
    auto d3 = [](double l, double m, double a, double r, int n) {
        return -n * (l + a * a * (n - 2) + r / 2 + a * a * (n - 1) * (n - 1) / 2) - m - (a * a + r);
    };
    Rng rng(110);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const double l = rng.uniform(-10, 10), m = rng.uniform(-10, 10), a = rng.uniform(-2, 2), r = rng.uniform(-50, 50);
        const int n = 2 + static_cast<int>(rng.uniform(0, 8));
        worst = std::max(worst, std::abs(laplacian_bound(SolitonParameters::from_preset(Preset::ricci, l, m), n, a, r) -
                                         d1(l, m, a, r, n)));
        worst = std::max(worst, std::abs(laplacian_bound(SolitonParameters::from_preset(Preset::yamabe, l, m), n, a, r) -
                                         d2(l, m, a, r, n)));
        worst = std::max(worst, std::abs(laplacian_bound(SolitonParameters::from_preset(Preset::einstein, l, m), n, a, r) -
                                         d3(l, m, a, r, n)));
    }
    return {7, worst <= 1e-12,
            "Laplacian presets vs hand-coded formulas, 1000 tuples, n <= 9: max |diff| = " + sci(worst) + " (tol 1e-12)",
            {}};
}

Line criterion_8() {
    auto g = five_dim(0.0);
    const auto pts = cube_points(16, 111);
    double curv = 0.0;
    for (const auto& r : check_identities(*g.m, *g.s, pts, 1e-8)) curv = std::max(curv, r.max_residual);
    double ricci = 0.0, scalar = 0.0, gamma = 0.0, sum = 0.0, curvature_gap = 0.0;
    for (const auto& p : pts) {
        const PointGeometry geo = evaluate_geometry(*g.m, *g.s, p);
        ricci = std::max({ricci, geo.ricci.cwiseAbs().maxCoeff(), geo.ricci_qs.cwiseAbs().maxCoeff()});
        scalar = std::max(scalar, std::abs(geo.r));
        gamma = std::max(gamma, diff3(geo.gamma_qs, geo.gamma));
        curvature_gap = std::max(curvature_gap, max_diff(geo.riemann_qs, geo.riemann));
        for (double q : {-1.0, 0.0, 1.0, 2.0}) sum = std::max(sum, std::abs(relation_sum({5, 0.0, 1.0, q, geo.r, 0.0})));
    }
    const bool pass = curv <= 1e-8 && ricci <= 1e-8 && scalar <= 1e-8 && gamma <= 1e-8 && sum <= 1e-8;
    Line line{8, pass,
              "alpha = 0: curvature residuals " + sci(curv) + ", |S| " + sci(ricci) + ", |r| " + sci(scalar) +
                  ", |Gamma~ - Gamma| " + sci(gamma) + ", |Lambda+mu| " + sci(sum) + " (tol 1e-8 each)",
              {}};
    if (gamma > 1e-8) {
        line.notes.push_back("Gamma~ - Gamma = -eta(e_i) phi e_j does not involve alpha: nabla~_{e5} e1 = e2 at "
                             "alpha = 0 as well, so Gamma~ = Gamma cannot hold while phi != 0.");
        line.notes.push_back("R~ - R at alpha = 0: " + sci(curvature_gap) +
                             "; both curvatures vanish, so the remaining alpha = 0 statements hold.");
    }
    return line;
}

Line criterion_9() {
    struct Case {
        std::string name;
        Geometry geo;
        std::vector<Point> points;
    };
    std::vector<Case> cases;
    cases.push_back({"alpha_cosymplectic_5d", five_dim(0.7), cube_points(8, 112)});
    cases.push_back({"cosymplectic_flat_5d", five_dim(0.0), cube_points(8, 112)});
    cases.push_back({"sphere_x_line", sphere_line(), sphere_points(8, 112)});
    cases.push_back({"sphere_x_line_coordinate_frame", sphere_line_coordinate_frame(), sphere_points(8, 112)});
    bool pass = true;
    std::vector<std::string> notes;
    for (auto& c : cases) {
        const auto lc = ConnectionField::levi_civita(*c.geo.m);
        const auto qs = ConnectionField::quarter_symmetric(*c.geo.m, *c.geo.s);
        bool antisym = true;
        double torsion_lc = 0, torsion_qs = 0, compat = 0;
        for (const auto& p : c.points) {
            const Tensor3 cst = structure_constants(*c.geo.m, p);
            const int n = cst.size();
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) antisym = antisym && cst(k, i, j) + cst(k, j, i) == 0.0;
            torsion_lc = std::max(torsion_lc, torsion_free_residual(lc, p));
            torsion_qs = std::max(torsion_qs, quarter_symmetric_torsion_residual(qs, *c.geo.s, p));
            compat = std::max({compat, metric_compatibility(lc, p), metric_compatibility(qs, p)});
        }
        const double bianchi =
            worst_of(check_levi_civita_identities(*c.geo.m, *c.geo.s, c.points, 1e-3), {"first_bianchi"});
        const bool ok = antisym && torsion_lc <= 1e-5 && torsion_qs <= 1e-5 && compat <= 1e-5 && bianchi <= 1e-3;
        pass = pass && ok;
        notes.push_back(c.name + ": antisymmetry " + (antisym ? "exact" : "BROKEN") + ", torsion " + sci(torsion_lc) +
                        "/" + sci(torsion_qs) + ", compatibility " + sci(compat) + ", Bianchi " + sci(bianchi));
    }
    return {9, pass, "property suite on both built-ins and the sphere x line fixture", notes};
}

Line criterion_10() {
#ifdef COSOLITON_TOOL
    auto capture = [](const std::string& cmd, int& status) {
        std::string out;
        FILE* pipe = popen(cmd.c_str(), "r");
        if (!pipe) {
            status = -1;
            return out;
        }
        std::array<char, 4096> buf{};
        std::size_t got = 0;
        while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
        status = pclose(pipe);
        return out;
    };
    const std::string cmd = std::string("\"") + COSOLITON_TOOL +
                            "\" run builtin:alpha_cosymplectic_5d --suite all --seed 42 --deterministic --format json";
    int s1 = 0, s2 = 0;
    const std::string a = capture(cmd, s1);
    const std::string b = capture(cmd, s2);
    const bool pass = s1 == 0 && s2 == 0 && !a.empty() && a == b;
    return {10, pass,
            "two --deterministic CLI runs: " + std::to_string(a.size()) + " bytes, " +
                (a == b ? "byte-identical" : "DIFFERENT") + ", exit statuses " + std::to_string(s1) + "/" +
                std::to_string(s2),
            {}};
#else
    return {10, false, "tool path not configured", {}};
#endif
}

Line criterion_11() {
    const auto corpus = run_parser_corpus();
    std::string first;
    const std::size_t fuzz_failures = round_trip_failures(1000, 20240501, &first);
    Line line{11, corpus.passed == 50 && corpus.failures.empty() && fuzz_failures == 0,
              "parser: corpus " + std::to_string(corpus.passed) + "/" + std::to_string(parser_corpus().size()) +
                  ", round-trip failures " + std::to_string(fuzz_failures) + "/1000",
              {}};
    for (const auto& f : corpus.failures) line.notes.push_back("corpus case failed: '" + f + "'");
    if (fuzz_failures) line.notes.push_back("first fuzz failure: " + first);
    return line;
}

} // namespace

int main() {
    using Fn = Line (*)();
    const Fn criteria[] = {criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5, criterion_6,
                           criterion_7, criterion_8, criterion_9, criterion_10, criterion_11};
    int failed = 0;
    for (Fn f : criteria) {
        Line line;
        try {
            line = f();
        } catch (const std::exception& e) {
            line = {0, false, std::string("exception: ") + e.what(), {}};
        }
        if (!line.pass) ++failed;
        std::cout << (line.pass ? "PASS" : "FAIL") << "  criterion " << line.id << ": " << line.summary << "\n";
        for (const auto& n : line.notes) std::cout << "      " << n << "\n";
    }
    std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criterion/criteria failed") << "\n";
    return failed == 0 ? 0 : 1;
}
