#pragma once

// Grammar corpus and round-trip fuzzer shared by the unit tests and the
// acceptance binary.

#include "cosoliton/expr.hpp"
#include "cosoliton/sampling.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace testing {

struct ParserCase {
    enum class Expect { text, value, error };
    std::string input;
    Expect expect;
    std::string text;  // serialization for Expect::text
    double value = 0;  // for Expect::value, with x=3, y=2, z=3, alpha=0.5, v=2
    std::size_t offset = 0;  // for Expect::error
};

inline std::vector<ParserCase> parser_corpus() {
    using E = ParserCase::Expect;
    return {
        // precedence and associativity
        {"1+2*3", E::text, "(1 + (2 * 3))"},
        {"(1+2)*3", E::text, "((1 + 2) * 3)"},
        {"a-b-c", E::text, "((a - b) - c)"},
        {"a/b/c", E::text, "((a / b) / c)"},
        {"a^b^c", E::text, "(a ^ (b ^ c))"},
        {"-x^2", E::text, "(-(x ^ 2))"},
        {"2^-1", E::text, "(2 ^ (-1))"},
        {"-(-x)", E::text, "(-(-x))"},
        {"--x", E::text, "(-(-x))"},
        {"a*b+c*d", E::text, "((a * b) + (c * d))"},
        {"a+b*c^d", E::text, "(a + (b * (c ^ d)))"},
        {"exp(alpha*v)", E::text, "exp((alpha * v))"},
        {"  sin ( x ) ", E::text, "sin(x)"},
        {"1.5e3", E::text, "1500"},
        {"2.5E-1", E::text, "0.25"},
        {".5", E::text, "0.5"},
        {"3.", E::text, "3"},
        {"x*-y", E::text, "(x * (-y))"},
        {"-a*b", E::text, "((-a) * b)"},
        {"a-(-b)", E::text, "(a - (-b))"},
        {"sqrt(abs(x))", E::text, "sqrt(abs(x))"},
        {"(((x)))", E::text, "x"},
        {"2^3^2", E::text, "(2 ^ (3 ^ 2))"},
        {"-2^2", E::text, "(-(2 ^ 2))"},
        {"a^-b^c", E::text, "(a ^ (-(b ^ c)))"},
        // evaluation
        {"-x^2", E::value, "", -9.0},
        {"2*(x+y)/z", E::value, "", 10.0 / 3.0},
        {"2^3^2", E::value, "", 512.0},
        {"(2^3)^2", E::value, "", 64.0},
        {"10-4-3", E::value, "", 3.0},
        {"64/4/2", E::value, "", 8.0},
        {"exp(alpha*v)", E::value, "", std::numbers::e},
        {"pi", E::value, "", std::numbers::pi},
        {"e", E::value, "", std::numbers::e},
        {"2^-1", E::value, "", 0.5},
        {"abs(-3)+sqrt(16)", E::value, "", 7.0},
        {"log(e)", E::value, "", 1.0},
        {"x - y*z + 1", E::value, "", -2.0},
        // errors with byte offsets
        {"", E::error, "", 0, 0},
        {"   ", E::error, "", 0, 3},
        {"1+", E::error, "", 0, 2},
        {"foo(x)", E::error, "", 0, 0},
        {"2*(x+1", E::error, "", 0, 6},
        {"x $ y", E::error, "", 0, 2},
        {"sin(x,y)", E::error, "", 0, 0},
        {"1..2", E::error, "", 0, 2},
        {"x y", E::error, "", 0, 2},
        {"*x", E::error, "", 0, 0},
        {"(x", E::error, "", 0, 2},
        {"1e999", E::error, "", 0, 0},
    };
}

inline cosoliton::Bindings corpus_bindings() {
    cosoliton::Bindings b;
    b.set("x", 3.0);
    b.set("y", 2.0);
    b.set("z", 3.0);
    b.set("alpha", 0.5);
    b.set("v", 2.0);
    return b;
}

struct CorpusOutcome {
    std::size_t passed = 0;
    std::vector<std::string> failures;
};

inline CorpusOutcome run_parser_corpus() {
    CorpusOutcome out;
    const auto b = corpus_bindings();
    for (const auto& c : parser_corpus()) {
        bool ok = false;
        try {
            const auto e = cosoliton::Expression::parse(c.input);
            if (c.expect == ParserCase::Expect::text) ok = e.to_string() == c.text;
            if (c.expect == ParserCase::Expect::value) {
                ok = std::abs(e.evaluate(b) - c.value) <= 1e-12 * std::max(1.0, std::abs(c.value));
            }
        } catch (const cosoliton::ParseError& err) {
            ok = c.expect == ParserCase::Expect::error && err.offset() == c.offset;
        }
        if (ok) {
            ++out.passed;
        } else {
            out.failures.push_back(c.input);
        }
    }
    return out;
}

/// Random expression text drawn from the grammar, with random spacing and
/// redundant parentheses.
class ExpressionFuzzer {
public:
    explicit ExpressionFuzzer(std::uint64_t seed) : rng_(seed) {}

    std::string next() { return expr(0); }

private:
    int pick(int n) { return static_cast<int>(rng_.uniform(0.0, static_cast<double>(n))); }

    std::string space() {
        static const char* options[] = {"", "", " ", "  ", "\t"};
        return options[pick(5)];
    }

    std::string number() {
        switch (pick(5)) {
        case 0: return std::to_string(pick(1000));
        case 1: return std::to_string(pick(100)) + "." + std::to_string(pick(1000));
        case 2: return std::to_string(pick(10)) + "." + std::to_string(pick(100)) + "e" + (pick(2) ? "-" : "") +
                       std::to_string(pick(12));
        case 3: return "." + std::to_string(pick(100));
        default: return std::to_string(pick(50)) + "E+" + std::to_string(pick(5));
        }
    }

    std::string expr(int depth) {
        const int choice = depth > 5 ? pick(2) : pick(9);
        static const char* names[] = {"x", "y", "z", "alpha", "v", "pi", "e", "t_1", "Theta"};
        static const char* funcs[] = {"exp", "log", "sin", "cos", "tan", "sinh", "cosh", "tanh", "sqrt", "abs"};
        static const char* ops[] = {"+", "-", "*", "/", "^"};
        switch (choice) {
        case 0: return number();
        case 1: return names[pick(9)];
        case 2: return "-" + space() + expr(depth + 1);
        case 3: return "(" + space() + expr(depth + 1) + space() + ")";
        case 4: return std::string(funcs[pick(10)]) + space() + "(" + expr(depth + 1) + ")";
        default: return expr(depth + 1) + space() + ops[pick(5)] + space() + expr(depth + 1);
        }
    }

    cosoliton::Rng rng_;
};

/// Counts fuzzed strings whose parse -> serialize -> parse is not an
/// identical tree. Every generated string must also parse.
inline std::size_t round_trip_failures(std::size_t count, std::uint64_t seed, std::string* first_failure = nullptr) {
    ExpressionFuzzer fuzz(seed);
    std::size_t failures = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const std::string text = fuzz.next();
        bool ok = false;
        try {
            const auto a = cosoliton::Expression::parse(text);
            const auto b = cosoliton::Expression::parse(a.to_string());
            ok = a == b && b.to_string() == a.to_string();
        } catch (const cosoliton::InputError&) {
            ok = false;
        }
        if (!ok) {
            if (failures == 0 && first_failure) *first_failure = text;
            ++failures;
        }
    }
    return failures;
}

} // namespace testing
