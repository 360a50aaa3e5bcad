#pragma once

// Closed-form real expressions over coordinates and parameters.
//
// Grammar (whitespace-insensitive):
//   expr  := term (('+'|'-') term)*
//   term  := unary (('*'|'/') unary)*
//   unary := '-' unary | power
//   power := atom ('^' unary)?
//   atom  := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//
// '^' is right-associative and binds tighter than unary minus, so "-x^2"
// is -(x^2) while "2^-1" is 2^(-1).

#include "cosoliton/errors.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cosoliton {

class ParseError : public InputError {
public:
    ParseError(const std::string& message, std::size_t offset);
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Raised for unbound identifiers (an input problem).
class UnboundIdentifierError : public InputError {
public:
    explicit UnboundIdentifierError(const std::string& name);
};

/// Raised for log/sqrt/pow outside their real domain and non-finite results.
class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

enum class Function { exp, log, sin, cos, tan, sinh, cosh, tanh, sqrt, abs };

std::string_view function_name(Function f);

/// Name -> value lookup used during evaluation. Small and flat: a chart
/// rarely carries more than a dozen names.
class Bindings {
public:
    Bindings() = default;

    void set(std::string name, double value);
    const double* find(std::string_view name) const noexcept;
    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::vector<std::pair<std::string, double>> entries_;
};

/// True for names that are reserved constants ("pi", "e").
bool is_reserved_constant(std::string_view name);

class Expression {
public:
    enum class Kind { number, identifier, negate, add, subtract, multiply, divide, power, call };

    struct Node;

    /// A literal zero.
    Expression();

    static Expression parse(std::string_view text);
    static Expression number(double value);
    static Expression identifier(std::string name);

    double evaluate(const Bindings& bindings) const;

    /// Fully parenthesized text that parses back to an identical tree.
    std::string to_string() const;

    /// Every identifier referenced (excluding function names), sorted, unique.
    std::vector<std::string> identifiers() const;

    Kind kind() const;
    /// True if the tree is a literal (possibly negated) number.
    bool is_constant() const;

    friend bool operator==(const Expression& a, const Expression& b);

    const Node& root() const { return *root_; }

private:
    explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

    std::shared_ptr<const Node> root_;

    friend class Parser;
};

struct Expression::Node {
    Kind kind = Kind::number;
    double value = 0.0;           // number
    std::string name;             // identifier
    Function function = Function::exp;  // call
    std::vector<std::shared_ptr<const Node>> children;
};

Expression parse_expression(std::string_view text);
double evaluate(const Expression& e, const Bindings& bindings);
std::string serialize(const Expression& e);

} // namespace cosoliton
