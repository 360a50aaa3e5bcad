#include "cosoliton/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>

namespace cosoliton {

namespace {

constexpr std::array<std::pair<std::string_view, Function>, 10> kFunctions{{
    {"exp", Function::exp},
    {"log", Function::log},
    {"sin", Function::sin},
    {"cos", Function::cos},
    {"tan", Function::tan},
    {"sinh", Function::sinh},
    {"cosh", Function::cosh},
    {"tanh", Function::tanh},
    {"sqrt", Function::sqrt},
    {"abs", Function::abs},
}};

bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make_number(double v) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Expression::Kind::number;
    n->value = v;
    return n;
}

NodePtr make_identifier(std::string name) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Expression::Kind::identifier;
    n->name = std::move(name);
    return n;
}

NodePtr make_unary(NodePtr child) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Expression::Kind::negate;
    n->children.push_back(std::move(child));
    return n;
}

NodePtr make_binary(Expression::Kind kind, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = kind;
    n->children.push_back(std::move(lhs));
    n->children.push_back(std::move(rhs));
    return n;
}

NodePtr make_call(Function f, NodePtr arg) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Expression::Kind::call;
    n->function = f;
    n->children.push_back(std::move(arg));
    return n;
}

std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

std::string describe(double v) { return format_number(v); }

double checked(double value, const char* what, double arg) {
    if (!std::isfinite(value)) {
        throw DomainError(std::string(what) + " produced a non-finite result at argument " +
                          describe(arg));
    }
    return value;
}

double apply(Function f, double x) {
    switch (f) {
    case Function::exp: return checked(std::exp(x), "exp", x);
    case Function::log:
        if (!(x > 0.0)) throw DomainError("log of non-positive value " + describe(x));
        return std::log(x);
    case Function::sin: return std::sin(x);
    case Function::cos: return std::cos(x);
    case Function::tan: return checked(std::tan(x), "tan", x);
    case Function::sinh: return checked(std::sinh(x), "sinh", x);
    case Function::cosh: return checked(std::cosh(x), "cosh", x);
    case Function::tanh: return std::tanh(x);
    case Function::sqrt:
        if (x < 0.0) throw DomainError("sqrt of negative value " + describe(x));
        return std::sqrt(x);
    case Function::abs: return std::abs(x);
    }
    return 0.0;
}

double power(double base, double exponent) {
    if (base < 0.0 && std::trunc(exponent) != exponent) {
        throw DomainError("non-integer power " + describe(exponent) + " of negative base " +
                          describe(base));
    }
    if (base == 0.0 && exponent < 0.0) {
        throw DomainError("zero raised to negative power " + describe(exponent));
    }
    const double v = std::pow(base, exponent);
    if (!std::isfinite(v)) throw DomainError("power overflow: " + describe(base) + "^" + describe(exponent));
    return v;
}

double eval_node(const Expression::Node& n, const Bindings& b) {
    using K = Expression::Kind;
    switch (n.kind) {
    case K::number: return n.value;
    case K::identifier: {
        if (n.name == "pi") return std::numbers::pi;
        if (n.name == "e") return std::numbers::e;
        if (const double* v = b.find(n.name)) return *v;
        throw UnboundIdentifierError(n.name);
    }
    case K::negate: return -eval_node(*n.children[0], b);
    case K::add: return eval_node(*n.children[0], b) + eval_node(*n.children[1], b);
    case K::subtract: return eval_node(*n.children[0], b) - eval_node(*n.children[1], b);
    case K::multiply: return eval_node(*n.children[0], b) * eval_node(*n.children[1], b);
    case K::divide: {
        const double num = eval_node(*n.children[0], b);
        const double den = eval_node(*n.children[1], b);
        if (den == 0.0) throw DomainError("division by zero");
        return checked(num / den, "division", num);
    }
    case K::power: return power(eval_node(*n.children[0], b), eval_node(*n.children[1], b));
    case K::call: return apply(n.function, eval_node(*n.children[0], b));
    }
    return 0.0;
}

char op_char(Expression::Kind k) {
    switch (k) {
    case Expression::Kind::add: return '+';
    case Expression::Kind::subtract: return '-';
    case Expression::Kind::multiply: return '*';
    case Expression::Kind::divide: return '/';
    case Expression::Kind::power: return '^';
    default: return '?';
    }
}

void write_node(const Expression::Node& n, std::string& out) {
    using K = Expression::Kind;
    switch (n.kind) {
    case K::number:
        if (n.value < 0.0 || std::signbit(n.value)) {
            out += "(-" + format_number(-n.value) + ")";
        } else {
            out += format_number(n.value);
        }
        return;
    case K::identifier: out += n.name; return;
    case K::negate:
        out += "(-";
        write_node(*n.children[0], out);
        out += ')';
        return;
    case K::call:
        out += function_name(n.function);
        out += '(';
        write_node(*n.children[0], out);
        out += ')';
        return;
    default:
        out += '(';
        write_node(*n.children[0], out);
        out += ' ';
        out += op_char(n.kind);
        out += ' ';
        write_node(*n.children[1], out);
        out += ')';
        return;
    }
}

bool equal_nodes(const Expression::Node& a, const Expression::Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Expression::Kind::number:
        return a.value == b.value && std::signbit(a.value) == std::signbit(b.value);
    case Expression::Kind::identifier: return a.name == b.name;
    case Expression::Kind::call:
        if (a.function != b.function) return false;
        break;
    default: break;
    }
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!equal_nodes(*a.children[i], *b.children[i])) return false;
    }
    return true;
}

void collect_identifiers(const Expression::Node& n, std::set<std::string>& out) {
    if (n.kind == Expression::Kind::identifier) out.insert(n.name);
    for (const auto& c : n.children) collect_identifiers(*c, out);
}

} // namespace

ParseError::ParseError(const std::string& message, std::size_t offset)
    : InputError(message + " at offset " + std::to_string(offset)), offset_(offset) {}

UnboundIdentifierError::UnboundIdentifierError(const std::string& name)
    : InputError("unbound identifier '" + name + "'") {}

std::string_view function_name(Function f) {
    for (const auto& [name, fn] : kFunctions) {
        if (fn == f) return name;
    }
    return "?";
}

void Bindings::set(std::string name, double value) {
    for (auto& [n, v] : entries_) {
        if (n == name) {
            v = value;
            return;
        }
    }
    entries_.emplace_back(std::move(name), value);
}

const double* Bindings::find(std::string_view name) const noexcept {
    for (const auto& [n, v] : entries_) {
        if (n == name) return &v;
    }
    return nullptr;
}

bool is_reserved_constant(std::string_view name) { return name == "pi" || name == "e"; }

// Recursive-descent parser over a byte string. Offsets reported in errors are
// byte offsets into the original text.
class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expression run() {
        skip_ws();
        if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
        NodePtr e = expr();
        skip_ws();
        if (pos_ != text_.size()) {
            throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
        }
        return Expression(std::move(e));
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r')) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = make_binary(Expression::Kind::add, lhs, term());
            } else if (accept('-')) {
                lhs = make_binary(Expression::Kind::subtract, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = make_binary(Expression::Kind::multiply, lhs, unary());
            } else if (accept('/')) {
                lhs = make_binary(Expression::Kind::divide, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) return make_unary(unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept('^')) return make_binary(Expression::Kind::power, base, unary());
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ == text_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }
        if (is_digit(c) || c == '.') return number();
        if (is_ident_start(c)) return identifier_or_call();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr number() {
        const std::size_t start = pos_;
        std::size_t digits = 0;
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_, ++digits;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_, ++digits;
        }
        if (digits == 0) throw ParseError("malformed number", start);
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
            if (look < text_.size() && is_digit(text_[look])) {
                pos_ = look;
                while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
            }
        }
        double value = 0.0;
        const char* first = text_.data() + start;
        const char* last = text_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
            throw ParseError("numeric literal out of range", start);
        }
        return make_number(value);
    }

    NodePtr identifier_or_call() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            const auto it = std::find_if(kFunctions.begin(), kFunctions.end(),
                                         [&](const auto& entry) { return entry.first == name; });
            if (it == kFunctions.end()) throw ParseError("unknown function '" + name + "'", start);
            ++pos_;
            std::vector<NodePtr> args;
            args.push_back(expr());
            while (accept(',')) args.push_back(expr());
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            if (args.size() != 1) {
                throw ParseError("function '" + name + "' takes 1 argument, got " +
                                     std::to_string(args.size()),
                                 start);
            }
            return make_call(it->second, std::move(args.front()));
        }
        return make_identifier(std::move(name));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

Expression::Expression() : root_(make_number(0.0)) {}

Expression Expression::parse(std::string_view text) { return Parser(text).run(); }

Expression Expression::number(double value) { return Expression(make_number(value)); }

Expression Expression::identifier(std::string name) { return Expression(make_identifier(std::move(name))); }

double Expression::evaluate(const Bindings& bindings) const { return eval_node(*root_, bindings); }

std::string Expression::to_string() const {
    std::string out;
    write_node(*root_, out);
    return out;
}

std::vector<std::string> Expression::identifiers() const {
    std::set<std::string> names;
    collect_identifiers(*root_, names);
    return {names.begin(), names.end()};
}

Expression::Kind Expression::kind() const { return root_->kind; }

bool Expression::is_constant() const {
    const Node* n = root_.get();
    while (n->kind == Kind::negate) n = n->children[0].get();
    return n->kind == Kind::number;
}

bool operator==(const Expression& a, const Expression& b) { return equal_nodes(*a.root_, *b.root_); }

Expression parse_expression(std::string_view text) { return Expression::parse(text); }

double evaluate(const Expression& e, const Bindings& bindings) { return e.evaluate(bindings); }

std::string serialize(const Expression& e) { return e.to_string(); }

} // namespace cosoliton
