#pragma once

#include <memory>
#include <string>
#include <vector>

namespace skyrme {

/// Arithmetic expression over named variables.
///
/// Grammar:
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?          right associative
///   primary := number | name | func '(' expr ')' | '(' expr ')'
///   func    := sin cos tan exp ln sqrt
/// The only constant is pi. Parse errors throw ConfigError.
class Expr {
public:
    struct Node;

    Expr() = default;
    static Expr parse(const std::string& text, const std::vector<std::string>& vars);

    double operator()(const std::vector<double>& values) const;
    double operator()() const { return (*this)(std::vector<double>{}); }
    double operator()(double a) const { return (*this)(std::vector<double>{a}); }
    double operator()(double a, double b) const { return (*this)(std::vector<double>{a, b}); }

    const std::string& text() const { return text_; }
    explicit operator bool() const { return root_ != nullptr; }

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
    std::size_t nvars_ = 0;
};

}  // namespace skyrme
