#pragma once
// Expression trees for user-supplied potentials over the variables x, x1, x2.

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace semicl {

/// Coordinates (x1, x2). The variable `x` aliases x1.
using Point = std::array<double, 2>;

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& expected, const std::string& msg)
        : std::runtime_error(msg), offset_(offset), expected_(expected) {}
    std::size_t offset() const { return offset_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

class EvalDomainError : public std::domain_error {
public:
    EvalDomainError(const std::string& subexpr, const std::string& msg)
        : std::domain_error(msg), subexpr_(subexpr) {}
    const std::string& subexpression() const { return subexpr_; }

private:
    std::string subexpr_;
};

struct ExprNode;

/// Immutable parsed expression; cheap to copy (shared tree).
class Expr {
public:
    Expr() = default;
    explicit Expr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

    double eval(const Point& p) const;
    /// Fully parenthesized source that re-parses to an equivalent tree.
    std::string to_string() const;
    /// Highest variable index used: 0 none, 1 for x/x1, 2 if x2 appears.
    int max_variable() const;
    bool empty() const { return !root_; }

private:
    std::shared_ptr<const ExprNode> root_;
};

Expr parse_expr(const std::string& source);
double eval_expr(const Expr& e, const Point& p);

/// Central finite-difference gradient with step 1e-6*(1+|x_i|).
Point gradient_fd(const Expr& e, const Point& p);

}  // namespace semicl
