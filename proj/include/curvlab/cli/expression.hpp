#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "curvlab/verify.hpp"

namespace curvlab::cli {

/// Value and derivative with respect to r.
struct Dual {
    double v = 0.0;
    double d = 0.0;
};

struct ExprNode;

/// Arithmetic over numbers and named variables: + - * / ^, unary minus,
/// parentheses, and exp log sqrt sin cos tan sinh cosh tanh abs min max pow.
/// Variables: r, theta, w1..w9; constants pi and e.
class Expression {
public:
    static Expression parse(const std::string& text);

    const std::string& text() const { return text_; }
    bool uses(const std::string& variable) const;

    /// Evaluates with r as the differentiation variable.
    Dual eval(double r, std::span<const double> omega = {}) const;

private:
    std::string text_;
    std::shared_ptr<const ExprNode> root_;
    std::vector<std::string> variables_;
};

/// Radial function backed by an expression in r.
RadialFunction radial_function(const Expression& expr, Monotonicity declared = Monotonicity::None);

/// Throws ConfigError unless the expression is finite on `grid`.
void require_finite(const Expression& expr, std::span<const double> grid, const std::string& where);

} // namespace curvlab::cli
