#pragma once

#include <memory>
#include <string_view>
#include <vector>

namespace phimon {

/// Parsed closed-form expression in one variable (spelled `x` or `t`).
/// Operators: + - * / ^, functions sqrt, abs, exp, log, min, max, and
/// piecewise branches via if(cond, a, b) with comparisons < <= > >=.
class Expression {
public:
    static Expression parse(std::string_view source);

    double operator()(double x) const;

    /// Branch thresholds of the form if(x<c, ...) detected in the tree.
    const std::vector<double>& knots() const { return knots_; }

    struct Node;

private:
    Expression(std::shared_ptr<const Node> root, std::vector<double> knots);

    std::shared_ptr<const Node> root_;
    std::vector<double> knots_;
};

}  // namespace phimon
