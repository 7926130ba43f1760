#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace varfrac {

/**
 * Immutable arithmetic expression over the variables x and y.
 *
 * The grammar is a fixed whitelist: real literals, x, y, pi, the binary
 * operators + - * / ^, unary minus, and the functions sin, cos, exp, abs,
 * sqrt (one argument) and min, max (two arguments). ^ is right-associative
 * and binds tighter than unary minus, so "-2^2" is -4.
 *
 * Copies share the underlying tree; evaluation is reentrant.
 */
class Expr {
public:
    enum class Kind { Number, VarX, VarY, Pi, Neg, Add, Sub, Mul, Div, Pow, Call };
    enum class Func { Sin, Cos, Exp, Abs, Sqrt, Min, Max };

    struct Node {
        Kind kind = Kind::Number;
        double value = 0.0;
        Func func = Func::Sin;
        std::vector<std::shared_ptr<const Node>> args;
    };

    Expr() = default;
    explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

    static Expr parse(std::string_view source);
    static Expr constant(double value);

    // Throws Error(Evaluation) on a domain error or a missing y binding.
    double eval(double x, std::optional<double> y = std::nullopt) const;

    std::set<std::string> free_vars() const;
    bool uses_y() const;

    // Fully parenthesised text that parses back to an equivalent tree.
    std::string to_string() const;

    bool empty() const { return root_ == nullptr; }

private:
    std::shared_ptr<const Node> root_;
};

} // namespace varfrac
