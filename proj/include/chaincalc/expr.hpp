#pragma once

#include <memory>
#include <span>
#include <string>

namespace chaincalc {

/// Scalar expression in coordinates x1..xn (aliases x,y,z,w for n <= 4) with
/// +, -, *, ^<int>, sin, cos, exp, and numeric literals.  Differentiation is
/// exact and symbolic, so parsed expressions serve as analytic oracles.
class Expr {
public:
    Expr();                    // the zero expression
    static Expr constant(double c);
    static Expr coord(int axis); // 1-based
    static Expr parse(const std::string& text, int dim);

    double operator()(std::span<const double> p) const;
    Expr derivative(int axis) const; // d/dx_axis, exact
    bool is_zero() const;
    std::string str() const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    Expr pow(int e) const;
    friend Expr sin(const Expr& a);
    friend Expr cos(const Expr& a);
    friend Expr exp(const Expr& a);

    struct Node;

private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

/// Parse error with position information.
struct ExprParseError : std::runtime_error {
    ExprParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at column " + std::to_string(pos + 1)), position(pos) {}
    std::size_t position;
};

} // namespace chaincalc
