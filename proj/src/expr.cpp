#include "chaincalc/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace chaincalc {

struct Expr::Node {
    enum Kind { Const, Coord, Add, Mul, Pow, Sin, Cos, Exp } kind;
    double value = 0;  // Const
    int axis = 0;      // Coord (1-based)
    int exponent = 1;  // Pow
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using N = Expr::Node;

NodePtr make_const(double c) {
    auto n = std::make_shared<N>();
    n->kind = N::Const;
    n->value = c;
    return n;
}

bool is_const(const NodePtr& n, double v) { return n->kind == N::Const && n->value == v; }

NodePtr make_add(NodePtr a, NodePtr b) {
    if (a->kind == N::Const && b->kind == N::Const) return make_const(a->value + b->value);
    if (is_const(a, 0)) return b;
    if (is_const(b, 0)) return a;
    auto n = std::make_shared<N>();
    n->kind = N::Add;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr make_mul(NodePtr a, NodePtr b) {
    if (a->kind == N::Const && b->kind == N::Const) return make_const(a->value * b->value);
    if (is_const(a, 0) || is_const(b, 0)) return make_const(0);
    if (is_const(a, 1)) return b;
    if (is_const(b, 1)) return a;
    auto n = std::make_shared<N>();
    n->kind = N::Mul;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr make_unary(N::Kind kind, NodePtr a) {
    auto n = std::make_shared<N>();
    n->kind = kind;
    n->a = std::move(a);
    return n;
}

NodePtr make_pow(NodePtr a, int e) {
    if (e == 0) return make_const(1);
    if (e == 1) return a;
    if (a->kind == N::Const) return make_const(std::pow(a->value, e));
    auto n = std::make_shared<N>();
    n->kind = N::Pow;
    n->exponent = e;
    n->a = std::move(a);
    return n;
}

double eval(const NodePtr& n, std::span<const double> p) {
    switch (n->kind) {
        case N::Const: return n->value;
        case N::Coord: return p[n->axis - 1];
        case N::Add: return eval(n->a, p) + eval(n->b, p);
        case N::Mul: return eval(n->a, p) * eval(n->b, p);
        case N::Pow: {
            double base = eval(n->a, p), r = 1;
            for (int i = 0; i < n->exponent; ++i) r *= base;
            return r;
        }
        case N::Sin: return std::sin(eval(n->a, p));
        case N::Cos: return std::cos(eval(n->a, p));
        case N::Exp: return std::exp(eval(n->a, p));
    }
    return 0;
}

NodePtr diff(const NodePtr& n, int axis) {
    switch (n->kind) {
        case N::Const: return make_const(0);
        case N::Coord: return make_const(n->axis == axis ? 1.0 : 0.0);
        case N::Add: return make_add(diff(n->a, axis), diff(n->b, axis));
        case N::Mul:
            return make_add(make_mul(diff(n->a, axis), n->b), make_mul(n->a, diff(n->b, axis)));
        case N::Pow:
            return make_mul(make_const(n->exponent),
                            make_mul(make_pow(n->a, n->exponent - 1), diff(n->a, axis)));
        case N::Sin: return make_mul(make_unary(N::Cos, n->a), diff(n->a, axis));
        case N::Cos:
            return make_mul(make_const(-1), make_mul(make_unary(N::Sin, n->a), diff(n->a, axis)));
        case N::Exp: return make_mul(make_unary(N::Exp, n->a), diff(n->a, axis));
    }
    return make_const(0);
}

void print(const NodePtr& n, std::ostringstream& os) {
    switch (n->kind) {
        case N::Const: os << n->value; return;
        case N::Coord: os << "x" << n->axis; return;
        case N::Add:
            os << "(";
            print(n->a, os);
            os << " + ";
            print(n->b, os);
            os << ")";
            return;
        case N::Mul:
            os << "(";
            print(n->a, os);
            os << "*";
            print(n->b, os);
            os << ")";
            return;
        case N::Pow:
            print(n->a, os);
            os << "^" << n->exponent;
            return;
        case N::Sin: os << "sin("; print(n->a, os); os << ")"; return;
        case N::Cos: os << "cos("; print(n->a, os); os << ")"; return;
        case N::Exp: os << "exp("; print(n->a, os); os << ")"; return;
    }
}

// Recursive-descent parser.
//   sum     := term (('+'|'-') term)*
//   term    := factor ('*' factor)*
//   factor  := atom ('^' int)?
//   atom    := number | coord | func '(' sum ')' | '(' sum ')' | '-' atom
struct Parser {
    const std::string& s;
    std::size_t pos = 0;
    int dim;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) { ++pos; return true; }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) { throw ExprParseError(msg, pos); }

    NodePtr sum() {
        NodePtr a = term();
        for (;;) {
            skip();
            if (eat('+')) a = make_add(a, term());
            else if (eat('-')) a = make_add(a, make_mul(make_const(-1), term()));
            else return a;
        }
    }

    NodePtr term() {
        NodePtr a = factor();
        for (;;) {
            skip();
            if (eat('*')) a = make_mul(a, factor());
            else return a;
        }
    }

    NodePtr factor() {
        NodePtr a = atom();
        skip();
        if (eat('^')) {
            skip();
            bool neg = eat('-');
            std::size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == start) fail("expected integer exponent");
            int e = std::stoi(s.substr(start, pos - start));
            if (neg) fail("negative exponents not supported");
            a = make_pow(a, e);
        }
        return a;
    }

    NodePtr atom() {
        skip();
        if (pos >= s.size()) fail("unexpected end of expression");
        if (eat('-')) return make_mul(make_const(-1), atom());
        if (eat('(')) {
            NodePtr a = sum();
            if (!eat(')')) fail("expected ')'");
            return a;
        }
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            double v = std::stod(s.substr(pos), &used);
            pos += used;
            return make_const(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
            std::string name = s.substr(start, pos - start);
            if (name == "sin" || name == "cos" || name == "exp") {
                if (!eat('(')) fail("expected '(' after " + name);
                NodePtr a = sum();
                if (!eat(')')) fail("expected ')'");
                return make_unary(name == "sin" ? N::Sin : name == "cos" ? N::Cos : N::Exp, a);
            }
            int axis = 0;
            if (name.size() >= 2 && name[0] == 'x' &&
                std::isdigit(static_cast<unsigned char>(name[1])))
                axis = std::stoi(name.substr(1));
            else if (name == "x") axis = 1;
            else if (name == "y") axis = 2;
            else if (name == "z") axis = 3;
            else if (name == "w") axis = 4;
            if (axis < 1) { pos = start; fail("unknown symbol '" + name + "'"); }
            if (axis > dim) { pos = start; fail("coordinate x" + std::to_string(axis) + " exceeds dimension"); }
            auto n = std::make_shared<N>();
            n->kind = N::Coord;
            n->axis = axis;
            return n;
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

} // namespace

Expr::Expr() : node_(make_const(0)) {}
Expr Expr::constant(double c) { return Expr(make_const(c)); }
Expr Expr::coord(int axis) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Coord;
    n->axis = axis;
    return Expr(n);
}

Expr Expr::parse(const std::string& text, int dim) {
    Parser p{text, 0, dim};
    NodePtr n = p.sum();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    return Expr(n);
}

double Expr::operator()(std::span<const double> p) const { return eval(node_, p); }
Expr Expr::derivative(int axis) const { return Expr(diff(node_, axis)); }
bool Expr::is_zero() const { return is_const(node_, 0); }

std::string Expr::str() const {
    std::ostringstream os;
    print(node_, os);
    return os.str();
}

Expr operator+(const Expr& a, const Expr& b) { return Expr(make_add(a.node_, b.node_)); }
Expr operator-(const Expr& a, const Expr& b) {
    return Expr(make_add(a.node_, make_mul(make_const(-1), b.node_)));
}
Expr operator*(const Expr& a, const Expr& b) { return Expr(make_mul(a.node_, b.node_)); }
Expr Expr::pow(int e) const { return Expr(make_pow(node_, e)); }
Expr sin(const Expr& a) { return Expr(make_unary(N::Sin, a.node_)); }
Expr cos(const Expr& a) { return Expr(make_unary(N::Cos, a.node_)); }
Expr exp(const Expr& a) { return Expr(make_unary(N::Exp, a.node_)); }

} // namespace chaincalc
