#pragma once

#include "chaincalc/chain.hpp"
#include "chaincalc/expr.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>

namespace chaincalc {

/// Finite-difference oracle configuration: nested central differences, second
/// order, base step scaled by max(1, |p|) and grown per derivative level to
/// control cancellation.
struct FDConfig {
    double base_step = 1e-5;
    double step_growth = 4.0;
    int depth_budget = 3;
};

/// Requested derivative depth exceeds the oracle budget.
struct DepthError : std::runtime_error {
    DepthError(int required, int budget)
        : std::runtime_error("derivative depth " + std::to_string(required) +
                             " exceeds oracle budget " + std::to_string(budget)),
          required(required), budget(budget) {}
    int required, budget;
};

/// A scalar coefficient field with a mixed-partial oracle
/// partial(degree, p) -> (d^degree f)(p).  Oracles are reentrant; fields are
/// immutable and cheap to copy.
class ScalarField {
public:
    using PartialFn = std::function<double(const Degree&, const Point&)>;
    using ValueFn = std::function<double(const Point&)>;

    ScalarField() : ScalarField(constant(0.0)) {}

    /// Exact mixed partials supplied by the caller.
    static ScalarField analytic(PartialFn f, int budget = kUnlimited);
    /// Central finite differences of a value-only callback.
    static ScalarField finite_difference(ValueFn f, int dim, FDConfig cfg = {});
    /// Symbolic field: value and all partials from an expression.
    static ScalarField from_expr(const Expr& e, int dim);
    static ScalarField constant(double c);
    static ScalarField coordinate(int axis, int dim) {
        return from_expr(Expr::coord(axis), dim);
    }

    double partial(const Degree& m, const Point& p) const;
    double operator()(const Point& p) const { return partial(Degree{}, p); }

    int budget() const { return budget_; }
    bool analytic_oracle() const { return analytic_; }

    /// f + g, f*g (Leibniz partials), -f, directional derivative field.
    friend ScalarField operator+(const ScalarField& f, const ScalarField& g);
    friend ScalarField operator*(const ScalarField& f, const ScalarField& g);
    friend ScalarField operator*(double c, const ScalarField& f);
    /// d/dx_axis f as a field (budget decreases by one).
    ScalarField partial_field(int axis) const;

    static constexpr int kUnlimited = 1 << 20;

    /// Copy with the analytic flag overridden (set by field combinators).
    ScalarField with_analytic(bool a) const {
        ScalarField c = *this;
        c.analytic_ = a;
        return c;
    }

private:
    ScalarField(PartialFn f, int budget, bool analytic)
        : fn_(std::make_shared<PartialFn>(std::move(f))), budget_(budget), analytic_(analytic) {}

    std::shared_ptr<PartialFn> fn_;
    int budget_;
    bool analytic_;
};

/// A vector field V = sum_i f_i e_i given by coefficient fields with oracles.
class VectorFieldSpec {
public:
    VectorFieldSpec(int dim, std::vector<ScalarField> comps);
    static VectorFieldSpec constant(const Vector& v);
    static VectorFieldSpec from_exprs(const std::vector<Expr>& comps);
    /// Parse n comma-separated component expressions.
    static VectorFieldSpec parse(const std::string& text, int dim);

    int dim() const { return dim_; }
    const ScalarField& component(int axis) const { return comps_[axis - 1]; }
    Vector operator()(const Point& p) const;
    /// Jacobian entry dV_i/dx_j.
    double jacobian(int i, int j, const Point& p) const;
    bool constant_field() const { return constant_.has_value(); }
    const Vector& constant_value() const { return *constant_; }
    bool analytic_oracle() const;

    /// Lie bracket [V, W] = (DW)V - (DV)W, componentwise via the oracles.
    friend VectorFieldSpec lie_bracket(const VectorFieldSpec& v, const VectorFieldSpec& w);

private:
    int dim_;
    std::vector<ScalarField> comps_;
    std::optional<Vector> constant_;
};

/// A differentiable map F: R^n -> R^m with a Jacobian oracle.
class SmoothMap {
public:
    using MapFn = std::function<Vector(const Point&)>;
    using JacFn = std::function<std::vector<Vector>(const Point&)>; // rows: m, cols: n

    static SmoothMap affine(const std::vector<Vector>& matrix, const Vector& offset);
    static SmoothMap identity(int dim);
    static SmoothMap analytic(int dim_in, int dim_out, MapFn f, JacFn jac);
    static SmoothMap numeric(int dim_in, int dim_out, MapFn f, FDConfig cfg = {});
    /// Component expressions, symbolic Jacobian.
    static SmoothMap from_exprs(int dim_in, const std::vector<Expr>& comps);

    int dim_in() const { return dim_in_; }
    int dim_out() const { return dim_out_; }
    Vector operator()(const Point& p) const { return f_(p); }
    std::vector<Vector> jacobian(const Point& p) const { return jac_(p); }
    bool affine_map() const { return affine_; }
    const std::vector<Vector>& matrix() const { return matrix_; }

private:
    int dim_in_ = 0, dim_out_ = 0;
    MapFn f_;
    JacFn jac_;
    bool affine_ = false;
    std::vector<Vector> matrix_; // affine only
};

/// A differential k-form: one coefficient scalar field per increasing
/// multi-index.  omega(p; e_I) = f_I(p); evaluation on order-s chain terms
/// reduces to mixed partials of the coefficients.
class Form {
public:
    Form(int dim, int grade) : dim_(dim), grade_(grade) {}

    static Form zero(int dim, int grade) { return Form(dim, grade); }
    /// Unit volume form dx_1 ^ ... ^ dx_n.
    static Form volume(int dim);
    /// f * dx_I.
    static Form monomial(const ScalarField& f, MultiIndex idx, int dim);
    /// 0-form from a field.
    static Form function(const ScalarField& f, int dim) { return monomial(f, MultiIndex(), dim); }

    int dim() const { return dim_; }
    int grade() const { return grade_; }
    const std::map<MultiIndex, ScalarField>& components() const { return comps_; }
    const ScalarField* component(MultiIndex idx) const {
        auto it = comps_.find(idx);
        return it == comps_.end() ? nullptr : &it->second;
    }
    void set_component(MultiIndex idx, ScalarField f);
    bool analytic_oracle() const;

    /// omega(p; alpha) for a grade-matched multivector.
    double operator()(const Point& p, const KVector& alpha) const;

    friend Form operator+(const Form& a, const Form& b);
    friend Form operator*(double c, Form a);

private:
    int dim_;
    int grade_;
    std::map<MultiIndex, ScalarField> comps_;
};

/// coeff * (d^degree f_I)(p): the order-s term acts as an s-fold directional
/// derivative.  Throws DepthError past the oracle budget.
double eval_term(const Form& w, const ChainTerm& t);

/// The chain/form pairing: the finite sum of eval_term over terms.  The
/// parallel kernel fills an indexed buffer and sums in term order, so the
/// result is bitwise equal to integrate_serial for any thread count.
double integrate(const Form& w, const DiracChain& A);
double integrate_serial(const Form& w, const DiracChain& A);

/// Exterior derivative: (dw)_J = sum_{j in J} sign * d_j f_{J \ j}.
Form d(const Form& w);
/// Interior product (i_V w)(p; beta) = w(p; V(p) ^ beta).
Form interior(const VectorFieldSpec& V, const Form& w);
/// Lie derivative via Cartan's formula i_V d + d i_V.
Form lie(const VectorFieldSpec& V, const Form& w);
/// Hodge star as the dual of the perpendicular complement:
/// (star w)(p; beta) = w(p; perp beta).
Form star(const Form& w);
/// (V-flat ^ w), the dual of retraction.
Form flat_wedge(const VectorFieldSpec& V, const Form& w);
/// Pullback (F* w)(p; alpha) = w(F(p); F_* alpha).  Exact partials for affine
/// F; finite differences otherwise (values are always exact).
Form pullback(const SmoothMap& F, const Form& w, FDConfig cfg = {});
/// f * w (change of density dual).
Form times(const ScalarField& f, const Form& w);

/// Form-expression parser for the CLI: sums of <expr>*d<axes> monomials,
/// e.g. "x*dy - y*dx" or "x1^2*dx1x3".  See README for the grammar.
Form parse_form(const std::string& text, int dim);

} // namespace chaincalc
