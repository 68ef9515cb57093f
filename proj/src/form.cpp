#include "chaincalc/form.hpp"

#include "chaincalc/parallel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>

namespace chaincalc {

namespace {

Degree inc(Degree d, int axis) {
    d[axis - 1]++;
    return d;
}

int lowest_axis(const Degree& d) {
    for (int i = 0; i < kMaxDim; ++i)
        if (d[i]) return i + 1;
    return 0;
}

double inf_norm(const Point& p) {
    double m = 0;
    for (double x : p) m = std::max(m, std::abs(x));
    return m;
}

/// Enumerate increasing multi-indices of the given grade.
template <class F>
void for_each_index(int n, int k, F&& f) {
    for (std::uint32_t m = 0; m < (1u << n); ++m)
        if (std::popcount(m) == k) f(MultiIndex(m));
}

} // namespace

// ---------------------------------------------------------------------------
// ScalarField

ScalarField ScalarField::analytic(PartialFn f, int budget) {
    return ScalarField(std::move(f), budget, true);
}

ScalarField ScalarField::finite_difference(ValueFn f, int dim, FDConfig cfg) {
    auto shared = std::make_shared<ValueFn>(std::move(f));
    // Nested central differences; the step grows with the nesting level so the
    // outer quotient divides the inner noise by a larger denominator.
    struct Impl {
        static double partial(const ValueFn& f, const Degree& m, const Point& p, const FDConfig& c) {
            int total = total_degree(m);
            if (total == 0) return f(p);
            int axis = lowest_axis(m);
            Degree rest = m;
            rest[axis - 1]--;
            double h = c.base_step * std::pow(c.step_growth, total - 1) * std::max(1.0, inf_norm(p));
            Point hi = p, lo = p;
            hi[axis - 1] += h;
            lo[axis - 1] -= h;
            return (partial(f, rest, hi, c) - partial(f, rest, lo, c)) / (2 * h);
        }
    };
    int budget = cfg.depth_budget;
    return ScalarField(
        [shared, cfg](const Degree& m, const Point& p) {
            return Impl::partial(*shared, m, p, cfg);
        },
        budget, false);
}

ScalarField ScalarField::from_expr(const Expr& e, int dim) {
    // Value and first-order partials are precomputed so the hot paths
    // (pairings, flow integration) never touch the lock; higher mixed
    // partials are derived on demand and memoized.
    struct Cache {
        Expr base;
        std::array<Expr, kMaxDim> first;
        std::map<Degree, Expr> higher;
        std::mutex mu;
    };
    auto cache = std::make_shared<Cache>();
    cache->base = e;
    for (int ax = 1; ax <= dim; ++ax) cache->first[ax - 1] = e.derivative(ax);
    return ScalarField(
        [cache](const Degree& m, const Point& p) {
            const std::span<const double> coords(p.data(), kMaxDim);
            const int total = total_degree(m);
            if (total == 0) return cache->base(coords);
            if (total == 1) return cache->first[lowest_axis(m) - 1](coords);
            Expr de;
            {
                std::scoped_lock lock(cache->mu);
                auto it = cache->higher.find(m);
                if (it == cache->higher.end()) {
                    Degree cur{};
                    Expr acc = cache->base;
                    for (int ax = 1; ax <= kMaxDim; ++ax)
                        for (int c = 0; c < m[ax - 1]; ++c) {
                            cur[ax - 1]++;
                            auto hit = cache->higher.find(cur);
                            if (hit != cache->higher.end()) {
                                acc = hit->second;
                            } else {
                                acc = acc.derivative(ax);
                                cache->higher.emplace(cur, acc);
                            }
                        }
                    it = cache->higher.find(m);
                }
                de = it->second;
            }
            return de(coords);
        },
        kUnlimited, true);
}

ScalarField ScalarField::constant(double c) {
    return ScalarField(
        [c](const Degree& m, const Point&) { return total_degree(m) == 0 ? c : 0.0; },
        kUnlimited, true);
}

double ScalarField::partial(const Degree& m, const Point& p) const {
    int total = total_degree(m);
    if (total > budget_) throw DepthError(total, budget_);
    return (*fn_)(m, p);
}

ScalarField operator+(const ScalarField& f, const ScalarField& g) {
    auto ff = f, gg = g;
    return ScalarField::analytic(
               [ff, gg](const Degree& m, const Point& p) {
                   return ff.partial(m, p) + gg.partial(m, p);
               },
               std::min(f.budget(), g.budget()))
        .with_analytic(f.analytic_oracle() && g.analytic_oracle());
}

ScalarField operator*(const ScalarField& f, const ScalarField& g) {
    auto ff = f, gg = g;
    // Leibniz over degree vectors: d^m(fg) = sum_{m' <= m} C(m, m') d^m' f d^(m-m') g.
    return ScalarField::analytic(
               [ff, gg](const Degree& m, const Point& p) {
                   std::vector<Degree> subs{Degree{}};
                   std::vector<double> binoms{1.0};
                   for (int ax = 0; ax < kMaxDim; ++ax) {
                       if (!m[ax]) continue;
                       std::vector<Degree> nsubs;
                       std::vector<double> nbin;
                       for (std::size_t i = 0; i < subs.size(); ++i) {
                           double c = 1;
                           for (int j = 0; j <= m[ax]; ++j) {
                               Degree d = subs[i];
                               d[ax] = static_cast<std::uint8_t>(j);
                               nsubs.push_back(d);
                               nbin.push_back(binoms[i] * c);
                               c = c * (m[ax] - j) / (j + 1);
                           }
                       }
                       subs.swap(nsubs);
                       binoms.swap(nbin);
                   }
                   double s = 0;
                   for (std::size_t i = 0; i < subs.size(); ++i) {
                       Degree rest;
                       for (int ax = 0; ax < kMaxDim; ++ax)
                           rest[ax] = static_cast<std::uint8_t>(m[ax] - subs[i][ax]);
                       s += binoms[i] * ff.partial(subs[i], p) * gg.partial(rest, p);
                   }
                   return s;
               },
               std::min(f.budget(), g.budget()))
        .with_analytic(f.analytic_oracle() && g.analytic_oracle());
}

ScalarField operator*(double c, const ScalarField& f) {
    auto ff = f;
    return ScalarField::analytic(
               [c, ff](const Degree& m, const Point& p) { return c * ff.partial(m, p); },
               f.budget())
        .with_analytic(f.analytic_oracle());
}

ScalarField ScalarField::partial_field(int axis) const {
    if (budget_ < 1) throw DepthError(1, budget_);
    auto self = *this;
    return ScalarField::analytic(
               [self, axis](const Degree& m, const Point& p) {
                   return self.partial(inc(m, axis), p);
               },
               budget_ - 1)
        .with_analytic(analytic_);
}

// ---------------------------------------------------------------------------
// VectorFieldSpec

VectorFieldSpec::VectorFieldSpec(int dim, std::vector<ScalarField> comps)
    : dim_(dim), comps_(std::move(comps)) {
    if (static_cast<int>(comps_.size()) != dim)
        throw std::invalid_argument("VectorFieldSpec: component count != dim");
}

VectorFieldSpec VectorFieldSpec::constant(const Vector& v) {
    std::vector<ScalarField> comps;
    for (double c : v) comps.push_back(ScalarField::constant(c));
    VectorFieldSpec out(static_cast<int>(v.size()), std::move(comps));
    out.constant_ = v;
    return out;
}

VectorFieldSpec VectorFieldSpec::from_exprs(const std::vector<Expr>& comps) {
    std::vector<ScalarField> fields;
    int dim = static_cast<int>(comps.size());
    for (auto& e : comps) fields.push_back(ScalarField::from_expr(e, dim));
    return VectorFieldSpec(dim, std::move(fields));
}

VectorFieldSpec VectorFieldSpec::parse(const std::string& text, int dim) {
    std::vector<Expr> comps;
    std::string piece;
    int depth = 0;
    for (char c : text + ",") {
        if (c == '(') depth++;
        if (c == ')') depth--;
        if (c == ',' && depth == 0) {
            comps.push_back(Expr::parse(piece, dim));
            piece.clear();
        } else {
            piece += c;
        }
    }
    if (static_cast<int>(comps.size()) != dim)
        throw std::invalid_argument("vector field: expected " + std::to_string(dim) +
                                    " components, got " + std::to_string(comps.size()));
    return from_exprs(comps);
}

Vector VectorFieldSpec::operator()(const Point& p) const {
    if (constant_) return *constant_;
    Vector v(dim_);
    for (int i = 0; i < dim_; ++i) v[i] = comps_[i](p);
    return v;
}

double VectorFieldSpec::jacobian(int i, int j, const Point& p) const {
    if (constant_) return 0.0;
    return comps_[i - 1].partial(inc(Degree{}, j), p);
}

bool VectorFieldSpec::analytic_oracle() const {
    for (auto& f : comps_)
        if (!f.analytic_oracle()) return false;
    return true;
}

VectorFieldSpec lie_bracket(const VectorFieldSpec& v, const VectorFieldSpec& w) {
    if (v.dim() != w.dim()) throw std::invalid_argument("lie_bracket: dimension mismatch");
    int n = v.dim();
    std::vector<ScalarField> comps;
    for (int i = 1; i <= n; ++i) {
        ScalarField acc = ScalarField::constant(0);
        for (int j = 1; j <= n; ++j) {
            acc = acc + v.component(j) * w.component(i).partial_field(j);
            acc = acc + (-1.0) * (w.component(j) * v.component(i).partial_field(j));
        }
        comps.push_back(acc);
    }
    return VectorFieldSpec(n, std::move(comps));
}

// ---------------------------------------------------------------------------
// SmoothMap

SmoothMap SmoothMap::affine(const std::vector<Vector>& matrix, const Vector& offset) {
    SmoothMap F;
    F.dim_out_ = static_cast<int>(matrix.size());
    F.dim_in_ = F.dim_out_ ? static_cast<int>(matrix[0].size()) : 0;
    F.affine_ = true;
    F.matrix_ = matrix;
    F.f_ = [matrix, offset](const Point& p) {
        Vector out(matrix.size());
        for (std::size_t i = 0; i < matrix.size(); ++i) {
            double s = offset[i];
            for (std::size_t j = 0; j < matrix[i].size(); ++j) s += matrix[i][j] * p[j];
            out[i] = s;
        }
        return out;
    };
    F.jac_ = [matrix](const Point&) { return matrix; };
    return F;
}

SmoothMap SmoothMap::identity(int dim) {
    std::vector<Vector> m(dim, Vector(dim, 0.0));
    for (int i = 0; i < dim; ++i) m[i][i] = 1.0;
    return affine(m, Vector(dim, 0.0));
}

SmoothMap SmoothMap::analytic(int dim_in, int dim_out, MapFn f, JacFn jac) {
    SmoothMap F;
    F.dim_in_ = dim_in;
    F.dim_out_ = dim_out;
    F.f_ = std::move(f);
    F.jac_ = std::move(jac);
    return F;
}

SmoothMap SmoothMap::numeric(int dim_in, int dim_out, MapFn f, FDConfig cfg) {
    auto fn = std::make_shared<MapFn>(std::move(f));
    SmoothMap F;
    F.dim_in_ = dim_in;
    F.dim_out_ = dim_out;
    F.f_ = [fn](const Point& p) { return (*fn)(p); };
    F.jac_ = [fn, dim_in, dim_out, cfg](const Point& p) {
        std::vector<Vector> J(dim_out, Vector(dim_in));
        for (int j = 0; j < dim_in; ++j) {
            double h = cfg.base_step * std::max(1.0, inf_norm(p));
            Point hi = p, lo = p;
            hi[j] += h;
            lo[j] -= h;
            Vector fh = (*fn)(hi), fl = (*fn)(lo);
            for (int i = 0; i < dim_out; ++i) J[i][j] = (fh[i] - fl[i]) / (2 * h);
        }
        return J;
    };
    return F;
}

SmoothMap SmoothMap::from_exprs(int dim_in, const std::vector<Expr>& comps) {
    int dim_out = static_cast<int>(comps.size());
    std::vector<std::vector<Expr>> grads(dim_out);
    for (int i = 0; i < dim_out; ++i)
        for (int j = 1; j <= dim_in; ++j) grads[i].push_back(comps[i].derivative(j));
    SmoothMap F;
    F.dim_in_ = dim_in;
    F.dim_out_ = dim_out;
    F.f_ = [comps](const Point& p) {
        Vector out(comps.size());
        for (std::size_t i = 0; i < comps.size(); ++i)
            out[i] = comps[i](std::span<const double>(p.data(), kMaxDim));
        return out;
    };
    F.jac_ = [grads, dim_in](const Point& p) {
        std::vector<Vector> J(grads.size(), Vector(dim_in));
        for (std::size_t i = 0; i < grads.size(); ++i)
            for (int j = 0; j < dim_in; ++j)
                J[i][j] = grads[i][j](std::span<const double>(p.data(), kMaxDim));
        return J;
    };
    return F;
}

// ---------------------------------------------------------------------------
// Form

Form Form::volume(int dim) {
    return monomial(ScalarField::constant(1.0), MultiIndex::full(dim), dim);
}

Form Form::monomial(const ScalarField& f, MultiIndex idx, int dim) {
    Form w(dim, idx.grade());
    w.set_component(idx, f);
    return w;
}

void Form::set_component(MultiIndex idx, ScalarField f) {
    if (idx.grade() != grade_) throw std::invalid_argument("Form::set_component: grade mismatch");
    if (idx.max_axis() > dim_) throw std::invalid_argument("Form::set_component: axis out of range");
    comps_.insert_or_assign(idx, std::move(f));
}

bool Form::analytic_oracle() const {
    for (auto& [idx, f] : comps_)
        if (!f.analytic_oracle()) return false;
    return true;
}

double Form::operator()(const Point& p, const KVector& alpha) const {
    if (alpha.grade() != grade_ || alpha.dim() != dim_)
        throw std::invalid_argument("Form: multivector shape mismatch");
    double s = 0;
    for (auto& [idx, c] : alpha.coeffs()) {
        auto it = comps_.find(idx);
        if (it != comps_.end()) s += c * it->second(p);
    }
    return s;
}

Form operator+(const Form& a, const Form& b) {
    if (a.dim_ != b.dim_ || a.grade_ != b.grade_)
        throw std::invalid_argument("Form +: shape mismatch");
    Form out = a;
    for (auto& [idx, f] : b.comps_) {
        auto it = out.comps_.find(idx);
        if (it == out.comps_.end()) out.comps_.emplace(idx, f);
        else it->second = it->second + f;
    }
    return out;
}

Form operator*(double c, Form a) {
    for (auto& [idx, f] : a.comps_) f = c * f;
    return a;
}

double eval_term(const Form& w, const ChainTerm& t) {
    const ScalarField* f = w.component(t.index);
    if (!f) return 0.0;
    return t.coeff * f->partial(t.degree, t.point);
}

double integrate_serial(const Form& w, const DiracChain& A) {
    if (w.dim() != A.dim() || w.grade() != A.grade())
        throw std::invalid_argument("integrate: form/chain shape mismatch");
    double s = 0;
    for (auto& t : A.terms()) s += eval_term(w, t);
    return s;
}

double integrate(const Form& w, const DiracChain& A) {
    if (w.dim() != A.dim() || w.grade() != A.grade())
        throw std::invalid_argument("integrate: form/chain shape mismatch");
    const std::size_t n = A.size();
    if (!par::enabled() || n < 2048) return integrate_serial(w, A);
    std::vector<double> vals(n);
    par::parallel_for(n, [&](std::size_t i) { vals[i] = eval_term(w, A.terms()[i]); });
    double s = 0;
    for (double v : vals) s += v; // term order: bitwise equal to the serial path
    return s;
}

Form d(const Form& w) {
    Form out(w.dim(), w.grade() + 1);
    if (w.grade() + 1 > w.dim()) return out;
    for_each_index(w.dim(), w.grade() + 1, [&](MultiIndex J) {
        ScalarField acc = ScalarField::constant(0);
        bool any = false;
        for (int j : J.axes()) {
            const ScalarField* f = w.component(J.without(j));
            if (!f) continue;
            int sgn = wedge_sign(MultiIndex::axis(j), J.without(j));
            acc = acc + double(sgn) * f->partial_field(j);
            any = true;
        }
        if (any) out.set_component(J, acc);
    });
    return out;
}

Form interior(const VectorFieldSpec& V, const Form& w) {
    if (V.dim() != w.dim()) throw std::invalid_argument("interior: dimension mismatch");
    if (w.grade() == 0) return Form::zero(w.dim(), 0);
    Form out(w.dim(), w.grade() - 1);
    for_each_index(w.dim(), w.grade() - 1, [&](MultiIndex B) {
        ScalarField acc = ScalarField::constant(0);
        bool any = false;
        for (int j = 1; j <= w.dim(); ++j) {
            if (B.contains(j)) continue;
            const ScalarField* f = w.component(B.with(j));
            if (!f) continue;
            int sgn = wedge_sign(MultiIndex::axis(j), B);
            acc = acc + double(sgn) * (V.component(j) * (*f));
            any = true;
        }
        if (any) out.set_component(B, acc);
    });
    return out;
}

Form lie(const VectorFieldSpec& V, const Form& w) {
    Form a = interior(V, d(w));
    if (w.grade() == 0) return a;
    return a + d(interior(V, w));
}

Form star(const Form& w) {
    const int n = w.dim();
    Form out(n, n - w.grade());
    for_each_index(n, n - w.grade(), [&](MultiIndex J) {
        const ScalarField* f = w.component(J.complement(n));
        if (!f) return;
        out.set_component(J, double(perp_sign(J, n)) * (*f));
    });
    return out;
}

Form flat_wedge(const VectorFieldSpec& V, const Form& w) {
    if (V.dim() != w.dim()) throw std::invalid_argument("flat_wedge: dimension mismatch");
    if (w.grade() + 1 > w.dim())
        throw std::invalid_argument("flat_wedge: grade overflow");
    Form out(w.dim(), w.grade() + 1);
    for_each_index(w.dim(), w.grade() + 1, [&](MultiIndex A) {
        ScalarField acc = ScalarField::constant(0);
        bool any = false;
        for (int a : A.axes()) {
            const ScalarField* f = w.component(A.without(a));
            if (!f) continue;
            int sgn = (A.position(a) & 1) ? -1 : 1;
            acc = acc + double(sgn) * (V.component(a) * (*f));
            any = true;
        }
        if (any) out.set_component(A, acc);
    });
    return out;
}

namespace {

double minor_det(const std::vector<Vector>& jac, const std::vector<int>& rows,
                 const std::vector<int>& cols) {
    const int k = static_cast<int>(rows.size());
    if (k == 0) return 1.0;
    if (k == 1) return jac[rows[0] - 1][cols[0] - 1];
    // Laplace expansion; grades stay small.
    double s = 0;
    std::vector<int> subrows(rows.begin() + 1, rows.end());
    for (int j = 0; j < k; ++j) {
        std::vector<int> subcols;
        for (int l = 0; l < k; ++l)
            if (l != j) subcols.push_back(cols[l]);
        double c = jac[rows[0] - 1][cols[j] - 1];
        if (c != 0.0) s += ((j & 1) ? -1.0 : 1.0) * c * minor_det(jac, subrows, subcols);
    }
    return s;
}

/// Exact mixed partial of g composed with an affine map: each domain
/// derivative distributes over the matrix columns onto codomain derivatives.
double affine_composite_partial(const ScalarField& g, const std::vector<Vector>& M,
                                const SmoothMap& F, const Degree& m, Degree q, const Point& p) {
    int ax = lowest_axis(m);
    if (ax == 0) {
        Vector fp = F(p);
        return g.partial(q, make_point(fp));
    }
    Degree rest = m;
    rest[ax - 1]--;
    double s = 0;
    for (std::size_t l = 0; l < M.size(); ++l) {
        if (M[l][ax - 1] == 0.0) continue;
        s += M[l][ax - 1] * affine_composite_partial(g, M, F, rest, inc(q, int(l) + 1), p);
    }
    return s;
}

} // namespace

Form pullback(const SmoothMap& F, const Form& w, FDConfig cfg) {
    if (F.dim_out() != w.dim()) throw std::invalid_argument("pullback: codomain mismatch");
    const int nd = F.dim_in(), k = w.grade();
    Form out(nd, k);
    if (k > nd) return out;
    for_each_index(nd, k, [&](MultiIndex I) {
        auto cols = I.axes();
        auto value = [F, w, cols](const Point& p) {
            auto jac = F.jacobian(p);
            Vector fp = F(p);
            Point q = make_point(fp);
            double s = 0;
            for (auto& [J, f] : w.components()) {
                double det = minor_det(jac, J.axes(), cols);
                if (det != 0.0) s += det * f(q);
            }
            return s;
        };
        if (F.affine_map()) {
            auto jac = F.jacobian(Point{});
            ScalarField acc = ScalarField::constant(0);
            bool any = false;
            for (auto& [J, f] : w.components()) {
                double det = minor_det(jac, J.axes(), cols);
                if (det == 0.0) continue;
                auto field = f;
                auto M = jac;
                acc = acc + det * ScalarField::analytic(
                                      [field, M, F](const Degree& m, const Point& p) {
                                          return affine_composite_partial(field, M, F, m, Degree{}, p);
                                      },
                                      field.budget())
                                      .with_analytic(field.analytic_oracle());
                any = true;
            }
            if (any) out.set_component(I, acc);
        } else {
            // Values are exact through the Jacobian oracle; higher partials of
            // the composite fall back to finite differences.
            out.set_component(I, ScalarField::finite_difference(value, nd, cfg));
        }
    });
    return out;
}

Form times(const ScalarField& f, const Form& w) {
    Form out(w.dim(), w.grade());
    for (auto& [idx, g] : w.components()) out.set_component(idx, f * g);
    return out;
}

// ---------------------------------------------------------------------------
// Form expression parser

namespace {

// A differential token: 'd' followed by axis letters (x,y,z,w) or digits,
// or the volume shorthand 'dV'.  Returns 0-terminated axis list in written
// order, or std::nullopt if the token is not a differential.
std::optional<std::vector<int>> parse_diff_token(const std::string& tok, int dim) {
    if (tok.size() < 2 || tok[0] != 'd') return std::nullopt;
    if (tok == "dV") {
        std::vector<int> axes;
        for (int i = 1; i <= dim; ++i) axes.push_back(i);
        return axes;
    }
    std::vector<int> axes;
    for (std::size_t i = 1; i < tok.size(); ++i) {
        char c = tok[i];
        int axis = 0;
        if (c == 'x') axis = 1;
        else if (c == 'y') axis = 2;
        else if (c == 'z') axis = 3;
        else if (c == 'w') axis = 4;
        else if (std::isdigit(static_cast<unsigned char>(c))) axis = c - '0';
        else return std::nullopt;
        // 'x' followed by a digit means x<k>, e.g. dx3.
        if (axis == 1 && i + 1 < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i + 1]))) {
            axis = tok[i + 1] - '0';
            ++i;
        }
        if (axis < 1 || axis > dim) throw std::invalid_argument("form: axis out of range in '" + tok + "'");
        axes.push_back(axis);
    }
    return axes;
}

} // namespace

Form parse_form(const std::string& text, int dim) {
    // Split into signed summands at paren depth 0.
    std::vector<std::pair<double, std::string>> summands;
    std::string cur;
    double sign = 1;
    int depth = 0;
    auto flush = [&](double next_sign) {
        if (!cur.empty()) summands.emplace_back(sign, cur);
        cur.clear();
        sign = next_sign;
    };
    for (char c : text) {
        if (c == '(') depth++;
        if (c == ')') depth--;
        if (depth == 0 && (c == '+' || c == '-')) {
            if (cur.find_first_not_of(" \t") == std::string::npos) {
                // leading sign of the summand
                if (c == '-') sign = -sign;
                continue;
            }
            flush(c == '-' ? -1 : 1);
            continue;
        }
        cur += c;
    }
    flush(1);
    if (summands.empty()) throw std::invalid_argument("form: empty expression");

    std::optional<Form> result;
    for (auto& [sgn, body] : summands) {
        // Split the summand on '*' at depth 0; at most one factor may be a
        // differential token.
        std::vector<std::string> factors;
        std::string f;
        depth = 0;
        for (char c : body + "*") {
            if (c == '(') depth++;
            if (c == ')') depth--;
            if (c == '*' && depth == 0) {
                factors.push_back(f);
                f.clear();
            } else {
                f += c;
            }
        }
        std::vector<int> axes;
        bool have_diff = false;
        std::string coeff_text;
        for (auto& piece : factors) {
            std::string trimmed = piece;
            trimmed.erase(0, trimmed.find_first_not_of(" \t"));
            trimmed.erase(trimmed.find_last_not_of(" \t") + 1);
            auto diff = parse_diff_token(trimmed, dim);
            if (diff && !have_diff) {
                axes = *diff;
                have_diff = true;
            } else {
                if (!coeff_text.empty()) coeff_text += "*";
                coeff_text += piece;
            }
        }
        if (coeff_text.empty()) coeff_text = "1";
        Expr coeff = Expr::parse(coeff_text, dim);

        // Orientation sign: transpositions needed to sort the written order.
        int osign = 1;
        for (std::size_t i = 0; i < axes.size(); ++i)
            for (std::size_t j = i + 1; j < axes.size(); ++j) {
                if (axes[i] == axes[j]) osign = 0;
                else if (axes[i] > axes[j]) osign = -osign;
            }
        if (osign == 0) continue; // repeated axis: zero summand

        int k = static_cast<int>(axes.size());
        if (result && result->grade() != k)
            throw std::invalid_argument("form: mixed grades in expression");
        Form term = Form::monomial(double(sgn * osign) * ScalarField::from_expr(coeff, dim),
                                   MultiIndex::from_axes(axes), dim);
        result = result ? *result + term : term;
    }
    if (!result) throw std::invalid_argument("form: all summands vanished");
    return *result;
}

} // namespace chaincalc
