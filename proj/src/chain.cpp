#include "chaincalc/chain.hpp"

#include "chaincalc/parallel.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace chaincalc {

namespace {

void normalize_zero(Point& p) {
    for (double& x : p)
        if (x == 0.0) x = 0.0; // -0.0 -> +0.0
}

void check_term(int dim, int grade, const ChainTerm& t) {
    if (t.index.grade() != grade) throw std::invalid_argument("chain term: grade mismatch");
    if (t.index.max_axis() > dim) throw std::invalid_argument("chain term: axis out of range");
    for (int i = dim; i < kMaxDim; ++i)
        if (t.point[i] != 0.0 || t.degree[i] != 0)
            throw std::invalid_argument("chain term: data beyond ambient dimension");
}

} // namespace

DiracChain::DiracChain(int dim, int grade) : dim_(dim), grade_(grade) {
    if (dim < 0 || dim > kMaxDim) throw std::invalid_argument("DiracChain: bad dimension");
    if (grade < 0 || grade > dim) throw std::invalid_argument("DiracChain: bad grade");
}

DiracChain DiracChain::element(const Point& p, const KVector& alpha) {
    ChainBuilder b(alpha.dim(), alpha.grade());
    b.add(p, alpha);
    return b.build();
}

DiracChain DiracChain::single(int dim, const ChainTerm& t) {
    ChainBuilder b(dim, t.index.grade());
    b.add(t);
    return b.build();
}

int DiracChain::order() const {
    int s = 0;
    for (auto& t : terms_) s = std::max(s, t.order());
    return s;
}

double DiracChain::max_abs_coeff() const {
    double m = 0;
    for (auto& t : terms_) m = std::max(m, std::abs(t.coeff));
    return m;
}

bool operator==(const DiracChain& a, const DiracChain& b) {
    if (a.dim_ != b.dim_ || a.grade_ != b.grade_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        const auto& x = a.terms_[i];
        const auto& y = b.terms_[i];
        if (!same_key(x, y) || x.coeff != y.coeff) return false;
    }
    return true;
}

std::string DiracChain::str() const {
    std::ostringstream os;
    os << "chain[n=" << dim_ << ",k=" << grade_ << "] ";
    std::size_t shown = 0;
    for (auto& t : terms_) {
        if (shown++ == 8) { os << "... (" << terms_.size() << " terms)"; break; }
        os << t.coeff << "*(";
        for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << t.point[i];
        os << ";";
        if (t.order() > 0) {
            for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << int(t.degree[i]);
            os << "(x)";
        }
        os << t.index.str() << ") ";
    }
    if (terms_.empty()) os << "0";
    return os.str();
}

void ChainBuilder::add(const ChainTerm& t) {
    ChainTerm u = t;
    normalize_zero(u.point);
    check_term(chain_.dim_, chain_.grade_, u);
    if (std::abs(u.coeff) < kZeroTol) return;
    chain_.terms_.push_back(u);
}

void ChainBuilder::add(const Point& p, const Degree& d, MultiIndex idx, double c) {
    add(ChainTerm{p, d, idx, c});
}

void ChainBuilder::add(const Point& p, const KVector& alpha, const Degree& d) {
    if (alpha.dim() != chain_.dim_ || alpha.grade() != chain_.grade_)
        throw std::invalid_argument("ChainBuilder: multivector shape mismatch");
    for (auto& [idx, c] : alpha.coeffs()) add(p, d, idx, c);
}

void ChainBuilder::append(const DiracChain& c, double s) {
    if (c.dim() != chain_.dim_ || c.grade() != chain_.grade_)
        throw std::invalid_argument("ChainBuilder: chain shape mismatch");
    for (auto& t : c.terms()) add(ChainTerm{t.point, t.degree, t.index, t.coeff * s});
}

DiracChain ChainBuilder::build() {
    auto& ts = chain_.terms_;
    std::sort(ts.begin(), ts.end(), TermKeyLess{});
    std::size_t w = 0;
    for (std::size_t r = 0; r < ts.size();) {
        ChainTerm acc = ts[r];
        std::size_t r2 = r + 1;
        while (r2 < ts.size() && same_key(ts[r2], acc)) acc.coeff += ts[r2++].coeff;
        if (std::abs(acc.coeff) >= kZeroTol) ts[w++] = acc;
        r = r2;
    }
    ts.resize(w);
    return std::move(chain_);
}

DiracChain combine(const DiracChain& a, const DiracChain& b, double ca, double cb) {
    if (a.dim() != b.dim() || a.grade() != b.grade())
        throw std::invalid_argument("combine: shape mismatch");
    ChainBuilder out(a.dim(), a.grade());
    out.reserve(a.size() + b.size());
    out.append(a, ca);
    out.append(b, cb);
    return out.build();
}

DiracChain scale(const DiracChain& a, double s) {
    ChainBuilder out(a.dim(), a.grade());
    out.reserve(a.size());
    out.append(a, s);
    return out.build();
}

DiracChain translate(const Vector& u, const DiracChain& a) {
    if (static_cast<int>(u.size()) != a.dim()) throw std::invalid_argument("translate: dimension mismatch");
    ChainBuilder out(a.dim(), a.grade());
    out.reserve(a.size());
    for (auto& t : a.terms()) {
        ChainTerm s = t;
        for (int i = 0; i < a.dim(); ++i) s.point[i] += u[i];
        out.add(s);
    }
    return out.build();
}

DiracChain difference(const std::vector<Vector>& sigma, const DiracChain& base) {
    DiracChain cur = base;
    for (auto& u : sigma) cur = combine(translate(u, cur), cur, 1, -1);
    return cur;
}

std::vector<Point> support(const DiracChain& a) {
    std::vector<Point> pts;
    pts.reserve(a.size());
    for (auto& t : a.terms()) pts.push_back(t.point);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

DiracChain restrict_chain(const DiracChain& a, const std::function<bool(const Point&)>& pred) {
    ChainBuilder out(a.dim(), a.grade());
    for (auto& t : a.terms())
        if (pred(t.point)) out.add(t);
    return out.build();
}

DiracChain map_terms_serial(const DiracChain& a, int out_grade,
                            const std::function<void(const ChainTerm&, ChainBuilder&)>& f,
                            int out_dim) {
    if (out_dim < 0) out_dim = a.dim();
    ChainBuilder out(out_dim, out_grade);
    for (auto& t : a.terms()) f(t, out);
    return out.build();
}

DiracChain map_terms(const DiracChain& a, int out_grade,
                     const std::function<void(const ChainTerm&, ChainBuilder&)>& f,
                     int out_dim) {
    if (out_dim < 0) out_dim = a.dim();
    if (!par::enabled() || a.size() < 2048) return map_terms_serial(a, out_grade, f, out_dim);
    const std::size_t n = a.size();
    std::vector<std::vector<ChainTerm>> slots(n);
    par::parallel_for(n, [&](std::size_t i) {
        ChainBuilder local(out_dim, out_grade);
        f(a.terms()[i], local);
        slots[i] = local.build().terms();
    });
    ChainBuilder out(out_dim, out_grade);
    for (auto& s : slots)
        for (auto& t : s) out.add(t);
    return out.build();
}

std::string to_text(const DiracChain& a) {
    std::string out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%d %d\n", a.dim(), a.grade());
    out += buf;
    for (auto& t : a.terms()) {
        for (int i = 0; i < a.dim(); ++i) {
            std::snprintf(buf, sizeof buf, "%a ", t.point[i]);
            out += buf;
        }
        out += "| ";
        for (int i = 0; i < a.dim(); ++i) {
            std::snprintf(buf, sizeof buf, "%d ", int(t.degree[i]));
            out += buf;
        }
        out += "| ";
        if (t.index.empty()) out += "- ";
        else
            for (int ax : t.index.axes()) {
                std::snprintf(buf, sizeof buf, "%d ", ax);
                out += buf;
            }
        std::snprintf(buf, sizeof buf, "| %a\n", t.coeff);
        out += buf;
    }
    return out;
}

DiracChain from_text(const std::string& text) {
    std::istringstream in(text);
    int dim = -1, grade = -1;
    if (!(in >> dim >> grade)) throw std::runtime_error("chain text: bad header");
    ChainBuilder b(dim, grade);
    std::string line;
    std::getline(in, line); // rest of header line
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        ChainTerm t;
        std::string tok;
        for (int i = 0; i < dim; ++i) {
            ls >> tok;
            t.point[i] = std::strtod(tok.c_str(), nullptr);
        }
        ls >> tok; // '|'
        for (int i = 0; i < dim; ++i) {
            int d;
            ls >> d;
            t.degree[i] = static_cast<std::uint8_t>(d);
        }
        ls >> tok; // '|'
        std::uint32_t mask = 0;
        while (ls >> tok && tok != "|") {
            if (tok == "-") continue;
            mask |= 1u << (std::stoi(tok) - 1);
        }
        t.index = MultiIndex(mask);
        ls >> tok;
        t.coeff = std::strtod(tok.c_str(), nullptr);
        b.add(t);
    }
    return b.build();
}

} // namespace chaincalc
