#include "chaincalc/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chaincalc {

namespace {

double sigma_norm(const std::vector<Vector>& sigma) {
    double s = 1;
    for (auto& u : sigma) s *= norm2(u);
    return s;
}

} // namespace

double DecompEntry::cost() const { return sigma_norm(sigma) * mass(alpha).value; }

DiracChain Decomposition::reconstruct(int dim, int grade) const {
    DiracChain acc = DiracChain::zero(dim, grade);
    for (auto& e : entries) acc = combine(acc, e.chain(), 1, 1);
    return acc;
}

double Decomposition::cost() const {
    double s = 0;
    for (auto& e : entries) s += e.cost();
    return s;
}

double norm_upper(const DiracChain& A, int r, const Decomposition& d) {
    for (auto& e : d.entries)
        if (static_cast<int>(e.sigma.size()) > r)
            throw std::invalid_argument("norm_upper: decomposition order exceeds r");
    DiracChain recon = d.reconstruct(A.dim(), A.grade());
    DiracChain residual = combine(A, recon, 1, -1);
    if (!residual.zero_chain())
        throw std::invalid_argument("norm_upper: decomposition does not reconstruct the chain; residual = " +
                                    residual.str());
    return d.cost();
}

namespace {

/// Working object of the pairing strategy: magnitude * difference chain
/// of an order-0 basis element.
struct DiffObj {
    std::vector<Vector> sigma; // entries normalized lex-positive, list sorted
    Point base{};
    MultiIndex index;
    double magnitude = 0; // signed

    double level_cost() const { return std::abs(magnitude) * sigma_norm(sigma); }
};

bool lex_positive(const Vector& u) {
    for (double x : u) {
        if (x > 0) return true;
        if (x < 0) return false;
    }
    return false; // zero counts as non-positive; callers skip zero distances
}

Vector negate(Vector u) {
    for (double& x : u) x = -x;
    return u;
}

double point_dist(const Point& a, const Point& b) {
    double s = 0;
    for (int i = 0; i < kMaxDim; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

/// Spatial bucket index over base points for nearest-candidate queries.
struct BucketGrid {
    std::array<double, kMaxDim> origin{};
    std::array<double, kMaxDim> cell{};
    std::map<std::array<std::int64_t, kMaxDim>, std::vector<std::size_t>> buckets;

    std::array<std::int64_t, kMaxDim> key(const Point& p) const {
        std::array<std::int64_t, kMaxDim> k{};
        for (int i = 0; i < kMaxDim; ++i)
            k[i] = std::llround(std::floor((p[i] - origin[i]) / cell[i]));
        return k;
    }
};

BucketGrid build_grid(const std::vector<DiffObj>& objs, const std::vector<std::size_t>& ids,
                      int dim) {
    BucketGrid g;
    g.cell.fill(1.0);
    if (ids.empty()) return g;
    Point lo = objs[ids[0]].base, hi = lo;
    for (auto i : ids)
        for (int a = 0; a < kMaxDim; ++a) {
            lo[a] = std::min(lo[a], objs[i].base[a]);
            hi[a] = std::max(hi[a], objs[i].base[a]);
        }
    double per_axis = std::ceil(std::pow(double(ids.size()), 1.0 / std::max(1, dim)));
    for (int a = 0; a < kMaxDim; ++a) {
        g.origin[a] = lo[a];
        double extent = hi[a] - lo[a];
        g.cell[a] = extent > 0 ? extent / per_axis : 1.0;
    }
    for (auto i : ids) g.buckets[g.key(objs[i].base)].push_back(i);
    return g;
}

/// Greedy nearest-point pairing of opposite-signed objects with equal sigma
/// and index into one-higher differences.  Negatives are visited in
/// lexicographic order, candidates found through the bucket grid with ties
/// broken by lexicographic point order, and a match is taken only when it
/// lowers the bound (distance < 2).
std::vector<DiffObj> pair_level(std::vector<DiffObj> objs, int dim) {
    std::sort(objs.begin(), objs.end(), [](const DiffObj& a, const DiffObj& b) {
        if (a.sigma != b.sigma) return a.sigma < b.sigma;
        if (a.index != b.index) return a.index < b.index;
        return a.base < b.base;
    });
    std::vector<DiffObj> out;
    std::size_t g0 = 0;
    while (g0 < objs.size()) {
        std::size_t g1 = g0;
        while (g1 < objs.size() && objs[g1].sigma == objs[g0].sigma && objs[g1].index == objs[g0].index)
            ++g1;
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = g0; i < g1; ++i)
            (objs[i].magnitude > 0 ? pos : neg).push_back(i);
        BucketGrid grid = build_grid(objs, pos, dim);
        for (std::size_t ni : neg) {
            DiffObj& no = objs[ni];
            while (no.magnitude < 0) {
                std::size_t best = std::size_t(-1);
                double best_d = 2.0; // accept only distances that improve the bound
                auto center = grid.key(no.base);
                for (int shell = 0; shell <= 2; ++shell) {
                    std::function<void(int, std::array<std::int64_t, kMaxDim>&, bool)> visit =
                        [&](int axis, std::array<std::int64_t, kMaxDim>& k, bool on_shell) {
                            if (axis == dim) {
                                if (shell > 0 && !on_shell) return; // inner cells already seen
                                auto it = grid.buckets.find(k);
                                if (it == grid.buckets.end()) return;
                                for (std::size_t pi : it->second) {
                                    const DiffObj& po = objs[pi];
                                    if (po.magnitude <= 0) continue;
                                    double dd = point_dist(po.base, no.base);
                                    if (dd <= 0) continue;
                                    if (dd < best_d ||
                                        (dd == best_d && best != std::size_t(-1) &&
                                         po.base < objs[best].base)) {
                                        best_d = dd;
                                        best = pi;
                                    }
                                }
                                return;
                            }
                            for (int o = -shell; o <= shell; ++o) {
                                k[axis] = center[axis] + o;
                                visit(axis + 1, k, on_shell || std::abs(o) == shell);
                            }
                        };
                    std::array<std::int64_t, kMaxDim> k = center;
                    visit(0, k, false);
                }
                if (best == std::size_t(-1)) break;
                DiffObj& po = objs[best];
                double mu = std::min(po.magnitude, -no.magnitude);
                Vector u(kMaxDim);
                for (int i = 0; i < kMaxDim; ++i) u[i] = po.base[i] - no.base[i];
                DiffObj merged;
                merged.base = no.base;
                merged.index = no.index;
                merged.magnitude = mu;
                if (!lex_positive(u)) {
                    // m*D_u(p) = (-m)*D_{-u}(p+u): keep sigma entries lex-positive
                    merged.base = po.base;
                    merged.magnitude = -mu;
                    u = negate(u);
                }
                merged.sigma = no.sigma;
                merged.sigma.push_back(u);
                std::sort(merged.sigma.begin(), merged.sigma.end());
                out.push_back(merged);
                po.magnitude -= mu;
                no.magnitude += mu;
            }
        }
        for (std::size_t i = g0; i < g1; ++i)
            if (objs[i].magnitude != 0) out.push_back(objs[i]);
        g0 = g1;
    }
    return out;
}

} // namespace

UpperBound norm_upper(const DiracChain& A, int r, UpperStrategy strategy) {
    if (A.order() != 0)
        throw std::invalid_argument("norm_upper: built-in strategies require an order-0 chain");
    std::vector<DiffObj> objs;
    objs.reserve(A.size());
    for (auto& t : A.terms()) objs.push_back({{}, t.point, t.index, t.coeff});

    if (strategy == UpperStrategy::Pairing) {
        for (int depth = 1; depth <= r; ++depth) {
            std::vector<DiffObj> eligible, parked;
            for (auto& o : objs)
                (static_cast<int>(o.sigma.size()) == depth - 1 ? eligible : parked).push_back(o);
            auto paired = pair_level(std::move(eligible), A.dim());
            objs = std::move(parked);
            objs.insert(objs.end(), paired.begin(), paired.end());
        }
    }

    Decomposition witness;
    witness.r = r;
    double bound = 0;
    for (auto& o : objs) {
        std::vector<Vector> sig;
        for (auto& u : o.sigma) sig.push_back(Vector(u.begin(), u.begin() + A.dim()));
        witness.entries.emplace_back(sig, o.base,
                                     KVector::basis(A.dim(), o.index, o.magnitude));
        bound += o.level_cost();
    }
    return {bound, std::move(witness)};
}

LowerBound norm_lower(const DiracChain& A, int /*r*/, const std::vector<CertifiedForm>& dict) {
    if (dict.empty()) return {0.0, "(empty dictionary)"};
    LowerBound best{0.0, dict.front().name};
    for (auto& entry : dict) {
        if (entry.norm_bound <= 0) continue;
        double q = std::abs(integrate(entry.form, A)) / entry.norm_bound;
        if (q > best.bound) best = {q, entry.name};
    }
    return best;
}

NormBound norm_bracket(const DiracChain& A, int r, const std::vector<CertifiedForm>& dict,
                       UpperStrategy strategy) {
    auto up = norm_upper(A, r, strategy);
    auto lo = norm_lower(A, r, dict);
    NormBound out;
    out.r = r;
    out.lower = lo.bound;
    out.upper = up.bound;
    out.lower_witness = lo.witness;
    out.upper_witness = std::to_string(up.witness.entries.size()) + " difference chains";
    return out;
}

double form_norm_estimate(const Form& w, int r, const GridSpec& grid) {
    const int n = w.dim();

    // all degree vectors with total <= r over the n axes
    std::vector<Degree> degrees;
    std::function<void(Degree, int, int)> gen = [&](Degree d, int axis, int remaining) {
        if (axis == n) {
            degrees.push_back(d);
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            Degree d2 = d;
            d2[axis] = static_cast<std::uint8_t>(c);
            gen(d2, axis + 1, remaining - c);
        }
    };
    gen(Degree{}, 0, r);

    double best = 0;
    std::vector<int> idx(n, 0);
    for (;;) {
        Point p{};
        for (int i = 0; i < n; ++i)
            p[i] = grid.lo[i] + (grid.hi[i] - grid.lo[i]) * idx[i] / std::max(1, grid.steps);
        for (auto& d : degrees)
            for (auto& [I, f] : w.components())
                best = std::max(best, std::abs(f.partial(d, p)));
        int ax = 0;
        while (ax < n && ++idx[ax] > grid.steps) idx[ax++] = 0;
        if (ax == n) break;
    }
    return best;
}

bool inside_check(const Decomposition& d, const Region& region) {
    for (auto& e : d.entries) {
        // vertex set of the (possibly degenerate) parallelepiped
        std::vector<Point> verts{e.base_point};
        for (auto& u : e.sigma) {
            std::size_t m = verts.size();
            for (std::size_t i = 0; i < m; ++i) {
                Point q = verts[i];
                for (std::size_t j = 0; j < u.size(); ++j) q[j] += u[j];
                verts.push_back(q);
            }
        }
        for (auto& v : verts)
            if (!region.contains(v)) return false;
        if (region.convex) continue;
        // sample segments between vertex pairs and the centroid
        Point c{};
        for (auto& v : verts)
            for (int i = 0; i < kMaxDim; ++i) c[i] += v[i] / verts.size();
        if (!region.contains(c)) return false;
        for (std::size_t a = 0; a < verts.size(); ++a)
            for (std::size_t b = a + 1; b < verts.size(); ++b)
                for (int s = 1; s < region.edge_samples; ++s) {
                    double t = double(s) / region.edge_samples;
                    Point q{};
                    for (int i = 0; i < kMaxDim; ++i)
                        q[i] = (1 - t) * verts[a][i] + t * verts[b][i];
                    if (!region.contains(q)) return false;
                }
    }
    return true;
}

} // namespace chaincalc
