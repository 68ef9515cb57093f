#include "chaincalc/represent.hpp"

#include "chaincalc/operators.hpp"

#include <cmath>
#include <cstdio>

namespace chaincalc {

DiracChain cube_chain(const Point& corner, double side, MultiIndex dirs, int orientation,
                      int level, int dim) {
    if (side <= 0) throw std::invalid_argument("cube_chain: side must be positive");
    const int k = dirs.grade();
    auto axes = dirs.axes();
    const std::int64_t per_axis = std::int64_t(1) << level;
    const double cell = side / double(per_axis);
    const double weight = orientation * std::pow(cell, k);

    ChainBuilder b(dim, k);
    std::vector<std::int64_t> idx(k, 0);
    b.reserve(std::size_t(std::pow(double(per_axis), k)));
    for (;;) {
        ChainTerm t;
        t.point = corner;
        for (int a = 0; a < k; ++a) t.point[axes[a] - 1] += (idx[a] + 0.5) * cell;
        t.index = dirs;
        t.coeff = weight;
        b.add(t);
        int a = 0;
        while (a < k && ++idx[a] == per_axis) idx[a++] = 0;
        if (a == k) break;
    }
    return b.build();
}

ChainFamily cube_family(const Point& corner, double side, MultiIndex dirs, int orientation,
                        int dim) {
    return {dim, dirs.grade(), 1, "cube",
            [=](int j) { return cube_chain(corner, side, dirs, orientation, j, dim); }};
}

DiracChain open_set_chain(const OpenSetSpec& spec, int level, int dim) {
    const double h = std::ldexp(1.0, -level);
    std::vector<std::int64_t> lo(dim), hi(dim), idx(dim);
    for (int i = 0; i < dim; ++i) {
        lo[i] = std::llround(std::floor(spec.bbox_lo[i] / h)) - 1;
        hi[i] = std::llround(std::ceil(spec.bbox_hi[i] / h)) + 1;
        idx[i] = lo[i];
    }
    const int s = std::max(1, spec.samples);
    ChainBuilder b(dim, dim);
    for (;;) {
        // sample lattice of the cube [idx*h, (idx+1)*h]
        bool inside = true;
        std::vector<int> sub(dim, 0);
        while (inside) {
            Point p{};
            for (int i = 0; i < dim; ++i) p[i] = (idx[i] + double(sub[i]) / s) * h;
            if (!spec.predicate(p)) inside = false;
            int a = 0;
            while (a < dim && ++sub[a] > s) sub[a++] = 0;
            if (a == dim) break;
        }
        if (inside) {
            ChainTerm t;
            for (int i = 0; i < dim; ++i) t.point[i] = (idx[i] + 0.5) * h;
            t.index = MultiIndex::full(dim);
            t.coeff = std::pow(h, dim);
            b.add(t);
        }
        int a = 0;
        while (a < dim && ++idx[a] > hi[a]) idx[a++] = lo[a];
        if (a == dim) break;
    }
    return b.build();
}

ChainFamily open_set_family(const OpenSetSpec& spec, int dim, std::string descriptor) {
    return {dim, dim, 1, std::move(descriptor),
            [spec, dim](int j) { return open_set_chain(spec, j, dim); }};
}

namespace {

KVector simplex_volume(const std::vector<Point>& verts, int dim) {
    const int k = static_cast<int>(verts.size()) - 1;
    if (k == 0) return KVector::scalar(dim, 1.0);
    KVector vol(dim, 1);
    double factorial = 1;
    for (int i = 1; i <= k; ++i) {
        Vector e(dim);
        for (int j = 0; j < dim; ++j) e[j] = verts[i][j] - verts[0][j];
        KVector edge = KVector::from_vector(e);
        vol = (i == 1) ? edge : wedge(vol, edge);
        factorial *= i;
    }
    return (1.0 / factorial) * vol;
}

Point centroid(const std::vector<Point>& verts) {
    Point c{};
    for (auto& v : verts)
        for (int i = 0; i < kMaxDim; ++i) c[i] += v[i] / verts.size();
    return c;
}

Point midpoint(const Point& a, const Point& b) {
    Point m{};
    for (int i = 0; i < kMaxDim; ++i) m[i] = 0.5 * (a[i] + b[i]);
    return m;
}

void subdivide(const std::vector<Point>& verts, int depth,
               const std::function<void(const std::vector<Point>&)>& emit) {
    if (depth == 0) {
        emit(verts);
        return;
    }
    const int k = static_cast<int>(verts.size()) - 1;
    if (k == 1) {
        Point m = midpoint(verts[0], verts[1]);
        subdivide({verts[0], m}, depth - 1, emit);
        subdivide({m, verts[1]}, depth - 1, emit);
    } else if (k == 2) {
        // 4-way edgewise subdivision
        Point m01 = midpoint(verts[0], verts[1]);
        Point m02 = midpoint(verts[0], verts[2]);
        Point m12 = midpoint(verts[1], verts[2]);
        subdivide({verts[0], m01, m02}, depth - 1, emit);
        subdivide({m01, verts[1], m12}, depth - 1, emit);
        subdivide({m02, m12, verts[2]}, depth - 1, emit);
        subdivide({m01, m12, m02}, depth - 1, emit);
    } else {
        // longest-edge bisection, one edge per level
        int bi = 0, bj = 1;
        double best = -1;
        for (std::size_t i = 0; i < verts.size(); ++i)
            for (std::size_t j = i + 1; j < verts.size(); ++j) {
                double d = 0;
                for (int a = 0; a < kMaxDim; ++a)
                    d += (verts[i][a] - verts[j][a]) * (verts[i][a] - verts[j][a]);
                if (d > best) { best = d; bi = int(i); bj = int(j); }
            }
        Point m = midpoint(verts[bi], verts[bj]);
        std::vector<Point> a = verts, b = verts;
        a[bj] = m;
        b[bi] = m;
        subdivide(a, depth - 1, emit);
        subdivide(b, depth - 1, emit);
    }
}

} // namespace

DiracChain polyhedral_chain(const std::vector<AffineCell>& cells, int level, int dim, int grade) {
    ChainBuilder b(dim, grade);
    for (auto& cell : cells) {
        if (static_cast<int>(cell.vertices.size()) != grade + 1)
            throw std::invalid_argument("polyhedral_chain: cell needs k+1 vertices");
        if (simplex_volume(cell.vertices, dim).zero()) {
            std::fprintf(stderr, "polyhedral_chain: degenerate cell skipped\n");
            continue;
        }
        subdivide(cell.vertices, level, [&](const std::vector<Point>& vs) {
            KVector vol = simplex_volume(vs, dim);
            b.add(centroid(vs), cell.weight * vol);
        });
    }
    return b.build();
}

ChainFamily point_limit_family(const Point& p, MultiIndex idx, int dim) {
    const int k = idx.grade();
    return {dim, k, 1, "point-limit",
            [=](int j) {
                double side = std::ldexp(1.0, -j);
                Point corner = p;
                for (int a : idx.axes()) corner[a - 1] -= side / 2;
                return scale(cube_chain(corner, side, idx, 1, 1, dim), std::ldexp(1.0, j * k));
            }};
}

DiracChain cantor_chain(int stage, int depth) {
    struct Interval {
        double a, len;
    };
    std::vector<Interval> iv{{0.0, 1.0}};
    for (int s = 0; s < stage; ++s) {
        std::vector<Interval> next;
        next.reserve(iv.size() * 2);
        for (auto& i : iv) {
            next.push_back({i.a, i.len / 3});
            next.push_back({i.a + 2 * i.len / 3, i.len / 3});
        }
        iv = std::move(next);
    }
    // (3/2)^m * 3^-m * 2^-d = 2^-(m+d) exactly; computing it in closed form
    // keeps the total pairing with dx an exact dyadic sum even though the
    // interval endpoints carry thirds.
    const double coeff = std::ldexp(1.0, -(stage + depth));
    ChainBuilder b(1, 1);
    const std::int64_t sub = std::int64_t(1) << depth;
    for (auto& i : iv)
        for (std::int64_t s = 0; s < sub; ++s) {
            ChainTerm t;
            t.point[0] = i.a + (s + 0.5) * (i.len / sub);
            t.index = MultiIndex::axis(1);
            t.coeff = coeff;
            b.add(t);
        }
    return b.build();
}

DiracChain sierpinski_chain(int stage) {
    std::vector<std::vector<Point>> tris{{make_point({0, 0}), make_point({1, 0}),
                                          make_point({0.5, 1})}};
    for (int s = 0; s < stage; ++s) {
        std::vector<std::vector<Point>> next;
        next.reserve(tris.size() * 3);
        for (auto& t : tris) {
            Point m01 = midpoint(t[0], t[1]);
            Point m02 = midpoint(t[0], t[2]);
            Point m12 = midpoint(t[1], t[2]);
            next.push_back({t[0], m01, m02});
            next.push_back({m01, t[1], m12});
            next.push_back({m02, m12, t[2]});
        }
        tris = std::move(next);
    }
    const double weight = std::pow(4.0 / 3.0, stage);
    ChainBuilder b(2, 2);
    for (auto& t : tris) b.add(centroid(t), weight * simplex_volume(t, 2));
    return b.build();
}

DiracChain vectorfield_chain(const std::map<MultiIndex, ScalarField>& field,
                             const OpenSetSpec& region, int level, int dim) {
    DiracChain U = open_set_chain(region, level, dim);
    // Orientation fixed so the volume pairing of the region chain is positive.
    DiracChain base = scale(perp_chain(U), perp_sign(MultiIndex::full(dim), dim));
    DiracChain acc = DiracChain::zero(dim, field.empty() ? 0 : field.begin()->first.grade());
    for (auto& [idx, f] : field) {
        DiracChain cur = base;
        auto axes = idx.axes();
        for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
            Vector e(dim, 0.0);
            e[*it - 1] = 1.0;
            cur = extrude(VectorFieldSpec::constant(e), cur);
        }
        acc = combine(acc, mult(f, cur), 1, 1);
    }
    return acc;
}

DiracChain dipole_cell(const Vector& v, const DiracChain& cell) {
    return prederiv(VectorFieldSpec::constant(v), cell);
}

double family_cauchy_ratio(const ChainFamily& fam, const Form& w, int j_lo, int j_hi) {
    std::vector<double> vals;
    for (int j = j_lo; j <= j_hi; ++j) vals.push_back(integrate(w, fam.level(j)));
    double worst = 0;
    for (std::size_t i = 2; i < vals.size(); ++i) {
        double prev = std::abs(vals[i - 1] - vals[i - 2]);
        double cur = std::abs(vals[i] - vals[i - 1]);
        double scale = std::max({1.0, std::abs(vals[i])});
        if (prev < 1e-13 * scale) continue; // already converged
        worst = std::max(worst, cur / prev);
    }
    return worst;
}

} // namespace chaincalc
