#pragma once

#include "chaincalc/form.hpp"

namespace chaincalc {

/// A refinement-level-indexed family of Dirac chains standing in for a
/// continuum domain of integration, with its declared class r.
struct ChainFamily {
    int dim = 0;
    int grade = 0;
    int r = 1;
    std::string descriptor;
    std::function<DiracChain(int)> level;
};

/// Midpoint-rule chain of an axis-aligned k-cube: 2^(k j) dyadic midpoints in
/// the plane through `corner` spanned by `dirs`, each of weight
/// orientation * side^k * 2^(-k j).  Integrates the constant volume form of
/// the plane to orientation * side^k exactly at every level.
DiracChain cube_chain(const Point& corner, double side, MultiIndex dirs, int orientation,
                      int level, int dim);
ChainFamily cube_family(const Point& corner, double side, MultiIndex dirs, int orientation,
                        int dim);

/// Uniform-depth interior dyadic cubes: every lattice cube of side 2^-level
/// within the bounding box whose sample points all satisfy the predicate is
/// replaced by its midpoint term.  Volumes are monotone nondecreasing in the
/// level for convex regions.
struct OpenSetSpec {
    std::function<bool(const Point&)> predicate;
    Vector bbox_lo, bbox_hi;
    /// Sample lattice per cube: (samples+1)^n points including the corners.
    /// 1 = corners only; raise for regions with thin excluded sets.
    int samples = 1;
};
DiracChain open_set_chain(const OpenSetSpec& spec, int level, int dim);
ChainFamily open_set_family(const OpenSetSpec& spec, int dim, std::string descriptor);

/// Weighted affine k-cells (simplices given by vertex lists), subdivided to
/// the requested depth, each sub-simplex contributing its centroid term with
/// the signed volume k-vector.  Degenerate cells contribute zero.
struct AffineCell {
    double weight = 1;
    std::vector<Point> vertices; ///< k+1 vertices of a k-simplex
};
DiracChain polyhedral_chain(const std::vector<AffineCell>& cells, int level, int dim, int grade);

/// Renormalized shrinking cubes converging to the k-element (p; e_I):
/// level j is 2^(j k) * cube_chain(cube of side 2^-j centered at p).
ChainFamily point_limit_family(const Point& p, MultiIndex idx, int dim);

/// Middle-third Cantor set stage m as a 1-chain in R^1: 2^m intervals of
/// length 3^-m weighted (3/2)^m, each at internal dyadic depth `depth`.
/// integrate(dx, .) == 1 exactly at every stage.
DiracChain cantor_chain(int stage, int depth = 0);

/// Sierpinski triangle stage m: 3^m triangles of side 2^-m weighted (4/3)^m
/// over the initial triangle (0,0),(1,0),(1/2,1); integrate(dV, .) is
/// stage-independent.
DiracChain sierpinski_chain(int stage);

/// Chain representative of a k-vector field over a region:
/// sum_I m_{f_I} E_{e_I} perp(region chain).
DiracChain vectorfield_chain(const std::map<MultiIndex, ScalarField>& field,
                             const OpenSetSpec& region, int level, int dim);

/// Dipole cell: prederivative of a cell chain in a fixed direction.
DiracChain dipole_cell(const Vector& v, const DiracChain& cell);

/// Observed contraction ratio of successive integral differences
/// |I_{j+1} - I_j| / |I_j - I_{j-1}| over tested levels; families should
/// report a maximum below 1 once refinement kicks in.
double family_cauchy_ratio(const ChainFamily& fam, const Form& w, int j_lo, int j_hi);

} // namespace chaincalc
