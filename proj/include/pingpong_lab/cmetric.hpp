#pragma once

#include <vector>

#include "pingpong_lab/projgeom.hpp"

namespace pplab {

// <v1,u1><v2,u2> / (<v1,u2><v2,u1>); throws Degenerate when a pairing is below tol.
cplx cross_ratio(const ProjPoint& v1, const ProjPoint& v2, const Hyperplane& u1, const Hyperplane& u2,
                 double tol = kDefaultTol);

struct DualSampler {
    double resolution_deg = 2.0;  // grid step in each tangent parameter
    double margin = 1e-7;         // radians kept between a sampled hyperplane and the region
};

// A ball region together with a finite sample of U* (hyperplanes missing the
// closure). Points of this domain are mapped into the base region by to_base,
// so images g U of a region stay representable.
class ProperDomain {
public:
    ProperDomain() = default;
    explicit ProperDomain(BallRegion region, const DualSampler& sampler = {});
    ProperDomain(BallRegion region, Hyperplane witness, std::vector<Hyperplane> duals);

    const BallRegion& region() const { return region_; }
    const Hyperplane& witness() const { return witness_; }
    const std::vector<Hyperplane>& duals() const { return duals_; }
    const CMat& to_base() const { return to_base_; }
    Field field() const { return region_.field; }
    int dim() const { return region_.dim(); }

    bool contains(const CVec& x) const;
    // Smallest angular gap between a dual sample (or the witness) and the closure.
    double dual_margin() const;

    // g U with transported samples.
    ProperDomain transformed(const SquareMatrix& g) const;
    // Same domain with more dual samples; they must lie in U* as well.
    ProperDomain with_duals(const std::vector<Hyperplane>& extra) const;

    nlohmann::json to_json() const;
    static ProperDomain from_json(const nlohmann::json& j);

private:
    BallRegion region_;
    Hyperplane witness_;
    std::vector<Hyperplane> duals_;
    CMat to_base_;
};

// Supporting hyperplanes of each ball, pushed out by the margin and kept when
// they miss the whole region.
std::vector<Hyperplane> sample_duals(const BallRegion& region, const DualSampler& sampler = {});

// The cap in P(R^2) seen as the affine interval (lo, hi) in the chart [t : 1].
BallRegion projective_interval(double lo, double hi);
CVec affine_point(const RVec& x);  // [x : 1]

// Sup of log|chi| over the stored dual samples (complex domains go through
// the Plucker pair): a lower bound on d_U.
double caratheodory_dist(const ProperDomain& U, const CVec& x, const CVec& y);

struct Ellipsoid {
    RVec center;
    RMat shape;  // (x - c)^T A (x - c) < 1
};
struct Polytope {
    RMat A;
    RVec b;  // A x < b
};
// (1/2) log of the boundary cross-ratio along the chord through x and y.
double hilbert_dist(const Ellipsoid& e, const RVec& x, const RVec& y);
double hilbert_dist(const Polytope& p, const RVec& x, const RVec& y);

// Orthonormal frame (c^perp basis, c); points go to the chart x -> (<x,f_i>/<x,c>).
struct AffineChart {
    RMat frame;
    RVec to_chart(const CVec& x) const;
};
AffineChart chart_at(const CVec& c);
// Hilbert distance in a real cap B(c, r): a ball of radius tan(asin r) in the chart at c.
double hilbert_dist_ball(const Ball& b, const CVec& x, const CVec& y);

}  // namespace pplab
