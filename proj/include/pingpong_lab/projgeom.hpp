#pragma once

#include <vector>

#include "pingpong_lab/linalg.hpp"

namespace pplab {

struct ProjPoint {
    CVec rep;
    Field field = Field::Real;
    ProjPoint() = default;
    explicit ProjPoint(const CVec& v, Field f = Field::Real);
    int dim() const { return static_cast<int>(rep.size()); }
};

// The hyperplane normal^perp.
struct Hyperplane {
    CVec normal;
    Field field = Field::Real;
    Hyperplane() = default;
    explicit Hyperplane(const CVec& n, Field f = Field::Real);
    int dim() const { return static_cast<int>(normal.size()); }
};

enum class Space { P, Gr };

// Closed metric ball. For Space::Gr the center is the hyperplane's normal.
struct Ball {
    CVec center;  // unit
    double radius = 0.0;
};

struct BallRegion {
    Space space = Space::P;
    Field field = Field::Real;
    std::vector<Ball> balls;

    BallRegion() = default;
    BallRegion(Space s, std::vector<Ball> b, Field f = Field::Real);
    int dim() const { return static_cast<int>(balls.front().center.size()); }
};

constexpr double kGeomSlack = 1e-12;
constexpr double kSvdSlack = 1e-9;

double proj_dist(const CVec& u, const CVec& v);
double proj_dist(const ProjPoint& x, const ProjPoint& y);
double gr_dist(const Hyperplane& v, const Hyperplane& w);
// Angle in [0, pi/2] between the lines; d_P is its sine.
double line_angle(const CVec& u, const CVec& v);

double dist_point_hyperplane(const ProjPoint& x, const Hyperplane& v);
double dist_point_subspace(const ProjPoint& x, const CMat& frame, double tol = kDefaultTol);

double region_separation(const BallRegion& a, const BallRegion& b);
// Exact distance from a point (or normal) to the closed region.
double dist_to_region(const CVec& x, const BallRegion& r);
bool region_contains(const BallRegion& r, const CVec& x);

ProjPoint separated_point(const ProjPoint& x, double theta, const Hyperplane& v);

ProjPoint complex_embed(const ProjPoint& x);
Hyperplane complex_embed_dual(const Hyperplane& v);

// Angular slack of B(inner) inside B(outer); positive iff contained.
double containment_margin(const Ball& inner, const Ball& outer);

// Precomputed contraction data of a matrix acting on P(K^d).
struct Contraction {
    CMat g;
    CVec u1;           // attracting direction k_g e1
    CVec v1;           // normal of the repelling hyperplane
    double ratio21;    // sigma2/sigma1
};
Contraction contraction_of(const CMat& g);

// Over-approximations of g * closure(B). The image lies in each returned
// ball; balls of radius >= 1 are dropped.
std::vector<Ball> image_ball_bounds(const Contraction& c, const Ball& b, double slack = kSvdSlack);
// Same through a chain g = g_1 g_2 ... g_n (applied right to left).
std::vector<Ball> chain_ball_bounds(const std::vector<Contraction>& chain, const Ball& b,
                                    double slack = kSvdSlack);
// Best margin of any candidate inside any target ball; -inf if no candidates.
double best_containment_margin(const std::vector<Ball>& candidates, const std::vector<Ball>& targets);

// Matrix acting on hyperplane normals: g . n^perp = (g^{-*} n)^perp.
CMat normal_action(const SquareMatrix& g);

nlohmann::json region_to_json(const BallRegion& r);
BallRegion region_from_json(const nlohmann::json& j);

}  // namespace pplab
