#include "pingpong_lab/projgeom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pplab {

static CVec unit_or_throw(const CVec& v, const char* what) {
    double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorCode::Input, std::string(what) + " must be a nonzero finite vector");
    return v / n;
}

ProjPoint::ProjPoint(const CVec& v, Field f) : rep(unit_or_throw(v, "projective point")), field(f) {}

Hyperplane::Hyperplane(const CVec& n, Field f) : normal(unit_or_throw(n, "hyperplane normal")), field(f) {}

BallRegion::BallRegion(Space s, std::vector<Ball> b, Field f) : space(s), field(f), balls(std::move(b)) {
    if (balls.empty()) throw Error(ErrorCode::Input, "ball region must be nonempty");
    const auto d = balls.front().center.size();
    for (auto& ball : balls) {
        if (ball.center.size() != d) throw Error(ErrorCode::Dimension, "ball centers of different dimension");
        if (!(ball.radius > 0.0 && ball.radius < 1.0)) throw Error(ErrorCode::Input, "ball radius must lie in (0,1)");
        ball.center = unit_or_throw(ball.center, "ball center");
    }
}

// Norm of the component of u orthogonal to v, for unit u, v. Avoids the
// cancellation in sqrt(1 - |<u,v>|^2).
static double orth_norm(const CVec& u, const CVec& v) { return (u - v * inner(u, v)).norm(); }

double proj_dist(const CVec& u, const CVec& v) {
    if (u.size() != v.size()) throw Error(ErrorCode::Dimension, "points of different dimension");
    CVec a = u / u.norm(), b = v / v.norm();
    return std::min(1.0, orth_norm(a, b));
}

double proj_dist(const ProjPoint& x, const ProjPoint& y) { return proj_dist(x.rep, y.rep); }

double gr_dist(const Hyperplane& v, const Hyperplane& w) { return proj_dist(v.normal, w.normal); }

double line_angle(const CVec& u, const CVec& v) {
    CVec a = u / u.norm(), b = v / v.norm();
    return std::atan2(orth_norm(a, b), std::abs(inner(a, b)));
}

double dist_point_hyperplane(const ProjPoint& x, const Hyperplane& v) {
    if (x.dim() != v.dim()) throw Error(ErrorCode::Dimension, "point and hyperplane of different dimension");
    return std::min(1.0, std::abs(inner(x.rep, v.normal)));
}

double dist_point_subspace(const ProjPoint& x, const CMat& frame, double tol) {
    if (frame.rows() != x.dim() || frame.cols() < 1 || frame.cols() >= frame.rows())
        throw Error(ErrorCode::Dimension, "frame must be d x k with 1 <= k < d");
    CMat gram = frame.adjoint() * frame;
    if ((gram - CMat::Identity(frame.cols(), frame.cols())).norm() > tol)
        throw Error(ErrorCode::Input, "frame is not orthonormal");
    CVec r = x.rep - frame * (frame.adjoint() * x.rep);
    return std::min(1.0, r.norm());
}

// Lower bound on the distance between closed balls; mixed P/Gr pairs use the
// transversality distance |<c, n>|.
static double ball_pair_separation(const Ball& a, Space sa, const Ball& b, Space sb) {
    double center = (sa == sb) ? proj_dist(a.center, b.center) : std::min(1.0, std::abs(inner(a.center, b.center)));
    return std::max(0.0, center - a.radius - b.radius);
}

double region_separation(const BallRegion& a, const BallRegion& b) {
    if (a.dim() != b.dim()) throw Error(ErrorCode::Dimension, "regions of different dimension");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : a.balls)
        for (const auto& y : b.balls) best = std::min(best, ball_pair_separation(x, a.space, y, b.space));
    return best;
}

double dist_to_region(const CVec& x, const BallRegion& r) {
    double best = 1.0;
    for (const auto& b : r.balls) {
        double ang = line_angle(x, b.center) - std::asin(b.radius);
        best = std::min(best, ang <= 0.0 ? 0.0 : std::sin(ang));
    }
    return best;
}

bool region_contains(const BallRegion& r, const CVec& x) {
    for (const auto& b : r.balls)
        if (proj_dist(x, b.center) < b.radius) return true;
    return false;
}

ProjPoint separated_point(const ProjPoint& x, double theta, const Hyperplane& v) {
    if (!(theta > 0.0 && theta < 1.0)) throw Error(ErrorCode::Input, "theta must lie in (0,1)");
    if (x.dim() != v.dim()) throw Error(ErrorCode::Dimension, "point and hyperplane of different dimension");
    if (dist_point_hyperplane(x, v) >= theta / 2.0) return x;
    // Rotate so V = e1^perp; then x' = x1 e1 + w0 with |x1| < theta/2.
    CMat h = householder_to_e1(v.normal);
    CVec xr = h * x.rep;
    cplx x1 = xr(0);
    CVec w0 = xr;
    w0(0) = 0.0;
    cplx ph = std::abs(x1) > 0.0 ? x1 / std::abs(x1) : cplx(1.0, 0.0);
    CVec y = (std::sqrt(1.0 - theta * theta / 4.0) / w0.norm()) * w0;
    y(0) = (theta / 2.0) * ph;
    return ProjPoint(h * y, x.field);
}

static RVec realify(const CVec& u) {
    RVec r(2 * u.size());
    for (int i = 0; i < u.size(); ++i) {
        r(2 * i) = u(i).real();
        r(2 * i + 1) = u(i).imag();
    }
    return r;
}

// Plucker vector of span_R{u, iu} in wedge^2 R^{2d}.
static CVec complex_line_plucker(const CVec& u) {
    CVec re = realify(u).cast<cplx>();
    CVec im = realify(cplx(0.0, 1.0) * u).cast<cplx>();
    CVec p = wedge_vectors(re, im);
    return p.real().cast<cplx>();
}

ProjPoint complex_embed(const ProjPoint& x) {
    if (x.field != Field::Complex) throw Error(ErrorCode::Input, "complex_embed needs a complex point");
    return ProjPoint(complex_line_plucker(x.rep), Field::Real);
}

// The functional w -> (w ^ ...) pairing with span{n, in} evaluates to
// |<u, n>|^2 on embedded points, so its normal is the Plucker vector of n.
Hyperplane complex_embed_dual(const Hyperplane& v) {
    if (v.field != Field::Complex) throw Error(ErrorCode::Input, "complex_embed_dual needs a complex hyperplane");
    return Hyperplane(complex_line_plucker(v.normal), Field::Real);
}

double containment_margin(const Ball& inner_ball, const Ball& outer) {
    return std::asin(std::min(1.0, outer.radius)) - line_angle(inner_ball.center, outer.center) -
           std::asin(std::min(1.0, inner_ball.radius));
}

Contraction contraction_of(const CMat& g) {
    Eigen::JacobiSVD<CMat> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Contraction c;
    c.g = g;
    c.u1 = svd.matrixU().col(0);
    c.v1 = svd.matrixV().col(0);
    const auto& s = svd.singularValues();
    c.ratio21 = s.size() > 1 ? s(1) / s(0) : 0.0;
    return c;
}

std::vector<Ball> image_ball_bounds(const Contraction& c, const Ball& b, double slack) {
    std::vector<Ball> out;
    const double eps_c = std::min(1.0, std::abs(inner(b.center, c.v1)));
    const double r = b.radius;
    auto push = [&](CVec center, double radius) {
        radius = radius * (1.0 + slack) + kGeomSlack;
        if (radius < 1.0) out.push_back({center / center.norm(), radius});
    };
    // Every point of the ball keeps at least eps_lo from the repelling hyperplane.
    double ang = std::asin(eps_c) - std::asin(std::min(1.0, r));
    if (ang <= 0.0) return out;
    const double eps_lo = std::sin(ang);
    // Image of the center: d(gx, gy) <= (sigma2/sigma1) d(x, y) / (|<x,v1>| |<y,v1>|).
    push(c.g * b.center, c.ratio21 * r / (eps_c * eps_lo));
    // Attracting direction: d(gy, k_g e1) <= (sigma2/sigma1) / |<y,v1>|.
    push(c.u1, c.ratio21 / eps_lo);
    return out;
}

std::vector<Ball> chain_ball_bounds(const std::vector<Contraction>& chain, const Ball& b, double slack) {
    std::vector<Ball> cur{b};
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        std::vector<Ball> next;
        for (const auto& ball : cur) {
            auto imgs = image_ball_bounds(*it, ball, slack);
            next.insert(next.end(), imgs.begin(), imgs.end());
        }
        std::sort(next.begin(), next.end(), [](const Ball& x, const Ball& y) { return x.radius < y.radius; });
        if (next.size() > 4) next.resize(4);
        cur = std::move(next);
        if (cur.empty()) break;
    }
    return cur;
}

double best_containment_margin(const std::vector<Ball>& candidates, const std::vector<Ball>& targets) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& c : candidates)
        for (const auto& t : targets) best = std::max(best, containment_margin(c, t));
    return best;
}

CMat normal_action(const SquareMatrix& g) { return g.inverse().adjoint().entries(); }

nlohmann::json region_to_json(const BallRegion& r) {
    nlohmann::json balls = nlohmann::json::array();
    for (const auto& b : r.balls) balls.push_back({{"center", vector_to_json(b.center, r.field)}, {"radius", b.radius}});
    return {{"space", r.space == Space::P ? "P" : "Gr"}, {"balls", balls}};
}

BallRegion region_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("space") || !j.contains("balls"))
        throw Error(ErrorCode::Input, "ball region needs 'space' and 'balls'");
    std::string s = j.at("space").get<std::string>();
    if (s != "P" && s != "Gr") throw Error(ErrorCode::Input, "space must be P or Gr");
    std::vector<Ball> balls;
    Field field = Field::Real;
    for (const auto& b : j.at("balls")) {
        Field f;
        CVec c = vector_from_json(b.at("center"), &f);
        if (f == Field::Complex) field = Field::Complex;
        balls.push_back({c, b.at("radius").get<double>()});
    }
    return BallRegion(s == "P" ? Space::P : Space::Gr, std::move(balls), field);
}

}  // namespace pplab
