#include "pingpong_lab/cmetric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pplab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Grid on the unit sphere S^k (k <= 2) in R^{k+1}.
std::vector<RVec> sphere_grid(int k, double step_deg) {
    std::vector<RVec> out;
    const double step = step_deg * kPi / 180.0;
    if (k == 0) {
        out.push_back(RVec::Constant(1, 1.0));
        out.push_back(RVec::Constant(1, -1.0));
        return out;
    }
    const int na = std::max(3, static_cast<int>(std::lround(2.0 * kPi / step)));
    if (k == 1) {
        for (int i = 0; i < na; ++i) {
            double a = 2.0 * kPi * i / na;
            RVec v(2);
            v << std::cos(a), std::sin(a);
            out.push_back(v);
        }
        return out;
    }
    const int np = std::max(2, static_cast<int>(std::lround(kPi / step)));
    for (int p = 0; p <= np; ++p) {
        double pol = kPi * p / np;
        int ring = (p == 0 || p == np) ? 1 : na;
        for (int i = 0; i < ring; ++i) {
            double a = 2.0 * kPi * i / na;
            RVec v(3);
            v << std::sin(pol) * std::cos(a), std::sin(pol) * std::sin(a), std::cos(pol);
            out.push_back(v);
        }
    }
    return out;
}

// Coordinate cross for larger spheres: +-e_i and (+-e_i +-e_j)/sqrt2.
std::vector<RVec> sphere_cross(int n) {
    std::vector<RVec> out;
    for (int i = 0; i < n; ++i)
        for (double s : {1.0, -1.0}) out.push_back(s * RVec::Unit(n, i));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (double s : {1.0, -1.0})
                for (double t : {1.0, -1.0})
                    out.push_back((s * RVec::Unit(n, i) + t * RVec::Unit(n, j)) / std::sqrt(2.0));
    return out;
}

// Gap between the hyperplane n^perp and the closed region, in radians.
double hyperplane_gap(const BallRegion& r, const CVec& n) {
    double gap = std::numeric_limits<double>::infinity();
    for (const Ball& b : r.balls) {
        double to_plane = std::asin(std::min(1.0, std::abs(inner(b.center, n)) / n.norm()));
        gap = std::min(gap, to_plane - std::asin(std::min(1.0, b.radius)));
    }
    return gap;
}

Hyperplane default_witness(const BallRegion& r) {
    std::vector<CVec> cands;
    CVec sum = CVec::Zero(r.dim());
    for (const Ball& b : r.balls) {
        cands.push_back(b.center);
        cplx ph = inner(b.center, r.balls.front().center);
        sum += (std::abs(ph) > 0 ? std::conj(ph) / std::abs(ph) : cplx(1.0)) * b.center;
    }
    if (sum.norm() > 1e-9) cands.push_back(sum / sum.norm());
    double best = -std::numeric_limits<double>::infinity();
    CVec pick;
    for (const CVec& c : cands) {
        double g = hyperplane_gap(r, c);
        if (g > best) best = g, pick = c;
    }
    if (!(best > 0.0)) throw Error(ErrorCode::Degenerate, "region has no transverse hyperplane among the default witnesses");
    return Hyperplane(pick, r.field);
}

std::vector<double> pairing_ratios(const ProperDomain& U, const CVec& x, const CVec& y) {
    std::vector<double> out;
    out.reserve(U.duals().size() + 1);
    auto push = [&](const Hyperplane& h) {
        double a, b;
        if (U.field() == Field::Complex) {
            CVec n = complex_embed_dual(h).normal;
            a = std::abs(inner(complex_embed(ProjPoint(x, Field::Complex)).rep, n));
            b = std::abs(inner(complex_embed(ProjPoint(y, Field::Complex)).rep, n));
        } else {
            a = std::abs(inner(x, h.normal));
            b = std::abs(inner(y, h.normal));
        }
        if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::Degenerate, "point lies on a dual hyperplane");
        out.push_back(a / b);
    };
    push(U.witness());
    for (const Hyperplane& h : U.duals()) push(h);
    return out;
}

}  // namespace

cplx cross_ratio(const ProjPoint& v1, const ProjPoint& v2, const Hyperplane& u1, const Hyperplane& u2, double tol) {
    const CVec a = v1.rep / v1.rep.norm(), b = v2.rep / v2.rep.norm();
    const CVec m = u1.normal / u1.normal.norm(), n = u2.normal / u2.normal.norm();
    cplx den1 = inner(a, n), den2 = inner(b, m);
    if (std::abs(den1) < tol || std::abs(den2) < tol)
        throw Error(ErrorCode::Degenerate, "cross-ratio denominator vanishes");
    return inner(a, m) * inner(b, n) / (den1 * den2);
}

std::vector<Hyperplane> sample_duals(const BallRegion& region, const DualSampler& sampler) {
    if (region.space != Space::P) throw Error(ErrorCode::Input, "dual sampling needs a region in P(K^d)");
    if (!(sampler.resolution_deg > 0.0) || !(sampler.margin > 0.0))
        throw Error(ErrorCode::Input, "dual sampler needs positive resolution and margin");
    const int d = region.dim();
    const bool cx = region.field == Field::Complex;
    std::vector<Hyperplane> out;
    for (const Ball& b : region.balls) {
        if (b.radius >= 1.0) continue;
        CMat h = householder_to_e1(b.center);
        // tangent directions: an orthonormal basis of c^perp, over R
        std::vector<CVec> basis;
        for (int i = 1; i < d; ++i) {
            basis.push_back(h.col(i));
            if (cx) basis.push_back(cplx(0.0, 1.0) * h.col(i));
        }
        const int k = static_cast<int>(basis.size()) - 1;
        std::vector<RVec> dirs = k <= 2 ? sphere_grid(k, sampler.resolution_deg) : sphere_cross(k + 1);
        const double ang = std::asin(b.radius) + sampler.margin;
        const CVec c = b.center / b.center.norm();
        for (const RVec& t : dirs) {
            CVec tv = CVec::Zero(d);
            for (int i = 0; i <= k; ++i) tv += t(i) * basis[i];
            CVec n = std::sin(ang) * c + std::cos(ang) * tv;
            if (hyperplane_gap(region, n) > 0.5 * sampler.margin) out.emplace_back(n / n.norm(), region.field);
        }
    }
    return out;
}

ProperDomain::ProperDomain(BallRegion region, const DualSampler& sampler)
    : region_(std::move(region)) {
    if (region_.balls.empty()) throw Error(ErrorCode::Input, "empty region");
    witness_ = default_witness(region_);
    duals_ = sample_duals(region_, sampler);
    to_base_ = CMat::Identity(dim(), dim());
}

ProperDomain::ProperDomain(BallRegion region, Hyperplane witness, std::vector<Hyperplane> duals)
    : region_(std::move(region)), witness_(std::move(witness)), duals_(std::move(duals)) {
    if (region_.balls.empty()) throw Error(ErrorCode::Input, "empty region");
    to_base_ = CMat::Identity(dim(), dim());
    if (!(dual_margin() > 0.0)) throw Error(ErrorCode::Degenerate, "dual sample meets the closure of the region");
}

bool ProperDomain::contains(const CVec& x) const {
    if (x.size() != dim()) throw Error(ErrorCode::Dimension, "point dimension differs from domain");
    CVec y = to_base_ * x;
    for (const Ball& b : region_.balls)
        if (proj_dist(y, b.center) < b.radius) return true;
    return false;
}

double ProperDomain::dual_margin() const {
    // measured in the base region, where the pairing with to_base is undone
    CMat back = to_base_.inverse().adjoint();
    double m = hyperplane_gap(region_, back * witness_.normal);
    for (const Hyperplane& h : duals_) m = std::min(m, hyperplane_gap(region_, back * h.normal));
    return m;
}

ProperDomain ProperDomain::transformed(const SquareMatrix& g) const {
    g.require_invertible("domain transform");
    if (g.dim() != dim()) throw Error(ErrorCode::Dimension, "transform dimension differs from domain");
    ProperDomain out = *this;
    CMat na = normal_action(g);
    out.to_base_ = to_base_ * g.inverse().entries();
    out.witness_ = Hyperplane(na * witness_.normal, field());
    for (Hyperplane& h : out.duals_) h = Hyperplane(na * h.normal, field());
    return out;
}

ProperDomain ProperDomain::with_duals(const std::vector<Hyperplane>& extra) const {
    ProperDomain out = *this;
    out.duals_.insert(out.duals_.end(), extra.begin(), extra.end());
    if (!(out.dual_margin() > 0.0)) throw Error(ErrorCode::Degenerate, "extra dual sample meets the closure of the region");
    return out;
}

nlohmann::json ProperDomain::to_json() const {
    nlohmann::json j;
    j["region"] = region_to_json(region_);
    j["witness"] = vector_to_json(witness_.normal, field());
    j["duals"] = nlohmann::json::array();
    for (const Hyperplane& h : duals_) j["duals"].push_back(vector_to_json(h.normal, field()));
    if (!to_base_.isIdentity(0.0)) j["to_base"] = matrix_to_json(SquareMatrix(to_base_, field()));
    return j;
}

ProperDomain ProperDomain::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("region")) throw Error(ErrorCode::Input, "domain needs a region");
    BallRegion r = region_from_json(j.at("region"));
    if (!j.contains("duals")) {
        ProperDomain d(r);
        if (j.contains("witness")) d.witness_ = Hyperplane(vector_from_json(j.at("witness")), r.field);
        return d;
    }
    // stored normals are kept as written so distances reproduce exactly
    auto raw = [&](const nlohmann::json& v) {
        Hyperplane h(vector_from_json(v), r.field);
        h.normal = vector_from_json(v);
        return h;
    };
    Hyperplane w = j.contains("witness") ? raw(j.at("witness")) : default_witness(r);
    std::vector<Hyperplane> duals;
    for (const auto& v : j.at("duals")) duals.push_back(raw(v));
    ProperDomain d(r, w, duals);
    if (j.contains("to_base")) {
        d.to_base_ = matrix_from_json(j.at("to_base")).entries();
        if (!(d.dual_margin() > 0.0)) throw Error(ErrorCode::Degenerate, "dual sample meets the closure of the region");
    }
    return d;
}

BallRegion projective_interval(double lo, double hi) {
    if (!(lo < hi)) throw Error(ErrorCode::Input, "interval needs lo < hi");
    CVec a = affine_point(RVec::Constant(1, lo)), b = affine_point(RVec::Constant(1, hi));
    a /= a.norm();
    b /= b.norm();
    CVec c = a + b;
    c /= c.norm();
    double r = proj_dist(a, c);
    return BallRegion(Space::P, {Ball{c, r}});
}

CVec affine_point(const RVec& x) {
    CVec v(x.size() + 1);
    for (Eigen::Index i = 0; i < x.size(); ++i) v(i) = x(i);
    v(x.size()) = 1.0;
    return v;
}

double caratheodory_dist(const ProperDomain& U, const CVec& x, const CVec& y) {
    if (!U.contains(x) || !U.contains(y)) throw Error(ErrorCode::Input, "points must lie in the domain");
    std::vector<double> r = pairing_ratios(U, x, y);
    auto [lo, hi] = std::minmax_element(r.begin(), r.end());
    return std::log(*hi) - std::log(*lo);
}

namespace {

double chord_dist(double t_lo, double t_hi) {
    // points at t = 0 and t = 1 on a chord with ends t_lo < 0 < 1 < t_hi
    if (!(t_lo < 0.0) || !(t_hi > 1.0)) throw Error(ErrorCode::Input, "points must lie in the open domain");
    return 0.5 * std::log(((1.0 - t_lo) * t_hi) / ((-t_lo) * (t_hi - 1.0)));
}

}  // namespace

double hilbert_dist(const Ellipsoid& e, const RVec& x, const RVec& y) {
    if (x.size() != e.center.size() || y.size() != e.center.size())
        throw Error(ErrorCode::Dimension, "point dimension differs from ellipsoid");
    RVec dir = y - x;
    if (dir.norm() == 0.0) return 0.0;
    RVec p = x - e.center;
    double a = dir.dot(e.shape * dir), b = 2.0 * p.dot(e.shape * dir), c = p.dot(e.shape * p) - 1.0;
    if (!(a > 0.0)) throw Error(ErrorCode::Degenerate, "ellipsoid shape is not positive definite");
    double disc = b * b - 4.0 * a * c;
    if (!(disc > 0.0)) throw Error(ErrorCode::Input, "points must lie in the open domain");
    double s = std::sqrt(disc);
    // stable roots
    double q = -0.5 * (b + (b >= 0 ? s : -s));
    double r1 = q / a, r2 = c / q;
    return chord_dist(std::min(r1, r2), std::max(r1, r2));
}

double hilbert_dist(const Polytope& p, const RVec& x, const RVec& y) {
    if (p.A.cols() != x.size() || x.size() != y.size() || p.A.rows() != p.b.size())
        throw Error(ErrorCode::Dimension, "point dimension differs from polytope");
    RVec dir = y - x;
    if (dir.norm() == 0.0) return 0.0;
    double t_lo = -std::numeric_limits<double>::infinity(), t_hi = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < p.A.rows(); ++i) {
        double slack = p.b(i) - p.A.row(i).dot(x), rate = p.A.row(i).dot(dir);
        if (!(slack > 0.0)) throw Error(ErrorCode::Input, "points must lie in the open domain");
        if (rate > 0.0) t_hi = std::min(t_hi, slack / rate);
        if (rate < 0.0) t_lo = std::max(t_lo, slack / rate);
    }
    if (!std::isfinite(t_lo) || !std::isfinite(t_hi)) throw Error(ErrorCode::Degenerate, "polytope is unbounded along the chord");
    return chord_dist(t_lo, t_hi);
}

RVec AffineChart::to_chart(const CVec& x) const {
    const int n = static_cast<int>(frame.cols()) - 1;
    RVec xr = x.real();
    if (x.imag().norm() > 1e-12 * x.norm()) {
        // a complex multiple of a real vector
        Eigen::Index k;
        x.cwiseAbs().maxCoeff(&k);
        CVec y = x / x(k);
        if (y.imag().norm() > 1e-9 * y.norm()) throw Error(ErrorCode::Input, "chart needs a real point");
        xr = y.real();
    }
    double den = frame.col(n).dot(xr);
    if (std::abs(den) < 1e-300) throw Error(ErrorCode::Degenerate, "point at infinity of the chart");
    RVec out(n);
    for (int i = 0; i < n; ++i) out(i) = frame.col(i).dot(xr) / den;
    return out;
}

AffineChart chart_at(const CVec& c) {
    if (c.imag().norm() > 1e-12 * c.norm()) throw Error(ErrorCode::Input, "chart center must be real");
    const int d = static_cast<int>(c.size());
    CMat h = householder_to_e1(c);
    AffineChart ch;
    ch.frame.resize(d, d);
    for (int i = 1; i < d; ++i) ch.frame.col(i - 1) = h.col(i).real();
    ch.frame.col(d - 1) = c.real() / c.norm();
    return ch;
}

double hilbert_dist_ball(const Ball& b, const CVec& x, const CVec& y) {
    if (!(b.radius > 0.0 && b.radius < 1.0)) throw Error(ErrorCode::Input, "cap radius must lie in (0, 1)");
    AffineChart ch = chart_at(b.center);
    const int n = static_cast<int>(b.center.size()) - 1;
    double rho = std::tan(std::asin(b.radius));
    Ellipsoid e{RVec::Zero(n), RMat::Identity(n, n) / (rho * rho)};
    return hilbert_dist(e, ch.to_chart(x), ch.to_chart(y));
}

}  // namespace pplab
