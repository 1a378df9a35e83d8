#include "doctest.h"

#include <cmath>

#include "pingpong_lab/cmetric.hpp"
#include "test_util.hpp"

using namespace pplab;
using namespace pplab::testing;

namespace {

CVec vec(std::initializer_list<double> v) {
    CVec out(static_cast<int>(v.size()));
    int i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

BallRegion shipped(const char* key) { return region_from_json(load_json("configs/cmetric_domains.json").at(key)); }

// Point of the cap at angle below frac * (cap angle) from the center.
CVec point_in_cap(Rng& rng, const Ball& b, double frac, Field f = Field::Real) {
    const int d = static_cast<int>(b.center.size());
    CVec c = b.center / b.center.norm();
    CVec t = random_unit(rng, d, f);
    t -= inner(t, c) * c;
    t /= t.norm();
    double a = uniform(rng, 0.0, frac * std::asin(b.radius));
    return std::cos(a) * c + std::sin(a) * t;
}

}  // namespace

TEST_CASE("cross-ratio examples and identities") {
    Rng rng = make_rng(11, {});
    ProjPoint x(random_unit(rng, 3, Field::Real));
    Hyperplane u1(random_unit(rng, 3, Field::Real)), u2(random_unit(rng, 3, Field::Real));
    CHECK(std::abs(cross_ratio(x, x, u1, u2) - 1.0) < 1e-14);

    ProjPoint e1(vec({1, 0})), e2(vec({0, 1}));
    Hyperplane p(vec({1, 1}) / std::sqrt(2.0)), m(vec({1, -1}) / std::sqrt(2.0));
    CHECK(std::abs(cross_ratio(e1, e2, p, m) - (-1.0)) < 1e-14);

    for (int i = 0; i < 50; ++i) {
        Field f = i % 2 ? Field::Complex : Field::Real;
        ProjPoint a(random_unit(rng, 4, f), f), b(random_unit(rng, 4, f), f);
        Hyperplane h1(random_unit(rng, 4, f), f), h2(random_unit(rng, 4, f), f);
        cplx prod = cross_ratio(a, b, h1, h2) * cross_ratio(b, a, h1, h2);
        CHECK(std::abs(prod - 1.0) < 1e-9);
        // scale invariance
        ProjPoint a2(cplx(-3.0, 2.0) * a.rep, f);
        Hyperplane h3(cplx(0.5, -1.0) * h1.normal, f);
        CHECK(std::abs(cross_ratio(a2, b, h3, h2) - cross_ratio(a, b, h1, h2)) < 1e-9 * std::abs(cross_ratio(a, b, h1, h2)));
    }

    ProjPoint on(vec({1, -1}));
    try {
        cross_ratio(e1, on, m, Hyperplane(vec({0, 1})));
        FAIL("expected degeneracy");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::Degenerate);
    }
}

TEST_CASE("interval domain matches the endpoint cross-ratio") {
    BallRegion r = shipped("interval");
    BallRegion built = projective_interval(-1.0, 1.0);
    CHECK(proj_dist(r.balls[0].center, built.balls[0].center) < 1e-15);
    CHECK(std::abs(r.balls[0].radius - built.balls[0].radius) < 1e-15);

    ProperDomain U(r);
    CHECK(U.duals().size() == 2);
    CVec x = affine_point(RVec::Constant(1, 0.0));
    for (double t : {0.2, 0.5, 0.7, -0.9}) {
        CVec y = affine_point(RVec::Constant(1, t));
        double want = std::log((1 + std::abs(t)) / (1 - std::abs(t)));
        CHECK(rel_err(caratheodory_dist(U, x, y), want) < 1e-4);
        CHECK(caratheodory_dist(U, x, y) <= want + 1e-12);
    }
    CHECK(rel_err(caratheodory_dist(U, x, affine_point(RVec::Constant(1, 0.5))), std::log(3.0)) < 0.01);
    CHECK(caratheodory_dist(U, x, x) == 0.0);

    CVec outside = affine_point(RVec::Constant(1, 1.5));
    try {
        caratheodory_dist(U, x, outside);
        FAIL("expected input error");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::Input);
    }
}

TEST_CASE("hilbert distance on intervals, squares and ellipsoids") {
    RVec o = RVec::Zero(1), h = RVec::Constant(1, 0.5);
    Ellipsoid seg{RVec::Zero(1), RMat::Identity(1, 1)};
    Polytope segp{(RMat(2, 1) << 1, -1).finished(), RVec::Ones(2)};
    CHECK(std::abs(hilbert_dist(seg, o, h) - 0.5 * std::log(3.0)) < 1e-14);
    CHECK(std::abs(hilbert_dist(segp, o, h) - 0.5 * std::log(3.0)) < 1e-14);
    CHECK(hilbert_dist(seg, h, h) == 0.0);
    CHECK(hilbert_dist(segp, h, h) == 0.0);

    Polytope square{(RMat(4, 2) << 1, 0, -1, 0, 0, 1, 0, -1).finished(), RVec::Ones(4)};
    CHECK(std::abs(hilbert_dist(square, RVec::Zero(2), RVec::Unit(2, 0) * 0.5) - 0.5 * std::log(3.0)) < 1e-14);

    Ball cap = projective_interval(-1.0, 1.0).balls[0];
    CHECK(std::abs(hilbert_dist_ball(cap, affine_point(o), affine_point(h)) - 0.5 * std::log(3.0)) < 1e-12);

    // boosts preserve the unit disk; affine maps carry it to a conjugated ellipsoid
    Rng rng = make_rng(12, {});
    Ellipsoid disk{RVec::Zero(2), RMat::Identity(2, 2)};
    for (int i = 0; i < 20; ++i) {
        RVec x = RVec::Random(2) * 0.5, y = RVec::Random(2) * 0.5;
        double base = hilbert_dist(disk, x, y);
        double s = uniform(rng, -1.5, 1.5), a = uniform(rng, 0, 6.28);
        RMat boost = RMat::Identity(3, 3);
        boost(0, 0) = boost(2, 2) = std::cosh(s);
        boost(0, 2) = boost(2, 0) = std::sinh(s);
        RMat rot = RMat::Identity(3, 3);
        rot.topLeftCorner(2, 2) = rotation(a).real_entries();
        RMat g = rot * boost;
        auto act = [&](const RVec& p) {
            RVec q = g * (RVec(3) << p, 1.0).finished();
            return RVec(q.head(2) / q(2));
        };
        CHECK(std::abs(hilbert_dist(disk, act(x), act(y)) - base) < 1e-9);

        RMat L = RMat::Random(2, 2) + 2 * RMat::Identity(2, 2);
        RVec c = RVec::Random(2);
        RMat Li = L.inverse();
        Ellipsoid img{c, Li.transpose() * Li};
        CHECK(std::abs(hilbert_dist(img, L * x + c, L * y + c) - base) < 1e-9);
    }
}

TEST_CASE("dual sampler respects the region") {
    ProperDomain U(shipped("outer"));
    CHECK(U.duals().size() == 180);
    CHECK(U.dual_margin() > 0.0);
    ProperDomain V(BallRegion(Space::P, {Ball{vec({0, 0, 0, 1}), 0.3}}));
    CHECK(V.duals().size() == 2 + 89 * 180);
    CHECK(V.dual_margin() > 0.0);
    // a union of two caps keeps only hyperplanes missing both
    BallRegion two(Space::P, {Ball{vec({1, 0, 0}), 0.2}, Ball{vec({0.8, 0.6, 0}), 0.2}});
    ProperDomain W(two);
    CHECK(W.dual_margin() > 0.0);
    CHECK(W.duals().size() < 360);
    CHECK_THROWS_AS(ProperDomain(BallRegion(Space::P, {Ball{vec({1, 0}), 0.8}, Ball{vec({0, 1}), 0.8}})), Error);
}

TEST_CASE("invariance under GL(d) with transported samples") {
    ProperDomain U(shipped("outer"));
    Rng rng = make_rng(13, {});
    for (int i = 0; i < 20; ++i) {
        SquareMatrix g = random_sl(rng, 3, 0.5);
        ProperDomain gU = U.transformed(g);
        CVec x = point_in_cap(rng, U.region().balls[0], 0.9), y = point_in_cap(rng, U.region().balls[0], 0.9);
        CHECK(gU.contains(g.entries() * x));
        CHECK(gU.dual_margin() > 0.0);
        double a = caratheodory_dist(U, x, y), b = caratheodory_dist(gU, g.entries() * x, g.entries() * y);
        CHECK(std::abs(a - b) < 1e-12);
    }

    BallRegion cr(Space::P, {Ball{vec({0, 1}), 0.5}}, Field::Complex);
    ProperDomain C(cr);
    CHECK(C.duals().size() == 180);
    for (int i = 0; i < 10; ++i) {
        RandomElement e = random_element(rng, 2, Field::Complex, 0.5);
        ProperDomain gC = C.transformed(e.g);
        CVec x = point_in_cap(rng, cr.balls[0], 0.8, Field::Complex), y = point_in_cap(rng, cr.balls[0], 0.8, Field::Complex);
        double a = caratheodory_dist(C, x, y);
        CHECK(a > 0.0);
        CHECK(std::abs(a - caratheodory_dist(C, y, x)) < 1e-12);
        CHECK(std::abs(a - caratheodory_dist(gC, e.g.entries() * x, e.g.entries() * y)) < 1e-12);
    }
}

TEST_CASE("nested domains: monotonicity and contraction") {
    ProperDomain outer(shipped("outer")), inner_d(shipped("inner"));
    const Ball& ib = inner_d.region().balls[0];
    const Ball& ob = outer.region().balls[0];
    CHECK(containment_margin(ib, ob) > 0.0);
    ProperDomain matched = inner_d.with_duals(outer.duals());
    Rng rng = make_rng(14, {});
    double min_exact = INFINITY, min_lower = INFINITY;
    for (int i = 0; i < 100; ++i) {
        CVec x = point_in_cap(rng, ib, 0.95), y = point_in_cap(rng, ib, 0.95);
        double d_in = caratheodory_dist(matched, x, y), d_out = caratheodory_dist(outer, x, y);
        CHECK(d_in >= d_out);
        double h_out = hilbert_dist_ball(ob, x, y);
        min_exact = std::min(min_exact, hilbert_dist_ball(ib, x, y) / h_out);
        min_lower = std::min(min_lower, caratheodory_dist(inner_d, x, y) / (2.0 * h_out));
    }
    MESSAGE("contraction: exact Hilbert ratio " << min_exact << ", sampled lower bound " << min_lower);
    CHECK(min_exact > 1.0);
    CHECK(min_lower > 1.0);
}

TEST_CASE("metric axioms on sampled duals") {
    ProperDomain U(shipped("outer"));
    const Ball& b = U.region().balls[0];
    Rng rng = make_rng(15, {});
    for (int i = 0; i < 100; ++i) {
        CVec x = point_in_cap(rng, b, 0.95), y = point_in_cap(rng, b, 0.95), z = point_in_cap(rng, b, 0.95);
        double xy = caratheodory_dist(U, x, y), yx = caratheodory_dist(U, y, x);
        CHECK(xy >= 0.0);
        CHECK(std::abs(xy - yx) < 1e-12);
        CHECK(caratheodory_dist(U, x, z) <= xy + caratheodory_dist(U, y, z) + 1e-9);
    }
}

TEST_CASE("ratio to the Hilbert metric on the ellipsoidal domain") {
    ProperDomain U(shipped("outer"));
    const Ball& b = U.region().balls[0];
    Rng rng = make_rng(16, {});
    double lo = INFINITY, hi = 0.0;
    for (int i = 0; i < 120; ++i) {
        CVec x = point_in_cap(rng, b, 0.95), y = point_in_cap(rng, b, 0.95);
        double r = caratheodory_dist(U, x, y) / hilbert_dist_ball(b, x, y);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    MESSAGE("caratheodory / hilbert in [" << lo << ", " << hi << "]");
    CHECK(hi / lo < 1.02);
}

TEST_CASE("domain JSON keeps samples bit-for-bit") {
    ProperDomain U = ProperDomain(shipped("outer")).transformed(diag({2.0, 1.0, 0.5}));
    ProperDomain V = ProperDomain::from_json(nlohmann::json::parse(U.to_json().dump()));
    REQUIRE(V.duals().size() == U.duals().size());
    Rng rng = make_rng(17, {});
    for (int i = 0; i < 10; ++i) {
        CVec x = diag({2.0, 1.0, 0.5}).entries() * point_in_cap(rng, shipped("outer").balls[0], 0.9);
        CVec y = diag({2.0, 1.0, 0.5}).entries() * point_in_cap(rng, shipped("outer").balls[0], 0.9);
        CHECK(caratheodory_dist(U, x, y) == caratheodory_dist(V, x, y));
    }
    nlohmann::json bad = U.to_json();
    bad["duals"].push_back(nlohmann::json::array({1.0, 0.0, 0.0}));
    CHECK_THROWS_AS(ProperDomain::from_json(bad), Error);
}
