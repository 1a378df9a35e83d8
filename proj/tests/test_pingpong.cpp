#include <cmath>
#include <cstdlib>

#include "doctest.h"
#include "pingpong_lab/pingpong.hpp"
#include "test_util.hpp"

using namespace pplab;
using namespace pplab::testing;

static CVec vec2(double a, double b) {
    CVec v(2);
    v << a, b;
    return v;
}

static BallRegion ball_region(Space s, const CVec& c, double r) { return BallRegion(s, {{c, r}}); }

// Semigroup generated by diag(10, 1/10) and its copy rotated by t.
static PingPongConfig rotated_pair(double t, double r) {
    PingPongConfig c;
    SquareMatrix a = diag({10.0, 0.1});
    SquareMatrix rot = rotation(t);
    c.gamma1 = SemigroupGens({a}, false, 1);
    c.gamma2 = SemigroupGens({rot * a * rot.inverse()}, false, 2);
    CVec e1 = vec2(1, 0), f1 = vec2(std::cos(t), std::sin(t));
    c.U1 = ball_region(Space::P, e1, r);
    c.V1 = ball_region(Space::Gr, e1, r);
    c.U2 = ball_region(Space::P, f1, r);
    c.V2 = ball_region(Space::Gr, f1, r);
    return c;
}

static PingPongConfig shipped() { return PingPongConfig::from_json(load_json("configs/schottky_sl2.json")); }

TEST_CASE("rotated semigroup pair certifies") {
    auto cert = certify(rotated_pair(20.0 * M_PI / 180.0, 0.2));
    // separation |cos 20| - 0.4
    CHECK(cert.epsilon == doctest::Approx(std::cos(20.0 * M_PI / 180.0) - 0.4).epsilon(1e-12));
    CHECK(cert.epsilon >= 0.5);
    CHECK(cert.theta < cert.epsilon * cert.epsilon);
    CHECK(cert.min_margin() > kCertifyMargin);
    CHECK(cert.inclusion_margins.size() == 2);
}

TEST_CASE("a right-angle rotation leaves no transversality") {
    auto rep = certify_report(rotated_pair(M_PI / 2, 0.2));
    CHECK_FALSE(rep.ok);
    CHECK(rep.cert.epsilon == 0.0);
}

TEST_CASE("overlapping radii floor epsilon at zero") {
    PingPongConfig c = rotated_pair(20.0 * M_PI / 180.0, 0.2);
    c.U1 = ball_region(Space::P, vec2(1, 0), 0.6);
    c.V2 = ball_region(Space::Gr, vec2(1, 0), 0.5);
    try {
        certify(c);
        FAIL("expected failure");
    } catch (const CertificationFailure& f) {
        CHECK(f.code() == ErrorCode::Certification);
        CHECK(f.report().cert.epsilon == 0.0);
        CHECK(f.report().failed_region == "U1/V2");
    }
}

TEST_CASE("weak letters fail with the letter and region named") {
    PingPongConfig c = rotated_pair(20.0 * M_PI / 180.0, 0.2);
    c.gamma2 = SemigroupGens({rotation(20.0 * M_PI / 180.0) * diag({1.2, 1 / 1.2}) * rotation(-20.0 * M_PI / 180.0)}, false, 2);
    auto rep = certify_report(c);
    CHECK_FALSE(rep.ok);
    CHECK(rep.failed_side == 2);
    CHECK(rep.failed_letter == 1);
    CHECK(rep.failed_region.find("into U2") != std::string::npos);
}

TEST_CASE("gap threshold") {
    CHECK(gap_threshold(0.5, 0.2, 2) == doctest::Approx(160.0));
    CHECK(gap_threshold(1.0, 1.0, 2) == doctest::Approx(16.0));
    CHECK(gap_threshold(1.0, 1.0, 10) == doctest::Approx(24.0));
    PingPongCertificate cert;
    cert.epsilon = 0.5;
    cert.theta = 0.2;
    cert.dim = 2;
    CHECK(exceptional_letters(SemigroupGens({diag({100.0, 0.01})}, true, 1), cert).empty());
    auto ex = exceptional_letters(SemigroupGens({diag({100.0, 0.01}), diag({3.0, 1 / 3.0})}, true, 1), cert);
    CHECK(ex == std::vector<int>{2, -2});
}

TEST_CASE("single strongly contracting letter has its attractor in U") {
    PingPongConfig c = rotated_pair(20.0 * M_PI / 180.0, 0.2);
    auto cert = certify(c);
    auto x = check_xi_attraction(Tracked::of(diag({1e6, 1e-6})), cert, c, 1, 1);
    CHECK(x.applicable);
    CHECK(x.dist_U == 0.0);
    CHECK(x.dist_V == 0.0);
    auto weak = check_xi_attraction(Tracked::of(diag({2.0, 0.5})), cert, c, 1, 1);
    CHECK_FALSE(weak.applicable);
    CHECK(weak.pass(cert.epsilon));
}

TEST_CASE("shipped Schottky config matches the frozen certificate") {
    auto cert = certify(shipped());
    CHECK(cert.epsilon >= 0.3);
    CHECK(cert.min_margin() > kCertifyMargin);
    auto fix = load_json("tests/fixtures/schottky_sl2_certificate.json");
    auto now = cert.to_json();
    for (const char* k : {"epsilon", "theta", "M", "min_margin"})
        CHECK(now.at(k).get<double>() == doctest::Approx(fix.at(k).get<double>()).epsilon(1e-12));
    REQUIRE(now.at("inclusion_margins").size() == fix.at("inclusion_margins").size());
    for (size_t i = 0; i < fix.at("inclusion_margins").size(); ++i) {
        const auto &a = now["inclusion_margins"][i], &b = fix["inclusion_margins"][i];
        CHECK(a.at("letter") == b.at("letter"));
        CHECK(a.at("U").get<double>() == doctest::Approx(b.at("U").get<double>()).epsilon(1e-12));
        CHECK(a.at("V").get<double>() == doctest::Approx(b.at("V").get<double>()).epsilon(1e-12));
    }
}

TEST_CASE("config json round trip") {
    auto c = shipped();
    auto again = PingPongConfig::from_json(c.to_json());
    // centers are renormalized on load, so agreement is up to rounding
    auto a = certify(again), b = certify(c);
    CHECK(a.epsilon == doctest::Approx(b.epsilon).epsilon(1e-14));
    CHECK(a.min_margin() == doctest::Approx(b.min_margin()).epsilon(1e-12));
    auto bad = c.to_json();
    bad.erase("V2");
    CHECK_THROWS_AS(PingPongConfig::from_json(bad), Error);
}

TEST_CASE("certification does not depend on the thread count") {
    auto c = shipped();
    setenv("PINGPONG_LAB_THREADS", "1", 1);
    auto one = certify_report(c).to_json().dump();
    setenv("PINGPONG_LAB_THREADS", "4", 1);
    auto four = certify_report(c).to_json().dump();
    unsetenv("PINGPONG_LAB_THREADS");
    CHECK(one == four);
}

TEST_CASE("reduced words of the shipped config obey the ping-pong consequences") {
    auto c = shipped();
    auto cert = certify(c);
    int applicable = 0, skipped = 0;
    std::vector<double> min_gap(7, INFINITY);
    std::vector<CMat> mats;
    for_each_reduced(c.gamma1, c.gamma2, 6, 2, [&](const ReducedWord& w) {
        CHECK(word_inclusion_margin(w, c) > 0.0);
        auto x = check_xi_attraction(w, cert, c);
        CHECK(x.pass(cert.epsilon));
        (x.applicable ? applicable : skipped)++;
        min_gap[w.syllable_count()] = std::min(min_gap[w.syllable_count()], gap12(w.tracked()));
        if (w.syllable_count() <= 4) mats.push_back(w.tracked().g);
    });
    CHECK(applicable > 0);
    CHECK(skipped > 0);
    for (int n = 2; n <= 6; ++n) CHECK(min_gap[n] > min_gap[n - 1]);
    CHECK(min_pairwise_distance(mats) > 1e-6);
}
