// Acceptance run: one PASS/FAIL line per criterion. Criteria 1-7 are run
// twice under different thread counts and their serialized outputs compared
// byte for byte for criterion 8.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>

#include "pingpong_lab/cmetric.hpp"
#include "pingpong_lab/convexrep.hpp"
#include "pingpong_lab/estimates.hpp"
#include "pingpong_lab/parallel.hpp"
#include "pingpong_lab/pingpong.hpp"
#include "test_util.hpp"

using namespace pplab;
using namespace pplab::testing;

namespace {

constexpr double kLemmaTol = 1e-9;
constexpr int kLemmaTrials = 1000;
constexpr double kLemmaSeconds = 60.0;
constexpr double kReconTol = 1e-10;
constexpr double kRepTol = 1e-9;
constexpr int kLinalgSamples = 1000;
constexpr double kMinEpsilon = 0.3;
constexpr double kMinMargin = 1e-6;
constexpr double kMinR2 = 0.9;
constexpr double kDesktopSeconds = 300.0;
constexpr double kDistinctTol = 1e-6;
constexpr double kIntervalRelTol = 0.01;
constexpr double kInvarianceTol = 1e-12;
constexpr double kFaithfulTol = 1e-6;
constexpr std::uint64_t kSeed = 20240601;

struct Result {
    bool pass = false;
    std::string detail;
    std::string output;  // deterministic serialization compared across runs
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

PingPongConfig schottky() { return PingPongConfig::from_json(load_json("configs/schottky_sl2.json")); }

Result lemma_suite_check() {
    auto t0 = Clock::now();
    std::vector<LemmaResult> res = lemma_suite(kSeed, kLemmaTrials, kLemmaTol);
    double secs = seconds_since(t0);
    nlohmann::json j = nlohmann::json::array();
    int violations = 0, short_runs = 0;
    for (const auto& r : res) {
        j.push_back(r.to_json());
        violations += r.violations;
        if (r.trials < kLemmaTrials) ++short_runs;
    }
    bool pass = res.size() == 9 && violations == 0 && short_runs == 0 && secs < kLemmaSeconds;
    return {pass,
            std::to_string(res.size()) + " lemmas x " + std::to_string(kLemmaTrials) + " trials, " +
                std::to_string(violations) + " violations, " + fmt(secs) + " s",
            j.dump()};
}

Result linalg_check() {
    Rng rng = make_rng(kSeed, {2});
    double worst_recon = 0.0, worst_wedge = 0.0, worst_phi = 0.0;
    for (int t = 0; t < kLinalgSamples; ++t) {
        int d = 1 + t % 12;
        Field f = t % 3 == 0 ? Field::Complex : Field::Real;
        SquareMatrix g = random_element(rng, d, f, 4.0).g;
        CartanData c = cartan_decompose(g);
        CMat rec = c.k.entries() * c.sigma().cast<cplx>().asDiagonal() * c.k_prime.entries();
        worst_recon = std::max(worst_recon, op_norm(rec - g.entries()) / g.op_norm());
    }
    for (int t = 0; t < kLinalgSamples; ++t) {
        int d = 2 + t % 11;
        SquareMatrix g = random_element(rng, d, t % 2 ? Field::Complex : Field::Real, 2.0).g;
        RVec s = singular_values(g);
        worst_wedge = std::max(worst_wedge, rel_err(wedge_square(g).op_norm(), s(0) * s(1)));
    }
    for (int t = 0; t < kLinalgSamples; ++t) {
        int d = 2 + t % 4;
        SquareMatrix g = random_sl(rng, d, 1.0);
        RVec s = singular_values(g);
        worst_phi = std::max(worst_phi, rel_err(phi_rep(g).op_norm(), std::pow(s(0) / s(d - 1), 2)));
    }
    bool pass = worst_recon <= kReconTol && worst_wedge <= kRepTol && worst_phi <= kRepTol;
    nlohmann::json j = {{"recon", worst_recon}, {"wedge", worst_wedge}, {"phi", worst_phi}};
    return {pass,
            "reconstruction " + fmt(worst_recon) + " |g|, wedge " + fmt(worst_wedge) + ", phi " + fmt(worst_phi),
            j.dump()};
}

Result estimates_check() {
    auto t0 = Clock::now();
    PingPongConfig cfg = schottky();
    CertifyReport cr = certify_report(cfg);
    if (!cr.ok) return {false, "certification failed: " + cr.reason, cr.to_json().dump()};
    std::vector<WordSample> words = sample_words(cfg.gamma1, cfg.gamma2, 6, 2);
    EstimateReport i = verify_t12_i(cfg, words), ii = verify_t12_ii(words), iii = verify_t12_iii(words);
    EstimateReport iv = verify_t12_iv(words, ii.fitted.at("C2"));
    double secs = seconds_since(t0);
    const double eps = cr.cert.epsilon, margin = cr.cert.min_margin();
    const double lambda = i.fitted.at("lambda"), r2 = i.fitted.at("r2");
    const double c2 = ii.fitted.at("C2"), c3 = iii.fitted.at("C3"), c4 = iv.fitted.at("C4");
    bool pass = eps >= kMinEpsilon && margin > kMinMargin && i.all_pass && lambda > 1.0 && r2 > kMinR2 &&
                ii.all_pass && c2 > 0.0 && iii.all_pass && c3 > 0.0 && iv.all_pass && c4 > 0.0 &&
                secs < kDesktopSeconds;
    nlohmann::json j = {{"certificate", cr.cert.to_json()},
                        {"reports", {i.summary_json(), ii.summary_json(), iii.summary_json(), iv.summary_json()}}};
    return {pass,
            "eps " + fmt(eps) + ", margin " + fmt(margin) + ", " + std::to_string(words.size()) + " words, lambda " +
                fmt(lambda) + " (R2 " + fmt(r2) + "), C2 " + fmt(c2) + ", C3 " + fmt(c3) + ", C4 " + fmt(c4) + ", " +
                fmt(secs) + " s",
            j.dump() + "\n" + reports_csv({i, ii, iii, iv}) + plot_data(words)};
}

Result xi_check() {
    PingPongConfig cfg = schottky();
    PingPongCertificate cert = certify(cfg);
    std::vector<ReducedWord> words = enumerate_reduced(cfg.gamma1, cfg.gamma2, 6, 2);
    std::vector<XiCheck> xs = parallel_map<XiCheck>(words.size(), [&](std::size_t k) {
        return check_xi_attraction(words[k], cert, cfg);
    });
    int applicable = 0, violations = 0;
    double worst_u = 0.0, worst_v = 0.0;
    for (const auto& x : xs) {
        if (!x.applicable) continue;
        ++applicable;
        if (!x.pass(cert.epsilon)) ++violations;
        worst_u = std::max(worst_u, x.dist_U);
        worst_v = std::max(worst_v, x.dist_V);
    }
    bool pass = applicable > 0 && violations == 0;
    nlohmann::json j = {{"applicable", applicable}, {"violations", violations}, {"worst_U", worst_u},
                        {"worst_V", worst_v}, {"M", cert.M}};
    return {pass,
            std::to_string(applicable) + " words with gap >= M, " + std::to_string(violations) +
                " violations, worst distances " + fmt(worst_u) + " / " + fmt(worst_v) + " vs eps/8 = " +
                fmt(cert.epsilon / 8.0),
            j.dump()};
}

Result distinct_check() {
    PingPongConfig cfg = schottky();
    std::vector<ReducedWord> words = enumerate_reduced(cfg.gamma1, cfg.gamma2, 4, 2);
    std::vector<CMat> mats;
    for (const auto& w : words) mats.push_back(w.tracked().g);
    double m = min_pairwise_distance(mats);
    bool pass = words.size() > 1 && m > kDistinctTol;
    nlohmann::json j = {{"words", words.size()}, {"min_distance", m}};
    return {pass, std::to_string(words.size()) + " words, min pairwise distance " + fmt(m), j.dump()};
}

Result cmetric_check() {
    nlohmann::json domains = load_json("configs/cmetric_domains.json");
    ProperDomain interval(region_from_json(domains.at("interval")));
    double d_half = caratheodory_dist(interval, affine_point(RVec::Constant(1, 0.0)), affine_point(RVec::Constant(1, 0.5)));
    bool interval_ok = rel_err(d_half, std::log(3.0)) < kIntervalRelTol;

    ProperDomain outer(region_from_json(domains.at("outer"))), inner_d(region_from_json(domains.at("inner")));
    const Ball& ob = outer.region().balls[0];
    const Ball& ib = inner_d.region().balls[0];
    Rng rng = make_rng(kSeed, {6});
    auto point_in = [&](const Ball& b, double frac) {
        CVec c = b.center / b.center.norm();
        CVec t = random_unit(rng, 3, Field::Real);
        t -= inner(t, c) * c;
        t /= t.norm();
        double a = uniform(rng, 0.0, frac * std::asin(b.radius));
        return CVec(std::cos(a) * c + std::sin(a) * t);
    };
    double worst_inv = 0.0;
    for (int i = 0; i < 50; ++i) {
        SquareMatrix g = random_sl(rng, 3, 0.5);
        ProperDomain gU = outer.transformed(g);
        CVec x = point_in(ob, 0.9), y = point_in(ob, 0.9);
        double a = caratheodory_dist(outer, x, y), b = caratheodory_dist(gU, g.entries() * x, g.entries() * y);
        worst_inv = std::max(worst_inv, std::abs(a - b));
    }
    ProperDomain matched = inner_d.with_duals(outer.duals());
    int monotone_fail = 0;
    double contraction = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
        CVec x = point_in(ib, 0.95), y = point_in(ib, 0.95);
        if (caratheodory_dist(matched, x, y) < caratheodory_dist(outer, x, y)) ++monotone_fail;
        contraction = std::min(contraction, hilbert_dist_ball(ib, x, y) / hilbert_dist_ball(ob, x, y));
    }
    bool pass = interval_ok && worst_inv <= kInvarianceTol && monotone_fail == 0 && contraction > 1.0;
    nlohmann::json j = {{"interval", d_half}, {"invariance", worst_inv}, {"monotone_fail", monotone_fail},
                        {"contraction", contraction}};
    return {pass,
            "c(0,0.5) = " + fmt(d_half) + " vs log 3 = " + fmt(std::log(3.0)) + ", invariance " + fmt(worst_inv) +
                ", " + std::to_string(monotone_fail) + " monotonicity failures, contraction " + fmt(contraction),
            j.dump()};
}

Result freeprod_check() {
    auto t0 = Clock::now();
    PingPongConfig cfg = schottky();
    RepPair pair = build_rep_pair(2, 0.25);
    EstimateReport r = verify_t15(pair, cfg.gamma1, cfg.gamma2, 4, 0.5);
    double secs = seconds_since(t0);
    const double faithful = r.fitted.at("min_faithful_distance");
    const int m = rho(pair, 2, SquareMatrix::identity(2)).dim();
    bool pass = pair.m == 10 && m == 10 && r.all_pass && r.min_ratio >= 1.0 && faithful > kFaithfulTol && secs < kDesktopSeconds;
    nlohmann::json j = {{"rep_pair", pair.to_json()}, {"report", r.summary_json()}};
    return {pass,
            "m = " + std::to_string(m) + ", " + std::to_string(r.samples.size()) + " words, min ratio " +
                fmt(r.min_ratio) + ", faithfulness " + fmt(faithful) + ", " + fmt(secs) + " s",
            j.dump() + "\n" + reports_csv({r})};
}

Result guarded(const std::function<Result()>& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        return {false, std::string("threw ") + e.what(), ""};
    }
}

std::vector<Result> run_all(const char* threads) {
    setenv("PINGPONG_LAB_THREADS", threads, 1);
    std::vector<Result> out;
    for (auto fn : {lemma_suite_check, linalg_check, estimates_check, xi_check, distinct_check, cmetric_check,
                    freeprod_check})
        out.push_back(guarded(fn));
    unsetenv("PINGPONG_LAB_THREADS");
    return out;
}

}  // namespace

int main() {
    const char* names[] = {"lemma suite",          "Cartan and linalg",      "Schottky SL2 estimates",
                           "Xi attraction",        "distinct words",         "Caratheodory metric",
                           "free product, d = 2",  "determinism"};
    std::vector<Result> a = run_all("1");
    std::vector<Result> b = run_all("4");
    int differing = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k].output.empty() || a[k].output != b[k].output) ++differing;
    b.push_back({differing == 0, std::to_string(differing) + " of 7 outputs differ between 1 and 4 threads", ""});

    bool all = true;
    for (std::size_t k = 0; k < b.size(); ++k) {
        bool pass = b[k].pass && (k == 7 || a[k].pass);
        all = all && pass;
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << k + 1 << " (" << names[k] << "): " << b[k].detail
                  << '\n';
    }
    return all ? 0 : 1;
}
