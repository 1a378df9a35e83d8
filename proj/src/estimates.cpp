#include "pingpong_lab/estimates.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "pingpong_lab/parallel.hpp"
#include "pingpong_lab/random.hpp"

namespace pplab {

const char* tag_name(TheoremTag t) {
    switch (t) {
        case TheoremTag::T12i: return "T12i";
        case TheoremTag::T12ii: return "T12ii";
        case TheoremTag::T12iii: return "T12iii";
        case TheoremTag::T12iv: return "T12iv";
        case TheoremTag::C13: return "C13";
        case TheoremTag::T15: return "T15";
    }
    return "?";
}

nlohmann::json EstimateReport::summary_json() const {
    nlohmann::json f = nlohmann::json::object();
    for (const auto& [k, v] : fitted) f[k] = v;
    return {{"tag", tag_name(tag)}, {"samples", samples.size()}, {"fitted", f},
            {"min_ratio", min_ratio}, {"all_pass", all_pass}, {"notes", notes}};
}

WordSample sample_word(const ReducedWord& w) {
    WordSample s;
    s.id = w.id();
    s.n = w.syllable_count();
    s.length = w.length();
    const Tracked& t = w.tracked();
    s.log_sigma1 = std::log(sigma1(t));
    s.log_gap12 = std::log(gap12(t));
    s.log_gap1d = std::log(gap1d(t));
    s.log_ell1 = std::log(eigenvalue_moduli(t.g)(0));
    s.log_ell12 = std::log(ell_ratio12(t));
    for (const auto& e : w.syllable_evals()) {
        s.sum_log_sigma1 += std::log(sigma1(e));
        s.sum_log_gap12 += std::log(gap12(e));
    }
    return s;
}

std::vector<WordSample> sample_words(const SemigroupGens& g1, const SemigroupGens& g2, int max_syllables,
                                     int max_syllable_len) {
    auto words = enumerate_reduced(g1, g2, max_syllables, max_syllable_len);
    return parallel_map<WordSample>(words.size(), [&](std::size_t i) { return sample_word(words[i]); });
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::InsufficientData, "line fit needs two points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw Error(ErrorCode::InsufficientData, "line fit needs distinct x values");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

std::vector<std::pair<double, double>> lower_envelope(const std::vector<double>& x, const std::vector<double>& y) {
    std::map<double, double> m;
    for (size_t i = 0; i < x.size(); ++i) {
        auto it = m.find(x[i]);
        if (it == m.end())
            m.emplace(x[i], y[i]);
        else
            it->second = std::min(it->second, y[i]);
    }
    return {m.begin(), m.end()};
}

static void require_certified(const PingPongConfig& cfg) {
    auto rep = certify_report(cfg);
    if (!rep.ok) throw Error(ErrorCode::Precondition, "config is not certified: " + rep.reason);
}

static void finish(EstimateReport& r) {
    r.min_ratio = std::numeric_limits<double>::infinity();
    for (const auto& s : r.samples) r.min_ratio = std::min(r.min_ratio, s.ratio);
}

// The fitted constant is the infimum over the sample, so the smallest ratio is 1
// up to rounding.
constexpr double kFitRoundoff = 1e-12;

EstimateReport fit_exponential_lower(TheoremTag tag, const std::vector<WordSample>& words) {
    std::vector<double> n, y;
    for (const auto& w : words) {
        n.push_back(w.n);
        y.push_back(w.log_gap12);
    }
    auto env = lower_envelope(n, y);
    if (env.size() < 3) throw Error(ErrorCode::InsufficientData, "need at least 3 distinct syllable counts");
    std::vector<double> ex, ey;
    for (auto [a, b] : env) {
        ex.push_back(a);
        ey.push_back(b);
    }
    LinearFit f = fit_line(ex, ey);
    double log_c1 = std::numeric_limits<double>::infinity();
    for (const auto& w : words) log_c1 = std::min(log_c1, w.log_gap12 - w.n * f.slope);
    EstimateReport r;
    r.tag = tag;
    for (const auto& w : words) {
        const double log_rhs = log_c1 + w.n * f.slope;
        r.samples.push_back({w.id, w.n, w.length, std::exp(w.log_gap12), std::exp(log_rhs), std::exp(w.log_gap12 - log_rhs)});
    }
    finish(r);
    r.fitted = {{"lambda", std::exp(f.slope)}, {"log_lambda", f.slope}, {"C1", std::exp(log_c1)}, {"r2", f.r2}};
    r.all_pass = f.slope > 0.0 && r.min_ratio >= 1.0 - kFitRoundoff;
    return r;
}

EstimateReport verify_t12_i(const PingPongConfig& cfg, const std::vector<WordSample>& words) {
    require_certified(cfg);
    return fit_exponential_lower(TheoremTag::T12i, words);
}

// lhs >= C^n rhs with C the infimum over the sample, all in logs.
static EstimateReport fit_power_constant(TheoremTag tag, const char* name, const std::vector<const WordSample*>& ws,
                                         double (*lhs)(const WordSample&), double (*rhs)(const WordSample&)) {
    EstimateReport r;
    r.tag = tag;
    double log_c = std::numeric_limits<double>::infinity();
    for (const auto* w : ws) log_c = std::min(log_c, (lhs(*w) - rhs(*w)) / w->n);
    for (const auto* w : ws)
        r.samples.push_back({w->id, w->n, w->length, std::exp(lhs(*w)), std::exp(rhs(*w)),
                             std::exp(lhs(*w) - rhs(*w) - w->n * log_c)});
    finish(r);
    const double c = std::exp(log_c);
    r.fitted[name] = c;
    r.all_pass = !ws.empty() && c > 0.0 && std::isfinite(c) && r.min_ratio >= 1.0 - kFitRoundoff;
    return r;
}

static std::vector<const WordSample*> pointers(const std::vector<WordSample>& words) {
    std::vector<const WordSample*> out;
    for (const auto& w : words) out.push_back(&w);
    return out;
}

EstimateReport verify_t12_ii(const std::vector<WordSample>& words) {
    return fit_power_constant(
        TheoremTag::T12ii, "C2", pointers(words), [](const WordSample& w) { return w.log_sigma1; },
        [](const WordSample& w) { return w.sum_log_sigma1; });
}

EstimateReport verify_t12_iii(const std::vector<WordSample>& words) {
    return fit_power_constant(
        TheoremTag::T12iii, "C3", pointers(words), [](const WordSample& w) { return w.log_gap12; },
        [](const WordSample& w) { return w.sum_log_gap12; });
}

EstimateReport verify_t12_iv(const std::vector<WordSample>& words, double c2) {
    std::vector<const WordSample*> even;
    int odd = 0;
    double odd_log_c = std::numeric_limits<double>::infinity();
    for (const auto& w : words) {
        if (w.n % 2 == 0) {
            even.push_back(&w);
        } else {
            ++odd;
            odd_log_c = std::min(odd_log_c, (w.log_ell12 - w.sum_log_gap12) / w.n);
        }
    }
    auto r = fit_power_constant(
        TheoremTag::T12iv, "C4", even, [](const WordSample& w) { return w.log_ell12; },
        [](const WordSample& w) { return w.sum_log_gap12; });
    int ell_above_sigma = 0, eigen_bound = 0;
    // Largest C with l_1 >= C^n prod sigma_1 on the sample; any constant valid
    // for (ii) on all powers of these words lies below it.
    double log_c2_eig = std::numeric_limits<double>::infinity();
    for (const auto* w : even) {
        if (w->log_ell1 > w->log_sigma1 + kDefaultTol) ++ell_above_sigma;
        if (c2 > 0.0 && w->log_ell1 < w->n * std::log(c2) + w->sum_log_sigma1 - kDefaultTol) ++eigen_bound;
        log_c2_eig = std::min(log_c2_eig, (w->log_ell1 - w->sum_log_sigma1) / w->n);
    }
    if (!even.empty()) r.notes["C2_from_eigenvalues"] = std::exp(log_c2_eig);
    r.notes["odd_words"] = odd;
    r.notes["odd_min_C"] = odd > 0 ? std::exp(odd_log_c) : 0.0;
    r.notes["ell1_above_sigma1"] = ell_above_sigma;
    if (c2 > 0.0) r.notes["eigen_bound_violations"] = eigen_bound;
    r.all_pass = r.all_pass && ell_above_sigma == 0;
    return r;
}

// Samples hold lhs = log(sigma_1/sigma_d), rhs = |w|/c - C, ratio = lhs - rhs.
EstimateReport verify_qi(const PingPongConfig& cfg, const std::vector<WordSample>& words) {
    if (!cfg.gamma1.is_group() || !cfg.gamma2.is_group())
        throw Error(ErrorCode::Precondition, "quasi-isometry check needs group generators on both sides");
    require_certified(cfg);
    double up = 0.0;
    for (int s = 1; s <= 2; ++s)
        for (int c : cfg.gens(s).alphabet()) up = std::max(up, std::log(gap1d(cfg.gens(s).tracked(c))));
    std::vector<double> len, y;
    for (const auto& w : words) {
        len.push_back(w.length);
        y.push_back(w.log_gap1d);
    }
    auto env = lower_envelope(len, y);
    if (env.size() < 3) throw Error(ErrorCode::InsufficientData, "need at least 3 distinct word lengths");
    std::vector<double> ex, ey;
    for (auto [a, b] : env) {
        ex.push_back(a);
        ey.push_back(b);
    }
    LinearFit f = fit_line(ex, ey);
    EstimateReport r;
    r.tag = TheoremTag::C13;
    r.fitted = {{"lower_slope", f.slope}, {"upper_slope", up}, {"r2", f.r2}};
    if (!(f.slope > 0.0)) {
        r.all_pass = false;
        r.fitted["c"] = std::numeric_limits<double>::infinity();
        return r;
    }
    const double c = std::max({1.0, up, 1.0 / f.slope});
    double C = 0.0;
    int upper_fail = 0;
    for (const auto& w : words) {
        C = std::max(C, w.length / c - w.log_gap1d);
        if (w.log_gap1d > up * w.length * (1.0 + kDefaultTol)) ++upper_fail;
    }
    for (const auto& w : words) {
        const double rhs = w.length / c - C;
        r.samples.push_back({w.id, w.n, w.length, w.log_gap1d, rhs, w.log_gap1d - rhs});
    }
    finish(r);
    r.fitted["c"] = c;
    r.fitted["C"] = C;
    r.notes["upper_bound_violations"] = upper_fail;
    r.all_pass = upper_fail == 0 && r.min_ratio >= -kFitRoundoff;
    return r;
}

// ---------------------------------------------------------------------------
// Lemma suite

nlohmann::json LemmaResult::to_json() const {
    return {{"lemma", lemma},       {"trials", trials},           {"passed", passed},
            {"violations", violations}, {"skipped", skipped},     {"worst_slack", worst_slack},
            {"counterexamples", counterexamples}, {"info", info}};
}

namespace {

// g = k1 diag(s) k2, s non-increasing.
struct Factored {
    CMat k1;
    RVec s;
    CMat k2;
    Field field = Field::Real;
    int d() const { return static_cast<int>(s.size()); }
};

Factored draw(Rng& rng, int d, Field f) {
    auto e = random_element(rng, d, f, 6.0);
    return {e.k1, e.sigma, e.k2, f};
}

Factored identity_factors(int d, Field f) { return {CMat::Identity(d, d), RVec::Ones(d), CMat::Identity(d, d), f}; }

CVec act(const Factored& g, const CVec& x) { return g.k1 * (g.s.cast<cplx>().asDiagonal() * (g.k2 * x)); }
CVec right_top(const Factored& g) { return g.k2.row(0).adjoint(); }

// g h = g.k1 * middle(g, h) * h.k2.
CMat middle(const Factored& g, const Factored& h) {
    return g.s.cast<cplx>().asDiagonal() * (g.k2 * h.k1) * h.s.cast<cplx>().asDiagonal();
}

RVec wedge_sigma(const RVec& s) {
    const int d = static_cast<int>(s.size());
    RVec w(d * (d - 1) / 2);
    int k = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) w(k++) = s(i) * s(j);
    return w;
}

CMat middle_wedge(const Factored& g, const Factored& h) {
    return wedge_sigma(g.s).cast<cplx>().asDiagonal() * wedge_square(CMat(g.k2 * h.k1)) *
           wedge_sigma(h.s).cast<cplx>().asDiagonal();
}

// g^{-*} = k1 diag(1/s) k2, reordered so the spectrum is non-increasing.
Factored adjoint_inverse(const Factored& g) {
    return {g.k1.rowwise().reverse(), g.s.cwiseInverse().reverse(), g.k2.colwise().reverse(), g.field};
}

CVec orth_unit(Rng& rng, const CVec& x, Field f) {
    for (;;) {
        CVec t = random_unit(rng, static_cast<int>(x.size()), f);
        t -= x * inner(t, x);
        if (t.norm() > 1e-3) return t / t.norm();
    }
}

CVec boundary_point(const CVec& x, const CVec& t, double delta) {
    const double a = std::asin(delta);
    return std::cos(a) * x + std::sin(a) * t;
}

nlohmann::json factors_json(const Factored& g) {
    nlohmann::json s = nlohmann::json::array();
    for (int i = 0; i < g.d(); ++i) s.push_back(g.s(i));
    return {{"k1", matrix_to_json(SquareMatrix(g.k1, g.field))}, {"sigma", s},
            {"k2", matrix_to_json(SquareMatrix(g.k2, g.field))}};
}

struct Trial {
    bool skipped = false;
    bool violated = false;
    double slack = std::numeric_limits<double>::infinity();
    nlohmann::json inputs;
    nlohmann::json detail = nlohmann::json::object();
    int flagged = 0;  // lemma-specific informational count
};

struct Checker {
    Trial& t;
    double tol;
    nlohmann::json& detail;
    // lhs <= rhs
    void le(const char* what, double lhs, double rhs) {
        t.slack = std::min(t.slack, (rhs - lhs) / std::max(std::abs(rhs), 1e-300));
        if (lhs > rhs * (1.0 + tol) + kLemmaAbsFloor || !std::isfinite(lhs)) {
            t.violated = true;
            detail[what] = {{"lhs", lhs}, {"rhs", rhs}};
        }
    }
    // lhs >= rhs
    void ge(const char* what, double lhs, double rhs) {
        t.slack = std::min(t.slack, (lhs - rhs) / std::max(std::abs(rhs), 1e-300));
        if (lhs < rhs * (1.0 - tol) - kLemmaAbsFloor || !std::isfinite(lhs)) {
            t.violated = true;
            detail[what] = {{"lhs", lhs}, {"rhs", rhs}};
        }
    }
};

constexpr int kRetries = 100;
constexpr int kBoundarySamples = 64;

Field trial_field(int trial) { return trial % 3 == 2 ? Field::Complex : Field::Real; }

nlohmann::json vec_json(const CVec& v, Field f) { return vector_to_json(v, f); }

Trial lemma_2_2(Rng& rng, int d, Field f, double tol) {
    Trial t;
    Checker ck{t, tol, t.detail};
    Factored g = draw(rng, d, f);
    CVec x;
    double eps_act = 0.0;
    int tries = 0;
    for (; tries < kRetries; ++tries) {
        x = random_unit(rng, d, f);
        eps_act = std::abs(inner(x, right_top(g)));
        if (eps_act >= 0.05) break;
    }
    if (tries == kRetries) {
        t.skipped = true;
        return t;
    }
    const double eps = eps_act * uniform(rng, 0.5, 1.0);
    const double delta = 0.5 * eps * uniform(rng, 0.01, 1.0);
    const double ratio = g.s(1) / g.s(0);
    const CVec gx = act(g, x);
    double lhs = 0.0;
    for (int i = 0; i < kBoundarySamples; ++i)
        lhs = std::max(lhs, proj_dist(act(g, boundary_point(x, orth_unit(rng, x, f), delta)), gx));
    const double rhs = 2.0 * delta / (eps * eps) * ratio;
    ck.le("image radius", lhs, rhs);
    // The uncorrected radius 2 delta / eps * ratio; failures are expected and only counted.
    if (lhs > 2.0 * delta / eps * ratio * (1.0 + tol) + kLemmaAbsFloor) t.flagged = 1;
    if (t.violated) t.inputs = {{"g", factors_json(g)}, {"x", vec_json(x, f)}, {"eps", eps}, {"delta", delta}};
    return t;
}

Trial lemma_2_3(Rng& rng, int d, Field f, double tol) {
    Trial t;
    Checker ck{t, tol, t.detail};
    Factored g = draw(rng, d, f);
    const CVec v1 = right_top(g), v2 = g.k2.row(1).adjoint();
    for (int tries = 0; tries < kRetries; ++tries) {
        CVec x = random_unit(rng, d, f);
        const double delta = uniform(rng, 0.01, 0.99);
        const CVec gx = act(g, x);
        std::vector<CVec> dirs;
        const cplx i1(0.0, 1.0);
        for (const CVec& c : {CVec(v1), CVec(v2), CVec(v1 + v2), CVec(v1 - v2), CVec(v1 + i1 * v2), CVec(v1 - i1 * v2)}) {
            if (f == Field::Real && c.imag().norm() > 0.0) continue;
            CVec o = c - x * inner(c, x);
            if (o.norm() > 1e-12) dirs.push_back(o / o.norm());
        }
        for (int i = 0; i < kBoundarySamples; ++i) dirs.push_back(orth_unit(rng, x, f));
        double r = 0.0;
        for (const auto& dir : dirs) r = std::max(r, proj_dist(act(g, boundary_point(x, dir, delta)), gx));
        if (!(r > 0.0 && r < 1.0 - 1e-12)) continue;
        const double dist = std::abs(inner(x, v1));
        ck.ge("gap", g.s(0) / g.s(1), delta / (4.0 * r) * dist);
        if (t.violated) t.inputs = {{"g", factors_json(g)}, {"x", vec_json(x, f)}, {"delta", delta}, {"r", r}};
        return t;
    }
    t.skipped = true;
    return t;
}

Trial lemma_2_4(Rng& rng, int d, Field f, double tol) {
    Trial t;
    Checker ck{t, tol, t.detail};
    Factored g = draw(rng, d, f);
    for (int tries = 0; tries < kRetries; ++tries) {
        CVec x = random_unit(rng, d, f);
        const double dist = std::abs(inner(x, right_top(g)));
        if (dist < 1e-3) continue;
        ck.le("attraction", proj_dist(act(g, x), g.k1.col(0)), g.s(1) / g.s(0) / dist);
        if (t.violated) t.inputs = {{"g", factors_json(g)}, {"x", vec_json(x, f)}};
        return t;
    }
    t.skipped = true;
    return t;
}

Trial lemma_2_5(Rng& rng, int d, Field f, double tol) {
    Trial t;
    Checker ck{t, tol, t.detail};
    Factored w1 = draw(rng, d, f), w2 = draw(rng, d, f);
    const double s1 = op_norm(middle(w1, w2));
    const double lhs = s1 * s1 / op_norm(middle_wedge(w1, w2));
    const double prod = (w1.s(0) / w1.s(1)) * (w2.s(0) / w2.s(1));
    for (const Factored* w : {&w1, &w2}) {
        const double q = w->s(d - 1) / w->s(0);
        ck.ge(w == &w1 ? "i=1" : "i=2", lhs, q * q * prod);
    }
    if (t.violated) t.inputs = {{"w1", factors_json(w1)}, {"w2", factors_json(w2)}};
    return t;
}

Trial lemma_2_6(Rng& rng, int d, Field f, double tol, bool identity_second) {
    Trial t;
    Checker ck{t, tol, t.detail};
    Factored g1 = draw(rng, d, f);
    Factored g2 = identity_second ? identity_factors(d, f) : draw(rng, d, f);
    const CMat m = g1.k2 * g2.k1;
    const CMat a = (g1.s / g1.s(0)).cast<cplx>().asDiagonal() * m * (g2.s / g2.s(0)).cast<cplx>().asDiagonal();
    // dist([k_{g2} e1], P((k'_{g1})^{-1} e1^perp)) = |<k_{g2} e1, (k'_{g1})^{-1} e1>|
    ck.ge("norm ratio", op_norm(a), std::abs(m(0, 0)));
    if (t.violated) t.inputs = {{"g1", factors_json(g1)}, {"g2", factors_json(g2)}};
    return t;
}

// Both product inequalities for g1 g2 given in factored form.
void check_2_7(Checker& ck, const Factored& g1, const Factored& g2) {
    const int d = g1.d();
    const CMat a = middle(g1, g2);
    const CMat m = g1.k2 * g2.k1;
    const double s_prod = op_norm(a);
    const double lhs = proj_dist(top_left_singular(a), CVec(CVec::Unit(d, 0)));
    const double mid = std::sqrt(d - 1.0) * g1.s(1) * g2.s(0) / s_prod;
    const double right = (g1.s(1) / g1.s(0)) * std::sqrt(d - 1.0) / std::abs(m(0, 0));
    ck.le("left", lhs, mid);
    ck.le("right", mid, right);
}

Trial lemma_2_7(Rng& rng, int d, Field f, double tol, bool part_ii) {
    Trial t;
    Checker ck{t, tol, t.detail};
    Factored g1 = draw(rng, d, f), g2 = draw(rng, d, f);
    // Part (ii) is part (i) for g^{-*}: k_g e_d is its attracting direction.
    if (part_ii)
        check_2_7(ck, adjoint_inverse(g1), adjoint_inverse(g2));
    else
        check_2_7(ck, g1, g2);
    if (t.violated) t.inputs = {{"g1", factors_json(g1)}, {"g2", factors_json(g2)}};
    return t;
}

Trial lemma_2_8(Rng& rng, int d, Field f, double tol) {
    Trial t;
    Checker ck{t, tol, t.detail};
    const double theta = uniform(rng, 0.01, 0.99);
    CVec n = random_unit(rng, d, f);
    CVec x = random_unit(rng, d, f);
    if (uniform(rng, 0.0, 1.0) < 0.5) {
        // start near the hyperplane so the construction is exercised
        x -= n * inner(x, n);
        x = x / x.norm() + uniform(rng, 0.0, theta / 2.0) * n;
    }
    ProjPoint px(x, f);
    Hyperplane v(n, f);
    ProjPoint y = separated_point(px, theta, v);
    ck.le("moved", proj_dist(px, y), theta);
    ck.ge("separated", dist_point_hyperplane(y, v), theta / 2.0);
    if (t.violated) t.inputs = {{"x", vec_json(px.rep, f)}, {"normal", vec_json(v.normal, f)}, {"theta", theta}};
    return t;
}

Trial lemma_4_3(Rng& rng, int d, double tol) {
    Trial t;
    Checker ck{t, tol, t.detail};
    RVec l(d);
    for (int i = 0; i < d; ++i) l(i) = uniform(rng, -6.0, 6.0) * std::log(10.0);
    std::sort(l.data(), l.data() + d, [](double a, double b) { return a > b; });
    const double shift = 0.5 * (l(0) + l(d - 1));
    RVec s = (l.array() - shift).exp();
    const double eps = uniform(rng, 1e-3, 2.0 / (d - 1)) * (1.0 - 1e-9);
    GapIndex k = select_gap_index(s, eps, 1e-9);
    ck.ge("sigma_k", k.sigma_k, k.sigma_floor);
    ck.ge("ratio", k.ratio, k.ratio_floor);
    if (t.violated) {
        nlohmann::json js = nlohmann::json::array();
        for (int i = 0; i < d; ++i) js.push_back(s(i));
        t.inputs = {{"sigma", js}, {"eps", eps}, {"k", k.k}};
    }
    return t;
}

}  // namespace

std::vector<LemmaResult> lemma_suite(std::uint64_t seed, int trials, double tol, const std::vector<int>& dims) {
    if (trials < 1) throw Error(ErrorCode::Input, "trials must be at least 1");
    if (dims.empty()) throw Error(ErrorCode::Input, "need at least one dimension");
    for (int d : dims)
        if (d < 2) throw Error(ErrorCode::Dimension, "lemma suite needs d >= 2");
    std::vector<int> big;
    for (int d : dims)
        if (d >= 4) big.push_back(d);
    if (big.empty()) big = {4, 6};

    const std::vector<std::string> names = {"2.2", "2.3", "2.4", "2.5", "2.6", "2.7i", "2.7ii", "2.8", "4.3"};
    std::vector<LemmaResult> out;
    for (std::size_t li = 0; li < names.size(); ++li) {
        auto results = parallel_map<Trial>(static_cast<std::size_t>(trials), [&](std::size_t i) {
            const int trial = static_cast<int>(i);
            Rng rng = make_rng(seed, {li, i});
            const int d = dims[i % dims.size()];
            const Field f = trial_field(trial);
            switch (li) {
                case 0: return lemma_2_2(rng, d, f, tol);
                case 1: return lemma_2_3(rng, d, f, tol);
                case 2: return lemma_2_4(rng, d, f, tol);
                case 3: return lemma_2_5(rng, d, f, tol);
                case 4: return lemma_2_6(rng, d, f, tol, trial % 10 == 0);
                case 5: return lemma_2_7(rng, d, f, tol, false);
                case 6: return lemma_2_7(rng, d, f, tol, true);
                case 7: return lemma_2_8(rng, d, f, tol);
                default: return lemma_4_3(rng, big[i % big.size()], tol);
            }
        });
        LemmaResult r;
        r.lemma = names[li];
        r.trials = trials;
        r.worst_slack = std::numeric_limits<double>::infinity();
        int flagged = 0;
        for (std::size_t i = 0; i < results.size(); ++i) {
            const Trial& t = results[i];
            flagged += t.flagged;
            if (t.skipped) {
                ++r.skipped;
                continue;
            }
            r.worst_slack = std::min(r.worst_slack, t.slack);
            if (t.violated) {
                ++r.violations;
                if (r.counterexamples.size() < 5)
                    r.counterexamples.push_back({{"trial", i}, {"inputs", t.inputs}, {"checks", t.detail}});
            } else {
                ++r.passed;
            }
        }
        if (li == 0) r.info["uncorrected_radius_failures"] = flagged;
        out.push_back(std::move(r));
    }
    return out;
}

GapIndex select_gap_index(const RVec& sigma, double eps, double tol) {
    const int d = static_cast<int>(sigma.size());
    if (d < 2) throw Error(ErrorCode::Dimension, "gap index needs d >= 2");
    if (!(eps > 0.0 && eps < 2.0 / (d - 1))) throw Error(ErrorCode::Input, "eps must lie in (0, 2/(d-1))");
    if (std::abs(sigma(0) * sigma(d - 1) - 1.0) > tol)
        throw Error(ErrorCode::Precondition, "gap index needs sigma_1 sigma_d = 1");
    GapIndex g;
    g.in_hypothesis = d >= 4;
    const double l1 = std::log(sigma(0));
    g.sigma_floor = std::exp((1.0 - d * eps) * l1);
    g.ratio_floor = std::exp(eps * l1);
    for (int k = 1; k < d; ++k) {
        const double ratio = sigma(k - 1) / sigma(k);
        if (ratio >= g.ratio_floor) {
            g.k = k;
            g.sigma_k = sigma(k - 1);
            g.ratio = ratio;
            return g;
        }
    }
    std::ostringstream msg;
    msg << "no index with sigma_k/sigma_{k+1} >= " << g.ratio_floor;
    throw Error(ErrorCode::Numerical, msg.str());
}

GapIndex select_gap_index(const SquareMatrix& g, double eps, double tol) {
    return select_gap_index(singular_values(g), eps, tol);
}

static std::string num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string reports_csv(const std::vector<EstimateReport>& reports) {
    std::string out = "word,tag,n,length,lhs,rhs,ratio\n";
    for (const auto& r : reports)
        for (const auto& s : r.samples) {
            out += '"' + s.id + "\"," + tag_name(r.tag) + ',' + std::to_string(s.n) + ',' + std::to_string(s.length) +
                   ',' + num(s.lhs) + ',' + num(s.rhs) + ',' + num(s.ratio) + '\n';
        }
    return out;
}

std::string plot_data(const std::vector<WordSample>& words) {
    std::string out = "# n log_gap12\n";
    for (const auto& w : words) out += std::to_string(w.n) + ' ' + num(w.log_gap12) + '\n';
    return out;
}

}  // namespace pplab
