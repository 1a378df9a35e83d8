#include "pingpong_lab/pingpong.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pingpong_lab/parallel.hpp"

namespace pplab {

static const char* region_name(char kind, int side) {
    static const char* names[2][2] = {{"U1", "U2"}, {"V1", "V2"}};
    return names[kind == 'U' ? 0 : 1][side - 1];
}

void PingPongConfig::validate() const {
    const int d = gamma1.dim();
    if (gamma2.dim() != d) throw Error(ErrorCode::Dimension, "generators of different dimension");
    for (int s = 1; s <= 2; ++s) {
        if (U(s).space != Space::P) throw Error(ErrorCode::Input, std::string(region_name('U', s)) + " must be a P region");
        if (V(s).space != Space::Gr) throw Error(ErrorCode::Input, std::string(region_name('V', s)) + " must be a Gr region");
        if (U(s).dim() != d || V(s).dim() != d) throw Error(ErrorCode::Dimension, "region dimension differs from d");
    }
}

nlohmann::json PingPongConfig::to_json() const {
    return {{"gamma1", gamma1.to_json()}, {"gamma2", gamma2.to_json()}, {"U1", region_to_json(U1)},
            {"U2", region_to_json(U2)},   {"V1", region_to_json(V1)},   {"V2", region_to_json(V2)}};
}

PingPongConfig PingPongConfig::from_json(const nlohmann::json& j) {
    for (const char* k : {"gamma1", "gamma2", "U1", "U2", "V1", "V2"})
        if (!j.contains(k)) throw Error(ErrorCode::Input, std::string("config is missing '") + k + "'");
    PingPongConfig c;
    c.gamma1 = SemigroupGens::from_json(j.at("gamma1"), 1);
    c.gamma2 = SemigroupGens::from_json(j.at("gamma2"), 2);
    c.U1 = region_from_json(j.at("U1"));
    c.U2 = region_from_json(j.at("U2"));
    c.V1 = region_from_json(j.at("V1"));
    c.V2 = region_from_json(j.at("V2"));
    c.validate();
    return c;
}

double PingPongCertificate::min_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& l : inclusion_margins) m = std::min({m, l.U, l.V});
    return m;
}

nlohmann::json PingPongCertificate::to_json() const {
    nlohmann::json margins = nlohmann::json::array();
    for (const auto& l : inclusion_margins)
        margins.push_back({{"side", l.side}, {"letter", l.letter}, {"U", l.U}, {"V", l.V}, {"worst", l.worst_region}});
    auto vec = [](const CVec& v) {
        bool real = v.imag().cwiseAbs().maxCoeff() == 0.0;
        return vector_to_json(v, real ? Field::Real : Field::Complex);
    };
    return {{"epsilon", epsilon},
            {"theta", theta},
            {"M", M},
            {"dim", dim},
            {"basepoints", {{"x1", vec(x1)}, {"x2", vec(x2)}, {"y1", vec(y1)}, {"y2", vec(y2)}}},
            {"inclusion_margins", margins},
            {"min_margin", min_margin()}};
}

nlohmann::json CertifyReport::to_json() const {
    nlohmann::json j = {{"ok", ok}, {"certificate", cert.to_json()}};
    if (!ok) j["failure"] = {{"reason", reason}, {"side", failed_side}, {"letter", failed_letter}, {"region", failed_region}};
    return j;
}

CertificationFailure::CertificationFailure(CertifyReport r)
    : Error(ErrorCode::Certification, r.reason), report_(std::move(r)) {}

std::vector<int> letter_piece(const BallRegion& region, const CVec& attractor) {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(region.balls.size()); ++i)
        if (proj_dist(attractor, region.balls[i].center) < region.balls[i].radius) idx.push_back(i);
    if (idx.empty())
        for (int i = 0; i < static_cast<int>(region.balls.size()); ++i) idx.push_back(i);
    return idx;
}

double gap_threshold(double epsilon, double theta, int d) {
    return std::max(16.0 / (epsilon * theta), 8.0 * std::sqrt(d - 1.0) / (epsilon * epsilon));
}

static const Ball& largest_ball(const BallRegion& r) {
    return *std::max_element(r.balls.begin(), r.balls.end(),
                             [](const Ball& a, const Ball& b) { return a.radius < b.radius; });
}

namespace {

struct Condition {
    double margin;
    std::string what;
};

// Worst margin over the conditions "x(source ball) inside target piece".
Condition worst_inclusion(const Contraction& c, const std::vector<std::pair<const Ball*, std::string>>& sources,
                          const std::vector<Ball>& targets, const std::string& target_name) {
    Condition worst{std::numeric_limits<double>::infinity(), ""};
    for (const auto& [ball, name] : sources) {
        double m = best_containment_margin(image_ball_bounds(c, *ball), targets);
        if (m < worst.margin) worst = {m, name + " into " + target_name};
    }
    return worst;
}

std::vector<Ball> select(const BallRegion& r, const std::vector<int>& idx) {
    std::vector<Ball> out;
    for (int i : idx) out.push_back(r.balls[i]);
    return out;
}

// Piece of each code: the whole region on semigroup sides, otherwise the
// balls around the attracting direction of the code's action.
std::vector<std::vector<int>> pieces(const SemigroupGens& gens, const BallRegion& region, bool normals) {
    std::vector<std::vector<int>> out;
    for (int c : gens.alphabet()) {
        if (!gens.is_group()) {
            out.emplace_back();
            for (int i = 0; i < static_cast<int>(region.balls.size()); ++i) out.back().push_back(i);
            continue;
        }
        const CMat& m = gens.matrix(c).entries();
        out.push_back(letter_piece(region, normals ? top_right_singular(m) : top_left_singular(m)));
    }
    return out;
}

LetterMargin check_letter(const PingPongConfig& cfg, int side, int ci) {
    const int other = 3 - side;
    const auto& gens = cfg.gens(side);
    const auto alpha = gens.alphabet();
    const int code = alpha[ci];
    LetterMargin out;
    out.side = side;
    out.letter = code;
    const CMat& m = gens.matrix(code).entries();

    for (int pass = 0; pass < 2; ++pass) {
        const bool normals = pass == 1;
        const BallRegion& own = normals ? cfg.V(side) : cfg.U(side);
        const BallRegion& opp = normals ? cfg.V(other) : cfg.U(other);
        const char kind = normals ? 'V' : 'U';
        auto piece = pieces(gens, own, normals);
        // x acts on points by m, x^{-1} acts on hyperplane normals by m^*.
        Contraction c = contraction_of(normals ? CMat(m.adjoint()) : m);
        std::vector<std::pair<const Ball*, std::string>> sources;
        for (const auto& b : opp.balls) sources.push_back({&b, region_name(kind, other)});
        std::vector<int> own_sources;
        for (int k = 0; k < static_cast<int>(alpha.size()); ++k) {
            if (gens.is_group() && alpha[k] == -code) continue;
            for (int i : piece[k]) own_sources.push_back(i);
        }
        std::sort(own_sources.begin(), own_sources.end());
        own_sources.erase(std::unique(own_sources.begin(), own_sources.end()), own_sources.end());
        for (int i : own_sources) sources.push_back({&own.balls[i], region_name(kind, side)});
        auto cond = worst_inclusion(c, sources, select(own, piece[ci]), region_name(kind, side));
        (normals ? out.V : out.U) = cond.margin;
        if (!normals || cond.margin < out.U) out.worst_region = cond.what;
    }
    return out;
}

}  // namespace

CertifyReport certify_report(const PingPongConfig& cfg) {
    cfg.validate();
    CertifyReport rep;
    auto& cert = rep.cert;
    cert.dim = cfg.dim();
    const double s12 = region_separation(cfg.U1, cfg.V2), s21 = region_separation(cfg.U2, cfg.V1);
    cert.epsilon = std::min(s12, s21);
    if (!(cert.epsilon > 0.0)) {
        rep.reason = "regions are not transverse (epsilon = 0)";
        rep.failed_region = s12 <= s21 ? "U1/V2" : "U2/V1";
        return rep;
    }
    const Ball &bx1 = largest_ball(cfg.U1), &bx2 = largest_ball(cfg.U2);
    const Ball &by1 = largest_ball(cfg.V1), &by2 = largest_ball(cfg.V2);
    cert.theta = std::min({0.999 * cert.epsilon * cert.epsilon, bx1.radius, bx2.radius, by1.radius, by2.radius});
    cert.x1 = bx1.center;
    cert.x2 = bx2.center;
    cert.y1 = by1.center;
    cert.y2 = by2.center;
    cert.M = gap_threshold(cert.epsilon, cert.theta, cert.dim);

    std::vector<std::pair<int, int>> jobs;
    for (int side = 1; side <= 2; ++side)
        for (int k = 0; k < static_cast<int>(cfg.gens(side).alphabet().size()); ++k) jobs.push_back({side, k});
    cert.inclusion_margins =
        parallel_map<LetterMargin>(jobs.size(), [&](std::size_t i) { return check_letter(cfg, jobs[i].first, jobs[i].second); });

    for (const auto& l : cert.inclusion_margins) {
        const double m = std::min(l.U, l.V);
        if (!(m > kCertifyMargin)) {
            rep.reason = std::isfinite(m) ? "inclusion margin below 1e-6" : "contraction bound does not close";
            rep.failed_side = l.side;
            rep.failed_letter = l.letter;
            rep.failed_region = l.worst_region;
            return rep;
        }
    }
    rep.ok = true;
    return rep;
}

PingPongCertificate certify(const PingPongConfig& cfg) {
    auto rep = certify_report(cfg);
    if (!rep.ok) throw CertificationFailure(rep);
    return rep.cert;
}

std::vector<int> exceptional_letters(const SemigroupGens& gens, const PingPongCertificate& cert) {
    std::vector<int> out;
    const double M = gap_threshold(cert);
    for (int c : gens.alphabet())
        if (gap12(gens.tracked(c)) < M) out.push_back(c);
    return out;
}

XiCheck check_xi_attraction(const Tracked& g, const PingPongCertificate& cert, const PingPongConfig& cfg,
                            int first_side, int last_side) {
    XiCheck r;
    r.gap = gap12(g);
    r.applicable = r.gap >= gap_threshold(cert);
    if (!r.applicable) return r;
    r.dist_U = dist_to_region(top_left_singular(g.g), cfg.U(first_side));
    // Xi_{d-1}(g^{-1}) is the hyperplane with normal k'^{-1} e1 of g.
    r.dist_V = dist_to_region(top_right_singular(g.g), cfg.V(last_side));
    return r;
}

XiCheck check_xi_attraction(const ReducedWord& w, const PingPongCertificate& cert, const PingPongConfig& cfg) {
    return check_xi_attraction(w.tracked(), cert, cfg, w.syllables().front().side, w.syllables().back().side);
}

static Contraction tracked_contraction(const CMat& g, double gap) {
    Contraction c = contraction_of(g);
    c.ratio21 = 1.0 / gap;
    return c;
}

double word_inclusion_margin(const ReducedWord& w, const PingPongConfig& cfg) {
    const int first = w.syllables().front().side, last = w.syllables().back().side;
    const Tracked& t = w.tracked();
    const double gap = gap12(t);
    double worst = std::numeric_limits<double>::infinity();
    Contraction cu = tracked_contraction(t.g, gap);
    for (const auto& b : cfg.U(3 - last).balls)
        worst = std::min(worst, best_containment_margin(image_ball_bounds(cu, b), cfg.U(first).balls));
    // w^{-1} on normals is w^*, whose gap matches that of w.
    Contraction cv = tracked_contraction(t.g.adjoint(), gap);
    for (const auto& b : cfg.V(3 - first).balls)
        worst = std::min(worst, best_containment_margin(image_ball_bounds(cv, b), cfg.V(last).balls));
    return worst;
}

}  // namespace pplab
