#include "pingpong_lab/convexrep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pingpong_lab/parallel.hpp"
#include "pingpong_lab/random.hpp"

namespace pplab {

namespace {

constexpr double kDeg = 3.14159265358979323846 / 180.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool definite(const RMat& x) {
    Eigen::SelfAdjointEigenSolver<RMat> es(x, Eigen::EigenvaluesOnly);
    const RVec& ev = es.eigenvalues();
    return ev.minCoeff() > 0.0 || ev.maxCoeff() < 0.0;
}

double angle_between(const CVec& a, const CVec& b) { return line_angle(a, b); }

CVec real_unit(int m, int i) { return CVec::Unit(m, i); }

double det_error(const SquareMatrix& g) { return std::abs(g.det() - 1.0); }

void require_sl(const SquareMatrix& g, const char* what) {
    if (!g.is_real()) throw Error(ErrorCode::Precondition, std::string(what) + " must be real");
    if (det_error(g) > 1e-9) throw Error(ErrorCode::Precondition, std::string(what) + " must have det 1");
}

// Sampled cone-preservation test on random positive definite matrices.
bool preserves_pd(const RMat& g, int d, int extra, double tol) {
    const int n = sym_dim(d);
    if (g.rows() != n + extra) return false;
    Rng rng = make_rng(0x5eed, {static_cast<std::uint64_t>(d)});
    int sign = 0;
    for (int t = 0; t < 32; ++t) {
        RMat a = RMat::NullaryExpr(d, d, [&] { return gaussian(rng); });
        RMat x = a * a.transpose() + 1e-3 * RMat::Identity(d, d);
        RVec v = RVec::Zero(n + extra);
        v.head(n) = sym_coords(x);
        for (int j = 0; j < extra; ++j) v(n + j) = gaussian(rng);
        RVec img = g * v;
        if (img.norm() < tol) return false;
        Eigen::SelfAdjointEigenSolver<RMat> es(sym_from_coords(img.head(n), d), Eigen::EigenvaluesOnly);
        int s = es.eigenvalues().minCoeff() > 0.0 ? 1 : (es.eigenvalues().maxCoeff() < 0.0 ? -1 : 0);
        if (s == 0 || (sign != 0 && s != sign)) return false;
        sign = s;
    }
    return true;
}

}  // namespace

bool ConvexDomainSpec::contains(const CVec& x) const {
    if (x.size() != ambient) throw Error(ErrorCode::Dimension, "point dimension differs from domain");
    if (kind == ConvexKind::Ball) {
        for (const Ball& b : ball.balls)
            if (proj_dist(x, b.center) < b.radius) return true;
        return false;
    }
    if (x.imag().norm() > 1e-12 * x.norm()) return false;
    RVec v = x.real();
    if (kind == ConvexKind::Ellipsoid) return v.dot(form * v) < 0.0;
    return definite(sym_from_coords(v.head(sym_dim(sym_d)), sym_d));
}

bool ConvexDomainSpec::preserved_by(const SquareMatrix& g, double tol) const {
    if (g.dim() != ambient) throw Error(ErrorCode::Dimension, "matrix dimension differs from domain");
    switch (kind) {
        case ConvexKind::Ellipsoid: {
            if (!g.is_real()) return false;
            RMat gr = g.real_entries();
            RMat q = gr.transpose() * form * gr;
            double c = (q.cwiseProduct(form)).sum() / form.squaredNorm();
            return c > 0.0 && (q - c * form).norm() <= tol * gr.squaredNorm() * form.norm();
        }
        case ConvexKind::PDCone:
            return g.is_real() && preserves_pd(g.real_entries(), sym_d, 0, tol);
        case ConvexKind::SumCone:
            return g.is_real() && preserves_pd(g.real_entries(), sym_d, extra, tol);
        case ConvexKind::Ball: {
            Contraction c = contraction_of(g.entries());
            for (const Ball& b : ball.balls)
                if (best_containment_margin(image_ball_bounds(c, b), ball.balls) < -tol) return false;
            return true;
        }
    }
    return false;
}

nlohmann::json ConvexDomainSpec::to_json() const {
    static const char* names[] = {"ellipsoid", "PD-cone", "sum-cone", "ball"};
    nlohmann::json j;
    j["kind"] = names[static_cast<int>(kind)];
    j["ambient"] = ambient;
    j["properly_convex"] = properly_convex();
    if (kind == ConvexKind::Ellipsoid) j["form"] = matrix_to_json(SquareMatrix::real(form));
    if (kind == ConvexKind::PDCone || kind == ConvexKind::SumCone) j["sym_d"] = sym_d;
    if (kind == ConvexKind::SumCone) j["extra"] = extra;
    if (kind == ConvexKind::Ball) j["region"] = region_to_json(ball);
    if (witness) j["witness"] = vector_to_json(witness->normal, Field::Real);
    return j;
}

ConvexDomainSpec klein_disk() {
    ConvexDomainSpec s;
    s.kind = ConvexKind::Ellipsoid;
    s.ambient = 3;
    s.form = RVec((RVec(3) << 1.0, 1.0, -1.0).finished()).asDiagonal();
    s.witness = Hyperplane(real_unit(3, 2));
    return s;
}

ConvexDomainSpec pd_cone(int d) {
    if (d < 1) throw Error(ErrorCode::Input, "pd_cone needs d >= 1");
    ConvexDomainSpec s;
    s.kind = ConvexKind::PDCone;
    s.sym_d = d;
    s.ambient = sym_dim(d);
    s.witness = Hyperplane(CVec(sym_coords(RMat::Identity(d, d)).cast<cplx>()));
    return s;
}

ConvexDomainSpec sum_cone(int d, int extra) {
    if (d < 1 || extra < 1) throw Error(ErrorCode::Input, "sum_cone needs d >= 1 and extra >= 1");
    ConvexDomainSpec s;
    s.kind = ConvexKind::SumCone;
    s.sym_d = d;
    s.extra = extra;
    s.ambient = sym_dim(d) + extra;
    return s;
}

ConvexDomainSpec ball_domain(const BallRegion& r) {
    if (r.space != Space::P) throw Error(ErrorCode::Input, "ball domain lives in P(K^d)");
    ConvexDomainSpec s;
    s.kind = ConvexKind::Ball;
    s.ball = r;
    s.ambient = r.dim();
    for (const Ball& b : r.balls) {
        double gap = kInf;
        for (const Ball& o : r.balls) gap = std::min(gap, std::asin(std::min(1.0, std::abs(inner(o.center, b.center)))) - std::asin(std::min(1.0, o.radius)));
        if (gap > 0.0) {
            s.witness = Hyperplane(b.center, r.field);
            break;
        }
    }
    return s;
}

namespace {

CVec c_hat(int d) {
    const int n = sym_dim(d);
    RVec ic = sym_coords(RMat::Identity(d, d));
    CVec c = CVec::Zero(n * n + 1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) c(a * n + b) = ic(a) * ic(b);
    return c / c.norm();
}

double ball_pair_gap(const Ball& a, const Ball& b) {
    return angle_between(a.center, b.center) - std::asin(std::min(1.0, a.radius)) - std::asin(std::min(1.0, b.radius));
}

struct Layout {
    double delta, theta1, beta, a2, phi;
};

Layout layout(int d) {
    Layout l;
    l.delta = 1.0 * kDeg;
    l.theta1 = std::acos(1.0 / d) + l.delta;
    double room = 90.0 * kDeg - l.theta1;
    l.a2 = room / 10.0;
    l.beta = l.theta1 + room / 2.0;
    l.phi = l.a2 / 2.0;
    return l;
}

CVec in_plane(const CVec& c, const CVec& u, double angle) { return std::cos(angle) * c + std::sin(angle) * u; }

}  // namespace

RepMargins rep_margins(const RepPair& p) {
    RepMargins m;
    m.w_inclusion = kInf;
    for (const SquareMatrix* w : {&p.w, &p.w_inv}) {
        Contraction c = contraction_of(w->entries());
        for (const Ball& b : p.C1.balls)
            m.w_inclusion = std::min(m.w_inclusion, best_containment_margin(image_ball_bounds(c, b), p.C2.balls));
    }
    m.disjoint = kInf;
    for (const Ball& a : p.C1.balls)
        for (const Ball& b : p.C2.balls) m.disjoint = std::min(m.disjoint, ball_pair_gap(a, b));
    m.avoids_U = kInf;
    CVec eU = real_unit(p.m, p.m - 1);
    for (const Ball& a : p.C1.balls) m.avoids_U = std::min(m.avoids_U, angle_between(eU, a.center) - std::asin(std::min(1.0, a.radius)));
    return m;
}

RepPair build_rep_pair(int d, double eta, int budget) {
    if (d < 2) throw Error(ErrorCode::Input, "build_rep_pair needs d >= 2");
    if (!(eta > 0.0 && eta < 1.0)) throw Error(ErrorCode::Input, "eta must lie in (0, 1)");
    if (budget < 1) throw Error(ErrorCode::Input, "budget must be positive");
    RepPair p;
    p.d = d;
    p.N = sym_dim(d) * sym_dim(d);
    p.m = p.N + 1;
    p.eta = eta;
    const Layout l = layout(d);
    const CVec ch = c_hat(d), eU = real_unit(p.m, p.m - 1);

    // C1 holds the closure of the domain: every extreme ray X (x) Y lies
    // within acos(1/d) of [I (x) I].
    p.C1 = BallRegion(Space::P, {Ball{ch, std::sin(l.theta1)}});
    const CVec c2 = in_plane(ch, eU, l.beta);
    p.C2 = BallRegion(Space::P, {Ball{c2, std::sin(l.a2)}});

    // frame: attracting and repelling axes on either side of the C2 center,
    // the orthogonal complement of their plane in the middle
    const CVec attract = in_plane(ch, eU, l.beta + l.phi), repel = in_plane(ch, eU, l.beta - l.phi);
    RMat span(p.m, 2);
    span.col(0) = ch.real();
    span.col(1) = eU.real();
    Eigen::JacobiSVD<RMat> svd(span, Eigen::ComputeFullU);
    RMat P(p.m, p.m);
    P.col(0) = attract.real();
    P.middleCols(1, p.m - 2) = svd.matrixU().rightCols(p.m - 2);
    P.col(p.m - 1) = repel.real();
    const RMat Pinv = P.inverse();

    p.lambda = 2.0;
    double best = -kInf;
    for (int step = 0, n = 1; step < budget; ++step, n *= 2) {
        RVec ev = RVec::Ones(p.m), evi = RVec::Ones(p.m);
        ev(0) = std::pow(p.lambda, n);
        ev(p.m - 1) = std::pow(p.lambda, -n);
        evi(0) = 1.0 / ev(0);
        evi(p.m - 1) = 1.0 / ev(p.m - 1);
        if (!std::isfinite(ev(0)) || ev(p.m - 1) == 0.0) break;
        p.w = SquareMatrix::real(P * ev.asDiagonal() * Pinv);
        p.w_inv = SquareMatrix::real(P * evi.asDiagonal() * Pinv);
        p.power = n;
        p.margins = rep_margins(p);
        best = std::max(best, p.margins.w_inclusion);
        if (p.margins.w_inclusion > kCertifyMargin) break;
    }
    if (!(p.margins.w_inclusion > kCertifyMargin) || !p.margins.ok())
        throw Error(ErrorCode::Budget, "no power of w puts w^{+-1} C1 inside C2 (best margin " + std::to_string(best) + ")");

    // Starting floor for sigma_1(phi_d(g)): small enough image balls of C2
    // and the norm growth at the C2 center. Letters are pushed further by
    // admit_letters when the letter-level checks ask for it.
    const double x_v = std::cos(l.beta + l.a2);
    const double tilt = std::atan(std::sin(l.a2) / x_v);
    const double eps_lo = x_v * std::cos(std::acos(1.0 / d) + tilt);
    const double need_a = std::pow(std::sin(l.delta) * eps_lo, -2.0);
    const double need_b = std::pow(1.0 / eps_lo, 1.0 / eta);
    p.gap_threshold = std::max(need_a, need_b);
    return p;
}

nlohmann::json RepPair::to_json() const {
    nlohmann::json j;
    j["d"] = d;
    j["N"] = N;
    j["m"] = m;
    j["eta"] = eta;
    j["lambda"] = lambda;
    j["power"] = power;
    j["w"] = matrix_to_json(w);
    j["w_inv"] = matrix_to_json(w_inv);
    j["C1"] = region_to_json(C1);
    j["C2"] = region_to_json(C2);
    j["gap_threshold"] = gap_threshold;
    j["margins"] = {{"w_inclusion", margins.w_inclusion}, {"disjoint", margins.disjoint}, {"avoids_U", margins.avoids_U}};
    return j;
}

RepPair RepPair::from_json(const nlohmann::json& j) {
    try {
        RepPair p;
        p.d = j.at("d").get<int>();
        p.N = j.at("N").get<int>();
        p.m = j.at("m").get<int>();
        p.eta = j.at("eta").get<double>();
        p.lambda = j.at("lambda").get<double>();
        p.power = j.at("power").get<int>();
        p.w = matrix_from_json(j.at("w"));
        p.w_inv = matrix_from_json(j.at("w_inv"));
        p.C1 = region_from_json(j.at("C1"));
        p.C2 = region_from_json(j.at("C2"));
        p.gap_threshold = j.at("gap_threshold").get<double>();
        if (p.m != rep_dim(p.d) || p.N != p.m - 1 || p.w.dim() != p.m || p.w_inv.dim() != p.m || p.C1.dim() != p.m ||
            p.C2.dim() != p.m)
            throw Error(ErrorCode::Dimension, "rep pair dimensions are inconsistent");
        p.margins = rep_margins(p);
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Input, std::string("malformed rep pair: ") + e.what());
    }
}

SquareMatrix rho1(const RepPair& p, const SquareMatrix& g) {
    if (g.dim() != p.d) throw Error(ErrorCode::Dimension, "letter dimension differs from the rep pair");
    require_sl(g, "letter");
    RMat out = RMat::Identity(p.m, p.m);
    out.topLeftCorner(p.N, p.N) = phi_rep(g).real_entries();
    return SquareMatrix::real(out);
}

SquareMatrix rho2(const RepPair& p, const SquareMatrix& g) { return p.w * rho1(p, g) * p.w_inv; }

SquareMatrix apply_rep(const RepPair& p, const ReducedWord& w) {
    SquareMatrix out = SquareMatrix::identity(p.m);
    for (int i = 0; i < w.syllable_count(); ++i) {
        SquareMatrix g = SquareMatrix::real(w.syllable_evals()[i].g.real());
        out = out * rho(p, w.syllables()[i].side, g);
    }
    return out;
}

LetterCheck check_letter(const RepPair& p, int side, const SquareMatrix& g) {
    LetterCheck c;
    c.side = side;
    SquareMatrix r1 = rho1(p, g);
    c.sigma_phi = phi_rep(g).op_norm();
    const BallRegion& src = side == 1 ? p.C2 : p.C1;
    const BallRegion& dst = side == 1 ? p.C1 : p.C2;
    c.inclusion = kInf;
    for (const Ball& b : src.balls) {
        std::vector<Ball> img;
        if (side == 1) {
            img = image_ball_bounds(contraction_of(r1.entries()), b);
        } else {
            img = chain_ball_bounds({contraction_of(p.w.entries()), contraction_of(r1.entries()), contraction_of(p.w_inv.entries())}, b);
        }
        c.inclusion = std::min(c.inclusion, best_containment_margin(img, dst.balls));
    }
    SquareMatrix ri = side == 1 ? r1 : p.w * r1 * p.w_inv;
    c.norm_slack = kInf;
    for (const Ball& b : src.balls) {
        double grow = (ri.entries() * b.center).norm() / b.center.norm();
        c.norm_slack = std::min(c.norm_slack, std::log(grow) - (1.0 - p.eta) * std::log(c.sigma_phi));
    }
    return c;
}

AdmittedGens admit_letters(const RepPair& p, const SemigroupGens& gens, int side, int budget) {
    if (gens.dim() != p.d) throw Error(ErrorCode::Dimension, "generators do not act on R^d");
    AdmittedGens out;
    std::vector<SquareMatrix> letters;
    for (int i = 0; i < gens.size(); ++i) {
        const SquareMatrix& x = gens.letters()[i];
        require_sl(x, "letter");
        // sigma_1 sigma_N = 1 on phi_d images
        double top = phi_rep(x).op_norm(), bottom = 1.0 / phi_rep(x.inverse()).op_norm();
        if (std::abs(std::log(top * bottom)) > 1e-9 * std::max(1.0, std::log(top)))
            throw Error(ErrorCode::Precondition, "phi_d image does not satisfy sigma_1 sigma_N = 1");
        bool done = false;
        for (int j = 0, k = 1; j <= budget && !done; ++j, k *= 2) {
            SquareMatrix xk = x.pow(k);
            LetterCheck c = check_letter(p, side, xk);
            c.letter = i + 1;
            c.power = k;
            if (c.sigma_phi < p.gap_threshold || !c.ok()) continue;
            std::vector<LetterCheck> cs{c};
            if (gens.is_group()) {
                LetterCheck ci = check_letter(p, side, xk.inverse());
                ci.letter = -(i + 1);
                ci.power = k;
                if (!ci.ok()) continue;
                cs.push_back(ci);
            }
            letters.push_back(xk);
            out.powers.push_back(k);
            out.checks.insert(out.checks.end(), cs.begin(), cs.end());
            done = true;
        }
        if (!done) throw Error(ErrorCode::Budget, "letter " + std::to_string(i + 1) + " of side " + std::to_string(side) +
                                                      " fails the letter-level checks at every tried power");
    }
    out.gens = SemigroupGens(letters, gens.is_group(), side);
    return out;
}

EstimateReport verify_t15(const RepPair& p, const SemigroupGens& gens1, const SemigroupGens& gens2, int max_syllables,
                          double eps, int max_syllable_len) {
    if (!(eps > 0.0 && eps < 2.0)) throw Error(ErrorCode::Input, "eps must lie in (0, 2)");
    if (max_syllables < 1 || max_syllable_len < 1) throw Error(ErrorCode::Input, "word bounds must be positive");
    if (!p.margins.ok()) throw Error(ErrorCode::Precondition, "rep pair invariants fail");
    AdmittedGens a1 = admit_letters(p, gens1, 1), a2 = admit_letters(p, gens2, 2);
    std::vector<ReducedWord> words = enumerate_reduced(a1.gens, a2.gens, max_syllables, max_syllable_len);

    struct Row {
        EstimateSample s;
        CMat image;
    };
    std::vector<Row> rows = parallel_map<Row>(words.size(), [&](std::size_t i) {
        const ReducedWord& w = words[i];
        CMat a = CMat::Identity(p.m, p.m), ainv = CMat::Identity(p.m, p.m);
        double rhs = 0.0;
        for (int k = 0; k < w.syllable_count(); ++k) {
            const Tracked& t = w.syllable_evals()[k];
            int side = w.syllables()[k].side;
            a = a * rho(p, side, SquareMatrix::real(t.g.real())).entries();
            ainv = rho(p, side, SquareMatrix::real(t.inv.real())).entries() * ainv;
            rhs += (2.0 - eps) * std::log(gap1d(t));
        }
        double s1 = op_norm(a), s1i = op_norm(ainv);
        if (!std::isfinite(s1) || !std::isfinite(s1i)) throw Error(ErrorCode::Overflow, "representation image overflows");
        Row r;
        r.s.id = w.id();
        r.s.n = w.syllable_count();
        r.s.length = w.length();
        r.s.lhs = std::log(s1) + std::log(s1i);
        r.s.rhs = rhs;
        r.s.ratio = r.s.lhs / rhs;
        r.image = std::move(a);
        return r;
    });

    EstimateReport rep;
    rep.tag = TheoremTag::T15;
    rep.min_ratio = kInf;
    bool words_ok = true;
    for (const Row& r : rows) {
        rep.samples.push_back(r.s);
        rep.min_ratio = std::min(rep.min_ratio, r.s.ratio);
        if (!(r.s.lhs >= r.s.rhs)) words_ok = false;
    }
    // rho(w1) = rho(w2) iff rho(w1 w2^{-1}) = I, so distinctness of the
    // images is read off the nontrivial words with up to twice the syllables
    std::vector<ReducedWord> quotients = enumerate_reduced(a1.gens, a2.gens, 2 * max_syllables, max_syllable_len);
    std::vector<double> to_id = parallel_map<double>(quotients.size(), [&](std::size_t i) {
        return op_norm(apply_rep(p, quotients[i]).entries() - CMat::Identity(p.m, p.m));
    });
    double faithful = *std::min_element(to_id.begin(), to_id.end());
    double relative = kInf;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            double scale = std::max(op_norm(rows[i].image), op_norm(rows[j].image));
            relative = std::min(relative, op_norm(rows[i].image - rows[j].image) / scale);
        }
    double incl = kInf, slack = kInf, sig = kInf;
    nlohmann::json letters = nlohmann::json::array();
    for (const auto* a : {&a1, &a2})
        for (const LetterCheck& c : a->checks) {
            incl = std::min(incl, c.inclusion);
            slack = std::min(slack, c.norm_slack);
            sig = std::min(sig, c.sigma_phi);
            letters.push_back({{"side", c.side}, {"letter", c.letter}, {"power", c.power}, {"sigma_phi", c.sigma_phi},
                               {"inclusion", c.inclusion}, {"norm_slack", c.norm_slack}});
        }
    rep.fitted["eps"] = eps;
    rep.fitted["eta"] = p.eta;
    rep.fitted["gap_threshold"] = p.gap_threshold;
    rep.fitted["min_admitted_sigma_phi"] = sig;
    rep.fitted["min_letter_inclusion"] = incl;
    rep.fitted["min_norm_slack"] = slack;
    rep.fitted["min_faithful_distance"] = faithful;
    rep.fitted["min_relative_pairwise_distance"] = relative;
    rep.notes["letters"] = letters;
    rep.notes["powers_side1"] = a1.powers;
    rep.notes["powers_side2"] = a2.powers;
    rep.notes["words"] = rows.size();
    rep.notes["pair_margins"] = {{"w_inclusion", p.margins.w_inclusion}, {"disjoint", p.margins.disjoint}, {"avoids_U", p.margins.avoids_U}};
    rep.all_pass = words_ok && incl > 0.0 && slack > 0.0 && faithful > 1e-6 && p.margins.ok();
    return rep;
}

XiFrontier check_xi_avoids_compact(const ConvexDomainSpec& domain, const BallRegion& K,
                                   const std::vector<SquareMatrix>& sample, const std::vector<double>& ladder, int k) {
    if (!domain.properly_convex()) throw Error(ErrorCode::Precondition, "domain must be properly convex");
    if (K.dim() != domain.ambient) throw Error(ErrorCode::Dimension, "compact set dimension differs from domain");
    if (k < 1 || k >= domain.ambient) throw Error(ErrorCode::Input, "gap index out of range");
    if (ladder.empty() || !std::is_sorted(ladder.begin(), ladder.end())) throw Error(ErrorCode::Input, "ladder must be nonempty and increasing");
    for (const Ball& b : K.balls)
        if (!domain.contains(b.center)) throw Error(ErrorCode::Precondition, "compact set must lie in the domain");
    struct Item {
        double gap, dist;
    };
    std::vector<Item> items;
    for (const SquareMatrix& g : sample) {
        if (!domain.preserved_by(g)) throw Error(ErrorCode::Precondition, "sample element does not preserve the domain");
        Eigen::JacobiSVD<CMat> svd(g.entries(), Eigen::ComputeFullU);
        const RVec& s = svd.singularValues();
        double gap = s(k - 1) / s(k);
        CMat frame = svd.matrixU().leftCols(k);
        double dist = kInf;
        for (const Ball& b : K.balls) {
            double a = std::asin(std::min(1.0, dist_point_subspace(ProjPoint(b.center, K.field), frame)));
            dist = std::min(dist, std::sin(std::max(0.0, a - std::asin(std::min(1.0, b.radius)))));
        }
        items.push_back({gap, dist});
    }
    XiFrontier f;
    f.k = k;
    for (double L : ladder) {
        XiFrontierPoint pt{L, 0, kInf};
        for (const Item& it : items)
            if (it.gap > L) {
                ++pt.count;
                pt.eps = std::min(pt.eps, it.dist);
            }
        f.points.push_back(pt);
    }
    if (f.points.back().count == 0) throw Error(ErrorCode::InsufficientData, "no sample element above the top of the ladder");
    return f;
}

AnosovRegions anosov_regions(const SemigroupGens& gamma, int depth) {
    if (depth < 1) throw Error(ErrorCode::Input, "depth must be positive");
    if (gamma.field() != Field::Real) throw Error(ErrorCode::Input, "anosov search works over R");
    const int d = gamma.dim();
    std::vector<std::vector<int>> syl = side_syllables(gamma, depth);
    std::vector<CVec> pts, nrms;
    for (const auto& s : syl) {
        Tracked t = evaluate_syllable(gamma, s);
        pts.push_back(top_left_singular(t.g));
        nrms.push_back(top_right_singular(t.g));
    }
    auto far_from = [](const CVec& v, const std::vector<CVec>& normals) {
        double m = kInf;
        for (const CVec& n : normals) m = std::min(m, std::abs(inner(v, n)));
        return m;
    };
    Rng rng = make_rng(0xa705, {static_cast<std::uint64_t>(d)});
    std::vector<CVec> cands;
    for (int i = 0; i < d; ++i) cands.push_back(real_unit(d, i));
    for (int i = 0; i < 4000; ++i) cands.push_back(random_unit(rng, d, Field::Real));

    AnosovRegions reg;
    double best = -1.0;
    for (const CVec& c : cands) {
        double s = far_from(c, nrms);
        if (s > best) best = s, reg.v0 = c;
    }
    reg.eps = best / 6.0;
    best = -1.0;
    for (const CVec& c : cands) {
        double s = std::min(far_from(c, pts), std::abs(inner(reg.v0, c)));
        if (s > best) best = s, reg.n0 = c;
    }
    if (!(reg.eps > 0.0) || !(best > 0.0)) throw Error(ErrorCode::Degenerate, "no transverse attracting point for g");

    std::vector<Ball> ub, vb;
    for (int code : gamma.alphabet()) {
        const Tracked& t = gamma.tracked(code);
        CVec pc = top_left_singular(t.g), nc = top_right_singular(t.g);
        double ru = 0.0, rv = 0.0;
        for (std::size_t i = 0; i < syl.size(); ++i) {
            if (syl[i].front() == code) ru = std::max(ru, proj_dist(pts[i], pc));
            if (syl[i].back() == code) rv = std::max(rv, proj_dist(nrms[i], nc));
        }
        ub.push_back({pc, ru + reg.eps});
        vb.push_back({nc, rv + reg.eps});
    }
    reg.U_gamma = BallRegion(Space::P, ub);
    reg.V_gamma = BallRegion(Space::Gr, vb);
    return reg;
}

SquareMatrix proximal_matrix(const CVec& v0, const CVec& n0, double mu) {
    if (!(mu > 1.0)) throw Error(ErrorCode::Input, "proximal eigenvalue must exceed 1");
    cplx pair = inner(v0, n0);
    if (std::abs(pair) < 1e-12 * v0.norm() * n0.norm()) throw Error(ErrorCode::Degenerate, "attracting point lies on the repelling hyperplane");
    CMat g = CMat::Identity(v0.size(), v0.size()) + (mu - 1.0) * v0 * n0.adjoint() / pair;
    return SquareMatrix::real(g.real());
}

PingPongConfig anosov_config(const AnosovRegions& reg, const SemigroupGens& gamma, int p, const SquareMatrix& g, int r) {
    if (p < 1) throw Error(ErrorCode::Input, "power of the gamma letters must be positive");
    if (r < 1) throw Error(ErrorCode::Input, "power of g must be positive (g^0 is the identity)");
    std::vector<SquareMatrix> letters;
    for (const SquareMatrix& x : gamma.letters()) letters.push_back(x.pow(p));
    PingPongConfig cfg;
    cfg.gamma1 = SemigroupGens(letters, gamma.is_group(), 1);
    cfg.gamma2 = SemigroupGens({g.pow(r)}, false, 2);
    cfg.U1 = reg.U_gamma;
    cfg.V1 = reg.V_gamma;
    cfg.U2 = BallRegion(Space::P, {Ball{reg.v0, reg.eps}});
    cfg.V2 = BallRegion(Space::Gr, {Ball{reg.n0, reg.eps}});
    cfg.validate();
    return cfg;
}

nlohmann::json AnosovResult::to_json() const {
    nlohmann::json j;
    j["g"] = matrix_to_json(g);
    j["r"] = r;
    j["gamma_power"] = gamma_power;
    j["attempts"] = attempts;
    j["eps"] = regions.eps;
    j["v0"] = vector_to_json(regions.v0, Field::Real);
    j["n0"] = vector_to_json(regions.n0, Field::Real);
    j["config"] = config.to_json();
    j["certificate"] = cert.to_json();
    return j;
}

AnosovResult anosov_semigroup_search(const SemigroupGens& gamma, int depth, int budget, double mu) {
    if (budget < 1) throw Error(ErrorCode::Input, "budget must be positive");
    // (p, r) = (2^a, 2^b) along anti-diagonals a + b = s; regions and g are
    // rebuilt for each power p of the gamma letters
    int attempts = 0;
    for (int s = 0; attempts < budget; ++s)
        for (int a = 0; a <= s && attempts < budget; ++a) {
            int p = 1 << a, r = 1 << (s - a);
            ++attempts;
            try {
                std::vector<SquareMatrix> letters;
                for (const SquareMatrix& x : gamma.letters()) letters.push_back(x.pow(p));
                SemigroupGens gp(letters, gamma.is_group(), 1);
                AnosovRegions reg = anosov_regions(gp, depth);
                SquareMatrix g = proximal_matrix(reg.v0, reg.n0, mu);
                PingPongConfig cfg = anosov_config(reg, gp, 1, g, r);
                CertifyReport rep = certify_report(cfg);
                if (rep.ok) {
                    AnosovResult res;
                    res.g = g;
                    res.r = r;
                    res.gamma_power = p;
                    res.attempts = attempts;
                    res.regions = reg;
                    res.config = cfg;
                    res.cert = rep.cert;
                    return res;
                }
            } catch (const Error& e) {
                // powers past double range count as failed attempts
                if (e.code() != ErrorCode::Singular && e.code() != ErrorCode::Numerical &&
                    e.code() != ErrorCode::Degenerate)
                    throw;
            }
        }
    throw Error(ErrorCode::Budget, "no (power, r) pair certified within " + std::to_string(budget) + " attempts");
}

}  // namespace pplab
