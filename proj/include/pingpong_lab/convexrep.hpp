#pragma once

#include <optional>
#include <vector>

#include "pingpong_lab/estimates.hpp"
#include "pingpong_lab/pingpong.hpp"

namespace pplab {

enum class ConvexKind { Ellipsoid, PDCone, SumCone, Ball };

// A convex domain in P(R^n). Ellipsoid: x^T J x < 0 for a form of signature
// (n-1, 1). PDCone: positive definite matrices in Sym_d coordinates. SumCone:
// (PD part) + U on Sym_d + R^extra, open but not properly convex. Ball: a cap.
struct ConvexDomainSpec {
    ConvexKind kind = ConvexKind::Ball;
    int ambient = 0;
    RMat form;          // Ellipsoid
    int sym_d = 0;      // PDCone, SumCone
    int extra = 0;      // SumCone: dim U
    BallRegion ball;    // Ball
    std::optional<Hyperplane> witness;  // misses the closure; absent for SumCone

    bool properly_convex() const { return witness.has_value(); }
    bool contains(const CVec& x) const;
    // Exact for Ellipsoid (g^T J g proportional to J); sampled for the cones.
    bool preserved_by(const SquareMatrix& g, double tol = 1e-9) const;
    nlohmann::json to_json() const;
};

ConvexDomainSpec klein_disk();  // x^2 + y^2 < z^2
ConvexDomainSpec pd_cone(int d);
ConvexDomainSpec sum_cone(int d, int extra);
ConvexDomainSpec ball_domain(const BallRegion& r);

inline int sym_dim(int d) { return d * (d + 1) / 2; }
inline int rep_dim(int d) { return sym_dim(d) * sym_dim(d) + 1; }

struct RepMargins {
    double w_inclusion = 0.0;  // w C1 and w^{-1} C1 inside C2
    double disjoint = 0.0;     // d(C1, C2) less the radii, in angle
    double avoids_U = 0.0;     // angle from P(U) to C1 less its radius
    bool ok() const { return w_inclusion > 0.0 && disjoint > 0.0 && avoids_U > 0.0; }
};

struct RepPair {
    int d = 2, N = 9, m = 10;
    double eta = 0.25;
    SquareMatrix w, w_inv;   // already raised to the chosen power
    double lambda = 0.0;     // eigenvalue of w on its attracting axis
    int power = 0;
    BallRegion C1, C2;
    double gap_threshold = 0.0;  // on sigma_1 of the phi_d image
    RepMargins margins;
    nlohmann::json to_json() const;
    static RepPair from_json(const nlohmann::json& j);
};

RepMargins rep_margins(const RepPair& p);

// budget: number of doublings of the power of w.
RepPair build_rep_pair(int d, double eta, int budget = 40);

SquareMatrix rho1(const RepPair& p, const SquareMatrix& g);
SquareMatrix rho2(const RepPair& p, const SquareMatrix& g);
inline SquareMatrix rho(const RepPair& p, int side, const SquareMatrix& g) { return side == 1 ? rho1(p, g) : rho2(p, g); }
// Throws Precondition unless each syllable has det 1.
SquareMatrix apply_rep(const RepPair& p, const ReducedWord& w);

struct LetterCheck {
    int side = 1, letter = 1, power = 1;
    double sigma_phi = 0.0;   // sigma_1 of the phi_d image
    double inclusion = 0.0;   // rho_i(g) C_{3-i} in C_i, angular margin
    double norm_slack = 0.0;  // min over centers of log||rho_i(g)v|| - (1-eta) log sigma_phi
    bool ok() const { return inclusion > 0.0 && norm_slack > 0.0; }
};

LetterCheck check_letter(const RepPair& p, int side, const SquareMatrix& g);

// Raise every letter to the least power 2^j with sigma_phi >= gap_threshold
// whose letter-level checks pass (for the inverse too on group sides).
struct AdmittedGens {
    SemigroupGens gens;
    std::vector<int> powers;
    std::vector<LetterCheck> checks;
};
AdmittedGens admit_letters(const RepPair& p, const SemigroupGens& gens, int side, int budget = 20);

EstimateReport verify_t15(const RepPair& p, const SemigroupGens& gens1, const SemigroupGens& gens2, int max_syllables,
                          double eps, int max_syllable_len = 1);

struct XiFrontierPoint {
    double L = 0.0;
    int count = 0;
    double eps = 0.0;  // min over admitted g of inf_{x in K} dist(x, P(Xi_k(g)))
};
struct XiFrontier {
    int k = 1;
    std::vector<XiFrontierPoint> points;
    bool positive_at_top() const { return !points.empty() && points.back().eps > 0.0; }
};
XiFrontier check_xi_avoids_compact(const ConvexDomainSpec& domain, const BallRegion& K,
                                   const std::vector<SquareMatrix>& sample, const std::vector<double>& ladder,
                                   int k = 1);

struct AnosovRegions {
    CVec v0, n0;  // attracting point and repelling-hyperplane normal of g
    double eps = 0.0;
    BallRegion U_gamma, V_gamma;  // ball-union approximations of N_eps(Lambda_1), N_eps(Lambda_{d-1})
};
AnosovRegions anosov_regions(const SemigroupGens& gamma, int depth);

// g = I + (mu - 1) v0 n0^* / <v0, n0>: eigenvalue mu on v0, identity on n0^perp.
SquareMatrix proximal_matrix(const CVec& v0, const CVec& n0, double mu);

// Ping-pong data for <gamma^p, g^r>; r and p must be positive. The regions
// should come from anosov_regions of the powered letters.
PingPongConfig anosov_config(const AnosovRegions& reg, const SemigroupGens& gamma, int p, const SquareMatrix& g, int r);

struct AnosovResult {
    SquareMatrix g;
    int r = 0, gamma_power = 0, attempts = 0;
    AnosovRegions regions;
    PingPongConfig config;
    PingPongCertificate cert;
    nlohmann::json to_json() const;
};
// budget: number of (p, r) attempts; throws Budget when none certifies.
AnosovResult anosov_semigroup_search(const SemigroupGens& gamma, int depth, int budget, double mu = 2.0);

}  // namespace pplab
