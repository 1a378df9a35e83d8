#pragma once

#include <string>
#include <vector>

#include "pingpong_lab/projgeom.hpp"
#include "pingpong_lab/words.hpp"

namespace pplab {

struct PingPongConfig {
    SemigroupGens gamma1, gamma2;
    BallRegion U1, U2, V1, V2;  // U in P, V in Gr (balls about hyperplane normals)

    const SemigroupGens& gens(int side) const { return side == 1 ? gamma1 : gamma2; }
    const BallRegion& U(int side) const { return side == 1 ? U1 : U2; }
    const BallRegion& V(int side) const { return side == 1 ? V1 : V2; }
    int dim() const { return gamma1.dim(); }

    void validate() const;
    nlohmann::json to_json() const;
    static PingPongConfig from_json(const nlohmann::json& j);
};

// Certified margins must clear this, not merely be positive.
constexpr double kCertifyMargin = 1e-6;

struct LetterMargin {
    int side = 1;
    int letter = 1;   // code, see SemigroupGens
    double U = 0.0;   // worst margin of x(source) in target over the point conditions
    double V = 0.0;   // same for x^{-1} on hyperplanes
    std::string worst_region;  // region name of the worst condition
};

struct PingPongCertificate {
    double epsilon = 0.0;
    double theta = 0.0;
    double M = 0.0;
    int dim = 0;
    CVec x1, x2, y1, y2;  // basepoints; y_i are hyperplane normals
    std::vector<LetterMargin> inclusion_margins;
    double min_margin() const;
    nlohmann::json to_json() const;
};

// Full outcome of a certification attempt; certify() throws when !ok.
struct CertifyReport {
    bool ok = false;
    std::string reason;
    int failed_side = 0, failed_letter = 0;
    std::string failed_region;
    PingPongCertificate cert;
    nlohmann::json to_json() const;
};

class CertificationFailure : public Error {
public:
    explicit CertificationFailure(CertifyReport r);
    const CertifyReport& report() const { return report_; }

private:
    CertifyReport report_;
};

// Region pieces used for group sides: balls of U_i (resp. V_i) containing the
// attracting direction of the letter (resp. of its adjoint on normals).
std::vector<int> letter_piece(const BallRegion& region, const CVec& attractor);

CertifyReport certify_report(const PingPongConfig& cfg);
PingPongCertificate certify(const PingPongConfig& cfg);

double gap_threshold(double epsilon, double theta, int d);
inline double gap_threshold(const PingPongCertificate& c) { return gap_threshold(c.epsilon, c.theta, c.dim); }
std::vector<int> exceptional_letters(const SemigroupGens& gens, const PingPongCertificate& cert);

struct XiCheck {
    bool applicable = false;  // gap >= M
    double gap = 0.0;
    double dist_U = 0.0;  // d_P(Xi_1(g), U_first)
    double dist_V = 0.0;  // d_Gr(Xi_{d-1}(g^{-1}), V_last)
    bool pass(double eps) const { return !applicable || (dist_U <= eps / 8.0 && dist_V <= eps / 8.0); }
};
XiCheck check_xi_attraction(const Tracked& g, const PingPongCertificate& cert, const PingPongConfig& cfg,
                            int first_side, int last_side);
XiCheck check_xi_attraction(const ReducedWord& w, const PingPongCertificate& cert, const PingPongConfig& cfg);

// Direct check that the word maps the closure of U_j (j opposite to its last
// letter) into U_i (i the side of its first letter). Returns the margin.
double word_inclusion_margin(const ReducedWord& w, const PingPongConfig& cfg);

}  // namespace pplab
