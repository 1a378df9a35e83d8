#pragma once

#include <cmath>
#include <fstream>
#include <string>

#include "pingpong_lab/linalg.hpp"
#include "pingpong_lab/random.hpp"

namespace pplab::testing {

inline SquareMatrix diag(std::initializer_list<double> v) {
    RVec d(static_cast<int>(v.size()));
    int i = 0;
    for (double x : v) d(i++) = x;
    return SquareMatrix::real(d.asDiagonal().toDenseMatrix());
}

inline SquareMatrix real2(double a, double b, double c, double e) {
    RMat m(2, 2);
    m << a, b, c, e;
    return SquareMatrix::real(m);
}

inline SquareMatrix rotation(double t) { return real2(std::cos(t), -std::sin(t), std::sin(t), std::cos(t)); }

// Random element normalized to |det| = 1.
inline SquareMatrix random_sl(Rng& rng, int d, double decades = 1.0) {
    RandomElement e = random_element(rng, d, Field::Real, decades);
    RVec s = e.sigma / std::exp(e.sigma.array().log().mean());
    return element_from_factors(e.k1, s, e.k2, Field::Real).g;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Distance between the spans of two orthonormal frames.
inline double subspace_dist(const CMat& a, const CMat& b) {
    return op_norm(a * a.adjoint() - b * b.adjoint());
}

inline nlohmann::json load_json(const std::string& rel) {
    std::ifstream f(std::string(PPLAB_SOURCE_DIR) + "/" + rel);
    if (!f) throw std::runtime_error("cannot open " + rel);
    return nlohmann::json::parse(f);
}

}  // namespace pplab::testing
