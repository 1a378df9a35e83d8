#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "pingpong_lab/linalg.hpp"

namespace pplab {

using Rng = std::mt19937_64;

// Engine keyed by (seed, stream ids); the same key always gives the same stream.
Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream);

double uniform(Rng& rng, double lo, double hi);
double gaussian(Rng& rng);

CVec random_unit(Rng& rng, int d, Field field);
// Haar-distributed orthogonal (Real) or unitary (Complex) matrix.
CMat haar_unitary(Rng& rng, int d, Field field);

// g = k1 diag(sigma) k2 with the factors kept, so exact inverses and
// spectra are available without a second decomposition.
struct RandomElement {
    SquareMatrix g;
    SquareMatrix g_inv;
    CMat k1, k2;
    RVec sigma;  // non-increasing
};

RandomElement element_from_factors(const CMat& k1, const RVec& sigma, const CMat& k2, Field field);
// log10 of singular values uniform in [-decades, decades].
RandomElement random_element(Rng& rng, int d, Field field, double decades);

}  // namespace pplab
