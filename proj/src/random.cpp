#include "pingpong_lab/random.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace pplab {

Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
    std::vector<std::uint32_t> words;
    auto push = [&](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(seed);
    for (auto s : stream) push(s);
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

// Hand-rolled transforms so streams do not depend on the standard library's
// distribution implementations.
double uniform(Rng& rng, double lo, double hi) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

double gaussian(Rng& rng) {
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform(rng, 0.0, 1.0);
    double u2 = uniform(rng, 0.0, 1.0);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

CVec random_unit(Rng& rng, int d, Field field) {
    CVec v(d);
    for (int i = 0; i < d; ++i) {
        double re = gaussian(rng);
        double im = field == Field::Complex ? gaussian(rng) : 0.0;
        v(i) = cplx(re, im);
    }
    return v / v.norm();
}

CMat haar_unitary(Rng& rng, int d, Field field) {
    CMat z(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            z(i, j) = cplx(gaussian(rng), field == Field::Complex ? gaussian(rng) : 0.0);
    Eigen::HouseholderQR<CMat> qr(z);
    CMat q = qr.householderQ() * CMat::Identity(d, d);
    CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        cplx rii = r(i, i);
        cplx ph = std::abs(rii) > 0.0 ? rii / std::abs(rii) : cplx(1.0, 0.0);
        q.col(i) *= ph;
    }
    if (field == Field::Real) q = q.real().cast<cplx>();
    return q;
}

RandomElement element_from_factors(const CMat& k1, const RVec& sigma, const CMat& k2, Field field) {
    RandomElement e;
    e.k1 = k1;
    e.k2 = k2;
    e.sigma = sigma;
    CMat g = k1 * sigma.cast<cplx>().asDiagonal() * k2;
    CMat gi = k2.adjoint() * sigma.cwiseInverse().cast<cplx>().asDiagonal() * k1.adjoint();
    if (field == Field::Real) {
        g = g.real().cast<cplx>();
        gi = gi.real().cast<cplx>();
    }
    e.g = SquareMatrix(g, field);
    e.g_inv = SquareMatrix(gi, field);
    return e;
}

RandomElement random_element(Rng& rng, int d, Field field, double decades) {
    CMat k1 = haar_unitary(rng, d, field);
    CMat k2 = haar_unitary(rng, d, field);
    RVec s(d);
    for (int i = 0; i < d; ++i) s(i) = std::pow(10.0, uniform(rng, -decades, decades));
    std::sort(s.data(), s.data() + d, [](double a, double b) { return a > b; });
    return element_from_factors(k1, s, k2, field);
}

}  // namespace pplab
