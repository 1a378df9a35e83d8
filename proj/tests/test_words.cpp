#include <cmath>
#include <set>

#include "doctest.h"
#include "pingpong_lab/words.hpp"
#include "test_util.hpp"

using namespace pplab;
using namespace pplab::testing;

static SemigroupGens one(const SquareMatrix& m, bool group, int label) { return SemigroupGens({m}, group, label); }

TEST_CASE("enumeration counts") {
    auto a = one(diag({2.0, 0.5}), false, 1);
    auto b = one(real2(1, 1, 0, 1), false, 2);
    auto w2 = enumerate_reduced(a, b, 2, 1);
    REQUIRE(w2.size() == 4);
    CHECK(w2[0].id() == "[[1,[1]]]");
    CHECK(w2[1].id() == "[[2,[1]]]");
    CHECK(w2[2].id() == "[[1,[1]],[2,[1]]]");
    CHECK(w2[3].id() == "[[2,[1]],[1,[1]]]");
    CHECK(enumerate_reduced(a, b, 3, 1).size() == 6);

    SemigroupGens a2({diag({2.0, 0.5}), diag({3.0, 1.0 / 3.0})}, false, 1);
    SemigroupGens b2({real2(1, 1, 0, 1), real2(1, 0, 1, 1)}, false, 2);
    CHECK(enumerate_reduced(a2, b2, 2, 1).size() == 12);
    CHECK(count_reduced(a2, b2, 2, 1) == 12);
}

TEST_CASE("closed-form counts for single-letter alphabets") {
    auto a = one(diag({2.0, 0.5}), true, 1);
    auto b = one(rotation(0.7) * diag({3.0, 1.0 / 3.0}), true, 2);
    for (int L = 1; L <= 3; ++L)
        for (int n = 1; n <= 5; ++n) {
            // 2L syllables per side (a^{+-k}), alternating words 2 * sum s^n
            double s = 2.0 * L, expect = 0.0;
            for (int k = 1; k <= n; ++k) expect += 2.0 * std::pow(s, k);
            CHECK(enumerate_reduced(a, b, n, L).size() == static_cast<size_t>(expect));
        }
}

TEST_CASE("enumeration is duplicate-free, reduced and idempotent under reduction") {
    SemigroupGens a({diag({2.0, 0.5}), rotation(0.3) * diag({2.0, 0.5})}, true, 1);
    auto b = one(real2(1, 1, 0, 1), true, 2);
    std::set<std::string> seen;
    for_each_reduced(a, b, 3, 2, [&](const ReducedWord& w) {
        CHECK(seen.insert(w.id()).second);
        for (int i = 1; i < w.syllable_count(); ++i) CHECK(w.syllables()[i].side != w.syllables()[i - 1].side);
        CHECK(reduce_symbolic(w.syllables(), true, true) == w.syllables());
    });
    CHECK(seen.size() == count_reduced(a, b, 3, 2));
}

TEST_CASE("overflow guard") {
    SemigroupGens a({diag({2.0, 0.5}), rotation(0.3) * diag({2.0, 0.5}), rotation(0.9) * diag({2.0, 0.5})}, true, 1);
    SemigroupGens b({rotation(0.5) * diag({3.0, 1 / 3.0}), rotation(1.1) * diag({3.0, 1 / 3.0})}, true, 2);
    try {
        enumerate_reduced(a, b, 8, 4);
        FAIL("expected overflow");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Overflow);
    }
}

TEST_CASE("evaluation and length") {
    auto a = one(diag({2.0, 0.5}), false, 1);
    auto b = one(real2(1, 1, 0, 1), false, 2);
    auto single = ReducedWord::build(a, b, {{1, {1}}});
    CHECK(word_length(single) == 1);
    CHECK((evaluate(single).entries() - a.matrix(1).entries()).norm() == 0.0);
    auto ab = ReducedWord::build(a, b, {{1, {1}}, {2, {1}}});
    CHECK(word_length(ab) == 2);
    CHECK((evaluate(ab).entries() - real2(2, 2, 0, 0.5).entries()).norm() < 1e-15);
}

TEST_CASE("concatenation evaluates to the product; cache matches recomputation") {
    SemigroupGens a({diag({2.0, 0.5}), rotation(0.4) * diag({1.5, 1 / 1.5})}, true, 1);
    auto b = one(rotation(1.2) * diag({3.0, 1 / 3.0}), true, 2);
    for (std::uint64_t i = 0; i < 50; ++i) {
        auto w1 = sample_reduced(a, b, 99, i, 3, 2);
        auto w2 = sample_reduced(a, b, 99, 1000 + i, 3, 2);
        auto s = w1.syllables();
        s.insert(s.end(), w2.syllables().begin(), w2.syllables().end());
        if (w1.syllables().back().side == w2.syllables().front().side) continue;
        auto w = ReducedWord::build(a, b, s);
        CMat prod = w1.tracked().g * w2.tracked().g;
        CHECK(op_norm(w.tracked().g - prod) <= 1e-12 * op_norm(prod));
        CMat scratch = CMat::Identity(2, 2);
        for (const auto& syl : w.syllables())
            for (int c : syl.letters) scratch = scratch * (syl.side == 1 ? a : b).matrix(c).entries();
        CHECK(op_norm(w.tracked().g - scratch) <= 1e-12 * op_norm(scratch));
        CHECK(op_norm(w.tracked().inv * w.tracked().g - CMat::Identity(2, 2)) <= 1e-9);
    }
}

TEST_CASE("sampling is reproducible from the seed") {
    auto a = one(diag({2.0, 0.5}), true, 1);
    auto b = one(rotation(1.0) * diag({3.0, 1 / 3.0}), true, 2);
    CHECK(sample_reduced(a, b, 5, 17, 4, 3).id() == sample_reduced(a, b, 5, 17, 4, 3).id());
    CHECK(sample_reduced(a, b, 5, 17, 4, 3).syllable_count() == 4);
}

TEST_CASE("reduction rules") {
    auto a = one(diag({2.0, 0.5}), true, 1);
    auto b = one(real2(1, 1, 0, 1), true, 2);
    auto w = ReducedWord::build(a, b, {{1, {1, 1, -1}}, {1, {1}}, {2, {1}}});
    CHECK(w.id() == "[[1,[1,1]],[2,[1]]]");
    CHECK_THROWS_AS(ReducedWord::build(a, b, {{1, {1, -1}}}), Error);
    // torsion: a rotation by pi has square -I, a quarter turn has order 4
    auto r = one(rotation(M_PI / 2), true, 1);
    CHECK_THROWS_AS(ReducedWord::build(r, b, {{1, {1, 1, 1, 1}}}), Error);
    auto s = one(diag({2.0, 0.5}), false, 1);
    CHECK_THROWS_AS(ReducedWord::build(s, b, {{1, {-1}}}), Error);
    CHECK_THROWS_AS(SemigroupGens({SquareMatrix::identity(2)}, false, 1), Error);
}

TEST_CASE("gap helpers") {
    Tracked t = Tracked::of(diag({4.0, 1.0, 0.25}));
    CHECK(gap12(t) == doctest::Approx(4.0));
    CHECK(gap1d(t) == doctest::Approx(16.0));
    CHECK(ell_ratio12(t) == doctest::Approx(4.0));
    // long products keep accurate gaps through the carried wedge square
    auto a = one(diag({10.0, 0.1}), false, 1);
    Tracked p = Tracked::identity(2);
    for (int i = 0; i < 20; ++i) p = p * a.tracked(1);
    CHECK(gap12(p) == doctest::Approx(1e40).epsilon(1e-12));
}

TEST_CASE("finite index embedding generators") {
    auto a = one(diag({2.0, 0.5}), true, 1);
    auto b = one(rotation(M_PI / 4) * diag({2.0, 0.5}) * rotation(-M_PI / 4), true, 2);
    auto f1 = finite_index_embedding(a, b, {1}, {1}, 1, 0, 0);
    REQUIRE(f1.size() == 1);
    SquareMatrix expect = b.matrix(1) * a.matrix(1) * b.matrix(-1);
    CHECK(op_norm(f1[0].generators[0].entries() - expect.entries()) < 1e-13);

    auto f3 = finite_index_embedding(a, b, {1}, {1}, 1, 1, 1);
    REQUIRE(f3.size() == 3);
    SquareMatrix e2 = a.matrix(1) * b.matrix(1) * a.matrix(-1);
    SquareMatrix e3 = a.matrix(1).pow(2) * b.matrix(1) * a.matrix(1).pow(-2);
    CHECK(op_norm(f3[1].generators[0].entries() - e2.entries()) < 1e-12);
    CHECK(op_norm(f3[2].generators[0].entries() - e3.entries()) < 1e-12);

    auto rot = one(rotation(2 * M_PI / 5), true, 1);
    try {
        finite_index_embedding(rot, b, {1}, {1}, 1, 0, 0);
        FAIL("expected torsion refusal");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Torsion);
    }
}

TEST_CASE("embedded families do not collapse on short words") {
    const double lam = 4.0;
    auto a = one(diag({lam, 1 / lam}), true, 1);
    auto b = one(rotation(M_PI / 4) * diag({lam, 1 / lam}) * rotation(-M_PI / 4), true, 2);
    auto fam = finite_index_embedding(a, b, {1}, {1}, 1, 1, 1);
    std::vector<SquareMatrix> gens;
    for (const auto& f : fam) gens.insert(gens.end(), f.generators.begin(), f.generators.end());
    auto words = free_words(gens, 3);
    CHECK(words.size() == 6 + 30 + 150);
    std::vector<CMat> mats;
    for (const auto& w : words) mats.push_back(w.value.entries());
    CHECK(min_pairwise_distance(mats) > 1e-6);
}
