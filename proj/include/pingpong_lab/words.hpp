#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pingpong_lab/linalg.hpp"

namespace pplab {

// A matrix carried together with its inverse and its wedge square, each
// formed as a product of per-letter factors. Gaps of long products are read
// off these factors instead of a single SVD of an ill-conditioned product.
struct Tracked {
    CMat g, inv, wedge;
    static Tracked identity(int d);
    static Tracked of(const SquareMatrix& m);
    Tracked operator*(const Tracked& o) const;
    int dim() const { return static_cast<int>(g.rows()); }
};

double sigma1(const Tracked& t);
// sigma_1 / sigma_2 as sigma_1(g)^2 / sigma_1(wedge^2 g).
double gap12(const Tracked& t);
// sigma_1 / sigma_d as sigma_1(g) sigma_1(g^{-1}).
double gap1d(const Tracked& t);
// l_1 / l_2 as l_1(g)^2 / l_1(wedge^2 g).
double ell_ratio12(const Tracked& t);

// Letter codes: +(i+1) is letter i, -(i+1) its inverse (groups only).
class SemigroupGens {
public:
    SemigroupGens() = default;
    SemigroupGens(std::vector<SquareMatrix> letters, bool is_group, int label);

    int size() const { return static_cast<int>(letters_.size()); }
    bool is_group() const { return is_group_; }
    int label() const { return label_; }
    int dim() const { return letters_.front().dim(); }
    Field field() const { return letters_.front().field(); }
    const std::vector<SquareMatrix>& letters() const { return letters_; }

    void check_code(int code) const;
    const SquareMatrix& matrix(int code) const;
    const Tracked& tracked(int code) const;
    // 1, -1, 2, -2, ... for groups; 1, 2, ... for semigroups.
    std::vector<int> alphabet() const;

    nlohmann::json to_json() const;
    static SemigroupGens from_json(const nlohmann::json& j, int label);

private:
    std::vector<SquareMatrix> letters_, inverses_;
    std::vector<Tracked> tracked_, tracked_inv_;
    bool is_group_ = false;
    int label_ = 1;
};

struct Syllable {
    int side = 1;  // 1 or 2
    std::vector<int> letters;
    bool operator==(const Syllable&) const = default;
};

// Merge same-side neighbours, cancel x x^{-1} on group sides, drop empty
// syllables; repeated until stable.
std::vector<Syllable> reduce_symbolic(std::vector<Syllable> s, bool group1, bool group2);

Tracked evaluate_syllable(const SemigroupGens& gens, const std::vector<int>& letters);

class ReducedWord {
public:
    static ReducedWord build(const SemigroupGens& g1, const SemigroupGens& g2, std::vector<Syllable> syllables,
                             double tol = kDefaultTol);

    const std::vector<Syllable>& syllables() const { return syllables_; }
    int syllable_count() const { return static_cast<int>(syllables_.size()); }
    int length() const;
    const Tracked& tracked() const { return eval_; }
    const std::vector<Tracked>& syllable_evals() const { return syl_eval_; }
    SquareMatrix evaluate() const;

    nlohmann::json to_json() const;
    std::string id() const;  // compact form of to_json()

private:
    std::vector<Syllable> syllables_;
    std::vector<Tracked> syl_eval_;
    Tracked eval_;
    Field field_ = Field::Real;
};

inline int word_length(const ReducedWord& w) { return w.length(); }
inline SquareMatrix evaluate(const ReducedWord& w) { return w.evaluate(); }

constexpr std::uint64_t kMaxEnumeratedWords = 10'000'000;

// Nonidentity reduced syllables of one side, ordered by length then lexicographically.
std::vector<std::vector<int>> side_syllables(const SemigroupGens& gens, int max_len, double tol = kDefaultTol);

std::uint64_t count_reduced(const SemigroupGens& g1, const SemigroupGens& g2, int max_syllables, int max_syllable_len);

// Length-lexicographic: by syllable count, then starting side, then by the
// syllable indices of side_syllables from left to right.
void for_each_reduced(const SemigroupGens& g1, const SemigroupGens& g2, int max_syllables, int max_syllable_len,
                      const std::function<void(const ReducedWord&)>& fn);
std::vector<ReducedWord> enumerate_reduced(const SemigroupGens& g1, const SemigroupGens& g2, int max_syllables,
                                           int max_syllable_len);

ReducedWord sample_reduced(const SemigroupGens& g1, const SemigroupGens& g2, std::uint64_t seed,
                           std::uint64_t index, int syllables, int syllable_len);

struct GeneratorFamily {
    std::string label;
    std::vector<SquareMatrix> generators;
};

// gamma2^i G1' gamma2^{-i} (i = 1..r), gamma1^j G2' gamma1^{-j} (j = 1..s),
// gamma1^{s+k} gamma2 gamma1^{-s-k} (k = 1..q).
std::vector<GeneratorFamily> finite_index_embedding(const SemigroupGens& gens1p, const SemigroupGens& gens2p,
                                                    const std::vector<int>& gamma1, const std::vector<int>& gamma2,
                                                    int r, int s, int q);

// Throws Torsion unless g has spectral radius > 1 or g^k != I for k <= 12.
void require_infinite_order(const SquareMatrix& g, double tol = kDefaultTol);

// Freely reduced words of length 1..max_len in the given matrices treated as
// free generators (with inverses), with their evaluations.
struct FreeWord {
    std::vector<int> codes;
    SquareMatrix value;
};
std::vector<FreeWord> free_words(const std::vector<SquareMatrix>& gens, int max_len);

// Min operator-norm distance over all pairs; +inf for fewer than two.
double min_pairwise_distance(const std::vector<CMat>& mats);

}  // namespace pplab
