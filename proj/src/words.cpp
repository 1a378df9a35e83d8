#include "pingpong_lab/words.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pingpong_lab/random.hpp"

namespace pplab {

Tracked Tracked::identity(int d) {
    Tracked t;
    t.g = CMat::Identity(d, d);
    t.inv = CMat::Identity(d, d);
    int n = d * (d - 1) / 2;
    t.wedge = CMat::Identity(n, n);
    return t;
}

Tracked Tracked::of(const SquareMatrix& m) {
    Tracked t;
    t.g = m.entries();
    t.inv = m.inverse().entries();
    if (m.dim() >= 2) {
        t.wedge = wedge_square(m.entries());
    } else {
        t.wedge = CMat(0, 0);
    }
    return t;
}

Tracked Tracked::operator*(const Tracked& o) const {
    Tracked t;
    t.g = g * o.g;
    t.inv = o.inv * inv;
    t.wedge = wedge * o.wedge;
    return t;
}

double sigma1(const Tracked& t) { return op_norm(t.g); }

double gap12(const Tracked& t) {
    if (t.dim() < 2) throw Error(ErrorCode::Dimension, "gap needs d >= 2");
    double s1 = op_norm(t.g);
    return s1 * s1 / op_norm(t.wedge);
}

double gap1d(const Tracked& t) { return op_norm(t.g) * op_norm(t.inv); }

double ell_ratio12(const Tracked& t) {
    if (t.dim() < 2) throw Error(ErrorCode::Dimension, "eigenvalue ratio needs d >= 2");
    double l1 = eigenvalue_moduli(t.g)(0);
    return l1 * l1 / eigenvalue_moduli(t.wedge)(0);
}

SemigroupGens::SemigroupGens(std::vector<SquareMatrix> letters, bool is_group, int label)
    : letters_(std::move(letters)), is_group_(is_group), label_(label) {
    if (letters_.empty()) throw Error(ErrorCode::Input, "generating set must be nonempty");
    if (label_ != 1 && label_ != 2) throw Error(ErrorCode::Input, "label must be 1 or 2");
    const int d = letters_.front().dim();
    for (size_t i = 0; i < letters_.size(); ++i) {
        const auto& m = letters_[i];
        if (m.dim() != d) throw Error(ErrorCode::Dimension, "letters of different dimension");
        m.require_invertible("letter");
        if (op_norm(m.entries() - CMat::Identity(d, d)) <= kDefaultTol)
            throw Error(ErrorCode::Input, "letter " + std::to_string(i + 1) + " is the identity");
        inverses_.push_back(m.inverse());
        tracked_.push_back(Tracked::of(m));
        tracked_inv_.push_back(Tracked::of(inverses_.back()));
    }
}

void SemigroupGens::check_code(int code) const {
    int i = std::abs(code) - 1;
    if (code == 0 || i >= size()) throw Error(ErrorCode::Input, "letter code out of range");
    if (code < 0 && !is_group_) throw Error(ErrorCode::Input, "inverse letter in a semigroup");
}

const SquareMatrix& SemigroupGens::matrix(int code) const {
    check_code(code);
    return code > 0 ? letters_[code - 1] : inverses_[-code - 1];
}

const Tracked& SemigroupGens::tracked(int code) const {
    check_code(code);
    return code > 0 ? tracked_[code - 1] : tracked_inv_[-code - 1];
}

std::vector<int> SemigroupGens::alphabet() const {
    std::vector<int> a;
    for (int i = 1; i <= size(); ++i) {
        a.push_back(i);
        if (is_group_) a.push_back(-i);
    }
    return a;
}

nlohmann::json SemigroupGens::to_json() const {
    nlohmann::json ls = nlohmann::json::array();
    for (const auto& m : letters_) ls.push_back(matrix_to_json(m));
    return {{"letters", ls}, {"is_group", is_group_}};
}

SemigroupGens SemigroupGens::from_json(const nlohmann::json& j, int label) {
    if (!j.is_object() || !j.contains("letters")) throw Error(ErrorCode::Input, "generators need 'letters'");
    std::vector<SquareMatrix> ls;
    for (const auto& m : j.at("letters")) ls.push_back(matrix_from_json(m));
    return SemigroupGens(std::move(ls), j.value("is_group", false), label);
}

static std::vector<int> free_reduce(const std::vector<int>& letters) {
    std::vector<int> out;
    for (int c : letters) {
        if (!out.empty() && out.back() == -c)
            out.pop_back();
        else
            out.push_back(c);
    }
    return out;
}

std::vector<Syllable> reduce_symbolic(std::vector<Syllable> s, bool group1, bool group2) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Syllable> out;
        for (auto& syl : s) {
            if (syl.side != 1 && syl.side != 2) throw Error(ErrorCode::Input, "syllable side must be 1 or 2");
            if (!out.empty() && out.back().side == syl.side) {
                out.back().letters.insert(out.back().letters.end(), syl.letters.begin(), syl.letters.end());
                changed = true;
            } else {
                out.push_back(std::move(syl));
            }
        }
        std::vector<Syllable> kept;
        for (auto& syl : out) {
            bool group = syl.side == 1 ? group1 : group2;
            if (group) {
                auto r = free_reduce(syl.letters);
                if (r.size() != syl.letters.size()) changed = true;
                syl.letters = std::move(r);
            }
            if (syl.letters.empty()) {
                changed = true;
                continue;
            }
            kept.push_back(std::move(syl));
        }
        s = std::move(kept);
    }
    return s;
}

Tracked evaluate_syllable(const SemigroupGens& gens, const std::vector<int>& letters) {
    Tracked t = Tracked::identity(gens.dim());
    for (int c : letters) t = t * gens.tracked(c);
    return t;
}

static bool is_identity(const CMat& m, double tol) {
    return op_norm(m - CMat::Identity(m.rows(), m.cols())) <= tol * std::max(1.0, op_norm(m));
}

ReducedWord ReducedWord::build(const SemigroupGens& g1, const SemigroupGens& g2, std::vector<Syllable> syllables,
                               double tol) {
    if (g1.dim() != g2.dim()) throw Error(ErrorCode::Dimension, "generating sets of different dimension");
    auto reduced = reduce_symbolic(std::move(syllables), g1.is_group(), g2.is_group());
    if (reduced.empty()) throw Error(ErrorCode::Input, "word reduces to the empty word");
    ReducedWord w;
    w.syllables_ = std::move(reduced);
    w.eval_ = Tracked::identity(g1.dim());
    w.field_ = (g1.field() == Field::Real && g2.field() == Field::Real) ? Field::Real : Field::Complex;
    for (const auto& syl : w.syllables_) {
        const SemigroupGens& gens = syl.side == 1 ? g1 : g2;
        Tracked t = evaluate_syllable(gens, syl.letters);
        if (is_identity(t.g, tol)) throw Error(ErrorCode::Input, "a syllable evaluates to the identity");
        w.eval_ = w.eval_ * t;
        w.syl_eval_.push_back(std::move(t));
    }
    return w;
}

int ReducedWord::length() const {
    int n = 0;
    for (const auto& s : syllables_) n += static_cast<int>(s.letters.size());
    return n;
}

SquareMatrix ReducedWord::evaluate() const {
    CMat g = eval_.g;
    if (field_ == Field::Real) g = g.real().cast<cplx>();
    return SquareMatrix(g, field_);
}

nlohmann::json ReducedWord::to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& s : syllables_) out.push_back({s.side, s.letters});
    return out;
}

std::string ReducedWord::id() const { return to_json().dump(); }

std::vector<std::vector<int>> side_syllables(const SemigroupGens& gens, int max_len, double tol) {
    std::vector<std::vector<int>> out;
    std::vector<std::vector<int>> layer{{}};
    const auto alpha = gens.alphabet();
    for (int len = 1; len <= max_len; ++len) {
        std::vector<std::vector<int>> next;
        for (const auto& prefix : layer)
            for (int c : alpha) {
                if (!prefix.empty() && prefix.back() == -c) continue;
                auto s = prefix;
                s.push_back(c);
                next.push_back(std::move(s));
            }
        for (const auto& s : next)
            if (!is_identity(evaluate_syllable(gens, s).g, tol)) out.push_back(s);
        layer = std::move(next);
    }
    return out;
}

// Closed-form count of syllables: k letters give k^L (semigroup) or
// 2k (2k-1)^{L-1} (group) reduced sequences of length L.
static double syllable_count_bound(const SemigroupGens& g, int max_len) {
    double k = g.size(), total = 0.0;
    for (int L = 1; L <= max_len; ++L)
        total += g.is_group() ? 2.0 * k * std::pow(2.0 * k - 1.0, L - 1) : std::pow(k, L);
    return total;
}

static double alternating_count(double s1, double s2, int max_syllables) {
    double total = 0.0;
    for (int n = 1; n <= max_syllables; ++n) {
        int a = (n + 1) / 2, b = n / 2;
        total += std::pow(s1, a) * std::pow(s2, b) + std::pow(s2, a) * std::pow(s1, b);
    }
    return total;
}

std::uint64_t count_reduced(const SemigroupGens& g1, const SemigroupGens& g2, int max_syllables,
                            int max_syllable_len) {
    double est = alternating_count(syllable_count_bound(g1, max_syllable_len),
                                   syllable_count_bound(g2, max_syllable_len), max_syllables);
    if (est > static_cast<double>(kMaxEnumeratedWords)) return static_cast<std::uint64_t>(std::min(est, 1e19));
    auto s1 = side_syllables(g1, max_syllable_len).size();
    auto s2 = side_syllables(g2, max_syllable_len).size();
    return static_cast<std::uint64_t>(alternating_count(static_cast<double>(s1), static_cast<double>(s2), max_syllables));
}

void for_each_reduced(const SemigroupGens& g1, const SemigroupGens& g2, int max_syllables, int max_syllable_len,
                      const std::function<void(const ReducedWord&)>& fn) {
    if (max_syllables < 1 || max_syllable_len < 1) throw Error(ErrorCode::Input, "enumeration bounds must be >= 1");
    if (g1.dim() != g2.dim()) throw Error(ErrorCode::Dimension, "generating sets of different dimension");
    std::uint64_t est = count_reduced(g1, g2, max_syllables, max_syllable_len);
    if (est > kMaxEnumeratedWords)
        throw Error(ErrorCode::Overflow, "enumeration would produce about " + std::to_string(est) + " words");
    const std::vector<std::vector<int>> syl[2] = {side_syllables(g1, max_syllable_len),
                                                  side_syllables(g2, max_syllable_len)};

    for (int n = 1; n <= max_syllables; ++n) {
        for (int start = 0; start < 2; ++start) {
            std::vector<size_t> radix(n);
            bool empty = false;
            for (int p = 0; p < n; ++p) {
                radix[p] = syl[(start + p) % 2].size();
                if (radix[p] == 0) empty = true;
            }
            if (empty) continue;
            std::vector<size_t> idx(n, 0);
            while (true) {
                std::vector<Syllable> s;
                for (int p = 0; p < n; ++p) {
                    int side = (start + p) % 2;
                    s.push_back({side + 1, syl[side][idx[p]]});
                }
                fn(ReducedWord::build(g1, g2, std::move(s)));
                int p = n - 1;
                while (p >= 0 && ++idx[p] == radix[p]) idx[p--] = 0;
                if (p < 0) break;
            }
        }
    }
}

std::vector<ReducedWord> enumerate_reduced(const SemigroupGens& g1, const SemigroupGens& g2, int max_syllables,
                                           int max_syllable_len) {
    std::vector<ReducedWord> out;
    for_each_reduced(g1, g2, max_syllables, max_syllable_len, [&](const ReducedWord& w) { out.push_back(w); });
    return out;
}

ReducedWord sample_reduced(const SemigroupGens& g1, const SemigroupGens& g2, std::uint64_t seed,
                           std::uint64_t index, int syllables, int syllable_len) {
    if (syllables < 1 || syllable_len < 1) throw Error(ErrorCode::Input, "sampling bounds must be >= 1");
    Rng rng = make_rng(seed, {0x776f7264ull, index});
    int side = (rng() & 1u) ? 2 : 1;
    std::vector<Syllable> out;
    for (int n = 0; n < syllables; ++n) {
        const SemigroupGens& gens = side == 1 ? g1 : g2;
        const auto alpha = gens.alphabet();
        for (int attempt = 0;; ++attempt) {
            int len = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(syllable_len));
            std::vector<int> letters;
            while (static_cast<int>(letters.size()) < len) {
                int c = alpha[rng() % alpha.size()];
                if (!letters.empty() && letters.back() == -c) continue;
                letters.push_back(c);
            }
            if (!is_identity(evaluate_syllable(gens, letters).g, kDefaultTol)) {
                out.push_back({side, letters});
                break;
            }
            if (attempt > 100) throw Error(ErrorCode::Torsion, "could not sample a nonidentity syllable");
        }
        side = 3 - side;
    }
    return ReducedWord::build(g1, g2, std::move(out));
}

void require_infinite_order(const SquareMatrix& g, double tol) {
    if (eigenvalue_moduli(g)(0) > 1.0 + tol) return;
    SquareMatrix p = g;
    for (int k = 1; k <= 12; ++k) {
        if (is_identity(p.entries(), tol)) throw Error(ErrorCode::Torsion, "element has order " + std::to_string(k));
        p = p * g;
    }
}

static SquareMatrix word_matrix(const SemigroupGens& gens, const std::vector<int>& w) {
    if (w.empty()) throw Error(ErrorCode::Input, "conjugating word must be nonempty");
    SquareMatrix m = gens.matrix(w.front());
    for (size_t i = 1; i < w.size(); ++i) m = m * gens.matrix(w[i]);
    return m;
}

std::vector<GeneratorFamily> finite_index_embedding(const SemigroupGens& gens1p, const SemigroupGens& gens2p,
                                                    const std::vector<int>& gamma1, const std::vector<int>& gamma2,
                                                    int r, int s, int q) {
    if (r < 0 || s < 0 || q < 0) throw Error(ErrorCode::Input, "family counts must be non-negative");
    SquareMatrix a = word_matrix(gens1p, gamma1);
    SquareMatrix b = word_matrix(gens2p, gamma2);
    require_infinite_order(a);
    require_infinite_order(b);
    std::vector<GeneratorFamily> out;
    auto conj = [](const SquareMatrix& h, int e, const SquareMatrix& x) { return h.pow(e) * x * h.pow(-e); };
    for (int i = 1; i <= r; ++i) {
        GeneratorFamily f{"gamma2^" + std::to_string(i) + " G1' gamma2^-" + std::to_string(i), {}};
        for (const auto& x : gens1p.letters()) f.generators.push_back(conj(b, i, x));
        out.push_back(std::move(f));
    }
    for (int j = 1; j <= s; ++j) {
        GeneratorFamily f{"gamma1^" + std::to_string(j) + " G2' gamma1^-" + std::to_string(j), {}};
        for (const auto& y : gens2p.letters()) f.generators.push_back(conj(a, j, y));
        out.push_back(std::move(f));
    }
    for (int k = 1; k <= q; ++k) {
        int e = s + k;
        out.push_back({"gamma1^" + std::to_string(e) + " gamma2 gamma1^-" + std::to_string(e), {conj(a, e, b)}});
    }
    return out;
}

std::vector<FreeWord> free_words(const std::vector<SquareMatrix>& gens, int max_len) {
    std::vector<SquareMatrix> inv;
    for (const auto& g : gens) inv.push_back(g.inverse());
    auto mat = [&](int c) -> const SquareMatrix& { return c > 0 ? gens[c - 1] : inv[-c - 1]; };
    std::vector<FreeWord> out, layer;
    const int k = static_cast<int>(gens.size());
    for (int i = 1; i <= k; ++i)
        for (int c : {i, -i}) layer.push_back({{c}, mat(c)});
    for (int len = 1; len <= max_len; ++len) {
        out.insert(out.end(), layer.begin(), layer.end());
        if (len == max_len) break;
        std::vector<FreeWord> next;
        for (const auto& w : layer)
            for (int i = 1; i <= k; ++i)
                for (int c : {i, -i}) {
                    if (w.codes.back() == -c) continue;
                    FreeWord n{w.codes, w.value * mat(c)};
                    n.codes.push_back(c);
                    next.push_back(std::move(n));
                }
        layer = std::move(next);
    }
    return out;
}

double min_pairwise_distance(const std::vector<CMat>& mats) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < mats.size(); ++i)
        for (size_t j = i + 1; j < mats.size(); ++j) {
            CMat diff = mats[i] - mats[j];
            // |A|_F / sqrt(d) <= |A|_op, so most pairs skip the SVD
            if (diff.norm() / std::sqrt(static_cast<double>(diff.rows())) >= best) continue;
            best = std::min(best, op_norm(diff));
        }
    return best;
}

}  // namespace pplab
