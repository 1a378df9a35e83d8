#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pingpong_lab/pingpong.hpp"
#include "pingpong_lab/words.hpp"

namespace pplab {

enum class TheoremTag { T12i, T12ii, T12iii, T12iv, C13, T15 };
const char* tag_name(TheoremTag t);

// One checked inequality lhs >= (fitted) rhs; ratio = lhs / fitted rhs.
struct EstimateSample {
    std::string id;
    int n = 0;       // syllable count
    int length = 0;  // word length
    double lhs = 0.0, rhs = 0.0, ratio = 0.0;
};

struct EstimateReport {
    TheoremTag tag = TheoremTag::T12i;
    std::vector<EstimateSample> samples;
    std::map<std::string, double> fitted;
    double min_ratio = 0.0;
    bool all_pass = false;
    nlohmann::json notes = nlohmann::json::object();

    nlohmann::json summary_json() const;
};

// Per-word data shared by the fits. Logs are natural logs.
struct WordSample {
    std::string id;
    int n = 0, length = 0;
    double log_sigma1 = 0.0, log_gap12 = 0.0, log_gap1d = 0.0;
    double log_ell1 = 0.0, log_ell12 = 0.0;
    double sum_log_sigma1 = 0.0, sum_log_gap12 = 0.0;  // over syllables
};

WordSample sample_word(const ReducedWord& w);
std::vector<WordSample> sample_words(const SemigroupGens& g1, const SemigroupGens& g2, int max_syllables,
                                     int max_syllable_len);

struct LinearFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Minimum of y over samples sharing the same x, as sorted (x, min y) pairs.
std::vector<std::pair<double, double>> lower_envelope(const std::vector<double>& x, const std::vector<double>& y);

// The refusal on uncertified configs happens here: these throw Precondition.
EstimateReport verify_t12_i(const PingPongConfig& cfg, const std::vector<WordSample>& words);
EstimateReport verify_t12_ii(const std::vector<WordSample>& words);
EstimateReport verify_t12_iii(const std::vector<WordSample>& words);
// Even syllable counts only; odd words are summarized in notes. When c2 > 0
// the intermediate bound l_1 >= c2^n prod sigma_1 is cross-checked.
EstimateReport verify_t12_iv(const std::vector<WordSample>& words, double c2 = 0.0);
EstimateReport verify_qi(const PingPongConfig& cfg, const std::vector<WordSample>& words);

// Exponential lower fit alone, on (n, log gap) data.
EstimateReport fit_exponential_lower(TheoremTag tag, const std::vector<WordSample>& words);

struct LemmaResult {
    std::string lemma;
    int trials = 0, passed = 0, violations = 0, skipped = 0;
    double worst_slack = 0.0;  // min relative slack (rhs - lhs) / |rhs| over trials
    nlohmann::json counterexamples = nlohmann::json::array();
    nlohmann::json info = nlohmann::json::object();
    nlohmann::json to_json() const;
};

// The nine singular value lemmas on random inputs.
// A trial violates when lhs exceeds rhs by more than tol relative plus
// kLemmaAbsFloor absolute, on the side the inequality allows.
constexpr double kLemmaAbsFloor = 64 * 2.220446049250313e-16;
std::vector<LemmaResult> lemma_suite(std::uint64_t seed, int trials, double tol = kDefaultTol,
                                     const std::vector<int>& dims = {2, 3, 4, 6});

struct GapIndex {
    int k = 0;
    double sigma_k = 0.0, ratio = 0.0;        // sigma_k and sigma_k / sigma_{k+1}
    double sigma_floor = 0.0, ratio_floor = 0.0;  // sigma_1^{1 - d eps}, sigma_1^eps
    bool in_hypothesis = true;                // d >= 4
    bool holds() const { return sigma_k >= sigma_floor && ratio >= ratio_floor; }
};
GapIndex select_gap_index(const RVec& sigma, double eps, double tol = kDefaultTol);
GapIndex select_gap_index(const SquareMatrix& g, double eps, double tol = kDefaultTol);

// CSV rows (word, tag, n, length, lhs, rhs, ratio) and "n log_gap" plot data.
std::string reports_csv(const std::vector<EstimateReport>& reports);
std::string plot_data(const std::vector<WordSample>& words);

}  // namespace pplab
