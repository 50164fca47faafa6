#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "termrec/factor.hpp"

namespace termrec {

// Sentinel for the recent-search window: use the whole session prefix.
inline constexpr int kAllRecentTerms = -1;

struct HcfmParams {
    int m_s = kAllRecentTerms; // recent searches used (kAllRecentTerms = whole prefix)
    int m_c = 2;               // recent encounters used
    double alpha = 0.2;        // weight of the search-term factor

    void validate() const;
};

// Everything a scorer may look at for one (patient, target search) pair.
// All events are training-visible: the session prefix holds the strictly
// earlier same-session searches, encounters the chronological encounters at
// or before the target, and matched_encounter points at the most recent one.
// Ids are in the training dictionary.
struct RecommendationPoint {
    std::int32_t train_patient = -1; // row in the training patient list
    int target_index = -1;           // position in S_p (0-based)
    std::vector<TermId> session_prefix;
    std::vector<std::vector<CodeId>> encounters;
    int matched_encounter = -1;
    TermId truth = -1;     // training term id; -1 when unseen in training
    int session_length = 0;
};

struct ScoredTerm {
    TermId term = -1;
    double score = 0.0;
};

// Full training vocabulary ranked by score descending, ties broken by
// ascending term id.
using ScoredList = std::vector<ScoredTerm>;

ScoredList rank_terms(std::span<const double> scores);

// 1-based position the term would take in rank_terms(scores); a large
// sentinel (beyond any k) when truth is negative.
int rank_of(std::span<const double> scores, TermId truth);
inline constexpr int kUnrankable = 1 << 30;

// Mean latent vector of the last min(m_s, prefix) prefix terms; the divisor
// is the actual count. Zero vector for an empty prefix.
std::vector<double> aggregate_recent_terms(std::span<const TermId> prefix, const Mat& v, int m_s);

// x score per term: dot of the aggregated vector with each term row.
std::vector<double> score_terms_x(const Mat& v, std::span<const double> m_p);

// Max-subtracted softmax; empty input stays empty.
std::vector<double> softmax_weights(std::span<const double> logits);

// Per-occurrence softmax weights over the last min(m_c, available) encounters.
// A code appearing in two window encounters is two occurrences: both get a
// weight and both denominator terms, so the weights sum to 1 over occurrences.
struct EncounterWeights {
    int window_begin = 0;                            // first encounter index in the window
    std::vector<std::pair<int, CodeId>> occurrences; // (encounter index, code), window order
    std::vector<double> weights;
};
EncounterWeights encounter_weights(const RecommendationPoint& point, const FactorModel& model,
                                   std::span<const double> m_p, int m_c);

// y score per term: weighted code vector dotted with each term row. Zero
// when the encounter window is empty.
std::vector<double> score_terms_y(const RecommendationPoint& point, const FactorModel& model,
                                  std::span<const double> m_p, int m_c);

// Blend alpha * x + (1 - alpha) * y and rank.
std::vector<double> hcfm_scores(const RecommendationPoint& point, const FactorModel& model,
                                const HcfmParams& params);
ScoredList hcfm_score(const RecommendationPoint& point, const FactorModel& model,
                      const HcfmParams& params);

// Decayed sum over all visible encounters up to the matched one; the decay
// exponent is the encounter-index distance to the matched encounter. All-zero
// scores when no encounter is matched.
std::vector<double> copm_scores(const RecommendationPoint& point, const FactorModel& model,
                                double sigma);
ScoredList copm_score(const RecommendationPoint& point, const FactorModel& model, double sigma);

// Patient's own training search counts, most frequent first.
ScoredList ptn_score(std::span<const int> patient_term_counts);
std::vector<double> ptn_scores(std::span<const int> patient_term_counts);

// Similarity-plus-transition baseline built from training searches only:
// cosine similarities over the patient x term count matrix, per-patient
// adjacent-pair transition counts, and the count-normalized global
// transition probabilities.
struct TptcfParams {
    double patient_threshold = 0.1;
    double term_threshold = 0.1;
    double alpha = 0.5; // weight of the similarity-based score

    void validate() const;
};

struct TptcfModel {
    std::int32_t n_terms = 0;
    Mat patient_term;  // training patients x terms, raw counts
    Mat patient_sim;   // cosine over patient rows
    Mat term_sim;      // cosine over term columns
    // per patient, ((from<<32)|to, count) sorted by key
    std::vector<std::vector<std::pair<std::int64_t, int>>> transitions;
    Mat transition_prob; // global P(to | from), zero rows stay zero
};

TptcfModel build_tptcf(const std::vector<std::vector<TermId>>& patient_term_sequences,
                       std::int32_t n_terms);

std::vector<double> tptcf_scores(const RecommendationPoint& point, const TptcfModel& model,
                                 const TptcfParams& params);
ScoredList tptcf_score(const RecommendationPoint& point, const TptcfModel& model,
                       const TptcfParams& params);

} // namespace termrec
