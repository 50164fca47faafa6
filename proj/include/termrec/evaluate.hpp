#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "termrec/ingest.hpp"
#include "termrec/recommend.hpp"
#include "termrec/session.hpp"

namespace termrec {

inline constexpr std::array<int, 7> kHitRateKs = {1, 2, 3, 4, 5, 10, 20};

enum class Method { hcfm, copm, ptn, tptcf };
Method parse_method(const std::string& name);
std::string method_name(Method m);

// One training patient's events remapped onto the training dictionaries.
struct TrainingView {
    std::int32_t dataset_index = -1;
    std::vector<std::pair<TermId, int>> searches; // (train term id, matched train encounter or -1)
    std::vector<std::vector<CodeId>> encounters;  // train code ids per training encounter
    std::vector<int> search_sessions;             // session id per training search
};

struct SplitStats {
    int patients_train = 0;     // P_t
    int patients_test = 0;      // P_e
    int unique_terms_train = 0; // T_t
    int unique_terms_test = 0;  // T_e
    int sessions_train = 0;     // S_t
    long searches_train = 0;
    long encounters_train = 0;
    long test_points = 0;
    double searches_per_session_train = 0.0;   // T_t/S_t column of the split table
    double encounters_per_patient_train = 0.0; // E_t/P_t column

    std::string to_text() const;
    std::string to_kv() const;
};

// Time split: training events are strictly before the cutoff; the first
// at-or-after-cutoff search of each session becomes a test point. Patients
// without a single training search are dropped entirely. Test truths missing
// from the training vocabulary keep their point and score as automatic
// misses.
struct CutoffSplit {
    Timestamp cutoff;
    std::vector<TrainingView> train;
    Dictionary train_codes;
    Dictionary train_terms;
    std::vector<RecommendationPoint> test_points;
    SplitStats stats;
};

// Sessions must already be computed over the full sequences; only pre-cutoff
// members end up in a test point's prefix. Throws on zero test points unless
// allow_empty_test (model-only rebuilds use that).
CutoffSplit cutoff_split(const Dataset& ds, const std::vector<std::vector<Session>>& sessions,
                         Timestamp cutoff, bool allow_empty_test = false);

// Copy of the dataset with every event at or after the cutoff removed and
// histories rebuilt. Dictionaries and filters stay untouched.
Dataset drop_post_cutoff(const Dataset& ds, Timestamp cutoff);

// Nearest-rank quantile of all search timestamps (q in [0, 1]); handy for
// picking cutoffs on synthetic data.
Timestamp search_time_quantile(const Dataset& ds, double q);

CooccurrenceMatrix training_matrix(const CutoffSplit& split, double lambda);

// Fraction of test points whose truth appears in the first k entries.
double hit_rate(const std::vector<ScoredList>& lists, const std::vector<TermId>& truths, int k);

struct QuintileRow {
    int min_len = 0, max_len = 0;
    double mean_len = 0.0;
    int count = 0;
    double hr1 = 0.0, hr5 = 0.0, hr10 = 0.0;
};

// Test points ordered by session length, split into five near-equal groups
// (ties resolved by point order, remainders land in the lower groups). Falls
// back to a single group when there are fewer than five points.
std::vector<QuintileRow> stratify_by_session_length(const CutoffSplit& split,
                                                    const std::vector<int>& truth_ranks);

struct EvalReport {
    std::string method;
    std::vector<std::pair<std::string, std::string>> params;
    std::array<double, kHitRateKs.size()> hr{};
    std::vector<QuintileRow> quintiles;
    std::vector<std::pair<std::string, std::string>> config_echo;

    double hr_at(int k) const; // throws unless k is one of kHitRateKs
};

struct Grids {
    std::vector<int> ms;        // kAllRecentTerms encodes "all"
    std::vector<int> mc;
    std::vector<double> alpha;
    std::vector<int> d;
    std::vector<double> gamma;
    std::vector<double> sigma;
    std::vector<double> pthr, tthr, talpha;

    static Grids defaults();
};
Grids parse_grid_file(const std::string& path);
std::string ms_to_string(int ms);
int ms_from_string(const std::string& s);

struct EvalContext {
    double lambda = 0.5;
    TrainConfig train; // d/gamma come from the grid, the rest from here
};

struct GridSearchResult {
    std::vector<EvalReport> reports;        // sorted by HR@5 descending
    std::vector<std::string> failures;      // grid points whose training failed
};

// One full evaluation per grid point; scoring runs parallel over test points
// and is bit-deterministic for any worker count. Throws TrainingError only
// if every point of a model-based method fails.
GridSearchResult grid_search(const CutoffSplit& split, Method method, const Grids& grids,
                             const EvalContext& ctx);

std::string report_csv(const std::vector<EvalReport>& reports);
std::string report_table(const std::vector<EvalReport>& reports); // best per metric marked with *
std::string quintile_csv(const EvalReport& report);
std::string quintile_table(const EvalReport& report);

} // namespace termrec
