#include "termrec/recommend.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "termrec/errors.hpp"

namespace termrec {

void HcfmParams::validate() const {
    if (m_s != kAllRecentTerms && m_s < 1)
        throw DataError("m_s must be >= 1 or the 'all' sentinel");
    if (m_c < 1) throw DataError("m_c must be >= 1");
    if (alpha < 0.0 || alpha > 1.0) throw DataError("alpha must be in [0, 1]");
}

void TptcfParams::validate() const {
    if (alpha < 0.0 || alpha > 1.0) throw DataError("tptcf alpha must be in [0, 1]");
}

ScoredList rank_terms(std::span<const double> scores) {
    ScoredList list(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        list[i] = {static_cast<TermId>(i), scores[i]};
    std::sort(list.begin(), list.end(), [](const ScoredTerm& a, const ScoredTerm& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.term < b.term;
    });
    return list;
}

int rank_of(std::span<const double> scores, TermId truth) {
    if (truth < 0 || truth >= static_cast<TermId>(scores.size())) return kUnrankable;
    const double s = scores[static_cast<std::size_t>(truth)];
    int rank = 1;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] > s) ++rank;
        else if (scores[i] == s && static_cast<TermId>(i) < truth) ++rank;
    }
    return rank;
}

std::vector<double> aggregate_recent_terms(std::span<const TermId> prefix, const Mat& v, int m_s) {
    std::vector<double> m_p(static_cast<std::size_t>(v.cols), 0.0);
    if (prefix.empty()) return m_p;
    const auto len = static_cast<int>(prefix.size());
    const int k = (m_s == kAllRecentTerms) ? len : std::min(m_s, len);
    for (int i = len - k; i < len; ++i) {
        const double* row = v.row(prefix[static_cast<std::size_t>(i)]);
        for (std::int32_t j = 0; j < v.cols; ++j) m_p[static_cast<std::size_t>(j)] += row[j];
    }
    for (double& x : m_p) x /= static_cast<double>(k);
    return m_p;
}

std::vector<double> score_terms_x(const Mat& v, std::span<const double> m_p) {
    std::vector<double> x;
    row_scores(v, m_p, x);
    return x;
}

std::vector<double> softmax_weights(std::span<const double> logits) {
    std::vector<double> w(logits.size());
    if (logits.empty()) return w;
    const double zmax = *std::max_element(logits.begin(), logits.end());
    double denom = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        w[i] = std::exp(logits[i] - zmax);
        denom += w[i];
    }
    for (double& x : w) x /= denom;
    return w;
}

EncounterWeights encounter_weights(const RecommendationPoint& point, const FactorModel& model,
                                   std::span<const double> m_p, int m_c) {
    EncounterWeights ew;
    const auto n_enc = static_cast<int>(point.encounters.size());
    ew.window_begin = std::max(0, n_enc - m_c);
    std::vector<double> logits;
    for (int e = ew.window_begin; e < n_enc; ++e) {
        for (CodeId c : point.encounters[static_cast<std::size_t>(e)]) {
            ew.occurrences.emplace_back(e, c);
            logits.push_back(dot({model.u.row(c), static_cast<std::size_t>(model.d)}, m_p));
        }
    }
    ew.weights = softmax_weights(logits);
    return ew;
}

std::vector<double> score_terms_y(const RecommendationPoint& point, const FactorModel& model,
                                  std::span<const double> m_p, int m_c) {
    const EncounterWeights ew = encounter_weights(point, model, m_p, m_c);
    std::vector<double> y(static_cast<std::size_t>(model.v.rows), 0.0);
    if (ew.occurrences.empty()) return y;

    // weighted code vector once, then one dot per term
    std::vector<double> q(static_cast<std::size_t>(model.d), 0.0);
    for (std::size_t i = 0; i < ew.occurrences.size(); ++i) {
        const double* row = model.u.row(ew.occurrences[i].second);
        for (std::int32_t j = 0; j < model.d; ++j)
            q[static_cast<std::size_t>(j)] += ew.weights[i] * row[j];
    }
    row_scores(model.v, q, y);
    return y;
}

std::vector<double> hcfm_scores(const RecommendationPoint& point, const FactorModel& model,
                                const HcfmParams& params) {
    params.validate();
    const std::vector<double> m_p = aggregate_recent_terms(point.session_prefix, model.v, params.m_s);
    const std::vector<double> x = score_terms_x(model.v, m_p);
    const std::vector<double> y = score_terms_y(point, model, m_p, params.m_c);
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        r[i] = params.alpha * x[i] + (1.0 - params.alpha) * y[i];
    return r;
}

ScoredList hcfm_score(const RecommendationPoint& point, const FactorModel& model,
                      const HcfmParams& params) {
    return rank_terms(hcfm_scores(point, model, params));
}

std::vector<double> copm_scores(const RecommendationPoint& point, const FactorModel& model,
                                double sigma) {
    if (!(sigma > 0.0 && sigma < 1.0)) throw DataError("sigma must be in (0, 1)");
    std::vector<double> r(static_cast<std::size_t>(model.v.rows), 0.0);
    if (point.matched_encounter < 0) return r; // no visible encounter: zero context

    std::vector<double> q(static_cast<std::size_t>(model.d), 0.0);
    for (int e = 0; e <= point.matched_encounter; ++e) {
        const double decay = std::pow(sigma, point.matched_encounter - e);
        for (CodeId c : point.encounters[static_cast<std::size_t>(e)]) {
            const double* row = model.u.row(c);
            for (std::int32_t j = 0; j < model.d; ++j)
                q[static_cast<std::size_t>(j)] += decay * row[j];
        }
    }
    row_scores(model.v, q, r);
    return r;
}

ScoredList copm_score(const RecommendationPoint& point, const FactorModel& model, double sigma) {
    return rank_terms(copm_scores(point, model, sigma));
}

std::vector<double> ptn_scores(std::span<const int> patient_term_counts) {
    std::vector<double> s(patient_term_counts.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<double>(patient_term_counts[i]);
    return s;
}

ScoredList ptn_score(std::span<const int> patient_term_counts) {
    return rank_terms(ptn_scores(patient_term_counts));
}

namespace {

double cosine(const double* a, const double* b, std::int32_t len) {
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::int32_t i = 0; i < len; ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (aa == 0.0 || bb == 0.0) return 0.0;
    return ab / (std::sqrt(aa) * std::sqrt(bb));
}

inline std::int64_t pair_key(TermId from, TermId to) {
    return (static_cast<std::int64_t>(from) << 32) | static_cast<std::uint32_t>(to);
}

} // namespace

TptcfModel build_tptcf(const std::vector<std::vector<TermId>>& patient_term_sequences,
                       std::int32_t n_terms) {
    TptcfModel model;
    model.n_terms = n_terms;
    const auto n_pat = static_cast<std::int32_t>(patient_term_sequences.size());

    model.patient_term = Mat(n_pat, n_terms);
    model.transitions.resize(static_cast<std::size_t>(n_pat));
    Mat global_counts(n_terms, n_terms);
    for (std::int32_t p = 0; p < n_pat; ++p) {
        const auto& seq = patient_term_sequences[static_cast<std::size_t>(p)];
        for (TermId t : seq) model.patient_term.at(p, t) += 1.0;
        std::unordered_map<std::int64_t, int> counts;
        for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
            ++counts[pair_key(seq[i], seq[i + 1])];
            global_counts.at(seq[i], seq[i + 1]) += 1.0;
        }
        auto& sorted = model.transitions[static_cast<std::size_t>(p)];
        sorted.assign(counts.begin(), counts.end());
        std::sort(sorted.begin(), sorted.end());
    }

    model.patient_sim = Mat(n_pat, n_pat);
#pragma omp parallel for schedule(static)
    for (std::int32_t i = 0; i < n_pat; ++i)
        for (std::int32_t j = 0; j < n_pat; ++j)
            model.patient_sim.at(i, j) =
                cosine(model.patient_term.row(i), model.patient_term.row(j), n_terms);

    // term columns as rows for the cosine
    Mat term_rows(n_terms, n_pat);
    for (std::int32_t p = 0; p < n_pat; ++p)
        for (std::int32_t t = 0; t < n_terms; ++t) term_rows.at(t, p) = model.patient_term.at(p, t);
    model.term_sim = Mat(n_terms, n_terms);
#pragma omp parallel for schedule(static)
    for (std::int32_t i = 0; i < n_terms; ++i)
        for (std::int32_t j = 0; j < n_terms; ++j)
            model.term_sim.at(i, j) = cosine(term_rows.row(i), term_rows.row(j), n_pat);

    model.transition_prob = Mat(n_terms, n_terms);
    for (std::int32_t from = 0; from < n_terms; ++from) {
        double row_sum = 0.0;
        for (std::int32_t to = 0; to < n_terms; ++to) row_sum += global_counts.at(from, to);
        if (row_sum == 0.0) continue;
        for (std::int32_t to = 0; to < n_terms; ++to)
            model.transition_prob.at(from, to) = global_counts.at(from, to) / row_sum;
    }
    return model;
}

std::vector<double> tptcf_scores(const RecommendationPoint& point, const TptcfModel& model,
                                 const TptcfParams& params) {
    params.validate();
    std::vector<double> scores(static_cast<std::size_t>(model.n_terms), 0.0);
    if (point.session_prefix.empty()) return scores; // no last term, both parts undefined
    const TermId t_j = point.session_prefix.back();

    // similar terms of the last prefix term
    std::vector<char> sim_term(static_cast<std::size_t>(model.n_terms), 0);
    for (std::int32_t t = 0; t < model.n_terms; ++t)
        sim_term[static_cast<std::size_t>(t)] =
            model.term_sim.at(t_j, t) >= params.term_threshold ? 1 : 0;

    // neighbors of this patient (self excluded)
    std::vector<std::int32_t> neighbors;
    double sim_sum = 0.0;
    for (std::int32_t p = 0; p < model.patient_sim.rows; ++p) {
        if (p == point.train_patient) continue;
        const double s = model.patient_sim.at(point.train_patient, p);
        if (s >= params.patient_threshold) {
            neighbors.push_back(p);
            sim_sum += s;
        }
    }

    std::vector<double> cf(static_cast<std::size_t>(model.n_terms), 0.0);
    if (!neighbors.empty() && sim_sum > 0.0) {
        std::vector<double> num(static_cast<std::size_t>(model.n_terms));
        std::vector<double> den(static_cast<std::size_t>(model.n_terms));
        for (std::int32_t p : neighbors) {
            std::fill(num.begin(), num.end(), 0.0);
            std::fill(den.begin(), den.end(), 0.0);
            for (const auto& [key, count] : model.transitions[static_cast<std::size_t>(p)]) {
                const auto from = static_cast<TermId>(key >> 32);
                const auto to = static_cast<TermId>(key & 0xffffffff);
                if (!sim_term[static_cast<std::size_t>(from)]) continue;
                num[static_cast<std::size_t>(to)] += count * model.term_sim.at(t_j, from);
                den[static_cast<std::size_t>(to)] += count;
            }
            const double pw = model.patient_sim.at(point.train_patient, p) / sim_sum;
            for (std::int32_t t = 0; t < model.n_terms; ++t) {
                const auto ut = static_cast<std::size_t>(t);
                if (den[ut] > 0.0) cf[ut] += pw * num[ut] / den[ut];
            }
        }
    }

    for (std::int32_t t = 0; t < model.n_terms; ++t) {
        const auto ut = static_cast<std::size_t>(t);
        scores[ut] = (1.0 - params.alpha) * model.transition_prob.at(t_j, t) + params.alpha * cf[ut];
    }
    return scores;
}

ScoredList tptcf_score(const RecommendationPoint& point, const TptcfModel& model,
                       const TptcfParams& params) {
    return rank_terms(tptcf_scores(point, model, params));
}

} // namespace termrec
