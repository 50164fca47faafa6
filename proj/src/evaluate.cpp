#include "termrec/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "termrec/errors.hpp"
#include "termrec/text.hpp"

namespace termrec {

Method parse_method(const std::string& name) {
    if (name == "hcfm") return Method::hcfm;
    if (name == "copm") return Method::copm;
    if (name == "ptn") return Method::ptn;
    if (name == "tptcf") return Method::tptcf;
    throw DataError("unknown method '" + name + "' (expected hcfm|copm|ptn|tptcf)");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::hcfm: return "hcfm";
        case Method::copm: return "copm";
        case Method::ptn: return "ptn";
        case Method::tptcf: return "tptcf";
    }
    return "?";
}

CutoffSplit cutoff_split(const Dataset& ds, const std::vector<std::vector<Session>>& sessions,
                         Timestamp cutoff, bool allow_empty_test) {
    if (sessions.size() != ds.patients.size())
        throw DataError("sessions and dataset patient counts differ");

    CutoffSplit split;
    split.cutoff = cutoff;
    std::vector<std::int32_t> code_map(static_cast<std::size_t>(ds.codes.size()), -1);
    std::vector<std::int32_t> term_map(static_cast<std::size_t>(ds.terms.size()), -1);
    auto map_code = [&](CodeId global) {
        auto& slot = code_map[static_cast<std::size_t>(global)];
        if (slot < 0) slot = split.train_codes.intern(ds.codes.raw(global));
        return slot;
    };
    auto map_term = [&](TermId global) {
        auto& slot = term_map[static_cast<std::size_t>(global)];
        if (slot < 0) slot = split.train_terms.intern(ds.terms.raw(global));
        return slot;
    };

    std::set<TermId> test_term_globals;
    std::set<std::int32_t> test_patients;

    for (std::size_t p = 0; p < ds.patients.size(); ++p) {
        const PatientHistory& h = ds.patients[p];
        int n_train_searches = 0;
        for (const auto& s : h.searches)
            if (s.time < cutoff) ++n_train_searches;
        if (n_train_searches == 0) continue; // sequence has no training terms: not used

        TrainingView view;
        view.dataset_index = static_cast<std::int32_t>(p);
        int n_train_enc = 0;
        for (const auto& e : h.encounters) {
            if (!(e.time < cutoff)) break; // encounters sorted: training ones form a prefix
            std::vector<CodeId> codes;
            codes.reserve(e.codes.size());
            for (CodeId c : e.codes) codes.push_back(map_code(c));
            view.encounters.push_back(std::move(codes));
            ++n_train_enc;
        }
        for (const auto& s : h.searches) {
            if (!(s.time < cutoff)) break; // searches sorted the same way
            const int matched = s.matched_encounter < n_train_enc ? s.matched_encounter : -1;
            view.searches.emplace_back(map_term(s.term), matched);
            view.search_sessions.push_back(s.session_id);
        }
        const auto train_index = static_cast<std::int32_t>(split.train.size());
        split.train.push_back(std::move(view));

        // one test point per session: the first at-or-after-cutoff search
        for (const auto& sess : sessions[p]) {
            int target = -1;
            for (int i = sess.first_index; i <= sess.last_index; ++i) {
                if (!(h.searches[i].time < cutoff)) {
                    target = i;
                    break;
                }
            }
            if (target < 0) continue;

            RecommendationPoint point;
            point.train_patient = train_index;
            point.target_index = target;
            point.session_length = sess.length();
            // searches are time-sorted, so training searches occupy the same
            // leading indices in the view as in the full sequence
            for (int i = sess.first_index; i < target; ++i)
                point.session_prefix.push_back(
                    split.train[train_index].searches[static_cast<std::size_t>(i)].first);
            point.encounters = split.train[train_index].encounters;
            point.matched_encounter = static_cast<int>(point.encounters.size()) - 1;
            const TermId truth_global = h.searches[target].term;
            test_term_globals.insert(truth_global);
            const auto mapped = term_map[static_cast<std::size_t>(truth_global)];
            point.truth = mapped >= 0 ? mapped : -1;
            test_patients.insert(static_cast<std::int32_t>(p));
            split.test_points.push_back(std::move(point));
        }
    }

    if (split.train.empty()) throw DataError("no patients with training searches before cutoff");
    if (split.test_points.empty() && !allow_empty_test)
        throw DataError("no test points after cutoff " + format_timestamp(cutoff));

    // stats
    SplitStats& st = split.stats;
    st.patients_train = static_cast<int>(split.train.size());
    st.patients_test = static_cast<int>(test_patients.size());
    st.unique_terms_train = split.train_terms.size();
    st.unique_terms_test = static_cast<int>(test_term_globals.size());
    st.test_points = static_cast<long>(split.test_points.size());
    std::set<std::pair<std::int32_t, int>> train_sessions;
    for (const auto& view : split.train) {
        st.searches_train += static_cast<long>(view.searches.size());
        st.encounters_train += static_cast<long>(view.encounters.size());
        for (int sid : view.search_sessions) train_sessions.insert({view.dataset_index, sid});
    }
    st.sessions_train = static_cast<int>(train_sessions.size());
    if (st.sessions_train > 0)
        st.searches_per_session_train =
            static_cast<double>(st.searches_train) / st.sessions_train;
    if (st.patients_train > 0)
        st.encounters_per_patient_train =
            static_cast<double>(st.encounters_train) / st.patients_train;
    return split;
}

Dataset drop_post_cutoff(const Dataset& ds, Timestamp cutoff) {
    Dataset out;
    out.codes = ds.codes;
    out.terms = ds.terms;
    out.report = ds.report;
    for (const auto& h : ds.patients) {
        std::vector<EncounterRecord> encs;
        for (const auto& e : h.encounters)
            if (e.time < cutoff) encs.push_back({h.patient, e.time, e.codes});
        std::vector<SearchRecord> searches;
        for (const auto& s : h.searches)
            if (s.time < cutoff) searches.push_back({h.patient, s.time, s.term});
        if (encs.empty() && searches.empty()) continue;
        out.patients.push_back(build_history(std::move(encs), std::move(searches)));
    }
    return out;
}

Timestamp search_time_quantile(const Dataset& ds, double q) {
    if (q < 0.0 || q > 1.0) throw DataError("quantile must be in [0, 1]");
    std::vector<std::int64_t> times;
    for (const auto& h : ds.patients)
        for (const auto& s : h.searches) times.push_back(s.time.sec);
    if (times.empty()) throw DataError("no searches to take a quantile of");
    std::sort(times.begin(), times.end());
    const auto idx = static_cast<std::size_t>(q * static_cast<double>(times.size() - 1));
    return Timestamp{times[idx]};
}

CooccurrenceMatrix training_matrix(const CutoffSplit& split, double lambda) {
    std::vector<PatientEvents> events;
    events.reserve(split.train.size());
    for (const auto& view : split.train) {
        PatientEvents ev;
        ev.encounter_codes = view.encounters;
        ev.searches = view.searches;
        events.push_back(std::move(ev));
    }
    return build_cooccurrence(events, split.train_codes.size(), split.train_terms.size(), lambda);
}

double hit_rate(const std::vector<ScoredList>& lists, const std::vector<TermId>& truths, int k) {
    if (k < 1) throw DataError("k must be >= 1");
    if (lists.size() != truths.size()) throw DataError("lists/truths size mismatch");
    if (lists.empty()) return 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < lists.size(); ++i) {
        const TermId truth = truths[i];
        if (truth < 0) continue; // unseen in training: automatic miss
        const auto upto = std::min<std::size_t>(static_cast<std::size_t>(k), lists[i].size());
        for (std::size_t r = 0; r < upto; ++r) {
            if (lists[i][r].term == truth) {
                ++hits;
                break;
            }
        }
    }
    return static_cast<double>(hits) / static_cast<double>(lists.size());
}

std::vector<QuintileRow> stratify_by_session_length(const CutoffSplit& split,
                                                    const std::vector<int>& truth_ranks) {
    const std::size_t n = split.test_points.size();
    if (truth_ranks.size() != n) throw DataError("rank vector does not match test points");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return split.test_points[a].session_length < split.test_points[b].session_length;
    });

    const int groups = n < 5 ? 1 : 5; // fallback: single group when too few sessions
    const std::size_t base = n / groups, rem = n % groups;
    std::vector<QuintileRow> rows;
    std::size_t pos = 0;
    for (int g = 0; g < groups; ++g) {
        const std::size_t size = base + (static_cast<std::size_t>(g) < rem ? 1 : 0);
        QuintileRow row;
        row.count = static_cast<int>(size);
        row.min_len = std::numeric_limits<int>::max();
        int hits1 = 0, hits5 = 0, hits10 = 0;
        double len_sum = 0.0;
        for (std::size_t i = 0; i < size; ++i, ++pos) {
            const auto idx = order[pos];
            const int len = split.test_points[idx].session_length;
            row.min_len = std::min(row.min_len, len);
            row.max_len = std::max(row.max_len, len);
            len_sum += len;
            const int r = truth_ranks[idx];
            if (r <= 1) ++hits1;
            if (r <= 5) ++hits5;
            if (r <= 10) ++hits10;
        }
        if (size > 0) {
            row.mean_len = len_sum / static_cast<double>(size);
            row.hr1 = static_cast<double>(hits1) / static_cast<double>(size);
            row.hr5 = static_cast<double>(hits5) / static_cast<double>(size);
            row.hr10 = static_cast<double>(hits10) / static_cast<double>(size);
        } else {
            row.min_len = 0;
        }
        rows.push_back(row);
    }
    return rows;
}

double EvalReport::hr_at(int k) const {
    for (std::size_t i = 0; i < kHitRateKs.size(); ++i)
        if (kHitRateKs[i] == k) return hr[i];
    throw DataError("k=" + std::to_string(k) + " is not a reported cut");
}

Grids Grids::defaults() {
    Grids g;
    g.ms = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, kAllRecentTerms};
    g.mc = {1, 2, 3, 4};
    g.alpha = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    g.d = {32, 64};
    g.gamma = {0.01, 0.05};
    g.sigma = {0.5};
    g.pthr = {0.1};
    g.tthr = {0.1};
    g.talpha = {0.1, 0.3, 0.5, 0.7, 0.9};
    return g;
}

std::string ms_to_string(int ms) {
    return ms == kAllRecentTerms ? "all" : std::to_string(ms);
}

int ms_from_string(const std::string& s) {
    if (s == "all") return kAllRecentTerms;
    const int v = std::stoi(s);
    if (v < 1) throw DataError("m_s must be >= 1 or 'all'");
    return v;
}

Grids parse_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open grid file '" + path + "'");
    Grids g = Grids::defaults();
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DataError("bad grid line: '" + line + "'");
        const std::string key = line.substr(0, eq);
        std::vector<std::string> values = split(line.substr(eq + 1), ',');
        auto ints = [&] {
            std::vector<int> v;
            for (const auto& s : values) v.push_back(std::stoi(s));
            return v;
        };
        auto doubles = [&] {
            std::vector<double> v;
            for (const auto& s : values) v.push_back(std::stod(s));
            return v;
        };
        if (key == "ms") {
            g.ms.clear();
            for (const auto& s : values) g.ms.push_back(ms_from_string(s));
        } else if (key == "mc") g.mc = ints();
        else if (key == "alpha") g.alpha = doubles();
        else if (key == "d") g.d = ints();
        else if (key == "gamma") g.gamma = doubles();
        else if (key == "sigma") g.sigma = doubles();
        else if (key == "pthr") g.pthr = doubles();
        else if (key == "tthr") g.tthr = doubles();
        else if (key == "talpha") g.talpha = doubles();
        else throw DataError("unknown grid key '" + key + "'");
    }
    return g;
}

namespace {

std::array<double, kHitRateKs.size()> rank_hit_rates(const std::vector<int>& ranks) {
    std::array<double, kHitRateKs.size()> hr{};
    if (ranks.empty()) return hr;
    for (std::size_t ki = 0; ki < kHitRateKs.size(); ++ki) {
        std::size_t hits = 0;
        for (int r : ranks)
            if (r <= kHitRateKs[ki]) ++hits;
        hr[ki] = static_cast<double>(hits) / static_cast<double>(ranks.size());
    }
    return hr;
}

std::vector<std::pair<std::string, std::string>> base_echo(const EvalContext& ctx) {
    return {
        {"lambda", format_double(ctx.lambda)},
        {"learning_rate", format_double(ctx.train.learning_rate)},
        {"max_epochs", std::to_string(ctx.train.max_epochs)},
        {"rel_tol", format_double(ctx.train.rel_tol)},
        {"seed", std::to_string(ctx.train.seed)},
    };
}

} // namespace

GridSearchResult grid_search(const CutoffSplit& split, Method method, const Grids& grids,
                             const EvalContext& ctx) {
    GridSearchResult result;
    const auto n_points = static_cast<std::int64_t>(split.test_points.size());
    std::vector<int> ranks(split.test_points.size());

    auto make_report = [&](std::vector<std::pair<std::string, std::string>> params) {
        EvalReport rep;
        rep.method = method_name(method);
        rep.params = std::move(params);
        rep.hr = rank_hit_rates(ranks);
        rep.quintiles = stratify_by_session_length(split, ranks);
        rep.config_echo = base_echo(ctx);
        result.reports.push_back(std::move(rep));
    };

    if (method == Method::ptn) {
        // per-patient training term counts; no model to train
        std::vector<std::vector<int>> counts(split.train.size(),
                                             std::vector<int>(split.train_terms.size(), 0));
        for (std::size_t p = 0; p < split.train.size(); ++p)
            for (const auto& [term, matched] : split.train[p].searches)
                ++counts[p][static_cast<std::size_t>(term)];
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n_points; ++i) {
            const auto& point = split.test_points[static_cast<std::size_t>(i)];
            const auto scores = ptn_scores(counts[static_cast<std::size_t>(point.train_patient)]);
            ranks[static_cast<std::size_t>(i)] = rank_of(scores, point.truth);
        }
        make_report({});
    } else if (method == Method::tptcf) {
        std::vector<std::vector<TermId>> sequences(split.train.size());
        for (std::size_t p = 0; p < split.train.size(); ++p)
            for (const auto& [term, matched] : split.train[p].searches)
                sequences[p].push_back(term);
        const TptcfModel model = build_tptcf(sequences, split.train_terms.size());
        for (double pthr : grids.pthr) {
            for (double tthr : grids.tthr) {
                for (double alpha : grids.talpha) {
                    const TptcfParams params{pthr, tthr, alpha};
#pragma omp parallel for schedule(dynamic)
                    for (std::int64_t i = 0; i < n_points; ++i) {
                        const auto& point = split.test_points[static_cast<std::size_t>(i)];
                        const auto scores = tptcf_scores(point, model, params);
                        ranks[static_cast<std::size_t>(i)] = rank_of(scores, point.truth);
                    }
                    make_report({{"pthr", format_double(pthr)},
                                 {"tthr", format_double(tthr)},
                                 {"talpha", format_double(alpha)}});
                }
            }
        }
    } else {
        // model-based methods share one co-occurrence matrix and one trained
        // model per (d, gamma)
        const CooccurrenceMatrix a = training_matrix(split, ctx.lambda);
        for (int d : grids.d) {
            for (double gamma : grids.gamma) {
                TrainConfig cfg = ctx.train;
                cfg.d = d;
                cfg.gamma = gamma;
                FactorModel model;
                try {
                    model = train(a, cfg).model;
                } catch (const DataError& e) {
                    result.failures.push_back("d=" + std::to_string(d) +
                                              " gamma=" + format_double(gamma) + ": " + e.what());
                    continue;
                } catch (const TrainingError& e) {
                    result.failures.push_back("d=" + std::to_string(d) +
                                              " gamma=" + format_double(gamma) + ": " + e.what());
                    continue;
                }

                if (method == Method::copm) {
                    for (double sigma : grids.sigma) {
#pragma omp parallel for schedule(dynamic)
                        for (std::int64_t i = 0; i < n_points; ++i) {
                            const auto& point = split.test_points[static_cast<std::size_t>(i)];
                            const auto scores = copm_scores(point, model, sigma);
                            ranks[static_cast<std::size_t>(i)] = rank_of(scores, point.truth);
                        }
                        make_report({{"sigma", format_double(sigma)},
                                     {"d", std::to_string(d)},
                                     {"gamma", format_double(gamma)}});
                    }
                } else { // hcfm: reuse x per m_s and y per (m_s, m_c) across alphas
                    for (int ms : grids.ms) {
                        std::vector<std::vector<double>> xs(split.test_points.size());
                        std::vector<std::vector<double>> mps(split.test_points.size());
#pragma omp parallel for schedule(dynamic)
                        for (std::int64_t i = 0; i < n_points; ++i) {
                            const auto ui = static_cast<std::size_t>(i);
                            const auto& point = split.test_points[ui];
                            mps[ui] = aggregate_recent_terms(point.session_prefix, model.v, ms);
                            xs[ui] = score_terms_x(model.v, mps[ui]);
                        }
                        for (int mc : grids.mc) {
                            std::vector<std::vector<double>> ys(split.test_points.size());
#pragma omp parallel for schedule(dynamic)
                            for (std::int64_t i = 0; i < n_points; ++i) {
                                const auto ui = static_cast<std::size_t>(i);
                                ys[ui] = score_terms_y(split.test_points[ui], model, mps[ui], mc);
                            }
                            for (double alpha : grids.alpha) {
#pragma omp parallel for schedule(static)
                                for (std::int64_t i = 0; i < n_points; ++i) {
                                    const auto ui = static_cast<std::size_t>(i);
                                    std::vector<double> r(xs[ui].size());
                                    for (std::size_t t = 0; t < r.size(); ++t)
                                        r[t] = alpha * xs[ui][t] + (1.0 - alpha) * ys[ui][t];
                                    ranks[ui] = rank_of(r, split.test_points[ui].truth);
                                }
                                make_report({{"ms", ms_to_string(ms)},
                                             {"mc", std::to_string(mc)},
                                             {"alpha", format_double(alpha)},
                                             {"d", std::to_string(d)},
                                             {"gamma", format_double(gamma)}});
                            }
                        }
                    }
                }
            }
        }
        if (result.reports.empty())
            throw TrainingError("every grid point failed to train" +
                                    (result.failures.empty() ? std::string()
                                                             : ": " + result.failures.front()),
                                0);
    }

    std::stable_sort(result.reports.begin(), result.reports.end(),
                     [](const EvalReport& a, const EvalReport& b) {
                         return a.hr_at(5) > b.hr_at(5);
                     });
    return result;
}

std::string SplitStats::to_text() const {
    std::ostringstream os;
    os << "Split statistics\n";
    os << "  P_t (training patients):        " << patients_train << "\n";
    os << "  P_e (testing patients):         " << patients_test << "\n";
    os << "  T_t (training unique terms):    " << unique_terms_train << "\n";
    os << "  T_e (testing unique terms):     " << unique_terms_test << "\n";
    os << "  S_t (training sessions):        " << sessions_train << "\n";
    os << "  test points:                    " << test_points << "\n";
    os.precision(2);
    os << std::fixed;
    os << "  searches/session (train):       " << searches_per_session_train << "\n";
    os << "  encounters/patient (train):     " << encounters_per_patient_train << "\n";
    return os.str();
}

std::string SplitStats::to_kv() const {
    std::ostringstream os;
    os << "patients_train=" << patients_train << "\n";
    os << "patients_test=" << patients_test << "\n";
    os << "unique_terms_train=" << unique_terms_train << "\n";
    os << "unique_terms_test=" << unique_terms_test << "\n";
    os << "sessions_train=" << sessions_train << "\n";
    os << "test_points=" << test_points << "\n";
    os << "searches_train=" << searches_train << "\n";
    os << "encounters_train=" << encounters_train << "\n";
    os << "searches_per_session_train=" << format_double(searches_per_session_train) << "\n";
    os << "encounters_per_patient_train=" << format_double(encounters_per_patient_train) << "\n";
    return os.str();
}

namespace {

std::string hr_cell(double v) {
    std::ostringstream os;
    os.precision(4);
    os << std::fixed << v;
    return os.str();
}

} // namespace

std::string report_csv(const std::vector<EvalReport>& reports) {
    std::ostringstream os;
    os << "method";
    if (!reports.empty())
        for (const auto& [key, value] : reports.front().params) os << ',' << key;
    for (int k : kHitRateKs) os << ",hr" << k;
    os << "\n";
    for (const auto& rep : reports) {
        os << rep.method;
        for (const auto& [key, value] : rep.params) os << ',' << value;
        for (double v : rep.hr) os << ',' << format_double(v);
        os << "\n";
    }
    return os.str();
}

std::string report_table(const std::vector<EvalReport>& reports) {
    std::ostringstream os;
    if (reports.empty()) return "(no reports)\n";

    std::array<double, kHitRateKs.size()> best{};
    for (const auto& rep : reports)
        for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::max(best[i], rep.hr[i]);

    os << "method  params";
    for (int k : kHitRateKs) os << "  HR@" << k;
    os << "\n";
    for (const auto& rep : reports) {
        os << rep.method << "  ";
        std::string params;
        for (const auto& [key, value] : rep.params) {
            if (!params.empty()) params += ' ';
            params += key + "=" + value;
        }
        if (params.empty()) params = "-";
        os << params;
        for (std::size_t i = 0; i < rep.hr.size(); ++i) {
            os << "  " << hr_cell(rep.hr[i]);
            os << (rep.hr[i] == best[i] ? "*" : " "); // best per metric
        }
        os << "\n";
    }
    return os.str();
}

std::string quintile_csv(const EvalReport& report) {
    std::ostringstream os;
    os << "group,min_len,max_len,mean_len,count,hr1,hr5,hr10\n";
    for (std::size_t g = 0; g < report.quintiles.size(); ++g) {
        const auto& q = report.quintiles[g];
        os << g + 1 << ',' << q.min_len << ',' << q.max_len << ',' << format_double(q.mean_len)
           << ',' << q.count << ',' << format_double(q.hr1) << ',' << format_double(q.hr5) << ','
           << format_double(q.hr10) << "\n";
    }
    return os.str();
}

std::string quintile_table(const EvalReport& report) {
    std::ostringstream os;
    os << "session-length groups (shortest to longest)\n";
    os << "group  min  max  mean   count  HR@1    HR@5    HR@10\n";
    for (std::size_t g = 0; g < report.quintiles.size(); ++g) {
        const auto& q = report.quintiles[g];
        os << "  " << g + 1 << "    " << q.min_len << "    " << q.max_len << "    ";
        os.precision(2);
        os << std::fixed << q.mean_len << "  " << q.count << "  ";
        os << hr_cell(q.hr1) << "  " << hr_cell(q.hr5) << "  " << hr_cell(q.hr10) << "\n";
    }
    return os.str();
}

} // namespace termrec
