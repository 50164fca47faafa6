#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "termrec/errors.hpp"
#include "termrec/evaluate.hpp"
#include "termrec/synth.hpp"

using namespace termrec;
using termrec::testing::TempDir;
using termrec::testing::read_file;
using termrec::testing::write_file;

namespace {

// p1: session straddling the cutoff; p2: training only; p3: no training
// searches (excluded); p4: straddling session whose truth never appears in
// training.
constexpr const char* kEncounters =
    "patient_id,timestamp,icd_codes\n"
    "p1,2014-01-01,100.0\n"
    "p1,2014-02-01,\"100.0;200.0\"\n"
    "p1,2014-03-01,200.0\n"
    "p2,2014-01-05,100.0\n"
    "p2,2014-02-05,100.0\n"
    "p2,2014-03-05,100.0\n"
    "p3,2014-01-07,200.0\n"
    "p3,2014-02-07,200.0\n"
    "p3,2014-03-07,200.0\n"
    "p4,2014-01-09,100.0\n"
    "p4,2014-02-09,200.0\n"
    "p4,2014-03-09,100.0\n";

constexpr const char* kSearches =
    "patient_id,timestamp,term\n"
    "p1,2014-05-01T08:00:00Z,alpha\n"
    "p1,2014-05-20T08:00:00Z,beta\n"
    "p1,2014-06-02T08:00:00Z,alpha\n"
    "p1,2014-06-03T08:00:00Z,beta\n"
    "p2,2014-01-06T08:00:00Z,alpha\n"
    "p2,2014-02-06T08:00:00Z,beta\n"
    "p3,2014-06-10T08:00:00Z,alpha\n"
    "p3,2014-07-10T08:00:00Z,alpha\n"
    "p4,2014-05-02T08:00:00Z,beta\n"
    "p4,2014-06-05T08:00:00Z,epsilon\n"
    "p4,2014-07-20T08:00:00Z,epsilon\n";

struct Fixture {
    Dataset ds;
    std::vector<std::vector<Session>> sessions;
};

Fixture make_fixture() {
    TempDir dir("eval_fix");
    write_file(dir.file("e.csv"), kEncounters);
    write_file(dir.file("s.csv"), kSearches);
    Fixture f;
    const ParseResult parsed = parse_events(dir.file("e.csv"), dir.file("s.csv"));
    f.ds = apply_filters(parsed, PreprocessConfig{});
    f.sessions = sessionize(f.ds.patients, SessionConfig{});
    return f;
}

const Timestamp kCutoff = parse_timestamp("2014-06-01");

} // namespace

TEST_CASE("cutoff_split selects one test point per straddling session") {
    Fixture f = make_fixture();
    const CutoffSplit split = cutoff_split(f.ds, f.sessions, kCutoff);

    // p3 never searched before the cutoff: not used at all
    CHECK(split.train.size() == 3);
    for (const auto& view : split.train)
        CHECK(f.ds.patients[static_cast<std::size_t>(view.dataset_index)].patient != "p3");

    REQUIRE(split.test_points.size() == 2);
    // p1's session has two post-cutoff searches; only the first one is used
    const auto& pt1 = split.test_points[0];
    CHECK(pt1.target_index == 2);
    CHECK(*split.train_terms.find("alpha") == pt1.truth);
    REQUIRE(pt1.session_prefix.size() == 2);
    CHECK(pt1.session_prefix[0] == *split.train_terms.find("alpha"));
    CHECK(pt1.session_prefix[1] == *split.train_terms.find("beta"));
    CHECK(pt1.session_length == 4);
    CHECK(pt1.encounters.size() == 3); // p1's training encounters
    CHECK(pt1.matched_encounter == 2);

    // p4's truth never appears in training: retained as an automatic miss
    const auto& pt2 = split.test_points[1];
    CHECK(pt2.truth == -1);
    CHECK(pt2.session_prefix.size() == 1);

    // stats mirror the table layout
    CHECK(split.stats.patients_train == 3);
    CHECK(split.stats.patients_test == 2);
    CHECK(split.stats.unique_terms_train == 2);
    CHECK(split.stats.unique_terms_test == 2); // alpha and epsilon
    CHECK(split.stats.test_points == 2);
    CHECK(split.stats.searches_train == 5);
    CHECK(split.stats.sessions_train == 3);

    // training views only hold pre-cutoff events
    for (const auto& view : split.train) {
        const auto& h = f.ds.patients[static_cast<std::size_t>(view.dataset_index)];
        for (std::size_t i = 0; i < view.searches.size(); ++i)
            CHECK(h.searches[i].time < kCutoff);
    }
}

TEST_CASE("cutoff with no test points is an error unless allowed") {
    Fixture f = make_fixture();
    const Timestamp late = parse_timestamp("2015-01-01");
    CHECK_THROWS_AS(cutoff_split(f.ds, f.sessions, late), DataError);
    const CutoffSplit split = cutoff_split(f.ds, f.sessions, late, true);
    CHECK(split.test_points.empty());
    CHECK(split.train.size() == 4); // every patient has training searches now
}

TEST_CASE("hit_rate basics") {
    ScoredList top;
    for (TermId t = 0; t < 12; ++t) top.push_back({t, 12.0 - t});
    std::vector<ScoredList> lists = {top, top};

    CHECK(hit_rate(lists, {0, 0}, 1) == 1.0);           // truth ranked first everywhere
    CHECK(hit_rate(lists, {5, 0}, 3) == 0.5);           // one hit, one miss at k=3
    CHECK(hit_rate(lists, {5, 5}, 5) == 0.0);           // rank 6
    CHECK(hit_rate(lists, {5, 5}, 10) == 1.0);          // rank 6 counts at k=10
    CHECK(hit_rate(lists, {-1, 0}, 1) == 0.5);          // unseen truth is a miss
    CHECK_THROWS_AS(hit_rate(lists, {0, 0}, 0), DataError);
}

TEST_CASE("stratification groups by session length") {
    Fixture f = make_fixture();
    CutoffSplit split = cutoff_split(f.ds, f.sessions, kCutoff);

    // synthesize points of known session lengths
    split.test_points.clear();
    for (int len : {2, 2, 4, 6, 9, 15, 26, 3, 7, 11}) {
        RecommendationPoint p;
        p.session_length = len;
        split.test_points.push_back(p);
    }
    std::vector<int> ranks = {1, 2, 6, 1, 11, 1, 3, 4, 1, 2};
    const auto rows = stratify_by_session_length(split, ranks);
    REQUIRE(rows.size() == 5);
    int total = 0;
    for (const auto& row : rows) total += row.count;
    CHECK(total == 10);
    CHECK(rows[0].count == 2);
    CHECK(rows[0].min_len == 2);
    CHECK(rows[0].max_len == 2);
    CHECK(rows[4].max_len == 26);
    for (std::size_t g = 1; g < rows.size(); ++g) CHECK(rows[g].min_len >= rows[g - 1].max_len);

    // degenerate ties: equal lengths split into near-equal groups
    for (auto& p : split.test_points) p.session_length = 7;
    const auto tied = stratify_by_session_length(split, ranks);
    for (const auto& row : tied) CHECK(row.count == 2);

    // fewer than five sessions: single group fallback
    split.test_points.resize(3);
    ranks.resize(3);
    const auto single = stratify_by_session_length(split, ranks);
    REQUIRE(single.size() == 1);
    CHECK(single[0].count == 3);
}

TEST_CASE("grid_search singleton grids and HR monotonicity") {
    Fixture f = make_fixture();
    const CutoffSplit split = cutoff_split(f.ds, f.sessions, kCutoff);

    Grids grids;
    grids.ms = {2};
    grids.mc = {1};
    grids.alpha = {0.5};
    grids.d = {1};
    grids.gamma = {0.01};
    grids.sigma = {0.5};
    grids.pthr = {0.1};
    grids.tthr = {0.1};
    grids.talpha = {0.5};
    EvalContext ctx;
    ctx.train.seed = 5;

    for (Method method : {Method::hcfm, Method::copm, Method::ptn, Method::tptcf}) {
        const GridSearchResult res = grid_search(split, method, grids, ctx);
        REQUIRE(res.reports.size() == 1);
        const auto& hr = res.reports.front().hr;
        for (std::size_t i = 1; i < hr.size(); ++i) CHECK(hr[i] >= hr[i - 1]);
        CHECK(res.reports.front().method == method_name(method));
    }

    // ptn has no parameters: exactly one report even with rich grids
    const GridSearchResult ptn = grid_search(split, Method::ptn, Grids::defaults(), ctx);
    CHECK(ptn.reports.size() == 1);
    CHECK(ptn.reports.front().params.empty());
}

TEST_CASE("grid_search records training failures and fails only when all do") {
    Fixture f = make_fixture();
    const CutoffSplit split = cutoff_split(f.ds, f.sessions, kCutoff);
    EvalContext ctx;

    Grids grids;
    grids.ms = {1};
    grids.mc = {1};
    grids.alpha = {0.0};
    grids.gamma = {0.01};
    grids.sigma = {0.5};

    grids.d = {32}; // n=2 codes, m=2 terms: impossible
    CHECK_THROWS_AS(grid_search(split, Method::hcfm, grids, ctx), TrainingError);

    grids.d = {1, 32};
    const GridSearchResult res = grid_search(split, Method::hcfm, grids, ctx);
    CHECK(res.reports.size() == 1);
    REQUIRE(res.failures.size() == 1);
    CHECK(res.failures.front().find("d=32") != std::string::npos);
}

TEST_CASE("leakage: dropping post-cutoff events leaves the trained model bit-identical") {
    TempDir dir("leak");
    GeneratorConfig gc;
    gc.seed = 7;
    gc.n_patients = 40;
    const GeneratedFiles files = generate(gc, dir.file("data"));
    const ParseResult parsed = parse_events(files.encounter_path, files.search_path);
    Dataset full = apply_filters(parsed, PreprocessConfig{});
    auto full_sessions = sessionize(full.patients, SessionConfig{});
    const Timestamp cutoff = search_time_quantile(full, 0.8);

    Dataset truncated = drop_post_cutoff(full, cutoff);
    auto trunc_sessions = sessionize(truncated.patients, SessionConfig{});

    const CutoffSplit s1 = cutoff_split(full, full_sessions, cutoff);
    const CutoffSplit s2 = cutoff_split(truncated, trunc_sessions, cutoff, true);

    CHECK(s1.train_terms.raws == s2.train_terms.raws);
    CHECK(s1.train_codes.raws == s2.train_codes.raws);

    TrainConfig config;
    config.d = 4;
    config.seed = 11;
    config.max_epochs = 40;
    TrainResult m1 = train(training_matrix(s1, 0.5), config);
    TrainResult m2 = train(training_matrix(s2, 0.5), config);
    bind_dictionaries(m1.model, s1.train_codes.raws, s1.train_terms.raws);
    bind_dictionaries(m2.model, s2.train_codes.raws, s2.train_terms.raws);

    save_model(m1.model, dir.file("m1.bin"));
    save_model(m2.model, dir.file("m2.bin"));
    CHECK(read_file(dir.file("m1.bin")) == read_file(dir.file("m2.bin")));
}

TEST_CASE("report writers are stable and mark the best per metric") {
    Fixture f = make_fixture();
    const CutoffSplit split = cutoff_split(f.ds, f.sessions, kCutoff);
    EvalContext ctx;
    Grids grids;
    grids.ms = {1, 2};
    grids.mc = {1};
    grids.alpha = {0.0, 1.0};
    grids.d = {1};
    grids.gamma = {0.01};
    const GridSearchResult res = grid_search(split, Method::hcfm, grids, ctx);
    REQUIRE(res.reports.size() == 4);
    // sorted by HR@5 descending
    for (std::size_t i = 1; i < res.reports.size(); ++i)
        CHECK(res.reports[i - 1].hr_at(5) >= res.reports[i].hr_at(5));

    const std::string csv = report_csv(res.reports);
    CHECK(csv.find("method,ms,mc,alpha,d,gamma,hr1") == 0);
    const std::string csv2 = report_csv(grid_search(split, Method::hcfm, grids, ctx).reports);
    CHECK(csv == csv2);
    CHECK(report_table(res.reports).find('*') != std::string::npos);
}

TEST_CASE("grid file parsing") {
    TempDir dir("grid");
    write_file(dir.file("g.txt"), "ms=1,2,all\nmc=2\nalpha=0,0.5\nd=8\ngamma=0.02\n");
    const Grids g = parse_grid_file(dir.file("g.txt"));
    CHECK(g.ms == std::vector<int>{1, 2, kAllRecentTerms});
    CHECK(g.mc == std::vector<int>{2});
    CHECK(g.alpha == std::vector<double>{0.0, 0.5});
    CHECK(g.d == std::vector<int>{8});
    CHECK(g.gamma == std::vector<double>{0.02});
    CHECK(g.sigma == Grids::defaults().sigma); // untouched keys keep defaults
    CHECK_THROWS_AS(parse_grid_file(dir.file("missing.txt")), DataError);
    write_file(dir.file("bad.txt"), "nope=1\n");
    CHECK_THROWS_AS(parse_grid_file(dir.file("bad.txt")), DataError);
}

TEST_CASE("search_time_quantile nearest rank") {
    Fixture f = make_fixture();
    const Timestamp q0 = search_time_quantile(f.ds, 0.0);
    const Timestamp q1 = search_time_quantile(f.ds, 1.0);
    CHECK(q0 <= q1);
    CHECK(q1 == parse_timestamp("2014-07-20T08:00:00Z"));
    CHECK_THROWS_AS(search_time_quantile(f.ds, 1.5), DataError);
}
