#include <doctest.h>

#include <string>

#include "helpers.hpp"
#include "termrec/errors.hpp"
#include "termrec/evaluate.hpp"
#include "termrec/synth.hpp"

using namespace termrec;
using termrec::testing::TempDir;
using termrec::testing::read_file;

TEST_CASE("same seed produces byte-identical files") {
    TempDir dir("gen_det");
    GeneratorConfig config;
    config.n_patients = 25;
    config.seed = 3;
    const GeneratedFiles a = generate(config, dir.file("a"));
    const GeneratedFiles b = generate(config, dir.file("b"));
    CHECK(read_file(a.encounter_path) == read_file(b.encounter_path));
    CHECK(read_file(a.search_path) == read_file(b.search_path));

    config.seed = 4;
    const GeneratedFiles c = generate(config, dir.file("c"));
    CHECK(read_file(a.search_path) != read_file(c.search_path));
}

TEST_CASE("generated files pass ingestion cleanly") {
    TempDir dir("gen_ingest");
    GeneratorConfig config;
    config.n_patients = 30;
    config.seed = 9;
    const GeneratedFiles files = generate(config, dir.file("d"));
    const ParseResult parsed = parse_events(files.encounter_path, files.search_path);
    CHECK(parsed.errors.empty());
    const Dataset ds = apply_filters(parsed, PreprocessConfig{});
    // clamps keep nearly every patient above the minima; a patient can still
    // slip under when a singleton term of theirs is dropped by the frequency
    // filter
    CHECK(ds.patients.size() >= 28);
    for (const auto& h : ds.patients) {
        CHECK(h.n_searches() >= 2);
        CHECK(h.n_encounters() >= 3);
        for (std::size_t i = 1; i < h.searches.size(); ++i)
            CHECK(h.searches[i - 1].time < h.searches[i].time); // strictly increasing
    }
}

TEST_CASE("p_signal=1 with one code per encounter always emits the planted term") {
    TempDir dir("gen_signal");
    GeneratorConfig config;
    config.n_patients = 20;
    config.p_signal = 1.0;
    config.codes_per_encounter = 1;
    config.seed = 5;
    const GeneratedFiles files = generate(config, dir.file("d"));
    const ParseResult parsed = parse_events(files.encounter_path, files.search_path);
    const Dataset ds = apply_filters(parsed, PreprocessConfig{});

    for (const auto& h : ds.patients) {
        for (const auto& s : h.searches) {
            REQUIRE(s.matched_encounter >= 0);
            const auto& enc = h.encounters[static_cast<std::size_t>(s.matched_encounter)];
            bool planted = false;
            for (CodeId c : enc.codes) {
                const int raw_code = std::stoi(ds.codes.raw(c).substr(1));
                char buf[16];
                std::snprintf(buf, sizeof(buf), "term%03d", raw_code % config.n_terms);
                if (ds.terms.raw(s.term) == buf) planted = true;
            }
            CHECK(planted);
        }
    }
}

TEST_CASE("p_signal=0 spreads terms roughly uniformly") {
    TempDir dir("gen_noise");
    GeneratorConfig config;
    config.n_patients = 150;
    config.p_signal = 0.0;
    config.seed = 6;
    const GeneratedFiles files = generate(config, dir.file("d"));
    const ParseResult parsed = parse_events(files.encounter_path, files.search_path);

    std::vector<int> freq(static_cast<std::size_t>(config.n_terms), 0);
    std::size_t total = 0;
    for (const auto& r : parsed.records) {
        if (r.kind != RawRecord::Kind::search) continue;
        ++freq[static_cast<std::size_t>(std::stoi(r.term.substr(4)))];
        ++total;
    }
    const double expected = static_cast<double>(total) / config.n_terms;
    CHECK(expected > 15.0);
    double chi2 = 0.0;
    for (int f : freq) chi2 += (f - expected) * (f - expected) / expected;
    // chi-square with 59 dof: mean 59, sd ~10.9; this is a deterministic draw
    CHECK(chi2 < 120.0);
}

TEST_CASE("planted recovery: context holding one code ranks its planted term first") {
    TempDir dir("gen_recover");
    GeneratorConfig config;
    config.n_patients = 50;
    config.n_codes = 6;
    config.n_terms = 12;
    config.p_signal = 1.0;
    config.searches_per_encounter = 3.0;
    config.seed = 5;
    const GeneratedFiles files = generate(config, dir.file("d"));
    const ParseResult parsed = parse_events(files.encounter_path, files.search_path);
    Dataset ds = apply_filters(parsed, PreprocessConfig{});

    // With every search planted, the vocabulary collapses onto the planted
    // image, so the planted block alone has rank min(n, m). The decayed
    // cross-encounter mass is what lets a rank d < min(n, m) model keep every
    // row's argmax; retain it strongly and factorize at the largest legal d.
    std::vector<PatientEvents> events;
    for (const auto& h : ds.patients) events.push_back(patient_events(h));
    const auto a = build_cooccurrence(events, ds.codes.size(), ds.terms.size(), 0.9);
    TrainConfig tc;
    tc.d = std::min(ds.codes.size(), ds.terms.size()) - 1;
    tc.seed = 1;
    tc.max_epochs = 1500;
    tc.rel_tol = 1e-12;
    const FactorModel model = train(a, tc).model;

    HcfmParams params;
    params.alpha = 0.0;
    params.m_c = 1;
    params.m_s = 1;
    int recovered = 0;
    for (CodeId c = 0; c < ds.codes.size(); ++c) {
        const int raw_code = std::stoi(ds.codes.raw(c).substr(1));
        char buf[16];
        std::snprintf(buf, sizeof(buf), "term%03d", raw_code % config.n_terms);
        const auto planted = ds.terms.find(buf);
        REQUIRE(planted.has_value());

        RecommendationPoint point;
        point.encounters = {{c}};
        point.matched_encounter = 0;
        if (hcfm_score(point, model, params)[0].term == *planted) ++recovered;
    }
    CHECK(recovered == ds.codes.size());
}

TEST_CASE("sparse mode lets the filters drop thin patients") {
    TempDir dir("gen_sparse");
    GeneratorConfig config;
    config.n_patients = 40;
    config.sparse_mode = true;
    config.searches_per_encounter = 0.3;
    config.seed = 12;
    const GeneratedFiles files = generate(config, dir.file("d"));
    const ParseResult parsed = parse_events(files.encounter_path, files.search_path);
    const Dataset ds = apply_filters(parsed, PreprocessConfig{});
    CHECK(ds.patients.size() < 40);
    for (const auto& h : ds.patients) CHECK(h.n_searches() >= 2);
}

TEST_CASE("generator config round trips through the key=value form") {
    TempDir dir("gen_cfg");
    GeneratorConfig config;
    config.seed = 42;
    config.n_patients = 77;
    config.p_signal = 0.25;
    config.planted_map = {3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8, 9, 7, 9, 3, 2, 3, 8, 4, 6, 2, 6,
                          4, 3, 3, 8, 3, 2, 7};
    testing::write_file(dir.file("c.txt"), generator_config_kv(config));
    const GeneratorConfig loaded = load_generator_config(dir.file("c.txt"));
    CHECK(loaded.seed == config.seed);
    CHECK(loaded.n_patients == config.n_patients);
    CHECK(loaded.p_signal == config.p_signal);
    CHECK(loaded.planted_map == config.planted_map);
    CHECK(generator_config_kv(loaded) == generator_config_kv(config));
}

TEST_CASE("generator rejects impossible configs") {
    GeneratorConfig config;
    config.n_patients = 0;
    CHECK_THROWS_AS(config.validate(), DataError);
    config = GeneratorConfig{};
    config.p_signal = 1.5;
    CHECK_THROWS_AS(config.validate(), DataError);
    config = GeneratorConfig{};
    config.planted_map = {1};
    CHECK_THROWS_AS(config.validate(), DataError);
    config = GeneratorConfig{};
    config.codes_per_encounter = 99;
    CHECK_THROWS_AS(config.validate(), DataError);
}
