// termrec: synthetic-data generation, ingestion, co-occurrence building,
// factor training, scoring, and CUTOFF evaluation in one binary.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "termrec/errors.hpp"
#include "termrec/evaluate.hpp"
#include "termrec/manifest.hpp"
#include "termrec/synth.hpp"
#include "termrec/text.hpp"

namespace fs = std::filesystem;
using namespace termrec;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitTraining = 4;

struct DataArgs {
    std::string data_dir;
    std::string synonyms;

    std::string encounters() const { return (fs::path(data_dir) / "encounters.csv").string(); }
    std::string searches() const { return (fs::path(data_dir) / "searches.csv").string(); }
};

void add_data_flags(CLI::App* cmd, DataArgs& args) {
    cmd->add_option("--data", args.data_dir,
                    "directory holding encounters.csv and searches.csv")
        ->required();
    cmd->add_option("--synonyms", args.synonyms, "optional synonym CSV (from,to)");
}

Dataset load_dataset(const DataArgs& args, const PreprocessConfig& config,
                     ParseResult* parsed_out = nullptr) {
    PreprocessConfig cfg = config;
    if (!args.synonyms.empty()) cfg.synonym_map = load_synonym_map(args.synonyms);
    ParseResult parsed = parse_events(args.encounters(), args.searches(),
                                      cfg.synonym_map.empty() ? nullptr : &cfg.synonym_map);
    for (const auto& err : parsed.errors)
        std::cerr << "warning: " << err.file << ":" << err.line_no << ": " << err.message << "\n";
    if (parsed_out) *parsed_out = parsed;
    return apply_filters(parsed, cfg);
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write '" + path + "'");
    os << content;
}

void manifest_data_inputs(RunManifest& man, const DataArgs& args) {
    man.set_file("encounters", args.encounters());
    man.set_file("searches", args.searches());
    if (!args.synonyms.empty()) man.set_file("synonyms", args.synonyms);
}

void manifest_preprocess(RunManifest& man, const PreprocessConfig& cfg,
                         const SessionConfig& session) {
    man.set("min_searches_per_patient", static_cast<std::int64_t>(cfg.min_searches_per_patient));
    man.set("min_encounters_per_patient",
            static_cast<std::int64_t>(cfg.min_encounters_per_patient));
    man.set("min_term_frequency", static_cast<std::int64_t>(cfg.min_term_frequency));
    man.set("drop_irregular_terms", static_cast<std::int64_t>(cfg.drop_irregular_terms ? 1 : 0));
    man.set("window_days", static_cast<std::int64_t>(session.window_seconds / kSecondsPerDay));
}

// missing/contradictory flags, reported with the usage exit code
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CutoffArgs {
    std::string cutoff_text;
    double quantile = -1.0;

    bool given() const { return !cutoff_text.empty() || quantile >= 0.0; }

    Timestamp resolve(const Dataset& ds) const {
        if (!cutoff_text.empty()) return parse_timestamp(cutoff_text);
        if (quantile >= 0.0) return search_time_quantile(ds, quantile);
        throw UsageError("either --cutoff or --cutoff-quantile is required");
    }
};

void add_cutoff_flags(CLI::App* cmd, CutoffArgs& args) {
    auto* a = cmd->add_option("--cutoff", args.cutoff_text, "split time, ISO-8601 UTC");
    auto* b = cmd->add_option("--cutoff-quantile", args.quantile,
                              "split at this quantile of all search times")
                  ->check(CLI::Range(0.0, 1.0));
    a->excludes(b);
}

int run_generate(const std::string& config_path, const std::string& out_dir) {
    GeneratorConfig config =
        config_path.empty() ? GeneratorConfig{} : load_generator_config(config_path);
    const GeneratedFiles files = generate(config, out_dir);

    RunManifest man;
    man.subcommand = "generate";
    if (!config_path.empty()) man.set_file("config", config_path);
    std::istringstream kv(generator_config_kv(config));
    std::string line;
    while (std::getline(kv, line)) {
        const auto eq = line.find('=');
        man.set(line.substr(0, eq), line.substr(eq + 1));
    }
    man.set_file("encounters_out", files.encounter_path);
    man.set_file("searches_out", files.search_path);
    man.write((fs::path(out_dir) / "manifest.txt").string());
    std::cout << "wrote " << files.encounter_path << " and " << files.search_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"next-search-term recommendation pipeline"};
    app.require_subcommand(1);

    int workers = 0;
    app.add_option("--workers", workers, "cap OpenMP worker threads (0 = library default)");

    // generate
    auto* gen = app.add_subcommand("generate", "emit a synthetic event-log pair");
    std::string gen_config, gen_out;
    gen->add_option("--config", gen_config, "key=value generator config file")->required();
    gen->add_option("--out", gen_out, "output directory")->required();

    // shared preprocessing knobs
    PreprocessConfig pre;
    SessionConfig session;
    std::int64_t window_days = 90;
    auto add_pre_flags = [&](CLI::App* cmd) {
        cmd->add_option("--min-searches", pre.min_searches_per_patient);
        cmd->add_option("--min-encounters", pre.min_encounters_per_patient);
        cmd->add_option("--min-term-freq", pre.min_term_frequency);
        cmd->add_flag("--keep-irregular", [&pre](std::int64_t) { pre.drop_irregular_terms = false; },
                      "keep numeric/punctuation tokens");
        cmd->add_option("--window-days", window_days, "session window in days");
    };

    // ingest
    auto* ing = app.add_subcommand("ingest", "parse, filter, and report dataset statistics");
    DataArgs ing_data;
    std::string ing_out;
    add_data_flags(ing, ing_data);
    add_pre_flags(ing);
    ing->add_option("--out", ing_out, "output directory")->required();

    // build
    auto* bld = app.add_subcommand("build", "build the decayed co-occurrence matrix");
    DataArgs bld_data;
    CutoffArgs bld_cutoff;
    std::string bld_out;
    double bld_lambda = 0.5;
    add_data_flags(bld, bld_data);
    add_pre_flags(bld);
    add_cutoff_flags(bld, bld_cutoff);
    bld->add_option("--lambda", bld_lambda, "co-occurrence decay in (0,1)");
    bld->add_option("--out", bld_out, "output directory")->required();

    // train
    auto* trn = app.add_subcommand("train", "factorize the co-occurrence matrix");
    DataArgs trn_data;
    CutoffArgs trn_cutoff;
    std::string trn_out;
    double trn_lambda = 0.5;
    TrainConfig trn_cfg;
    add_data_flags(trn, trn_data);
    add_pre_flags(trn);
    add_cutoff_flags(trn, trn_cutoff);
    trn->add_option("--lambda", trn_lambda);
    trn->add_option("--d", trn_cfg.d, "latent dimension");
    trn->add_option("--gamma", trn_cfg.gamma, "regularization weight");
    trn->add_option("--lr", trn_cfg.learning_rate);
    trn->add_option("--epochs", trn_cfg.max_epochs);
    trn->add_option("--rel-tol", trn_cfg.rel_tol);
    trn->add_option("--seed", trn_cfg.seed);
    trn->add_option("--out", trn_out, "output directory")->required();

    // recommend
    auto* rec = app.add_subcommand("recommend", "score contexts against a saved model");
    std::string rec_model, rec_context, rec_method = "hcfm";
    int rec_n = 10;
    HcfmParams rec_params;
    std::string rec_ms = "all";
    double rec_sigma = 0.5;
    rec->add_option("--model", rec_model, "model file from 'train'")->required();
    rec->add_option("--context", rec_context,
                    "context file: terms|enc1codes|enc2codes... per line, ';'-joined")
        ->required();
    rec->add_option("-N,--top", rec_n, "list length");
    rec->add_option("--method", rec_method)->check(CLI::IsMember({"hcfm", "copm"}));
    rec->add_option("--alpha", rec_params.alpha);
    rec->add_option("--ms", rec_ms, "recent-search window or 'all'");
    rec->add_option("--mc", rec_params.m_c);
    rec->add_option("--sigma", rec_sigma);

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "CUTOFF split, scoring, and HR@k reports");
    DataArgs ev_data;
    CutoffArgs ev_cutoff;
    std::string ev_out, ev_method = "hcfm", ev_grid_file, ev_ms = "6";
    double ev_lambda = 0.5, ev_sigma = 0.5, ev_alpha = 0.2;
    double ev_pthr = 0.1, ev_tthr = 0.1, ev_talpha = 0.5;
    int ev_mc = 2, ev_dump_scores = 0;
    bool ev_use_grid = false, ev_dump_sessions = false;
    TrainConfig ev_train;
    add_data_flags(ev, ev_data);
    add_pre_flags(ev);
    add_cutoff_flags(ev, ev_cutoff);
    ev->add_option("--method", ev_method)->check(CLI::IsMember({"hcfm", "copm", "ptn", "tptcf"}));
    ev->add_flag("--grid-search", ev_use_grid, "evaluate the whole parameter grid");
    ev->add_option("--grid", ev_grid_file, "grid file overriding the default grids");
    ev->add_option("--lambda", ev_lambda);
    ev->add_option("--sigma", ev_sigma);
    ev->add_option("--alpha", ev_alpha);
    ev->add_option("--ms", ev_ms);
    ev->add_option("--mc", ev_mc);
    ev->add_option("--pthr", ev_pthr, "patient similarity threshold");
    ev->add_option("--tthr", ev_tthr, "term similarity threshold");
    ev->add_option("--talpha", ev_talpha, "similarity-score weight");
    ev->add_option("--d", ev_train.d);
    ev->add_option("--gamma", ev_train.gamma);
    ev->add_option("--lr", ev_train.learning_rate);
    ev->add_option("--epochs", ev_train.max_epochs);
    ev->add_option("--rel-tol", ev_train.rel_tol);
    ev->add_option("--seed", ev_train.seed);
    ev->add_option("--dump-scores", ev_dump_scores, "write top-N scores per test point");
    ev->add_flag("--dump-sessions", ev_dump_sessions, "write the session table");
    ev->add_option("--out", ev_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : kExitUsage;
    }

#ifdef _OPENMP
    if (workers > 0) omp_set_num_threads(workers);
#endif

    try {
        session.window_seconds = window_days * kSecondsPerDay;

        if (gen->parsed()) return run_generate(gen_config, gen_out);

        if (ing->parsed()) {
            fs::create_directories(ing_out);
            Dataset ds = load_dataset(ing_data, pre);
            auto sessions = sessionize(ds.patients, session);
            std::size_t n_sessions = 0;
            for (const auto& s : sessions) n_sessions += s.size();

            write_text((fs::path(ing_out) / "filter_report.txt").string(),
                       ds.report.to_text() + "  Number of sessions:                          " +
                           std::to_string(n_sessions) + "\n");
            write_text((fs::path(ing_out) / "filter_report.kv").string(),
                       ds.report.to_kv() + "sessions=" + std::to_string(n_sessions) + "\n");
            write_text((fs::path(ing_out) / "sessions.csv").string(),
                       session_dump_csv(ds.patients, sessions));

            RunManifest man;
            man.subcommand = "ingest";
            manifest_data_inputs(man, ing_data);
            manifest_preprocess(man, pre, session);
            man.set_file("filter_report", (fs::path(ing_out) / "filter_report.txt").string());
            man.set_file("sessions_csv", (fs::path(ing_out) / "sessions.csv").string());
            man.write((fs::path(ing_out) / "manifest.txt").string());
            std::cout << ds.report.to_text();
            return 0;
        }

        if (bld->parsed()) {
            fs::create_directories(bld_out);
            Dataset ds = load_dataset(bld_data, pre);
            auto sessions = sessionize(ds.patients, session);
            CooccurrenceMatrix a;
            if (!bld_cutoff.cutoff_text.empty() || bld_cutoff.quantile >= 0.0) {
                const Timestamp cutoff = bld_cutoff.resolve(ds);
                const CutoffSplit split = cutoff_split(ds, sessions, cutoff, true);
                a = training_matrix(split, bld_lambda);
            } else {
                std::vector<PatientEvents> events;
                for (const auto& h : ds.patients) events.push_back(patient_events(h));
                a = build_cooccurrence(events, ds.codes.size(), ds.terms.size(), bld_lambda);
            }
            const std::string matrix_path = (fs::path(bld_out) / "cooccurrence.txt").string();
            std::ofstream os(matrix_path, std::ios::binary);
            dump_matrix(a, os);
            os.close();

            RunManifest man;
            man.subcommand = "build";
            manifest_data_inputs(man, bld_data);
            manifest_preprocess(man, pre, session);
            man.set("lambda", bld_lambda);
            if (!bld_cutoff.cutoff_text.empty() || bld_cutoff.quantile >= 0.0)
                man.set("cutoff", format_timestamp(bld_cutoff.resolve(ds)));
            man.set("nnz", static_cast<std::int64_t>(a.nnz()));
            man.set_file("matrix", matrix_path);
            man.write((fs::path(bld_out) / "manifest.txt").string());
            std::cout << "matrix " << a.n << "x" << a.m << " with " << a.nnz() << " entries\n";
            return 0;
        }

        if (trn->parsed()) {
            fs::create_directories(trn_out);
            Dataset ds = load_dataset(trn_data, pre);
            auto sessions = sessionize(ds.patients, session);

            CooccurrenceMatrix a;
            std::vector<std::string> code_names, term_names;
            if (!trn_cutoff.cutoff_text.empty() || trn_cutoff.quantile >= 0.0) {
                const Timestamp cutoff = trn_cutoff.resolve(ds);
                const CutoffSplit split = cutoff_split(ds, sessions, cutoff, true);
                a = training_matrix(split, trn_lambda);
                code_names = split.train_codes.raws;
                term_names = split.train_terms.raws;
            } else {
                std::vector<PatientEvents> events;
                for (const auto& h : ds.patients) events.push_back(patient_events(h));
                a = build_cooccurrence(events, ds.codes.size(), ds.terms.size(), trn_lambda);
                code_names = ds.codes.raws;
                term_names = ds.terms.raws;
            }

            TrainResult res = train(a, trn_cfg);
            bind_dictionaries(res.model, code_names, term_names);
            const std::string model_path = (fs::path(trn_out) / "model.bin").string();
            save_model(res.model, model_path);

            RunManifest man;
            man.subcommand = "train";
            manifest_data_inputs(man, trn_data);
            manifest_preprocess(man, pre, session);
            man.set("lambda", trn_lambda);
            man.set("d", static_cast<std::int64_t>(trn_cfg.d));
            man.set("gamma", trn_cfg.gamma);
            man.set("learning_rate", trn_cfg.learning_rate);
            man.set("max_epochs", static_cast<std::int64_t>(trn_cfg.max_epochs));
            man.set("rel_tol", trn_cfg.rel_tol);
            man.set("seed", static_cast<std::int64_t>(trn_cfg.seed));
            man.set("epochs_run", static_cast<std::int64_t>(res.epochs));
            man.set("final_objective", res.objective_trace.back());
            man.set_file("model", model_path);
            man.set_file("model_dict", model_path + ".dict");
            man.write((fs::path(trn_out) / "manifest.txt").string());
            std::cout << "trained d=" << trn_cfg.d << " in " << res.epochs
                      << " epochs, objective " << format_double(res.objective_trace.back()) << "\n";
            return 0;
        }

        if (rec->parsed()) {
            rec_params.m_s = ms_from_string(rec_ms);
            const FactorModel model = load_model(rec_model);
            Dictionary codes, terms;
            for (const auto& c : model.code_names) codes.intern(c);
            for (const auto& t : model.term_names) terms.intern(t);

            std::ifstream ctx(rec_context);
            if (!ctx) throw DataError("cannot open context file '" + rec_context + "'");
            std::string line;
            std::size_t query = 0;
            std::cout << "query,rank,term,score\n";
            while (std::getline(ctx, line)) {
                if (!line.empty() && line.back() == '\r') line.pop_back();
                if (line.empty() || line[0] == '#') continue;
                ++query;
                const auto fields = split(line, '|');
                RecommendationPoint point;
                for (const auto& raw : split(fields[0], ';')) {
                    if (raw.empty()) continue;
                    const auto id = terms.find(normalize_term(raw, nullptr));
                    if (id) point.session_prefix.push_back(*id);
                    else std::cerr << "warning: unknown term '" << raw << "' skipped\n";
                }
                for (std::size_t f = 1; f < fields.size(); ++f) {
                    std::vector<CodeId> enc;
                    for (const auto& raw : split(fields[f], ';')) {
                        if (raw.empty()) continue;
                        const auto id = codes.find(normalize_whitespace(raw));
                        if (id) enc.push_back(*id);
                        else std::cerr << "warning: unknown code '" << raw << "' skipped\n";
                    }
                    if (!enc.empty()) point.encounters.push_back(std::move(enc));
                }
                point.matched_encounter = static_cast<int>(point.encounters.size()) - 1;

                const ScoredList list = rec_method == "copm"
                                            ? copm_score(point, model, rec_sigma)
                                            : hcfm_score(point, model, rec_params);
                const auto upto = std::min<std::size_t>(static_cast<std::size_t>(rec_n), list.size());
                for (std::size_t r = 0; r < upto; ++r)
                    std::cout << query << ',' << r + 1 << ','
                              << csv_quote(model.term_names[static_cast<std::size_t>(list[r].term)])
                              << ',' << format_double(list[r].score) << "\n";
            }
            return 0;
        }

        if (ev->parsed()) {
            if (!ev_cutoff.given()) throw UsageError("evaluate needs --cutoff or --cutoff-quantile");
            fs::create_directories(ev_out);
            Dataset ds = load_dataset(ev_data, pre);
            auto sessions = sessionize(ds.patients, session);
            const Timestamp cutoff = ev_cutoff.resolve(ds);
            const CutoffSplit split = cutoff_split(ds, sessions, cutoff);

            Grids grids;
            if (!ev_grid_file.empty()) grids = parse_grid_file(ev_grid_file);
            else if (ev_use_grid) grids = Grids::defaults();
            else {
                grids.ms = {ms_from_string(ev_ms)};
                grids.mc = {ev_mc};
                grids.alpha = {ev_alpha};
                grids.d = {ev_train.d};
                grids.gamma = {ev_train.gamma};
                grids.sigma = {ev_sigma};
                grids.pthr = {ev_pthr};
                grids.tthr = {ev_tthr};
                grids.talpha = {ev_talpha};
            }

            EvalContext ctx;
            ctx.lambda = ev_lambda;
            ctx.train = ev_train;
            const Method method = parse_method(ev_method);
            const GridSearchResult result = grid_search(split, method, grids, ctx);
            for (const auto& f : result.failures) std::cerr << "warning: " << f << "\n";

            write_text((fs::path(ev_out) / "report.csv").string(), report_csv(result.reports));
            std::string table = split.stats.to_text() + "\n" + report_table(result.reports);
            if (!result.reports.empty())
                table += "\nbest by HR@5:\n" + quintile_table(result.reports.front());
            write_text((fs::path(ev_out) / "report.txt").string(), table);
            write_text((fs::path(ev_out) / "split_stats.kv").string(), split.stats.to_kv());
            if (!result.reports.empty())
                write_text((fs::path(ev_out) / "quintiles.csv").string(),
                           quintile_csv(result.reports.front()));
            if (ev_dump_sessions)
                write_text((fs::path(ev_out) / "sessions.csv").string(),
                           session_dump_csv(ds.patients, sessions));

            if (ev_dump_scores > 0 && !result.reports.empty()) {
                // re-score the best parameter point and dump its top-N lists
                const auto& best = result.reports.front();
                std::ostringstream os;
                os << "patient_id,target_index,rank,term,score\n";
                auto param = [&](const std::string& key) {
                    for (const auto& [k, v] : best.params)
                        if (k == key) return v;
                    return std::string();
                };
                const CooccurrenceMatrix a = training_matrix(split, ctx.lambda);
                FactorModel model;
                if (method != Method::ptn && method != Method::tptcf) {
                    TrainConfig cfg = ev_train;
                    cfg.d = std::stoi(param("d"));
                    cfg.gamma = std::stod(param("gamma"));
                    model = train(a, cfg).model;
                }
                TptcfModel tmodel;
                std::vector<std::vector<int>> counts;
                if (method == Method::tptcf) {
                    std::vector<std::vector<TermId>> seqs(split.train.size());
                    for (std::size_t p = 0; p < split.train.size(); ++p)
                        for (const auto& [term, m] : split.train[p].searches)
                            seqs[p].push_back(term);
                    tmodel = build_tptcf(seqs, split.train_terms.size());
                } else if (method == Method::ptn) {
                    counts.assign(split.train.size(),
                                  std::vector<int>(split.train_terms.size(), 0));
                    for (std::size_t p = 0; p < split.train.size(); ++p)
                        for (const auto& [term, m] : split.train[p].searches) ++counts[p][term];
                }
                for (const auto& point : split.test_points) {
                    ScoredList list;
                    switch (method) {
                        case Method::hcfm: {
                            HcfmParams hp;
                            hp.m_s = ms_from_string(param("ms"));
                            hp.m_c = std::stoi(param("mc"));
                            hp.alpha = std::stod(param("alpha"));
                            list = hcfm_score(point, model, hp);
                            break;
                        }
                        case Method::copm:
                            list = copm_score(point, model, std::stod(param("sigma")));
                            break;
                        case Method::ptn:
                            list = ptn_score(counts[static_cast<std::size_t>(point.train_patient)]);
                            break;
                        case Method::tptcf: {
                            TptcfParams tp{std::stod(param("pthr")), std::stod(param("tthr")),
                                           std::stod(param("talpha"))};
                            list = tptcf_score(point, tmodel, tp);
                            break;
                        }
                    }
                    const auto& pid =
                        ds.patients[static_cast<std::size_t>(
                                        split.train[static_cast<std::size_t>(point.train_patient)]
                                            .dataset_index)]
                            .patient;
                    const auto upto =
                        std::min<std::size_t>(static_cast<std::size_t>(ev_dump_scores), list.size());
                    for (std::size_t r = 0; r < upto; ++r)
                        os << pid << ',' << point.target_index + 1 << ',' << r + 1 << ','
                           << csv_quote(split.train_terms.raw(list[r].term)) << ','
                           << format_double(list[r].score) << "\n";
                }
                write_text((fs::path(ev_out) / "scores.csv").string(), os.str());
            }

            RunManifest man;
            man.subcommand = "evaluate";
            manifest_data_inputs(man, ev_data);
            manifest_preprocess(man, pre, session);
            man.set("cutoff", format_timestamp(cutoff));
            man.set("method", ev_method);
            man.set("lambda", ev_lambda);
            man.set("sigma", ev_sigma);
            man.set("learning_rate", ev_train.learning_rate);
            man.set("max_epochs", static_cast<std::int64_t>(ev_train.max_epochs));
            man.set("rel_tol", ev_train.rel_tol);
            man.set("seed", static_cast<std::int64_t>(ev_train.seed));
            man.set("grid", ev_grid_file.empty() ? (ev_use_grid ? "default" : "single-point")
                                                 : ev_grid_file);
            man.set("reports", static_cast<std::int64_t>(result.reports.size()));
            man.set("training_failures", static_cast<std::int64_t>(result.failures.size()));
            man.set_file("report_csv", (fs::path(ev_out) / "report.csv").string());
            man.set_file("report_txt", (fs::path(ev_out) / "report.txt").string());
            man.write((fs::path(ev_out) / "manifest.txt").string());

            if (!result.reports.empty()) {
                const auto& best = result.reports.front();
                std::cout << "best " << best.method << " HR@1=" << format_double(best.hr_at(1))
                          << " HR@5=" << format_double(best.hr_at(5)) << " over "
                          << split.test_points.size() << " test points\n";
            }
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const TrainingError& e) {
        std::cerr << "training error: " << e.what() << "\n";
        return kExitTraining;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
