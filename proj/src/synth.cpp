#include "termrec/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "termrec/errors.hpp"
#include "termrec/rng.hpp"
#include "termrec/text.hpp"

namespace termrec {

void GeneratorConfig::validate() const {
    if (n_patients < 1) throw DataError("generator needs at least one patient");
    if (n_codes < 2 || n_terms < 2) throw DataError("generator needs >= 2 codes and terms");
    if (p_signal < 0.0 || p_signal > 1.0) throw DataError("p_signal must be in [0, 1]");
    if (encounters_per_patient <= 0.0 || searches_per_encounter < 0.0)
        throw DataError("event-count means must be positive");
    if (codes_per_encounter < 1 || codes_per_encounter > n_codes)
        throw DataError("codes_per_encounter out of range");
    if (encounter_gap_mean_days < 1) throw DataError("encounter gap mean must be >= 1 day");
    if (session_gap_rate < 0.0 || session_gap_rate > 1.0)
        throw DataError("session_gap_rate must be in [0, 1]");
    if (!planted_map.empty()) {
        if (static_cast<int>(planted_map.size()) != n_codes)
            throw DataError("planted_map must have one term per code");
        for (TermId t : planted_map)
            if (t < 0 || t >= n_terms) throw DataError("planted_map term out of range");
    }
}

namespace {

std::string code_name(CodeId c) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "C%03d", c);
    return buf;
}

std::string term_name(TermId t) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "term%03d", t);
    return buf;
}

std::string patient_name(int p) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "p%05d", p);
    return buf;
}

struct Row {
    Timestamp time;
    std::string payload; // joined codes or term
};

} // namespace

GeneratedFiles generate(const GeneratorConfig& config, const std::string& out_dir) {
    config.validate();
    std::filesystem::create_directories(out_dir);

    std::vector<TermId> planted = config.planted_map;
    if (planted.empty()) {
        planted.resize(static_cast<std::size_t>(config.n_codes));
        for (int c = 0; c < config.n_codes; ++c)
            planted[static_cast<std::size_t>(c)] = static_cast<TermId>(c % config.n_terms);
    }

    Rng rng(config.seed);
    std::ostringstream enc_rows, search_rows;

    auto draw_code_pool = [&](std::vector<CodeId>& pool) {
        pool.clear();
        while (static_cast<int>(pool.size()) < config.codes_per_encounter) {
            const auto c = static_cast<CodeId>(rng.uniform_int(0, config.n_codes - 1));
            if (std::find(pool.begin(), pool.end(), c) == pool.end()) pool.push_back(c);
        }
        std::sort(pool.begin(), pool.end());
    };

    for (int p = 0; p < config.n_patients; ++p) {
        const std::string pid = patient_name(p);
        int n_enc = rng.poisson(config.encounters_per_patient);
        if (!config.sparse_mode) n_enc = std::max(n_enc, 3);
        else n_enc = std::max(n_enc, 1);

        // Codes persist across encounters in two regimes: a long early phase
        // and a late phase switched in around halfway through. Recent
        // encounters then predict the next search while the patient's
        // all-time term counts lag behind.
        std::vector<CodeId> early_pool, late_pool;
        draw_code_pool(early_pool);
        draw_code_pool(late_pool);
        if (late_pool == early_pool && config.codes_per_encounter < config.n_codes)
            while (late_pool == early_pool) draw_code_pool(late_pool);
        const int switch_at =
            n_enc >= 2
                ? std::clamp(static_cast<int>(n_enc * rng.uniform(0.35, 0.50)), 1, n_enc - 1)
                : n_enc;

        // Session gaps claim a fixed share of the encounter boundaries and the
        // remaining span is spread evenly over the normal boundaries, so
        // patient time spans stay comparable and a mid-span cutoff lands past
        // the code switch for everyone.
        const int n_bounds = std::max(n_enc - 1, 0);
        std::vector<std::int64_t> gap_days(static_cast<std::size_t>(n_bounds), 0);
        {
            const int n_gaps =
                std::min(n_bounds, static_cast<int>(config.session_gap_rate *
                                                        static_cast<double>(n_bounds) +
                                                    0.5));
            std::int64_t session_gap_total = 0;
            int placed = 0;
            while (placed < n_gaps) {
                const auto b = static_cast<std::size_t>(rng.uniform_int(0, n_bounds - 1));
                if (gap_days[b] == 0) {
                    gap_days[b] = 95 + rng.uniform_int(0, 45);
                    session_gap_total += gap_days[b];
                    ++placed;
                }
            }
            const int n_normal = n_bounds - n_gaps;
            if (n_normal > 0) {
                const std::int64_t span_days =
                    static_cast<std::int64_t>(config.encounter_gap_mean_days) * 18 +
                    rng.uniform_int(-30, 30);
                const std::int64_t per_gap =
                    std::max<std::int64_t>(1, (span_days - session_gap_total) / n_normal);
                for (auto& g : gap_days) {
                    if (g != 0) continue;
                    const std::int64_t jitter = std::max<std::int64_t>(1, per_gap / 2);
                    g = std::clamp<std::int64_t>(per_gap + rng.uniform_int(-jitter, jitter), 1, 85);
                }
            }
        }

        std::int64_t t = config.start.sec + rng.uniform_int(0, 30) * kSecondsPerDay;
        int searches_emitted = 0;
        std::vector<CodeId> last_enc_codes;
        std::int64_t last_time = 0;

        for (int e = 0; e < n_enc; ++e) {
            const std::vector<CodeId>& codes = e < switch_at ? early_pool : late_pool;
            last_enc_codes = codes;

            t = std::max(t, last_time + 1);
            last_time = t;
            std::string joined;
            for (std::size_t i = 0; i < codes.size(); ++i) {
                if (i) joined += ';';
                joined += code_name(codes[i]);
            }
            enc_rows << pid << ',' << format_timestamp(Timestamp{t}) << ",\"" << joined << "\"\n";

            // searches shortly after the encounter, well inside the gap
            const int n_searches = std::min(rng.poisson(config.searches_per_encounter), 12);
            std::int64_t st = t;
            for (int s = 0; s < n_searches; ++s) {
                st += rng.uniform_int(60, 600);
                TermId term;
                if (rng.uniform() < config.p_signal) {
                    const CodeId c = codes[static_cast<std::size_t>(
                        rng.uniform_int(0, static_cast<std::int64_t>(codes.size()) - 1))];
                    term = planted[static_cast<std::size_t>(c)];
                } else {
                    term = static_cast<TermId>(rng.uniform_int(0, config.n_terms - 1));
                }
                search_rows << pid << ',' << format_timestamp(Timestamp{st}) << ','
                            << term_name(term) << "\n";
                ++searches_emitted;
                last_time = st;
            }

            if (e < n_bounds) t += gap_days[static_cast<std::size_t>(e)] * kSecondsPerDay;
        }

        // top up to the preprocessing minimum so filters keep the patient
        while (!config.sparse_mode && searches_emitted < 2 && !last_enc_codes.empty()) {
            last_time += rng.uniform_int(60, 600);
            TermId term;
            if (rng.uniform() < config.p_signal) {
                const CodeId c = last_enc_codes[static_cast<std::size_t>(rng.uniform_int(
                    0, static_cast<std::int64_t>(last_enc_codes.size()) - 1))];
                term = planted[static_cast<std::size_t>(c)];
            } else {
                term = static_cast<TermId>(rng.uniform_int(0, config.n_terms - 1));
            }
            search_rows << pid << ',' << format_timestamp(Timestamp{last_time}) << ','
                        << term_name(term) << "\n";
            ++searches_emitted;
        }
    }

    GeneratedFiles files;
    files.encounter_path = (std::filesystem::path(out_dir) / "encounters.csv").string();
    files.search_path = (std::filesystem::path(out_dir) / "searches.csv").string();

    const std::string echo = generator_config_kv(config);
    auto write_file = [&](const std::string& path, const std::string& header,
                          const std::string& body) {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw DataError("cannot write '" + path + "'");
        std::istringstream lines(echo);
        std::string line;
        while (std::getline(lines, line)) os << "# " << line << "\n";
        os << header << "\n" << body;
    };
    write_file(files.encounter_path, "patient_id,timestamp,icd_codes", enc_rows.str());
    write_file(files.search_path, "patient_id,timestamp,term", search_rows.str());
    return files;
}

std::string generator_config_kv(const GeneratorConfig& config) {
    std::ostringstream os;
    os << "seed=" << config.seed << "\n";
    os << "n_patients=" << config.n_patients << "\n";
    os << "n_codes=" << config.n_codes << "\n";
    os << "n_terms=" << config.n_terms << "\n";
    os << "encounters_per_patient=" << format_double(config.encounters_per_patient) << "\n";
    os << "searches_per_encounter=" << format_double(config.searches_per_encounter) << "\n";
    os << "codes_per_encounter=" << config.codes_per_encounter << "\n";
    os << "p_signal=" << format_double(config.p_signal) << "\n";
    os << "start=" << format_timestamp(config.start) << "\n";
    os << "encounter_gap_mean_days=" << config.encounter_gap_mean_days << "\n";
    os << "session_gap_rate=" << format_double(config.session_gap_rate) << "\n";
    os << "sparse_mode=" << (config.sparse_mode ? 1 : 0) << "\n";
    if (!config.planted_map.empty()) {
        os << "planted_map=";
        for (std::size_t i = 0; i < config.planted_map.size(); ++i)
            os << (i ? ";" : "") << config.planted_map[i];
        os << "\n";
    }
    return os.str();
}

GeneratorConfig load_generator_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config '" + path + "'");
    GeneratorConfig config;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DataError("bad config line: '" + line + "'");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "seed") config.seed = std::stoull(value);
        else if (key == "n_patients") config.n_patients = std::stoi(value);
        else if (key == "n_codes") config.n_codes = std::stoi(value);
        else if (key == "n_terms") config.n_terms = std::stoi(value);
        else if (key == "encounters_per_patient") config.encounters_per_patient = std::stod(value);
        else if (key == "searches_per_encounter") config.searches_per_encounter = std::stod(value);
        else if (key == "codes_per_encounter") config.codes_per_encounter = std::stoi(value);
        else if (key == "p_signal") config.p_signal = std::stod(value);
        else if (key == "start") config.start = parse_timestamp(value);
        else if (key == "encounter_gap_mean_days") config.encounter_gap_mean_days = std::stoi(value);
        else if (key == "session_gap_rate") config.session_gap_rate = std::stod(value);
        else if (key == "sparse_mode") config.sparse_mode = value == "1" || value == "true";
        else if (key == "planted_map") {
            config.planted_map.clear();
            for (const auto& v : split(value, ';'))
                config.planted_map.push_back(static_cast<TermId>(std::stoi(v)));
        } else throw DataError("unknown config key '" + key + "'");
    }
    return config;
}

} // namespace termrec
