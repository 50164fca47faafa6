#include "termrec/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "termrec/errors.hpp"
#include "termrec/text.hpp"

namespace termrec {

void PreprocessConfig::validate() const {
    if (min_searches_per_patient < 1 || min_encounters_per_patient < 1 || min_term_frequency < 1)
        throw DataError("preprocess minima must be >= 1");
}

std::string normalize_term(std::string_view raw, const SynonymMap* synonyms) {
    std::string t = normalize_whitespace(to_lower_ascii(raw));
    if (synonyms) {
        auto it = synonyms->find(t);
        if (it != synonyms->end()) t = it->second;
    }
    return t;
}

namespace {

void parse_file(const std::string& path, RawRecord::Kind kind, const SynonymMap* synonyms,
                std::size_t& order, ParseResult& out) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");

    std::string line;
    std::size_t line_no = 0;
    std::size_t data_lines = 0, ok_lines = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) { // first non-comment line is the header
            header_seen = true;
            continue;
        }
        ++data_lines;

        auto fields = split_csv_line(line);
        auto fail = [&](const std::string& msg) {
            out.errors.push_back({path, line_no, msg, line});
        };
        if (fields.size() != 3) {
            fail("expected 3 fields, got " + std::to_string(fields.size()));
            continue;
        }
        if (fields[0].empty()) {
            fail("empty patient id");
            continue;
        }

        RawRecord rec;
        rec.kind = kind;
        rec.patient = fields[0];
        try {
            rec.time = parse_timestamp(fields[1]);
        } catch (const DataError& e) {
            fail(e.what());
            continue;
        }

        if (kind == RawRecord::Kind::encounter) {
            for (const auto& code : split(fields[2], ';')) {
                std::string c = normalize_whitespace(code);
                if (!c.empty()) rec.codes.push_back(std::move(c));
            }
            if (rec.codes.empty()) {
                fail("empty ICD code list");
                continue;
            }
        } else {
            rec.term = normalize_term(fields[2], synonyms);
        }
        rec.input_order = order++;
        out.records.push_back(std::move(rec));
        ++ok_lines;
    }
    if (data_lines > 0 && ok_lines == 0)
        throw DataError("every line of '" + path + "' failed to parse");
}

} // namespace

ParseResult parse_events(const std::string& encounter_file, const std::string& search_file,
                         const SynonymMap* synonyms) {
    ParseResult out;
    std::size_t order = 0;
    parse_file(encounter_file, RawRecord::Kind::encounter, synonyms, order, out);
    parse_file(search_file, RawRecord::Kind::search, synonyms, order, out);
    return out;
}

SynonymMap load_synonym_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    SynonymMap map;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_csv_line(line);
        if (first && fields.size() >= 1 && fields[0] == "from") {
            first = false;
            continue;
        }
        first = false;
        if (fields.size() != 2) throw DataError("synonym map line needs 2 fields: '" + line + "'");
        map[normalize_term(fields[0], nullptr)] = normalize_term(fields[1], nullptr);
    }
    return map;
}

Dataset apply_filters(const ParseResult& parsed, const PreprocessConfig& config) {
    config.validate();
    Dataset ds;
    FilterReport& rep = ds.report;
    rep.parse_errors = parsed.errors.size();

    // stage 0: raw counts
    std::unordered_map<std::string, int> term_freq;
    std::unordered_map<std::string, bool> patient_seen;
    for (const auto& r : parsed.records) {
        patient_seen[r.patient] = true;
        if (r.kind == RawRecord::Kind::search) {
            ++rep.raw_searches;
            ++term_freq[r.term];
        } else {
            ++rep.raw_encounters;
        }
    }
    rep.raw_patients = patient_seen.size();
    rep.raw_terms = term_freq.size();

    // stage 1: irregular terms
    std::unordered_map<std::string, int> freq_after_irregular;
    for (const auto& [term, freq] : term_freq) {
        if (config.drop_irregular_terms && is_irregular_token(term)) continue;
        freq_after_irregular[term] = freq;
        rep.searches_after_irregular += freq;
    }
    rep.terms_after_irregular = freq_after_irregular.size();

    // stage 2: global term frequency (counted over the whole dataset, pre-split)
    std::unordered_map<std::string, bool> term_kept;
    for (const auto& [term, freq] : freq_after_irregular) {
        if (freq < config.min_term_frequency) continue;
        term_kept[term] = true;
        rep.searches_after_minfreq += freq;
    }
    rep.terms_after_minfreq = term_kept.size();

    // stage 3: per-patient minima, on the surviving searches
    struct PatientEvents {
        std::vector<const RawRecord*> encounters, searches;
    };
    std::map<std::string, PatientEvents> by_patient; // ordered: output sorted by patient id
    for (const auto& r : parsed.records) {
        auto& pe = by_patient[r.patient];
        if (r.kind == RawRecord::Kind::encounter) pe.encounters.push_back(&r);
        else if (term_kept.count(r.term)) pe.searches.push_back(&r);
    }
    for (auto it = by_patient.begin(); it != by_patient.end();) {
        const auto& pe = it->second;
        if (static_cast<int>(pe.searches.size()) < config.min_searches_per_patient ||
            static_cast<int>(pe.encounters.size()) < config.min_encounters_per_patient)
            it = by_patient.erase(it);
        else
            ++it;
    }
    if (by_patient.empty()) throw DataError("empty dataset after preprocessing");

    // dictionaries: first-seen order over surviving events in input order
    std::vector<const RawRecord*> survivors;
    for (const auto& [id, pe] : by_patient) {
        survivors.insert(survivors.end(), pe.encounters.begin(), pe.encounters.end());
        survivors.insert(survivors.end(), pe.searches.begin(), pe.searches.end());
    }
    std::sort(survivors.begin(), survivors.end(),
              [](const RawRecord* a, const RawRecord* b) { return a->input_order < b->input_order; });
    for (const RawRecord* r : survivors) {
        if (r->kind == RawRecord::Kind::encounter)
            for (const auto& c : r->codes) ds.codes.intern(c);
        else
            ds.terms.intern(r->term);
    }

    // build histories
    std::size_t total_codes = 0, total_prev_enc = 0, matched_searches = 0;
    for (const auto& [id, pe] : by_patient) {
        std::vector<EncounterRecord> encs;
        encs.reserve(pe.encounters.size());
        for (const RawRecord* r : pe.encounters) {
            EncounterRecord er;
            er.patient = id;
            er.time = r->time;
            for (const auto& c : r->codes) er.codes.push_back(*ds.codes.find(c));
            encs.push_back(std::move(er));
        }
        std::vector<SearchRecord> srchs;
        srchs.reserve(pe.searches.size());
        for (const RawRecord* r : pe.searches)
            srchs.push_back({id, r->time, *ds.terms.find(r->term)});

        PatientHistory h = build_history(std::move(encs), std::move(srchs));
        rep.encounters += h.encounters.size();
        rep.searches += h.searches.size();
        std::vector<TermId> uniq;
        for (const auto& s : h.searches) uniq.push_back(s.term);
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        rep.avg_unique_terms_per_patient += static_cast<double>(uniq.size());
        for (const auto& e : h.encounters) total_codes += e.codes.size();
        for (const auto& s : h.searches)
            if (s.matched_encounter >= 0) {
                total_prev_enc += static_cast<std::size_t>(s.matched_encounter) + 1;
                ++matched_searches;
            }
        ds.patients.push_back(std::move(h));
    }

    rep.patients = ds.patients.size();
    rep.unique_terms = static_cast<std::size_t>(ds.terms.size());
    rep.unique_codes = static_cast<std::size_t>(ds.codes.size());
    const double np = static_cast<double>(rep.patients);
    rep.avg_searches_per_patient = static_cast<double>(rep.searches) / np;
    rep.avg_unique_terms_per_patient /= np;
    rep.avg_encounters_per_patient = static_cast<double>(rep.encounters) / np;
    rep.avg_searches_per_term =
        rep.unique_terms ? static_cast<double>(rep.searches) / static_cast<double>(rep.unique_terms) : 0.0;
    rep.avg_codes_per_encounter =
        rep.encounters ? static_cast<double>(total_codes) / static_cast<double>(rep.encounters) : 0.0;
    rep.avg_previous_encounters_per_search =
        matched_searches ? static_cast<double>(total_prev_enc) / static_cast<double>(matched_searches) : 0.0;
    return ds;
}

const PatientHistory* Dataset::find_patient(const std::string& id) const {
    auto it = std::lower_bound(patients.begin(), patients.end(), id,
                               [](const PatientHistory& h, const std::string& key) {
                                   return h.patient < key;
                               });
    if (it == patients.end() || it->patient != id) return nullptr;
    return &*it;
}

namespace {

std::string fmt_stat(double v) {
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << v;
    return os.str();
}

} // namespace

std::string FilterReport::to_text() const {
    std::ostringstream os;
    os << "Cleanup stages\n";
    os << "  parse errors:                      " << parse_errors << "\n";
    os << "  raw patients:                      " << raw_patients << "\n";
    os << "  raw searches / terms:              " << raw_searches << " / " << raw_terms << "\n";
    os << "  after irregular-term drop:         " << searches_after_irregular << " / "
       << terms_after_irregular << "\n";
    os << "  after min-frequency drop:          " << searches_after_minfreq << " / "
       << terms_after_minfreq << "\n";
    os << "Dataset statistics\n";
    os << "  Number of patients:                          " << patients << "\n";
    os << "  Number of unique search terms:               " << unique_terms << "\n";
    os << "  Number of unique ICD codes:                  " << unique_codes << "\n";
    os << "  Number of encounters:                        " << encounters << "\n";
    os << "  Number of searches:                          " << searches << "\n";
    os << "  Average number of searches per patient:      " << fmt_stat(avg_searches_per_patient) << "\n";
    os << "  Average number of unique terms per patient:  " << fmt_stat(avg_unique_terms_per_patient) << "\n";
    os << "  Average number of encounters per patient:    " << fmt_stat(avg_encounters_per_patient) << "\n";
    os << "  Average number of searches per term:         " << fmt_stat(avg_searches_per_term) << "\n";
    os << "  Average number of unique codes per encounter: " << fmt_stat(avg_codes_per_encounter) << "\n";
    os << "  Average number of previous encounters per search: "
       << fmt_stat(avg_previous_encounters_per_search) << "\n";
    return os.str();
}

std::string FilterReport::to_kv() const {
    std::ostringstream os;
    os << "parse_errors=" << parse_errors << "\n";
    os << "raw_patients=" << raw_patients << "\n";
    os << "raw_searches=" << raw_searches << "\n";
    os << "raw_terms=" << raw_terms << "\n";
    os << "searches_after_irregular=" << searches_after_irregular << "\n";
    os << "terms_after_irregular=" << terms_after_irregular << "\n";
    os << "searches_after_minfreq=" << searches_after_minfreq << "\n";
    os << "terms_after_minfreq=" << terms_after_minfreq << "\n";
    os << "patients=" << patients << "\n";
    os << "unique_terms=" << unique_terms << "\n";
    os << "unique_codes=" << unique_codes << "\n";
    os << "encounters=" << encounters << "\n";
    os << "searches=" << searches << "\n";
    os << "avg_searches_per_patient=" << format_double(avg_searches_per_patient) << "\n";
    os << "avg_unique_terms_per_patient=" << format_double(avg_unique_terms_per_patient) << "\n";
    os << "avg_encounters_per_patient=" << format_double(avg_encounters_per_patient) << "\n";
    os << "avg_searches_per_term=" << format_double(avg_searches_per_term) << "\n";
    os << "avg_codes_per_encounter=" << format_double(avg_codes_per_encounter) << "\n";
    os << "avg_previous_encounters_per_search=" << format_double(avg_previous_encounters_per_search)
       << "\n";
    return os.str();
}

} // namespace termrec
