#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "termrec/events.hpp"

namespace termrec {

struct RawRecord {
    enum class Kind { encounter, search };
    Kind kind = Kind::search;
    std::string patient;
    Timestamp time;
    std::vector<std::string> codes; // encounter payload (raw strings)
    std::string term;               // search payload, already normalized
    std::size_t input_order = 0;    // global first-seen ordering for dictionaries
};

struct ParseError {
    std::string file;
    std::size_t line_no = 0;
    std::string message;
    std::string text;
};

struct ParseResult {
    std::vector<RawRecord> records;
    std::vector<ParseError> errors;
};

using SynonymMap = std::unordered_map<std::string, std::string>;

struct PreprocessConfig {
    int min_searches_per_patient = 2;
    int min_encounters_per_patient = 3;
    int min_term_frequency = 2; // drop terms appearing fewer times over the whole dataset
    bool drop_irregular_terms = true;
    SynonymMap synonym_map;

    void validate() const;
};

// Stage-by-stage cleanup counts plus summary statistics of the survivors.
struct FilterReport {
    std::size_t parse_errors = 0;
    std::size_t raw_searches = 0, raw_encounters = 0, raw_patients = 0, raw_terms = 0;
    std::size_t searches_after_irregular = 0, terms_after_irregular = 0;
    std::size_t searches_after_minfreq = 0, terms_after_minfreq = 0;
    std::size_t patients = 0, unique_terms = 0, unique_codes = 0;
    std::size_t encounters = 0, searches = 0;
    double avg_searches_per_patient = 0.0;
    double avg_unique_terms_per_patient = 0.0;
    double avg_encounters_per_patient = 0.0;
    double avg_searches_per_term = 0.0;
    double avg_codes_per_encounter = 0.0;
    double avg_previous_encounters_per_search = 0.0;

    std::string to_text() const;
    std::string to_kv() const;
};

// Cleaned dataset: per-patient histories (sorted by patient id) plus the
// global dictionaries built over surviving events in input order.
struct Dataset {
    std::vector<PatientHistory> patients;
    Dictionary codes;
    Dictionary terms;
    FilterReport report;

    const PatientHistory* find_patient(const std::string& id) const;
};

// Lowercase, trim, collapse whitespace runs, then apply the synonym map once
// if the result is an exact key. Pass nullptr for no synonyms.
std::string normalize_term(std::string_view raw, const SynonymMap* synonyms);

// Reads both CSV files ("patient_id,timestamp,icd_codes" / "patient_id,
// timestamp,term"). '#'-prefixed lines and the header are skipped. Bad lines
// land in errors; throws only if a file is unreadable or every line fails.
ParseResult parse_events(const std::string& encounter_file, const std::string& search_file,
                         const SynonymMap* synonyms = nullptr);

// Fixed single-pass cleanup: irregular terms, then infrequent terms, then
// patients under the per-patient minima. No fixpoint iteration: a patient
// dropped by the minima does not trigger a term recount.
Dataset apply_filters(const ParseResult& parsed, const PreprocessConfig& config);

// CSV "from,to"; keys and values are normalized with the same rules as terms.
SynonymMap load_synonym_map(const std::string& path);

} // namespace termrec
