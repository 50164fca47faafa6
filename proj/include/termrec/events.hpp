#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "termrec/timeutil.hpp"

namespace termrec {

using CodeId = std::int32_t; // dense ICD-code index
using TermId = std::int32_t; // dense search-term index

// Bijective raw-string <-> dense-id map; ids assigned in first-seen order.
struct Dictionary {
    std::vector<std::string> raws;
    std::unordered_map<std::string, std::int32_t> ids;

    std::int32_t intern(const std::string& raw) {
        auto it = ids.find(raw);
        if (it != ids.end()) return it->second;
        const auto id = static_cast<std::int32_t>(raws.size());
        raws.push_back(raw);
        ids.emplace(raw, id);
        return id;
    }

    std::optional<std::int32_t> find(const std::string& raw) const {
        auto it = ids.find(raw);
        if (it == ids.end()) return std::nullopt;
        return it->second;
    }

    const std::string& raw(std::int32_t id) const { return raws.at(id); }
    std::int32_t size() const { return static_cast<std::int32_t>(raws.size()); }
};

// Input records, one event each, all carrying the owning patient id.
struct EncounterRecord {
    std::string patient;
    Timestamp time;
    std::vector<CodeId> codes;
};

struct SearchRecord {
    std::string patient;
    Timestamp time;
    TermId term = -1;
};

// Events inside a built history. Sequence index == vector position (0-based).
struct Encounter {
    Timestamp time;
    std::vector<CodeId> codes; // sorted, duplicates removed
};

struct SearchEvent {
    Timestamp time;
    TermId term = -1;
    int matched_encounter = -1; // most recent encounter at or before time; -1 if none
    int session_id = -1;        // filled by sessionization
};

// One patient's chronologically sorted searches and encounters plus the
// inverted indices the scoring formulas walk. Immutable once constructed
// (sessionization fills session ids as the last construction step).
struct PatientHistory {
    std::string patient;
    std::vector<SearchEvent> searches;   // S_p
    std::vector<Encounter> encounters;   // C_p
    std::unordered_map<CodeId, std::vector<int>> encounters_by_code; // encounter indices containing a code
    std::unordered_map<TermId, std::vector<int>> encounters_by_term; // matched encounter index per search of a term

    std::size_t n_searches() const { return searches.size(); }
    std::size_t n_encounters() const { return encounters.size(); }
};

// Sorts stably by (time, input order), matches each search to the most
// recent encounter with encounter.time <= search.time (an encounter sharing
// the search's timestamp counts as before it), and builds the inverted
// indices. Rejects mixed patient ids. Zero searches or encounters is valid.
PatientHistory build_history(std::vector<EncounterRecord> encounters,
                             std::vector<SearchRecord> searches);

// Recomputes both inverted indices from the event vectors alone.
struct HistoryIndices {
    std::unordered_map<CodeId, std::vector<int>> by_code;
    std::unordered_map<TermId, std::vector<int>> by_term;
};
HistoryIndices rebuild_indices(const PatientHistory& h);

// Paper-facing subsequences: 1-based inclusive [i, j]. Throws on bad range.
std::span<const SearchEvent> search_subsequence(const PatientHistory& h, int i, int j);
std::span<const Encounter> encounter_subsequence(const PatientHistory& h, int i, int j);

} // namespace termrec
