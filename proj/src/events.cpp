#include "termrec/events.hpp"

#include <algorithm>

#include "termrec/errors.hpp"

namespace termrec {
namespace {

template <typename Rec>
void check_single_patient(const std::string& expected, const std::vector<Rec>& recs) {
    for (const auto& r : recs)
        if (r.patient != expected)
            throw DataError("mixed patient ids in one history: '" + expected + "' vs '" +
                            r.patient + "'");
}

} // namespace

PatientHistory build_history(std::vector<EncounterRecord> encounters,
                             std::vector<SearchRecord> searches) {
    PatientHistory h;
    if (!encounters.empty()) h.patient = encounters.front().patient;
    else if (!searches.empty()) h.patient = searches.front().patient;
    check_single_patient(h.patient, encounters);
    check_single_patient(h.patient, searches);

    std::stable_sort(encounters.begin(), encounters.end(),
                     [](const auto& a, const auto& b) { return a.time < b.time; });
    std::stable_sort(searches.begin(), searches.end(),
                     [](const auto& a, const auto& b) { return a.time < b.time; });

    h.encounters.reserve(encounters.size());
    for (auto& e : encounters) {
        Encounter enc;
        enc.time = e.time;
        enc.codes = std::move(e.codes);
        std::sort(enc.codes.begin(), enc.codes.end());
        enc.codes.erase(std::unique(enc.codes.begin(), enc.codes.end()), enc.codes.end());
        h.encounters.push_back(std::move(enc));
    }

    h.searches.reserve(searches.size());
    int enc_cursor = 0; // both streams sorted, so matching is a single walk
    for (const auto& s : searches) {
        while (enc_cursor < static_cast<int>(h.encounters.size()) &&
               h.encounters[enc_cursor].time <= s.time)
            ++enc_cursor;
        SearchEvent ev;
        ev.time = s.time;
        ev.term = s.term;
        ev.matched_encounter = enc_cursor - 1; // -1 when the search precedes all encounters
        h.searches.push_back(ev);
    }

    for (int i = 0; i < static_cast<int>(h.encounters.size()); ++i)
        for (CodeId c : h.encounters[i].codes) h.encounters_by_code[c].push_back(i);
    for (const auto& s : h.searches)
        if (s.matched_encounter >= 0) h.encounters_by_term[s.term].push_back(s.matched_encounter);

    return h;
}

HistoryIndices rebuild_indices(const PatientHistory& h) {
    HistoryIndices idx;
    for (int i = 0; i < static_cast<int>(h.encounters.size()); ++i)
        for (CodeId c : h.encounters[i].codes) idx.by_code[c].push_back(i);
    for (const auto& s : h.searches)
        if (s.matched_encounter >= 0) idx.by_term[s.term].push_back(s.matched_encounter);
    return idx;
}

namespace {

void check_range(std::size_t len, int i, int j) {
    if (i < 1 || j < i || j > static_cast<int>(len))
        throw DataError("subsequence range [" + std::to_string(i) + ", " + std::to_string(j) +
                        "] out of bounds for length " + std::to_string(len));
}

} // namespace

std::span<const SearchEvent> search_subsequence(const PatientHistory& h, int i, int j) {
    check_range(h.searches.size(), i, j);
    return {h.searches.data() + (i - 1), static_cast<std::size_t>(j - i + 1)};
}

std::span<const Encounter> encounter_subsequence(const PatientHistory& h, int i, int j) {
    check_range(h.encounters.size(), i, j);
    return {h.encounters.data() + (i - 1), static_cast<std::size_t>(j - i + 1)};
}

} // namespace termrec
