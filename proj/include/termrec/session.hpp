#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "termrec/events.hpp"

namespace termrec {

struct SessionConfig {
    std::int64_t window_seconds = 90 * kSecondsPerDay; // "three months" fixed at 90 days

    void validate() const;
};

// Maximal run of consecutive searches whose pairwise gaps are all under the
// window. Sessions partition S_p; member range is contiguous and 0-based.
struct Session {
    int session_id = 0; // per-patient ordinal
    int first_index = 0;
    int last_index = 0;
    Timestamp start_time;
    Timestamp end_time;

    int length() const { return last_index - first_index + 1; }
};

// Greedy left-to-right chaining: a search joins the open session iff its gap
// to the previous search is strictly under the window.
std::vector<Session> segment(const PatientHistory& h, const SessionConfig& config);

// Writes session ids into h.searches (last step of history construction).
void annotate_sessions(PatientHistory& h, const std::vector<Session>& sessions);

// Strictly-earlier members of the session containing search_index, in order.
// Empty when the target opens its session. Requires annotated session ids.
std::vector<int> session_prefix(const PatientHistory& h, int search_index);

// Runs segment+annotate over every patient; returns sessions per patient in
// dataset order.
struct Dataset;
std::vector<std::vector<Session>> sessionize(std::vector<PatientHistory>& patients,
                                             const SessionConfig& config);

// CSV dump "patient_id,session_id,first_index,last_index,length" with
// 1-based ids and indices.
std::string session_dump_csv(const std::vector<PatientHistory>& patients,
                             const std::vector<std::vector<Session>>& sessions);

} // namespace termrec
