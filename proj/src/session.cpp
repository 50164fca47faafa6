#include "termrec/session.hpp"

#include <algorithm>
#include <sstream>

#include "termrec/errors.hpp"

namespace termrec {

void SessionConfig::validate() const {
    if (window_seconds <= 0) throw DataError("session window must be positive");
}

std::vector<Session> segment(const PatientHistory& h, const SessionConfig& config) {
    config.validate();
    std::vector<Session> sessions;
    for (int i = 0; i < static_cast<int>(h.searches.size()); ++i) {
        const bool joins = !sessions.empty() &&
                           h.searches[i].time.sec - h.searches[i - 1].time.sec <
                               config.window_seconds;
        if (joins) {
            sessions.back().last_index = i;
            sessions.back().end_time = h.searches[i].time;
        } else {
            Session s;
            s.session_id = static_cast<int>(sessions.size());
            s.first_index = s.last_index = i;
            s.start_time = s.end_time = h.searches[i].time;
            sessions.push_back(s);
        }
    }
    return sessions;
}

void annotate_sessions(PatientHistory& h, const std::vector<Session>& sessions) {
    for (const auto& s : sessions)
        for (int i = s.first_index; i <= s.last_index; ++i)
            h.searches[i].session_id = s.session_id;
}

std::vector<int> session_prefix(const PatientHistory& h, int search_index) {
    if (search_index < 0 || search_index >= static_cast<int>(h.searches.size()))
        throw DataError("search index " + std::to_string(search_index) + " out of range");
    const int sid = h.searches[search_index].session_id;
    std::vector<int> prefix;
    for (int i = search_index - 1; i >= 0 && h.searches[i].session_id == sid; --i)
        prefix.push_back(i);
    std::reverse(prefix.begin(), prefix.end());
    return prefix;
}

std::vector<std::vector<Session>> sessionize(std::vector<PatientHistory>& patients,
                                             const SessionConfig& config) {
    std::vector<std::vector<Session>> all(patients.size());
    for (std::size_t i = 0; i < patients.size(); ++i) {
        all[i] = segment(patients[i], config);
        annotate_sessions(patients[i], all[i]);
    }
    return all;
}

std::string session_dump_csv(const std::vector<PatientHistory>& patients,
                             const std::vector<std::vector<Session>>& sessions) {
    std::ostringstream os;
    os << "patient_id,session_id,first_index,last_index,length\n";
    for (std::size_t p = 0; p < patients.size(); ++p)
        for (const auto& s : sessions[p])
            os << patients[p].patient << ',' << s.session_id + 1 << ',' << s.first_index + 1
               << ',' << s.last_index + 1 << ',' << s.length() << "\n";
    return os.str();
}

} // namespace termrec
