#include <doctest.h>

#include "termrec/errors.hpp"
#include "termrec/rng.hpp"
#include "termrec/session.hpp"

using namespace termrec;

namespace {

PatientHistory history_at_days(const std::vector<int>& days) {
    std::vector<SearchRecord> searches;
    for (std::size_t i = 0; i < days.size(); ++i)
        searches.push_back({"p", Timestamp{days[i] * kSecondsPerDay}, static_cast<TermId>(i)});
    return build_history({}, std::move(searches));
}

} // namespace

TEST_CASE("90-day window splits on long gaps") {
    PatientHistory h = history_at_days({0, 30, 200});
    const auto sessions = segment(h, SessionConfig{});
    REQUIRE(sessions.size() == 2);
    CHECK(sessions[0].first_index == 0);
    CHECK(sessions[0].last_index == 1);
    CHECK(sessions[1].first_index == 2);
    CHECK(sessions[1].length() == 1);
}

TEST_CASE("chaining can stretch past the window end to end") {
    PatientHistory h = history_at_days({0, 89, 178});
    const auto sessions = segment(h, SessionConfig{});
    // oracle: every consecutive gap is 89 days < 90
    for (std::size_t i = 1; i < h.searches.size(); ++i)
        CHECK(h.searches[i].time.sec - h.searches[i - 1].time.sec < 90 * kSecondsPerDay);
    REQUIRE(sessions.size() == 1);
    CHECK(sessions[0].length() == 3);
}

TEST_CASE("exact 90-day gap starts a new session") {
    PatientHistory h = history_at_days({0, 90});
    CHECK(segment(h, SessionConfig{}).size() == 2);
}

TEST_CASE("singletons and empties") {
    PatientHistory single = history_at_days({5});
    CHECK(segment(single, SessionConfig{}).size() == 1);
    PatientHistory empty = history_at_days({});
    CHECK(segment(empty, SessionConfig{}).empty());
}

TEST_CASE("session prefix returns strictly earlier same-session members") {
    PatientHistory h = history_at_days({0, 10, 20, 200, 210});
    const auto sessions = segment(h, SessionConfig{});
    annotate_sessions(h, sessions);

    CHECK(session_prefix(h, 0).empty());              // opens its session
    CHECK(session_prefix(h, 2) == std::vector<int>{0, 1});
    CHECK(session_prefix(h, 3).empty());              // first of session 2
    CHECK(session_prefix(h, 4) == std::vector<int>{3});
    CHECK_THROWS_AS(session_prefix(h, 5), DataError);
    CHECK_THROWS_AS(session_prefix(h, -1), DataError);
}

TEST_CASE("property: sessions partition the sequence with window-sized boundaries") {
    Rng rng(99);
    SessionConfig config;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> days;
        int day = 0;
        const int n = static_cast<int>(rng.uniform_int(0, 25));
        for (int i = 0; i < n; ++i) {
            day += static_cast<int>(rng.uniform_int(0, 130));
            days.push_back(day);
        }
        PatientHistory h = history_at_days(days);
        const auto sessions = segment(h, config);
        annotate_sessions(h, sessions);

        // partition: concatenated ranges cover 0..n-1 exactly once
        int expect = 0;
        for (const auto& s : sessions) {
            CHECK(s.first_index == expect);
            CHECK(s.last_index >= s.first_index);
            expect = s.last_index + 1;
            // intra-session gaps < window
            for (int i = s.first_index + 1; i <= s.last_index; ++i)
                CHECK(h.searches[i].time.sec - h.searches[i - 1].time.sec <
                      config.window_seconds);
        }
        CHECK(expect == n);

        // boundary gaps >= window
        for (std::size_t s = 1; s < sessions.size(); ++s) {
            const auto gap = h.searches[sessions[s].first_index].time.sec -
                             h.searches[sessions[s - 1].last_index].time.sec;
            CHECK(gap >= config.window_seconds);
        }

        // prefix + self + later members == the whole session
        for (const auto& s : sessions) {
            for (int i = s.first_index; i <= s.last_index; ++i) {
                const auto prefix = session_prefix(h, i);
                CHECK(static_cast<int>(prefix.size()) == i - s.first_index);
            }
        }
    }
}
