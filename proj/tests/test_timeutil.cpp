#include <doctest.h>

#include "termrec/errors.hpp"
#include "termrec/rng.hpp"
#include "termrec/timeutil.hpp"

using namespace termrec;

TEST_CASE("timestamp parse and format") {
    const Timestamp t = parse_timestamp("2014-03-01T10:05:00Z");
    CHECK(format_timestamp(t) == "2014-03-01T10:05:00Z");

    CHECK(parse_timestamp("2014-03-01") == parse_timestamp("2014-03-01T00:00:00Z"));
    CHECK(parse_timestamp("1970-01-01T00:00:00Z").sec == 0);
    CHECK(parse_timestamp("1970-01-02T00:00:00Z").sec == kSecondsPerDay);
    CHECK(parse_timestamp("2016-02-29T23:59:59Z").sec > 0); // leap day accepted
}

TEST_CASE("timestamp ordering") {
    CHECK(parse_timestamp("2014-01-01T00:00:00Z") < parse_timestamp("2014-01-01T00:00:01Z"));
    CHECK(parse_timestamp("2013-12-31T23:59:59Z") < parse_timestamp("2014-01-01"));
}

TEST_CASE("timestamp rejects malformed input") {
    CHECK_THROWS_AS(parse_timestamp(""), DataError);
    CHECK_THROWS_AS(parse_timestamp("2014-13-01T00:00:00Z"), DataError);
    CHECK_THROWS_AS(parse_timestamp("2014-02-30T00:00:00Z"), DataError);
    CHECK_THROWS_AS(parse_timestamp("2015-02-29T00:00:00Z"), DataError); // not a leap year
    CHECK_THROWS_AS(parse_timestamp("2014-03-01 10:05:00Z"), DataError);
    CHECK_THROWS_AS(parse_timestamp("2014-03-01T10:05:00"), DataError);
    CHECK_THROWS_AS(parse_timestamp("2014-03-01T24:00:00Z"), DataError);
}

TEST_CASE("round trip over random instants") {
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
        const Timestamp t{rng.uniform_int(0, 4102444800LL)}; // through 2100
        CHECK(parse_timestamp(format_timestamp(t)) == t);
    }
}
