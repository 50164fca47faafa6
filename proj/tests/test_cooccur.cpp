#include <doctest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "termrec/cooccur.hpp"
#include "termrec/errors.hpp"

using namespace termrec;
using termrec::testing::random_patient;

TEST_CASE("same-encounter search contributes weight one") {
    PatientEvents p;
    p.encounter_codes = {{0}};
    p.searches = {{0, 0}};
    const auto a = build_cooccurrence({&p, 1}, 1, 1, 0.5);
    CHECK(a.at(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("decay over encounter distance") {
    // code 0 in both encounters, one search matched to the second
    PatientEvents p;
    p.encounter_codes = {{0}, {0}};
    p.searches = {{0, 1}};
    const auto a = build_cooccurrence({&p, 1}, 1, 1, 0.5);
    // hand sum: lambda^0 + lambda^1
    CHECK(a.at(0, 0) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("indicator kills pairs where the code comes later") {
    PatientEvents p;
    p.encounter_codes = {{9}, {0}}; // code 0 only in the second encounter
    p.searches = {{0, 0}};          // search matched to the first
    const auto a = build_cooccurrence({&p, 1}, 10, 1, 0.5);
    CHECK(a.at(0, 0) == 0.0);
    CHECK(a.nnz() == 1); // only (9, 0) from the same-encounter pair
}

TEST_CASE("unmatched searches contribute nothing") {
    PatientEvents p;
    p.encounter_codes = {{0}};
    p.searches = {{0, -1}};
    const auto a = build_cooccurrence({&p, 1}, 1, 1, 0.5);
    CHECK(a.nnz() == 0);
}

TEST_CASE("lambda outside (0,1) is rejected") {
    PatientEvents p;
    CHECK_THROWS_AS(build_cooccurrence({&p, 1}, 1, 1, 0.0), DataError);
    CHECK_THROWS_AS(build_cooccurrence({&p, 1}, 1, 1, 1.0), DataError);
    CHECK_THROWS_AS(cooccurrence_oracle({&p, 1}, 1, 1, -0.5), DataError);
}

TEST_CASE("oracle on the fixtures") {
    PatientEvents p;
    p.encounter_codes = {{0}, {0}};
    p.searches = {{0, 1}};
    const auto a = cooccurrence_oracle({&p, 1}, 1, 1, 0.5);
    CHECK(a.at(0, 0) == doctest::Approx(1.5).epsilon(1e-15));

    const auto empty = cooccurrence_oracle({}, 3, 3, 0.5);
    CHECK(empty.nnz() == 0);
}

TEST_CASE("property: builder matches the literal oracle") {
    Rng rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const int n_codes = 8, n_terms = 10;
        std::vector<PatientEvents> patients;
        const int n_pat = static_cast<int>(rng.uniform_int(1, 6));
        for (int i = 0; i < n_pat; ++i)
            patients.push_back(random_patient(rng, n_codes, n_terms, 8, 10));
        const double lambda = rng.uniform(0.05, 0.95);

        const auto fast = build_cooccurrence(patients, n_codes, n_terms, lambda);
        const auto slow = cooccurrence_oracle(patients, n_codes, n_terms, lambda);
        REQUIRE(fast.nnz() == slow.nnz());
        for (std::size_t i = 0; i < fast.nnz(); ++i) {
            CHECK(fast.code_of[i] == slow.code_of[i]);
            CHECK(fast.term_of[i] == slow.term_of[i]);
            CHECK(std::abs(fast.weight[i] - slow.weight[i]) < 1e-12);
        }
    }
}

TEST_CASE("property: weights are non-decreasing in lambda") {
    Rng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<PatientEvents> patients;
        for (int i = 0; i < 4; ++i) patients.push_back(random_patient(rng, 6, 6, 6, 8));
        const auto lo = build_cooccurrence(patients, 6, 6, 0.3);
        const auto hi = build_cooccurrence(patients, 6, 6, 0.7);
        for (std::size_t i = 0; i < lo.nnz(); ++i)
            CHECK(lo.weight[i] <= hi.at(lo.code_of[i], lo.term_of[i]) + 1e-12);
    }
}

TEST_CASE("property: additive over disjoint patient sets") {
    Rng rng(55);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<PatientEvents> group1, group2, both;
        for (int i = 0; i < 3; ++i) group1.push_back(random_patient(rng, 6, 6, 6, 8));
        for (int i = 0; i < 3; ++i) group2.push_back(random_patient(rng, 6, 6, 6, 8));
        both = group1;
        both.insert(both.end(), group2.begin(), group2.end());

        const auto a1 = build_cooccurrence(group1, 6, 6, 0.5);
        const auto a2 = build_cooccurrence(group2, 6, 6, 0.5);
        const auto all = build_cooccurrence(both, 6, 6, 0.5);
        for (CodeId c = 0; c < 6; ++c)
            for (TermId t = 0; t < 6; ++t)
                CHECK(std::abs(all.at(c, t) - (a1.at(c, t) + a2.at(c, t))) < 1e-12);
    }
}

TEST_CASE("weights can exceed one and zeros are structural") {
    PatientEvents p;
    p.encounter_codes = {{0}, {0}, {0}};
    p.searches = {{0, 0}, {0, 1}, {0, 2}};
    const auto a = build_cooccurrence({&p, 1}, 1, 2, 0.5);
    CHECK(a.at(0, 0) > 1.0); // decayed count, not a probability
    CHECK(a.nnz() == 1);     // term 1 never co-occurs: unstored
}

TEST_CASE("dump and load round trip") {
    Rng rng(5);
    std::vector<PatientEvents> patients;
    for (int i = 0; i < 4; ++i) patients.push_back(random_patient(rng, 5, 7, 6, 9));
    const auto a = build_cooccurrence(patients, 5, 7, 0.37);

    std::stringstream ss;
    dump_matrix(a, ss);
    const auto b = load_matrix(ss);
    CHECK(b.n == a.n);
    CHECK(b.m == a.m);
    CHECK(b.lambda == a.lambda);
    REQUIRE(b.nnz() == a.nnz());
    for (std::size_t i = 0; i < a.nnz(); ++i) {
        CHECK(b.code_of[i] == a.code_of[i]);
        CHECK(b.term_of[i] == a.term_of[i]);
        CHECK(b.weight[i] == a.weight[i]); // exact round trip
    }
}
