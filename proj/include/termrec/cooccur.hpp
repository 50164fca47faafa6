#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "termrec/events.hpp"

namespace termrec {

// Training-visible slice of one patient, already on dense ids: encounter
// code sets in chronological order plus (term, matched encounter) per search.
struct PatientEvents {
    std::vector<std::vector<CodeId>> encounter_codes;
    std::vector<std::pair<TermId, int>> searches; // matched encounter index, -1 if none
};

PatientEvents patient_events(const PatientHistory& h);

// Sparse n x m matrix of time-decayed code->term co-occurrence weights.
// Stored as triplets sorted by (code, term) with CSR/CSC index arrays; only
// strictly positive weights are kept. Weights are plain decayed counts, not
// probabilities, and can exceed 1.
struct CooccurrenceMatrix {
    std::int32_t n = 0; // codes
    std::int32_t m = 0; // terms
    double lambda = 0.5;

    std::vector<CodeId> code_of;
    std::vector<TermId> term_of;
    std::vector<double> weight;

    std::vector<std::int64_t> row_ptr;  // per code, into the triplet arrays
    std::vector<std::int64_t> col_ptr;  // per term, into col_entry
    std::vector<std::int64_t> col_entry;

    std::size_t nnz() const { return weight.size(); }
    double at(CodeId c, TermId t) const; // 0 for structural zeros
    double frob_sq() const;

    // sort triplets and build the index arrays; required before kernel use
    void finalize();
};

// Accumulates, for every (code, term) pair, lambda^(j - i) over each search
// matched to encounter j and each earlier-or-equal encounter i containing the
// code. Patients are processed in parallel; partial results merge in patient
// order, so the output is bit-identical for any worker count.
CooccurrenceMatrix build_cooccurrence(std::span<const PatientEvents> patients,
                                      std::int32_t n_codes, std::int32_t n_terms, double lambda);

// Literal serial evaluation of the same triple sum via the per-patient
// inverted code/term indices, with no shortcuts. Test reference; quadratic in
// the dictionary sizes, desk-scale inputs only.
CooccurrenceMatrix cooccurrence_oracle(std::span<const PatientEvents> patients,
                                       std::int32_t n_codes, std::int32_t n_terms, double lambda);

// Text form: "n m lambda" header, then sorted "code term weight" triples.
// load(dump(A)) reproduces A exactly.
void dump_matrix(const CooccurrenceMatrix& a, std::ostream& os);
CooccurrenceMatrix load_matrix(std::istream& is);

} // namespace termrec
