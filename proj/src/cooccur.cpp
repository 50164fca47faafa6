#include "termrec/cooccur.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>

#include "termrec/errors.hpp"
#include "termrec/text.hpp"

namespace termrec {

PatientEvents patient_events(const PatientHistory& h) {
    PatientEvents ev;
    ev.encounter_codes.reserve(h.encounters.size());
    for (const auto& e : h.encounters) ev.encounter_codes.push_back(e.codes);
    ev.searches.reserve(h.searches.size());
    for (const auto& s : h.searches) ev.searches.emplace_back(s.term, s.matched_encounter);
    return ev;
}

double CooccurrenceMatrix::at(CodeId c, TermId t) const {
    if (c < 0 || c >= n || t < 0 || t >= m) return 0.0;
    const auto begin = row_ptr[c], end = row_ptr[c + 1];
    auto lo = term_of.begin() + begin, hi = term_of.begin() + end;
    auto it = std::lower_bound(lo, hi, t);
    if (it == hi || *it != t) return 0.0;
    return weight[static_cast<std::size_t>(it - term_of.begin())];
}

double CooccurrenceMatrix::frob_sq() const {
    double s = 0.0;
    for (double w : weight) s += w * w;
    return s;
}

void CooccurrenceMatrix::finalize() {
    const std::size_t k = weight.size();
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (code_of[a] != code_of[b]) return code_of[a] < code_of[b];
        return term_of[a] < term_of[b];
    });
    std::vector<CodeId> c2(k);
    std::vector<TermId> t2(k);
    std::vector<double> w2(k);
    for (std::size_t i = 0; i < k; ++i) {
        c2[i] = code_of[order[i]];
        t2[i] = term_of[order[i]];
        w2[i] = weight[order[i]];
    }
    code_of = std::move(c2);
    term_of = std::move(t2);
    weight = std::move(w2);

    row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t i = 0; i < k; ++i) ++row_ptr[static_cast<std::size_t>(code_of[i]) + 1];
    for (std::int32_t c = 0; c < n; ++c) row_ptr[c + 1] += row_ptr[c];

    col_ptr.assign(static_cast<std::size_t>(m) + 1, 0);
    for (std::size_t i = 0; i < k; ++i) ++col_ptr[static_cast<std::size_t>(term_of[i]) + 1];
    for (std::int32_t t = 0; t < m; ++t) col_ptr[t + 1] += col_ptr[t];
    col_entry.assign(k, 0);
    std::vector<std::int64_t> cursor(col_ptr.begin(), col_ptr.end() - 1);
    for (std::size_t i = 0; i < k; ++i)
        col_entry[static_cast<std::size_t>(cursor[static_cast<std::size_t>(term_of[i])]++)] =
            static_cast<std::int64_t>(i);
}

namespace {

using PairKey = std::int64_t;
inline PairKey key_of(CodeId c, TermId t) {
    return (static_cast<std::int64_t>(c) << 32) | static_cast<std::uint32_t>(t);
}

// sorted (key, weight) accumulation for one patient; addend order is
// encounter index, then code, then search order
std::vector<std::pair<PairKey, double>> patient_partial(const PatientEvents& p, double lambda) {
    std::unordered_map<PairKey, double> acc;
    const int n_enc = static_cast<int>(p.encounter_codes.size());
    for (int i = 0; i < n_enc; ++i) {
        for (CodeId c : p.encounter_codes[i]) {
            for (const auto& [term, j] : p.searches) {
                if (j < 0 || j < i) continue;
                acc[key_of(c, term)] += std::pow(lambda, j - i);
            }
        }
    }
    std::vector<std::pair<PairKey, double>> out(acc.begin(), acc.end());
    std::sort(out.begin(), out.end());
    return out;
}

void check_lambda(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw DataError("decay parameter must be in (0, 1), got " + format_double(lambda));
}

CooccurrenceMatrix from_entries(const std::map<PairKey, double>& entries, std::int32_t n,
                                std::int32_t m, double lambda) {
    CooccurrenceMatrix a;
    a.n = n;
    a.m = m;
    a.lambda = lambda;
    a.code_of.reserve(entries.size());
    a.term_of.reserve(entries.size());
    a.weight.reserve(entries.size());
    for (const auto& [key, w] : entries) {
        if (w <= 0.0) continue;
        a.code_of.push_back(static_cast<CodeId>(key >> 32));
        a.term_of.push_back(static_cast<TermId>(key & 0xffffffff));
        a.weight.push_back(w);
    }
    a.finalize();
    return a;
}

} // namespace

CooccurrenceMatrix build_cooccurrence(std::span<const PatientEvents> patients,
                                      std::int32_t n_codes, std::int32_t n_terms, double lambda) {
    check_lambda(lambda);
    const auto np = static_cast<std::int64_t>(patients.size());
    std::vector<std::vector<std::pair<PairKey, double>>> partials(patients.size());

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t p = 0; p < np; ++p)
        partials[static_cast<std::size_t>(p)] = patient_partial(patients[p], lambda);

    // fixed merge order: patient 0, 1, ... so sums are bit-deterministic
    std::map<PairKey, double> total;
    for (const auto& part : partials)
        for (const auto& [key, w] : part) total[key] += w;
    return from_entries(total, n_codes, n_terms, lambda);
}

CooccurrenceMatrix cooccurrence_oracle(std::span<const PatientEvents> patients,
                                       std::int32_t n_codes, std::int32_t n_terms, double lambda) {
    check_lambda(lambda);
    std::map<PairKey, double> total;
    for (const auto& p : patients) {
        // C_p(c): encounters containing code c; C_p(s): matched encounters per search of s
        std::vector<std::vector<int>> enc_of_code(static_cast<std::size_t>(n_codes));
        std::vector<std::vector<int>> enc_of_term(static_cast<std::size_t>(n_terms));
        for (int i = 0; i < static_cast<int>(p.encounter_codes.size()); ++i)
            for (CodeId c : p.encounter_codes[i]) enc_of_code[static_cast<std::size_t>(c)].push_back(i);
        for (const auto& [term, j] : p.searches)
            if (j >= 0) enc_of_term[static_cast<std::size_t>(term)].push_back(j);

        for (CodeId c = 0; c < n_codes; ++c) {
            for (TermId s = 0; s < n_terms; ++s) {
                for (int ec : enc_of_code[static_cast<std::size_t>(c)]) {
                    for (int es : enc_of_term[static_cast<std::size_t>(s)]) {
                        if (es >= ec) total[key_of(c, s)] += std::pow(lambda, es - ec);
                    }
                }
            }
        }
    }
    return from_entries(total, n_codes, n_terms, lambda);
}

void dump_matrix(const CooccurrenceMatrix& a, std::ostream& os) {
    os << a.n << ' ' << a.m << ' ' << format_double(a.lambda) << "\n";
    for (std::size_t i = 0; i < a.nnz(); ++i)
        os << a.code_of[i] << ' ' << a.term_of[i] << ' ' << format_double(a.weight[i]) << "\n";
}

CooccurrenceMatrix load_matrix(std::istream& is) {
    CooccurrenceMatrix a;
    if (!(is >> a.n >> a.m >> a.lambda)) throw DataError("bad matrix header");
    CodeId c;
    TermId t;
    double w;
    while (is >> c >> t >> w) {
        if (c < 0 || c >= a.n || t < 0 || t >= a.m)
            throw DataError("matrix entry out of bounds");
        a.code_of.push_back(c);
        a.term_of.push_back(t);
        a.weight.push_back(w);
    }
    a.finalize();
    return a;
}

} // namespace termrec
