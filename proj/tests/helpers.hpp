#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "termrec/cooccur.hpp"
#include "termrec/kernels.hpp"
#include "termrec/rng.hpp"

namespace termrec::testing {

// Scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("termrec_" + tag + "_" + std::to_string(counter_++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    os << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

inline Mat random_mat(Rng& rng, std::int32_t rows, std::int32_t cols, double lo = -1.0,
                      double hi = 1.0) {
    Mat m(rows, cols);
    for (double& x : m.data) x = rng.uniform(lo, hi);
    return m;
}

// random sparse matrix with the given fill fraction
inline CooccurrenceMatrix random_sparse(Rng& rng, std::int32_t n, std::int32_t m, double fill,
                                        double lambda = 0.5) {
    CooccurrenceMatrix a;
    a.n = n;
    a.m = m;
    a.lambda = lambda;
    for (std::int32_t c = 0; c < n; ++c) {
        for (std::int32_t t = 0; t < m; ++t) {
            if (rng.uniform() < fill) {
                a.code_of.push_back(c);
                a.term_of.push_back(t);
                a.weight.push_back(rng.uniform(0.1, 4.0));
            }
        }
    }
    a.finalize();
    return a;
}

// small random event sets for co-occurrence properties
inline PatientEvents random_patient(Rng& rng, int n_codes, int n_terms, int max_enc,
                                    int max_searches) {
    PatientEvents p;
    const int n_enc = static_cast<int>(rng.uniform_int(1, max_enc));
    for (int e = 0; e < n_enc; ++e) {
        std::vector<CodeId> codes;
        const int k = static_cast<int>(rng.uniform_int(1, 3));
        for (int i = 0; i < k; ++i)
            codes.push_back(static_cast<CodeId>(rng.uniform_int(0, n_codes - 1)));
        std::sort(codes.begin(), codes.end());
        codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
        p.encounter_codes.push_back(std::move(codes));
    }
    const int n_searches = static_cast<int>(rng.uniform_int(0, max_searches));
    for (int s = 0; s < n_searches; ++s) {
        const auto term = static_cast<TermId>(rng.uniform_int(0, n_terms - 1));
        // some searches precede all encounters
        const int matched = static_cast<int>(rng.uniform_int(-1, n_enc - 1));
        p.searches.emplace_back(term, matched);
    }
    return p;
}

} // namespace termrec::testing
