#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "termrec/kernels.hpp"

namespace termrec {

struct TrainConfig {
    std::int32_t d = 32;
    double gamma = 0.01;
    double learning_rate = 1e-3;
    std::int32_t max_epochs = 500;
    double rel_tol = 1e-5; // stop when the relative objective decrease falls below this
    std::uint64_t seed = 0;

    void validate() const;
};

// Low-rank factor pair: code row u_c, term row v_s, estimate = u_c . v_s.
// The dictionaries the ids refer to are bound at train time.
struct FactorModel {
    Mat u; // n x d
    Mat v; // m x d
    std::int32_t d = 0;
    double gamma = 0.0;
    double lambda = 0.0; // decay the training matrix was built with
    std::uint64_t seed = 0;
    std::uint64_t dict_hash = 0;
    std::vector<std::string> code_names;
    std::vector<std::string> term_names;

    double estimate(CodeId c, TermId s) const; // throws on out-of-range ids
};

// Binds the dictionaries and computes their hash into the model header.
void bind_dictionaries(FactorModel& model, std::vector<std::string> code_names,
                       std::vector<std::string> term_names);
std::uint64_t dictionary_hash(const std::vector<std::string>& code_names,
                              const std::vector<std::string>& term_names);

// Full-matrix squared Frobenius fit (zeros of A included) plus the ridge
// term, evaluated through the Gram identity so the dense product is never
// materialized:  |A|^2 - 2<A, UV^T> + <U^T U, V^T V>.
double objective(const CooccurrenceMatrix& a, const Mat& u, const Mat& v, double gamma);

// Materialized dense evaluation; test reference for the Gram path.
double objective_dense(const CooccurrenceMatrix& a, const Mat& u, const Mat& v, double gamma);

// grad_u = -2 A V + 2 U (V^T V) + gamma U, and symmetrically for V.
void gradients(const CooccurrenceMatrix& a, const Mat& u, const Mat& v, double gamma, Mat& grad_u,
               Mat& grad_v);

// Max relative deviation between the analytic gradients and central finite
// differences over every entry of U and V. Desk-scale shapes only.
double gradient_check(const CooccurrenceMatrix& a, const Mat& u, const Mat& v, double gamma,
                      double h = 1e-5);

struct TrainResult {
    FactorModel model;
    std::vector<double> objective_trace; // trace[0] = initial objective
    std::int32_t epochs = 0;
    double final_learning_rate = 0.0;
    bool stopped_by_tol = false;
};

// Alternating block gradient descent: a U step with V fixed, then a V step
// with the updated U, once per epoch. A proposed epoch that raises the
// objective is retried with a halved step, up to 20 times, then training
// stops; accepted epochs grow the step by 1.2x. The accepted objective
// sequence is therefore non-increasing. Throws TrainingError when the loss
// turns non-finite and halving cannot recover it.
TrainResult train(const CooccurrenceMatrix& a, const TrainConfig& config);

// Binary model file: magic, header (n, m, d, gamma, lambda, seed, dictionary
// hash), then row-major little-endian f64 blocks for U then V. Dictionary
// raws go to a "<path>.dict" sidecar bound by the hash. load(save(m)) is
// bit-identical.
void save_model(const FactorModel& model, const std::string& path);
FactorModel load_model(const std::string& path);

} // namespace termrec
