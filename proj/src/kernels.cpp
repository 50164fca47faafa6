#include "termrec/kernels.hpp"

#include <cassert>

namespace termrec {

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

namespace {

inline void spmm_row(const CooccurrenceMatrix& a, const Mat& v, Mat& out, std::int32_t c) {
    double* dst = out.row(c);
    for (std::int32_t k = 0; k < out.cols; ++k) dst[k] = 0.0;
    for (std::int64_t e = a.row_ptr[c]; e < a.row_ptr[c + 1]; ++e) {
        const double w = a.weight[static_cast<std::size_t>(e)];
        const double* src = v.row(a.term_of[static_cast<std::size_t>(e)]);
        for (std::int32_t k = 0; k < out.cols; ++k) dst[k] += w * src[k];
    }
}

inline void spmm_t_row(const CooccurrenceMatrix& a, const Mat& u, Mat& out, std::int32_t t) {
    double* dst = out.row(t);
    for (std::int32_t k = 0; k < out.cols; ++k) dst[k] = 0.0;
    for (std::int64_t p = a.col_ptr[t]; p < a.col_ptr[t + 1]; ++p) {
        const auto e = static_cast<std::size_t>(a.col_entry[static_cast<std::size_t>(p)]);
        const double w = a.weight[e];
        const double* src = u.row(a.code_of[e]);
        for (std::int32_t k = 0; k < out.cols; ++k) dst[k] += w * src[k];
    }
}

inline double gram_entry(const Mat& x, std::int32_t j, std::int32_t k) {
    double s = 0.0;
    for (std::int32_t i = 0; i < x.rows; ++i) s += x.at(i, j) * x.at(i, k);
    return s;
}

inline double frob_row(const Mat& x, std::int32_t i) {
    const double* r = x.row(i);
    double s = 0.0;
    for (std::int32_t k = 0; k < x.cols; ++k) s += r[k] * r[k];
    return s;
}

inline double sparse_inner_row(const CooccurrenceMatrix& a, const Mat& u, const Mat& v,
                               std::int32_t c) {
    double s = 0.0;
    for (std::int64_t e = a.row_ptr[c]; e < a.row_ptr[c + 1]; ++e) {
        const auto i = static_cast<std::size_t>(e);
        s += a.weight[i] *
             dot({u.row(c), static_cast<std::size_t>(u.cols)},
                 {v.row(a.term_of[i]), static_cast<std::size_t>(v.cols)});
    }
    return s;
}

} // namespace

void spmm_serial(const CooccurrenceMatrix& a, const Mat& v, Mat& out) {
    out = Mat(a.n, v.cols);
    for (std::int32_t c = 0; c < a.n; ++c) spmm_row(a, v, out, c);
}

void spmm(const CooccurrenceMatrix& a, const Mat& v, Mat& out) {
    out = Mat(a.n, v.cols);
#pragma omp parallel for schedule(static)
    for (std::int32_t c = 0; c < a.n; ++c) spmm_row(a, v, out, c);
}

void spmm_t_serial(const CooccurrenceMatrix& a, const Mat& u, Mat& out) {
    out = Mat(a.m, u.cols);
    for (std::int32_t t = 0; t < a.m; ++t) spmm_t_row(a, u, out, t);
}

void spmm_t(const CooccurrenceMatrix& a, const Mat& u, Mat& out) {
    out = Mat(a.m, u.cols);
#pragma omp parallel for schedule(static)
    for (std::int32_t t = 0; t < a.m; ++t) spmm_t_row(a, u, out, t);
}

void gram_serial(const Mat& x, Mat& g) {
    g = Mat(x.cols, x.cols);
    for (std::int32_t j = 0; j < x.cols; ++j)
        for (std::int32_t k = 0; k < x.cols; ++k) g.at(j, k) = gram_entry(x, j, k);
}

void gram(const Mat& x, Mat& g) {
    g = Mat(x.cols, x.cols);
    const std::int64_t cells = static_cast<std::int64_t>(x.cols) * x.cols;
#pragma omp parallel for schedule(static)
    for (std::int64_t idx = 0; idx < cells; ++idx)
        g.data[static_cast<std::size_t>(idx)] =
            gram_entry(x, static_cast<std::int32_t>(idx / x.cols),
                       static_cast<std::int32_t>(idx % x.cols));
}

void mul_small_serial(const Mat& x, const Mat& g, Mat& out) {
    out = Mat(x.rows, g.cols);
    for (std::int32_t i = 0; i < x.rows; ++i) {
        const double* xi = x.row(i);
        double* oi = out.row(i);
        for (std::int32_t j = 0; j < g.cols; ++j) {
            double s = 0.0;
            for (std::int32_t k = 0; k < x.cols; ++k) s += xi[k] * g.at(k, j);
            oi[j] = s;
        }
    }
}

void mul_small(const Mat& x, const Mat& g, Mat& out) {
    out = Mat(x.rows, g.cols);
#pragma omp parallel for schedule(static)
    for (std::int32_t i = 0; i < x.rows; ++i) {
        const double* xi = x.row(i);
        double* oi = out.row(i);
        for (std::int32_t j = 0; j < g.cols; ++j) {
            double s = 0.0;
            for (std::int32_t k = 0; k < x.cols; ++k) s += xi[k] * g.at(k, j);
            oi[j] = s;
        }
    }
}

double frob_sq_serial(const Mat& x) {
    double s = 0.0;
    for (std::int32_t i = 0; i < x.rows; ++i) s += frob_row(x, i);
    return s;
}

double frob_sq(const Mat& x) {
    // per-row partials reduced in row order, so the total matches the serial
    // sum bitwise for any thread count
    std::vector<double> partial(static_cast<std::size_t>(x.rows));
#pragma omp parallel for schedule(static)
    for (std::int32_t i = 0; i < x.rows; ++i) partial[static_cast<std::size_t>(i)] = frob_row(x, i);
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

double sparse_inner_serial(const CooccurrenceMatrix& a, const Mat& u, const Mat& v) {
    double s = 0.0;
    for (std::int32_t c = 0; c < a.n; ++c) s += sparse_inner_row(a, u, v, c);
    return s;
}

double sparse_inner(const CooccurrenceMatrix& a, const Mat& u, const Mat& v) {
    std::vector<double> partial(static_cast<std::size_t>(a.n));
#pragma omp parallel for schedule(static)
    for (std::int32_t c = 0; c < a.n; ++c)
        partial[static_cast<std::size_t>(c)] = sparse_inner_row(a, u, v, c);
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

void row_scores_serial(const Mat& v, std::span<const double> q, std::vector<double>& scores) {
    scores.assign(static_cast<std::size_t>(v.rows), 0.0);
    for (std::int32_t i = 0; i < v.rows; ++i)
        scores[static_cast<std::size_t>(i)] = dot({v.row(i), q.size()}, q);
}

void row_scores(const Mat& v, std::span<const double> q, std::vector<double>& scores) {
    scores.assign(static_cast<std::size_t>(v.rows), 0.0);
#pragma omp parallel for schedule(static)
    for (std::int32_t i = 0; i < v.rows; ++i)
        scores[static_cast<std::size_t>(i)] = dot({v.row(i), q.size()}, q);
}

void axpby_serial(double alpha, const Mat& x, double beta, Mat& y) {
    assert(x.rows == y.rows && x.cols == y.cols);
    for (std::size_t i = 0; i < y.data.size(); ++i)
        y.data[i] = alpha * x.data[i] + beta * y.data[i];
}

void axpby(double alpha, const Mat& x, double beta, Mat& y) {
    assert(x.rows == y.rows && x.cols == y.cols);
    const auto size = static_cast<std::int64_t>(y.data.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < size; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        y.data[ui] = alpha * x.data[ui] + beta * y.data[ui];
    }
}

} // namespace termrec
