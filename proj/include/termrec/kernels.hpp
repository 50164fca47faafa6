#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "termrec/cooccur.hpp"

namespace termrec {

// Dense row-major matrix.
struct Mat {
    std::int32_t rows = 0;
    std::int32_t cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(std::int32_t r, std::int32_t c)
        : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double* row(std::int32_t i) { return data.data() + static_cast<std::size_t>(i) * cols; }
    const double* row(std::int32_t i) const {
        return data.data() + static_cast<std::size_t>(i) * cols;
    }
    double& at(std::int32_t i, std::int32_t j) {
        return data[static_cast<std::size_t>(i) * cols + j];
    }
    double at(std::int32_t i, std::int32_t j) const {
        return data[static_cast<std::size_t>(i) * cols + j];
    }

    bool operator==(const Mat&) const = default;
};

double dot(std::span<const double> a, std::span<const double> b);

// Every kernel below comes in a serial reference flavor and an OpenMP flavor.
// The parallel versions assign whole output elements (or rows) to a single
// thread and keep each element's accumulation order identical to the serial
// code, so results are bit-identical for any worker count. Tests assert exact
// equality; bench/ times the two against each other.

// out = A * V   (n x m sparse times m x d dense)
void spmm_serial(const CooccurrenceMatrix& a, const Mat& v, Mat& out);
void spmm(const CooccurrenceMatrix& a, const Mat& v, Mat& out);

// out = A^T * U   (m x n sparse times n x d dense)
void spmm_t_serial(const CooccurrenceMatrix& a, const Mat& u, Mat& out);
void spmm_t(const CooccurrenceMatrix& a, const Mat& u, Mat& out);

// g = X^T X   (d x d Gram matrix)
void gram_serial(const Mat& x, Mat& g);
void gram(const Mat& x, Mat& g);

// out = X * G with small square G (d x d)
void mul_small_serial(const Mat& x, const Mat& g, Mat& out);
void mul_small(const Mat& x, const Mat& g, Mat& out);

// sum of squares of all entries
double frob_sq_serial(const Mat& x);
double frob_sq(const Mat& x);

// sum over stored entries of w_ij * dot(U row i, V row j)
double sparse_inner_serial(const CooccurrenceMatrix& a, const Mat& u, const Mat& v);
double sparse_inner(const CooccurrenceMatrix& a, const Mat& u, const Mat& v);

// scores[i] = dot(V row i, q)
void row_scores_serial(const Mat& v, std::span<const double> q, std::vector<double>& scores);
void row_scores(const Mat& v, std::span<const double> q, std::vector<double>& scores);

// y = alpha * x + beta * y, elementwise over equal-shape matrices
void axpby_serial(double alpha, const Mat& x, double beta, Mat& y);
void axpby(double alpha, const Mat& x, double beta, Mat& y);

} // namespace termrec
