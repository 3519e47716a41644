#pragma once

#include "adhcn/sparse.hpp"

#include <initializer_list>
#include <vector>

namespace adhcn {

// Dense row-major matrix of 64-bit reals. Doubles as the feature-matrix
// carrier and as the container for parameters, gradients and embeddings;
// row vectors are 1 x k matrices.
class Matrix {
public:
    Matrix() = default;
    Matrix(Index rows, Index cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index size() const { return rows_ * cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& operator()(Index r, Index c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
    double operator()(Index r, Index c) const { return data_[static_cast<std::size_t>(r * cols_ + c)]; }

    double* row(Index r) { return data_.data() + r * cols_; }
    const double* row(Index r) const { return data_.data() + r * cols_; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool all_finite() const;

    bool operator==(const Matrix&) const = default;

private:
    Index rows_ = 0;
    Index cols_ = 0;
    std::vector<double> data_;
};

using FeatureMatrix = Matrix;

// Per-node integer class labels in [0, num_classes).
struct LabelVector {
    std::vector<int> values;
    int num_classes = 0;

    Index size() const { return static_cast<Index>(values.size()); }
    void validate() const; // throws SchemaError

    bool operator==(const LabelVector&) const = default;
};

// C = A * B
Matrix matmul(const Matrix& a, const Matrix& b);
// C = A^T * B
Matrix matmul_transpose_a(const Matrix& a, const Matrix& b);
// C = A * B^T
Matrix matmul_transpose_b(const Matrix& a, const Matrix& b);
// C = S * B with S sparse
Matrix spmm(const SparseMatrix& s, const Matrix& b);

Matrix transpose(const Matrix& a);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix add(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);
Matrix relu(const Matrix& a);
Matrix tanh_elementwise(const Matrix& a);
// 1 x cols vector of column sums
Matrix column_sums(const Matrix& a);
// adds a 1 x cols bias row to every row of m
void add_row_vector(Matrix& m, const Matrix& bias);
// numerically stable row softmax (max subtraction)
void softmax_rows(Matrix& m);

} // namespace adhcn
