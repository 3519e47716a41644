#include "adhcn/dense.hpp"

#include "adhcn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace adhcn {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

} // namespace

Matrix::Matrix(Index rows, Index cols, double fill) : rows_(rows), cols_(cols) {
    require(rows >= 0 && cols >= 0, "Matrix: negative dimension");
    data_.assign(static_cast<std::size_t>(rows * cols), fill);
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = static_cast<Index>(rows.size());
    cols_ = rows_ == 0 ? 0 : static_cast<Index>(rows.begin()->size());
    data_.reserve(static_cast<std::size_t>(rows_ * cols_));
    for (const auto& r : rows) {
        require(static_cast<Index>(r.size()) == cols_, "Matrix: ragged initializer rows");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void LabelVector::validate() const {
    if (num_classes < 2) throw SchemaError("labels: num_classes must be at least 2");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0 || values[i] >= num_classes)
            throw SchemaError("labels[" + std::to_string(i) + "]: value " + std::to_string(values[i]) +
                              " out of range [0," + std::to_string(num_classes) + ")");
    }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "matmul: inner dimensions disagree");
    Matrix c(a.rows(), b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        double* crow = c.row(i);
        for (Index k = 0; k < a.cols(); ++k) {
            const double av = a(i, k);
            if (av == 0.0) continue;
            const double* brow = b.row(k);
            for (Index j = 0; j < b.cols(); ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

Matrix matmul_transpose_a(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows(), "matmul_transpose_a: row counts disagree");
    Matrix c(a.cols(), b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        const double* brow = b.row(i);
        for (Index k = 0; k < a.cols(); ++k) {
            const double av = a(i, k);
            if (av == 0.0) continue;
            double* crow = c.row(k);
            for (Index j = 0; j < b.cols(); ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

Matrix matmul_transpose_b(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.cols(), "matmul_transpose_b: column counts disagree");
    Matrix c(a.rows(), b.rows());
    for (Index i = 0; i < a.rows(); ++i) {
        const double* arow = a.row(i);
        double* crow = c.row(i);
        for (Index j = 0; j < b.rows(); ++j) {
            const double* brow = b.row(j);
            double acc = 0.0;
            for (Index k = 0; k < a.cols(); ++k) acc += arow[k] * brow[k];
            crow[j] = acc;
        }
    }
    return c;
}

Matrix spmm(const SparseMatrix& s, const Matrix& b) {
    require(s.cols() == b.rows(), "spmm: inner dimensions disagree");
    Matrix c(s.rows(), b.cols());
    const auto& offsets = s.row_offsets();
    const auto& cols = s.col_indices();
    const auto& vals = s.values();
    for (Index i = 0; i < s.rows(); ++i) {
        double* crow = c.row(i);
        for (Index k = offsets[static_cast<std::size_t>(i)];
             k < offsets[static_cast<std::size_t>(i) + 1]; ++k) {
            const double av = vals[static_cast<std::size_t>(k)];
            const double* brow = b.row(cols[static_cast<std::size_t>(k)]);
            for (Index j = 0; j < b.cols(); ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "hadamard: shapes disagree");
    Matrix c = a;
    for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] *= b.data()[i];
    return c;
}

Matrix add(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "add: shapes disagree");
    Matrix c = a;
    for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] += b.data()[i];
    return c;
}

Matrix scale(const Matrix& a, double s) {
    Matrix c = a;
    for (double& v : c.data()) v *= s;
    return c;
}

Matrix relu(const Matrix& a) {
    Matrix c = a;
    for (double& v : c.data())
        if (v < 0.0) v = 0.0;
    return c;
}

Matrix tanh_elementwise(const Matrix& a) {
    Matrix c = a;
    for (double& v : c.data()) v = std::tanh(v);
    return c;
}

Matrix column_sums(const Matrix& a) {
    Matrix s(1, a.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        const double* arow = a.row(i);
        for (Index j = 0; j < a.cols(); ++j) s(0, j) += arow[j];
    }
    return s;
}

void add_row_vector(Matrix& m, const Matrix& bias) {
    require(bias.rows() == 1 && bias.cols() == m.cols(), "add_row_vector: bias must be 1 x cols");
    for (Index i = 0; i < m.rows(); ++i) {
        double* row = m.row(i);
        for (Index j = 0; j < m.cols(); ++j) row[j] += bias(0, j);
    }
}

void softmax_rows(Matrix& m) {
    for (Index i = 0; i < m.rows(); ++i) {
        double* row = m.row(i);
        double maxv = row[0];
        for (Index j = 1; j < m.cols(); ++j) maxv = std::max(maxv, row[j]);
        double sum = 0.0;
        for (Index j = 0; j < m.cols(); ++j) {
            row[j] = std::exp(row[j] - maxv);
            sum += row[j];
        }
        for (Index j = 0; j < m.cols(); ++j) row[j] /= sum;
    }
}

} // namespace adhcn
