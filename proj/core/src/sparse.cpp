#include "adhcn/sparse.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace adhcn {

SparseMatrix::SparseMatrix(Index rows, Index cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("SparseMatrix: negative dimension");
    row_offsets_.assign(static_cast<std::size_t>(rows) + 1, 0);
}

SparseMatrix SparseMatrix::from_triplets(Index rows, Index cols, std::vector<Triplet> triplets) {
    SparseMatrix m(rows, cols);
    for (const Triplet& t : triplets) {
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw std::invalid_argument("SparseMatrix::from_triplets: coordinate out of range");
    }
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    m.col_indices_.reserve(triplets.size());
    m.values_.reserve(triplets.size());
    std::size_t i = 0;
    for (Index r = 0; r < rows; ++r) {
        while (i < triplets.size() && triplets[i].row == r) {
            double v = triplets[i].value;
            const Index c = triplets[i].col;
            ++i;
            while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c) {
                v += triplets[i].value;
                ++i;
            }
            m.col_indices_.push_back(c);
            m.values_.push_back(v);
        }
        m.row_offsets_[static_cast<std::size_t>(r) + 1] = static_cast<Index>(m.col_indices_.size());
    }
    return m;
}

SparseMatrix SparseMatrix::identity(Index n, double value) {
    SparseMatrix m(n, n);
    m.col_indices_.resize(static_cast<std::size_t>(n));
    m.values_.assign(static_cast<std::size_t>(n), value);
    for (Index i = 0; i < n; ++i) {
        m.col_indices_[static_cast<std::size_t>(i)] = i;
        m.row_offsets_[static_cast<std::size_t>(i) + 1] = i + 1;
    }
    return m;
}

double SparseMatrix::at(Index row, Index col) const {
    if (row < 0 || row >= rows_ || col < 0 || col >= cols_)
        throw std::invalid_argument("SparseMatrix::at: coordinate out of range");
    const auto begin = col_indices_.begin() + row_offsets_[static_cast<std::size_t>(row)];
    const auto end = col_indices_.begin() + row_offsets_[static_cast<std::size_t>(row) + 1];
    const auto it = std::lower_bound(begin, end, col);
    if (it == end || *it != col) return 0.0;
    return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

SparseMatrix SparseMatrix::transpose() const {
    SparseMatrix t(cols_, rows_);
    std::vector<Index> counts(static_cast<std::size_t>(cols_), 0);
    for (Index c : col_indices_) ++counts[static_cast<std::size_t>(c)];
    for (Index c = 0; c < cols_; ++c)
        t.row_offsets_[static_cast<std::size_t>(c) + 1] =
            t.row_offsets_[static_cast<std::size_t>(c)] + counts[static_cast<std::size_t>(c)];
    t.col_indices_.resize(values_.size());
    t.values_.resize(values_.size());
    std::vector<Index> next(t.row_offsets_.begin(), t.row_offsets_.end() - 1);
    for (Index r = 0; r < rows_; ++r) {
        for (Index k = row_offsets_[static_cast<std::size_t>(r)];
             k < row_offsets_[static_cast<std::size_t>(r) + 1]; ++k) {
            const Index c = col_indices_[static_cast<std::size_t>(k)];
            const Index slot = next[static_cast<std::size_t>(c)]++;
            t.col_indices_[static_cast<std::size_t>(slot)] = r;
            t.values_[static_cast<std::size_t>(slot)] = values_[static_cast<std::size_t>(k)];
        }
    }
    return t;
}

SparseMatrix SparseMatrix::multiply(const SparseMatrix& rhs) const {
    if (cols_ != rhs.rows_)
        throw std::invalid_argument("SparseMatrix::multiply: inner dimensions disagree (" +
                                    std::to_string(cols_) + " vs " + std::to_string(rhs.rows_) + ")");
    SparseMatrix out(rows_, rhs.cols_);
    std::vector<double> scratch(static_cast<std::size_t>(rhs.cols_), 0.0);
    std::vector<Index> mark(static_cast<std::size_t>(rhs.cols_), -1);
    std::vector<Index> touched;
    for (Index i = 0; i < rows_; ++i) {
        touched.clear();
        for (Index k = row_offsets_[static_cast<std::size_t>(i)];
             k < row_offsets_[static_cast<std::size_t>(i) + 1]; ++k) {
            const Index e = col_indices_[static_cast<std::size_t>(k)];
            const double a = values_[static_cast<std::size_t>(k)];
            for (Index l = rhs.row_offsets_[static_cast<std::size_t>(e)];
                 l < rhs.row_offsets_[static_cast<std::size_t>(e) + 1]; ++l) {
                const Index j = rhs.col_indices_[static_cast<std::size_t>(l)];
                if (mark[static_cast<std::size_t>(j)] != i) {
                    mark[static_cast<std::size_t>(j)] = i;
                    scratch[static_cast<std::size_t>(j)] = 0.0;
                    touched.push_back(j);
                }
                scratch[static_cast<std::size_t>(j)] += a * rhs.values_[static_cast<std::size_t>(l)];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (Index j : touched) {
            out.col_indices_.push_back(j);
            out.values_.push_back(scratch[static_cast<std::size_t>(j)]);
        }
        out.row_offsets_[static_cast<std::size_t>(i) + 1] = static_cast<Index>(out.col_indices_.size());
    }
    return out;
}

SparseMatrix SparseMatrix::scale_symmetric(const std::vector<double>& scale) const {
    if (rows_ != cols_ || static_cast<Index>(scale.size()) != rows_)
        throw std::invalid_argument("SparseMatrix::scale_symmetric: scale length must equal matrix order");
    SparseMatrix out = *this;
    for (Index r = 0; r < rows_; ++r) {
        for (Index k = row_offsets_[static_cast<std::size_t>(r)];
             k < row_offsets_[static_cast<std::size_t>(r) + 1]; ++k) {
            const Index c = col_indices_[static_cast<std::size_t>(k)];
            out.values_[static_cast<std::size_t>(k)] =
                values_[static_cast<std::size_t>(k)] *
                (scale[static_cast<std::size_t>(r)] * scale[static_cast<std::size_t>(c)]);
        }
    }
    return out;
}

SparseMatrix SparseMatrix::plus_scaled_identity(double s) const {
    if (rows_ != cols_)
        throw std::invalid_argument("SparseMatrix::plus_scaled_identity: matrix must be square");
    std::vector<Triplet> triplets;
    triplets.reserve(values_.size() + static_cast<std::size_t>(rows_));
    for (Index r = 0; r < rows_; ++r) {
        for (Index k = row_offsets_[static_cast<std::size_t>(r)];
             k < row_offsets_[static_cast<std::size_t>(r) + 1]; ++k)
            triplets.push_back({r, col_indices_[static_cast<std::size_t>(k)],
                                values_[static_cast<std::size_t>(k)]});
        triplets.push_back({r, r, s});
    }
    return from_triplets(rows_, cols_, std::move(triplets));
}

std::vector<double> SparseMatrix::row_sums() const {
    std::vector<double> sums(static_cast<std::size_t>(rows_), 0.0);
    for (Index r = 0; r < rows_; ++r)
        for (Index k = row_offsets_[static_cast<std::size_t>(r)];
             k < row_offsets_[static_cast<std::size_t>(r) + 1]; ++k)
            sums[static_cast<std::size_t>(r)] += values_[static_cast<std::size_t>(k)];
    return sums;
}

void SparseMatrix::validate() const {
    if (static_cast<Index>(row_offsets_.size()) != rows_ + 1)
        throw std::invalid_argument("SparseMatrix: row_offsets length must be rows+1");
    if (row_offsets_.front() != 0 || row_offsets_.back() != nnz())
        throw std::invalid_argument("SparseMatrix: row_offsets endpoints inconsistent with nnz");
    if (col_indices_.size() != values_.size())
        throw std::invalid_argument("SparseMatrix: col_indices/values length mismatch");
    for (Index r = 0; r < rows_; ++r) {
        const Index begin = row_offsets_[static_cast<std::size_t>(r)];
        const Index end = row_offsets_[static_cast<std::size_t>(r) + 1];
        if (end < begin) throw std::invalid_argument("SparseMatrix: row_offsets not monotone");
        for (Index k = begin; k < end; ++k) {
            const Index c = col_indices_[static_cast<std::size_t>(k)];
            if (c < 0 || c >= cols_) throw std::invalid_argument("SparseMatrix: column index out of range");
            if (k > begin && col_indices_[static_cast<std::size_t>(k) - 1] >= c)
                throw std::invalid_argument("SparseMatrix: column indices not strictly increasing");
        }
    }
}

} // namespace adhcn
