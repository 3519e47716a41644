#pragma once

#include <cstdint>
#include <vector>

namespace adhcn {

using Index = std::int64_t;

struct Triplet {
    Index row = 0;
    Index col = 0;
    double value = 0.0;
};

// Compressed-row sparse matrix with 64-bit real values.
//
// Invariants: row_offsets is monotone nondecreasing with length rows+1;
// column indices are strictly increasing within each row and < cols.
// All construction paths are deterministic, so equal inputs give bitwise
// equal matrices.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(Index rows, Index cols);

    // Builds from an unordered triplet list; duplicate coordinates are summed.
    static SparseMatrix from_triplets(Index rows, Index cols, std::vector<Triplet> triplets);
    static SparseMatrix identity(Index n, double value = 1.0);

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index nnz() const { return static_cast<Index>(values_.size()); }

    const std::vector<Index>& row_offsets() const { return row_offsets_; }
    const std::vector<Index>& col_indices() const { return col_indices_; }
    const std::vector<double>& values() const { return values_; }

    // Entry lookup; 0.0 when the coordinate is structurally absent.
    double at(Index row, Index col) const;

    SparseMatrix transpose() const;

    // Sparse-sparse product with sorted output columns. The accumulation
    // order is fixed (left operand's column order), so A*A^T is bitwise
    // symmetric.
    SparseMatrix multiply(const SparseMatrix& rhs) const;

    // entry(i,j) -> value * (scale[i] * scale[j]); the grouped product keeps
    // symmetric inputs bitwise symmetric.
    SparseMatrix scale_symmetric(const std::vector<double>& scale) const;

    // A + s*I (square matrices only)
    SparseMatrix plus_scaled_identity(double s) const;

    std::vector<double> row_sums() const;

    bool operator==(const SparseMatrix&) const = default;

    // Throws std::invalid_argument when a structural invariant is violated.
    void validate() const;

private:
    Index rows_ = 0;
    Index cols_ = 0;
    std::vector<Index> row_offsets_{0};
    std::vector<Index> col_indices_;
    std::vector<double> values_;
};

} // namespace adhcn
