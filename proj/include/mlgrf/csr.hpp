#ifndef MLGRF_CSR_HPP
#define MLGRF_CSR_HPP

#include <utility>

#include "mlgrf/common.hpp"

namespace mlgrf
{

/**
   Compressed sparse row matrix. Column indices are sorted within each
   row and duplicates are merged at construction time.
*/
class CsrMatrix
{
public:
    CsrMatrix() = default;
    CsrMatrix(int rows, int cols,
              std::vector<int> offsets, std::vector<int> cols_idx, Vector vals);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int nnz() const { return static_cast<int>(values_.size()); }

    const std::vector<int>& row_offsets() const { return offsets_; }
    const std::vector<int>& col_indices() const { return indices_; }
    const Vector& values() const { return values_; }
    Vector& values() { return values_; }

    /// y = A x
    void apply(Span x, std::span<double> y) const;
    /// y += alpha * A x
    void apply_add(double alpha, Span x, std::span<double> y) const;
    /// y = A^T x
    void apply_transpose(Span x, std::span<double> y) const;
    /// y += alpha * A^T x
    void apply_transpose_add(double alpha, Span x, std::span<double> y) const;

    Vector multiply(Span x) const;
    Vector multiply_transpose(Span x) const;

    Vector diagonal() const;
    double value_at(int i, int j) const; // 0 if not stored

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> offsets_{0};
    std::vector<int> indices_;
    Vector values_;
};

/// Accumulates (i, j, v) triplets and compresses them into CSR,
/// summing duplicates. Deterministic for any insertion order.
class CooBuilder
{
public:
    CooBuilder(int rows, int cols) : rows_(rows), cols_(cols) {}

    void add(int i, int j, double v) { entries_.push_back({i, j, v}); }

    CsrMatrix to_csr() const;

private:
    struct Entry
    {
        int row;
        int col;
        double val;
    };

    int rows_;
    int cols_;
    std::vector<Entry> entries_;
};

CsrMatrix csr_transpose(const CsrMatrix& a);
CsrMatrix csr_matmul(const CsrMatrix& a, const CsrMatrix& b);
/// a + alpha * b, matching shapes required.
CsrMatrix csr_add(const CsrMatrix& a, double alpha, const CsrMatrix& b);
/// diag(d) * a
CsrMatrix csr_scale_rows(Span d, const CsrMatrix& a);
CsrMatrix csr_identity(int n);

/// Symmetric elimination of constrained rows/columns: constrained rows and
/// columns are dropped and a unit diagonal is placed on constrained rows.
CsrMatrix eliminate_rows_cols(const CsrMatrix& a, const std::vector<int>& constrained);

/// Drop the given columns (used to decouple constrained flux unknowns
/// from the divergence operator).
CsrMatrix eliminate_cols(const CsrMatrix& a, const std::vector<int>& constrained);

} // namespace mlgrf

#endif
