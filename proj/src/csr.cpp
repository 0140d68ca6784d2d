#include "mlgrf/csr.hpp"

#include <algorithm>
#include <cassert>

namespace mlgrf
{

CsrMatrix::CsrMatrix(int rows, int cols,
                     std::vector<int> offsets, std::vector<int> cols_idx, Vector vals)
    : rows_(rows), cols_(cols),
      offsets_(std::move(offsets)), indices_(std::move(cols_idx)), values_(std::move(vals))
{
    assert(static_cast<int>(offsets_.size()) == rows_ + 1);
    assert(indices_.size() == values_.size());
}

void CsrMatrix::apply(Span x, std::span<double> y) const
{
    for (int i = 0; i < rows_; ++i)
    {
        double s = 0.0;
        for (int k = offsets_[i]; k < offsets_[i + 1]; ++k)
            s += values_[k] * x[indices_[k]];
        y[i] = s;
    }
}

void CsrMatrix::apply_add(double alpha, Span x, std::span<double> y) const
{
    for (int i = 0; i < rows_; ++i)
    {
        double s = 0.0;
        for (int k = offsets_[i]; k < offsets_[i + 1]; ++k)
            s += values_[k] * x[indices_[k]];
        y[i] += alpha * s;
    }
}

void CsrMatrix::apply_transpose(Span x, std::span<double> y) const
{
    std::fill(y.begin(), y.end(), 0.0);
    apply_transpose_add(1.0, x, y);
}

void CsrMatrix::apply_transpose_add(double alpha, Span x, std::span<double> y) const
{
    for (int i = 0; i < rows_; ++i)
    {
        const double xi = alpha * x[i];
        for (int k = offsets_[i]; k < offsets_[i + 1]; ++k)
            y[indices_[k]] += values_[k] * xi;
    }
}

Vector CsrMatrix::multiply(Span x) const
{
    Vector y(rows_);
    apply(x, y);
    return y;
}

Vector CsrMatrix::multiply_transpose(Span x) const
{
    Vector y(cols_, 0.0);
    apply_transpose(x, y);
    return y;
}

Vector CsrMatrix::diagonal() const
{
    Vector d(rows_, 0.0);
    for (int i = 0; i < rows_; ++i)
        for (int k = offsets_[i]; k < offsets_[i + 1]; ++k)
            if (indices_[k] == i)
                d[i] = values_[k];
    return d;
}

double CsrMatrix::value_at(int i, int j) const
{
    for (int k = offsets_[i]; k < offsets_[i + 1]; ++k)
        if (indices_[k] == j)
            return values_[k];
    return 0.0;
}

CsrMatrix CooBuilder::to_csr() const
{
    std::vector<Entry> e = entries_;
    std::sort(e.begin(), e.end(), [](const Entry& a, const Entry& b)
              { return a.row != b.row ? a.row < b.row : a.col < b.col; });

    std::vector<int> offsets(rows_ + 1, 0);
    std::vector<int> cols;
    Vector vals;
    cols.reserve(e.size());
    vals.reserve(e.size());
    for (std::size_t k = 0; k < e.size();)
    {
        const int i = e[k].row;
        const int j = e[k].col;
        double v = 0.0;
        while (k < e.size() && e[k].row == i && e[k].col == j)
            v += e[k++].val;
        cols.push_back(j);
        vals.push_back(v);
        offsets[i + 1] += 1;
    }
    for (int i = 0; i < rows_; ++i)
        offsets[i + 1] += offsets[i];
    return CsrMatrix(rows_, cols_, std::move(offsets), std::move(cols), std::move(vals));
}

CsrMatrix csr_transpose(const CsrMatrix& a)
{
    const auto& off = a.row_offsets();
    const auto& idx = a.col_indices();
    const auto& val = a.values();

    std::vector<int> offsets(a.cols() + 1, 0);
    for (int j : idx)
        offsets[j + 1] += 1;
    for (int j = 0; j < a.cols(); ++j)
        offsets[j + 1] += offsets[j];

    std::vector<int> cols(idx.size());
    Vector vals(val.size());
    std::vector<int> next(offsets.begin(), offsets.end() - 1);
    for (int i = 0; i < a.rows(); ++i)
        for (int k = off[i]; k < off[i + 1]; ++k)
        {
            const int p = next[idx[k]]++;
            cols[p] = i;
            vals[p] = val[k];
        }
    return CsrMatrix(a.cols(), a.rows(), std::move(offsets), std::move(cols), std::move(vals));
}

CsrMatrix csr_matmul(const CsrMatrix& a, const CsrMatrix& b)
{
    if (a.cols() != b.rows())
        throw std::invalid_argument("csr_matmul: shape mismatch");

    CooBuilder out(a.rows(), b.cols());
    Vector acc(b.cols(), 0.0);
    std::vector<int> touched;
    const auto& aoff = a.row_offsets();
    const auto& aidx = a.col_indices();
    const auto& aval = a.values();
    const auto& boff = b.row_offsets();
    const auto& bidx = b.col_indices();
    const auto& bval = b.values();

    for (int i = 0; i < a.rows(); ++i)
    {
        touched.clear();
        for (int ka = aoff[i]; ka < aoff[i + 1]; ++ka)
        {
            const int j = aidx[ka];
            const double av = aval[ka];
            for (int kb = boff[j]; kb < boff[j + 1]; ++kb)
            {
                const int c = bidx[kb];
                if (acc[c] == 0.0)
                    touched.push_back(c);
                acc[c] += av * bval[kb];
            }
        }
        for (int c : touched)
        {
            out.add(i, c, acc[c]);
            acc[c] = 0.0;
        }
    }
    return out.to_csr();
}

CsrMatrix csr_add(const CsrMatrix& a, double alpha, const CsrMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("csr_add: shape mismatch");
    CooBuilder out(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
    {
        for (int k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k)
            out.add(i, a.col_indices()[k], a.values()[k]);
        for (int k = b.row_offsets()[i]; k < b.row_offsets()[i + 1]; ++k)
            out.add(i, b.col_indices()[k], alpha * b.values()[k]);
    }
    return out.to_csr();
}

CsrMatrix csr_scale_rows(Span d, const CsrMatrix& a)
{
    if (static_cast<int>(d.size()) != a.rows())
        throw std::invalid_argument("csr_scale_rows: size mismatch");
    std::vector<int> off = a.row_offsets();
    std::vector<int> idx = a.col_indices();
    Vector val = a.values();
    for (int i = 0; i < a.rows(); ++i)
        for (int k = off[i]; k < off[i + 1]; ++k)
            val[k] *= d[i];
    return CsrMatrix(a.rows(), a.cols(), std::move(off), std::move(idx), std::move(val));
}

CsrMatrix csr_identity(int n)
{
    std::vector<int> off(n + 1), idx(n);
    Vector val(n, 1.0);
    for (int i = 0; i <= n; ++i)
        off[i] = i;
    for (int i = 0; i < n; ++i)
        idx[i] = i;
    return CsrMatrix(n, n, std::move(off), std::move(idx), std::move(val));
}

namespace
{

std::vector<char> mask_of(int n, const std::vector<int>& list)
{
    std::vector<char> m(n, 0);
    for (int i : list)
    {
        if (i < 0 || i >= n)
            throw std::invalid_argument("elimination index out of range");
        m[i] = 1;
    }
    return m;
}

} // namespace

CsrMatrix eliminate_rows_cols(const CsrMatrix& a, const std::vector<int>& constrained)
{
    if (a.rows() != a.cols())
        throw std::invalid_argument("eliminate_rows_cols: matrix must be square");
    const std::vector<char> m = mask_of(a.rows(), constrained);
    CooBuilder out(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
    {
        if (m[i])
        {
            out.add(i, i, 1.0);
            continue;
        }
        for (int k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k)
        {
            const int j = a.col_indices()[k];
            if (!m[j])
                out.add(i, j, a.values()[k]);
        }
    }
    return out.to_csr();
}

CsrMatrix eliminate_cols(const CsrMatrix& a, const std::vector<int>& constrained)
{
    const std::vector<char> m = mask_of(a.cols(), constrained);
    CooBuilder out(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k)
        {
            const int j = a.col_indices()[k];
            if (!m[j])
                out.add(i, j, a.values()[k]);
        }
    return out.to_csr();
}

} // namespace mlgrf
