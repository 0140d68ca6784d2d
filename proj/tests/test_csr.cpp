#include <doctest.h>

#include "mlgrf/csr.hpp"
#include "mlgrf/rng.hpp"

using namespace mlgrf;

namespace
{

CsrMatrix random_sparse(int rows, int cols, int per_row, std::uint64_t seed)
{
    CooBuilder b(rows, cols);
    const Vector u = draw_uniform({seed, 0, 0, 0}, static_cast<std::size_t>(rows) * per_row * 2);
    std::size_t k = 0;
    for (int i = 0; i < rows; ++i)
        for (int e = 0; e < per_row; ++e)
        {
            const int j = static_cast<int>(u[k++] * cols);
            b.add(i, std::min(j, cols - 1), u[k++] * 2.0 - 1.0);
        }
    return b.to_csr();
}

Vector dense_of(const CsrMatrix& a)
{
    Vector d(static_cast<std::size_t>(a.rows()) * a.cols(), 0.0);
    for (int i = 0; i < a.rows(); ++i)
        for (int k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k)
            d[static_cast<std::size_t>(i) * a.cols() + a.col_indices()[k]] += a.values()[k];
    return d;
}

} // namespace

TEST_CASE("coo builder merges duplicates and sorts columns")
{
    CooBuilder b(2, 3);
    b.add(1, 2, 1.0);
    b.add(0, 1, 2.0);
    b.add(1, 2, 0.5);
    b.add(1, 0, -1.0);
    CsrMatrix m = b.to_csr();
    CHECK(m.nnz() == 3);
    CHECK(m.value_at(1, 2) == 1.5);
    CHECK(m.value_at(0, 1) == 2.0);
    CHECK(m.value_at(1, 0) == -1.0);
    CHECK(m.value_at(0, 0) == 0.0);
    for (int i = 0; i < m.rows(); ++i)
        for (int k = m.row_offsets()[i] + 1; k < m.row_offsets()[i + 1]; ++k)
            CHECK(m.col_indices()[k - 1] < m.col_indices()[k]);
}

TEST_CASE("transpose and product against dense arithmetic")
{
    const CsrMatrix a = random_sparse(17, 23, 4, 1);
    const CsrMatrix b = random_sparse(23, 11, 3, 2);
    const CsrMatrix at = csr_transpose(a);
    const CsrMatrix ab = csr_matmul(a, b);

    const Vector da = dense_of(a);
    const Vector dat = dense_of(at);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            CHECK(da[i * a.cols() + j] == dat[j * a.rows() + i]);

    const Vector db = dense_of(b);
    const Vector dab = dense_of(ab);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j)
        {
            double s = 0.0;
            for (int k = 0; k < a.cols(); ++k)
                s += da[i * a.cols() + k] * db[k * b.cols() + j];
            CHECK(dab[i * b.cols() + j] == doctest::Approx(s).epsilon(1e-13));
        }
}

TEST_CASE("matvec, transpose matvec, add, row scaling")
{
    const CsrMatrix a = random_sparse(31, 19, 5, 3);
    const Vector x = draw_standard_normal({4, 0, 0, 0}, 19);
    const Vector y = draw_standard_normal({5, 0, 0, 0}, 31);

    // <Ax, y> == <x, A^T y>
    const Vector ax = a.multiply(x);
    const Vector aty = a.multiply_transpose(y);
    CHECK(dot(ax, y) == doctest::Approx(dot(x, aty)).epsilon(1e-13));

    const CsrMatrix b = random_sparse(31, 19, 2, 6);
    const CsrMatrix sum = csr_add(a, -2.0, b);
    Vector expect = a.multiply(x);
    axpy(-2.0, b.multiply(x), expect);
    const Vector got = sum.multiply(x);
    for (int i = 0; i < 31; ++i)
        CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-13));

    Vector d(31);
    for (int i = 0; i < 31; ++i)
        d[i] = 1.0 + i;
    const CsrMatrix scaled = csr_scale_rows(d, a);
    const Vector sx = scaled.multiply(x);
    for (int i = 0; i < 31; ++i)
        CHECK(sx[i] == doctest::Approx(d[i] * ax[i]).epsilon(1e-13));
}

TEST_CASE("symmetric elimination keeps a unit diagonal on constrained rows")
{
    CooBuilder b(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            b.add(i, j, 1.0 + i + j);
    const CsrMatrix a = b.to_csr();
    const CsrMatrix e = eliminate_rows_cols(a, {1, 3});
    CHECK(e.value_at(1, 1) == 1.0);
    CHECK(e.value_at(3, 3) == 1.0);
    CHECK(e.value_at(1, 0) == 0.0);
    CHECK(e.value_at(0, 1) == 0.0);
    CHECK(e.value_at(0, 0) == 1.0);
    CHECK(e.value_at(2, 0) == 3.0);

    const CsrMatrix ec = eliminate_cols(a, {0});
    CHECK(ec.value_at(2, 0) == 0.0);
    CHECK(ec.value_at(2, 1) == 4.0);
}
