#include "mlgrf/solvers.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace mlgrf
{

struct SparseCholesky::Impl
{
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    int n = 0;
};

SparseCholesky::SparseCholesky(const CsrMatrix& a) : impl_(std::make_unique<Impl>())
{
    if (a.rows() != a.cols())
        throw std::invalid_argument("SparseCholesky: matrix must be square");
    impl_->n = a.rows();

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(a.nnz());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k)
            trips.emplace_back(i, a.col_indices()[k], a.values()[k]);

    Eigen::SparseMatrix<double> m(a.rows(), a.cols());
    m.setFromTriplets(trips.begin(), trips.end());
    impl_->ldlt.compute(m);
    if (impl_->ldlt.info() != Eigen::Success
        || (impl_->n > 0 && impl_->ldlt.vectorD().minCoeff() <= 0.0))
        throw NumericError("SparseCholesky: factorization failed (matrix not positive definite)");
}

SparseCholesky::~SparseCholesky() = default;
SparseCholesky::SparseCholesky(SparseCholesky&&) noexcept = default;
SparseCholesky& SparseCholesky::operator=(SparseCholesky&&) noexcept = default;

void SparseCholesky::solve(Span b, std::span<double> x) const
{
    Eigen::Map<const Eigen::VectorXd> bm(b.data(), b.size());
    Eigen::VectorXd sol = impl_->ldlt.solve(bm);
    std::copy(sol.data(), sol.data() + sol.size(), x.begin());
}

Vector SparseCholesky::solve(Span b) const
{
    Vector x(b.size());
    solve(b, x);
    return x;
}

int SparseCholesky::size() const { return impl_->n; }

} // namespace mlgrf
