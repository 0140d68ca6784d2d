#ifndef MLGRF_KL_HPP
#define MLGRF_KL_HPP

#include "mlgrf/matern.hpp"
#include "mlgrf/mesh.hpp"

namespace mlgrf
{

/// Small dense row-major matrix, used by the desk-scale covariance oracle.
struct DenseMatrix
{
    int rows = 0;
    int cols = 0;
    Vector data;

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

    double frobenius_norm() const;
};

/// ||a - b||_F / ||b||_F.
double relative_frobenius_error(const DenseMatrix& a, const DenseMatrix& b);

/**
   Galerkin covariance operator of the cellwise-constant space with
   midpoint quadrature: C[i][j] = cov(centroid_i, centroid_j) vol_i vol_j.
   Refuses meshes above `max_cells` (dense storage guard).
*/
DenseMatrix assemble_covariance_matrix(const CartesianMesh& mesh, const CovarianceModel& model,
                                       int max_cells = 10000);

/// Pointwise covariance at cell centroids (no volume weights), the
/// analytic target for empirical comparisons.
DenseMatrix centroid_covariance_matrix(const CartesianMesh& mesh, const CovarianceModel& model,
                                       int max_cells = 10000);

/**
   Leading eigenpairs of C v = lambda W v with W-orthonormal eigenvectors,
   eigenvalues nonincreasing. Eigenvalues in [-tol, 0) are clamped to zero;
   anything below -tol * lambda_max fails.
*/
struct KlBasis
{
    Vector eigenvalues;   // nonincreasing
    DenseMatrix vectors;  // cells x truncation, column i pairs with eigenvalues[i]
    int truncation = 0;
};

KlBasis kl_decompose(const DenseMatrix& c, Span w, int truncation,
                     double negative_tol = 1e-10);

/// Truncated expansion sum_i xi_i sqrt(lambda_i) v_i.
Vector kl_sample(const KlBasis& basis, Span xi);

/// Pointwise covariance reproduced by the basis, sum_i lambda_i v_i v_i^T.
DenseMatrix kl_reconstruct_covariance(const KlBasis& basis);

/// Unbiased sample covariance of a set of equal-length vectors.
DenseMatrix empirical_covariance(const std::vector<Vector>& samples);

} // namespace mlgrf

#endif
