#include "mlgrf/kl.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace mlgrf
{

double DenseMatrix::frobenius_norm() const
{
    double s = 0.0;
    for (double v : data)
        s += v * v;
    return std::sqrt(s);
}

double relative_frobenius_error(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("relative_frobenius_error: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
    {
        const double d = a.data[i] - b.data[i];
        s += d * d;
    }
    return std::sqrt(s) / b.frobenius_norm();
}

namespace
{

DenseMatrix covariance_at_centroids(const CartesianMesh& mesh, const CovarianceModel& model,
                                    int max_cells, bool volume_weighted)
{
    const int n = mesh.num_cells();
    if (n > max_cells)
        throw std::invalid_argument("covariance matrix: mesh has " + std::to_string(n)
                                    + " cells, dense guard is " + std::to_string(max_cells));
    const double vol = mesh.cell_volume();
    const double w = volume_weighted ? vol * vol : 1.0;

    DenseMatrix c(n, n);
    std::vector<std::array<double, 3>> x(n);
    for (int i = 0; i < n; ++i)
        x[i] = mesh.cell_centroid(i);
    for (int i = 0; i < n; ++i)
    {
        c.at(i, i) = w * model.params().sigma2;
        for (int j = i + 1; j < n; ++j)
        {
            const double v = w * model(x[i], x[j]);
            c.at(i, j) = v;
            c.at(j, i) = v;
        }
    }
    return c;
}

} // namespace

DenseMatrix assemble_covariance_matrix(const CartesianMesh& mesh, const CovarianceModel& model,
                                       int max_cells)
{
    return covariance_at_centroids(mesh, model, max_cells, true);
}

DenseMatrix centroid_covariance_matrix(const CartesianMesh& mesh, const CovarianceModel& model,
                                       int max_cells)
{
    return covariance_at_centroids(mesh, model, max_cells, false);
}

KlBasis kl_decompose(const DenseMatrix& c, Span w, int truncation, double negative_tol)
{
    const int n = c.rows;
    if (c.cols != n || static_cast<int>(w.size()) != n)
        throw std::invalid_argument("kl_decompose: shape mismatch");
    if (truncation < 1 || truncation > n)
        throw std::invalid_argument("kl_decompose: truncation out of range");

    // Whiten the generalized problem with the diagonal mass matrix:
    // D^-1/2 C D^-1/2 y = lambda y, v = D^-1/2 y.
    Eigen::VectorXd dinv(n);
    for (int i = 0; i < n; ++i)
    {
        if (!(w[i] > 0.0))
            throw std::invalid_argument("kl_decompose: mass diagonal must be positive");
        dinv[i] = 1.0 / std::sqrt(w[i]);
    }
    Eigen::MatrixXd s(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            s(i, j) = dinv[i] * c.at(i, j) * dinv[j];

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
    if (eig.info() != Eigen::Success)
        throw NumericError("kl_decompose: eigensolver failed");

    const double lam_max = std::max(eig.eigenvalues().maxCoeff(), 0.0);
    KlBasis basis;
    basis.truncation = truncation;
    basis.eigenvalues.resize(truncation);
    basis.vectors = DenseMatrix(n, truncation);
    for (int m = 0; m < truncation; ++m)
    {
        const int src = n - 1 - m; // ascending order inside the solver
        double lam = eig.eigenvalues()[src];
        if (lam < -negative_tol * std::max(lam_max, 1.0))
            throw NumericError("kl_decompose: covariance matrix is indefinite (lambda = "
                               + std::to_string(lam) + ")");
        basis.eigenvalues[m] = std::max(lam, 0.0);
        for (int i = 0; i < n; ++i)
            basis.vectors.at(i, m) = dinv[i] * eig.eigenvectors()(i, src);
    }
    return basis;
}

Vector kl_sample(const KlBasis& basis, Span xi)
{
    if (static_cast<int>(xi.size()) < basis.truncation)
        throw std::invalid_argument("kl_sample: need one variate per retained mode");
    Vector theta(basis.vectors.rows, 0.0);
    for (int m = 0; m < basis.truncation; ++m)
    {
        const double c = xi[m] * std::sqrt(basis.eigenvalues[m]);
        for (int i = 0; i < basis.vectors.rows; ++i)
            theta[i] += c * basis.vectors.at(i, m);
    }
    return theta;
}

DenseMatrix kl_reconstruct_covariance(const KlBasis& basis)
{
    const int n = basis.vectors.rows;
    DenseMatrix out(n, n);
    for (int m = 0; m < basis.truncation; ++m)
    {
        const double lam = basis.eigenvalues[m];
        for (int i = 0; i < n; ++i)
        {
            const double vi = lam * basis.vectors.at(i, m);
            for (int j = 0; j < n; ++j)
                out.at(i, j) += vi * basis.vectors.at(j, m);
        }
    }
    return out;
}

DenseMatrix empirical_covariance(const std::vector<Vector>& samples)
{
    if (samples.size() < 2)
        throw std::invalid_argument("empirical_covariance: need at least 2 samples");
    const int n = static_cast<int>(samples.front().size());
    const double count = static_cast<double>(samples.size());

    Vector mean(n, 0.0);
    for (const Vector& s : samples)
    {
        if (static_cast<int>(s.size()) != n)
            throw std::invalid_argument("empirical_covariance: inconsistent lengths");
        for (int i = 0; i < n; ++i)
            mean[i] += s[i];
    }
    for (double& v : mean)
        v /= count;

    DenseMatrix c(n, n);
    Vector d(n);
    for (const Vector& s : samples)
    {
        for (int i = 0; i < n; ++i)
            d[i] = s[i] - mean[i];
        for (int i = 0; i < n; ++i)
        {
            const double di = d[i];
            double* row = &c.data[static_cast<std::size_t>(i) * n];
            for (int j = i; j < n; ++j)
                row[j] += di * d[j];
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
        {
            const double v = c.at(i, j) / (count - 1.0);
            c.at(i, j) = v;
            c.at(j, i) = v;
        }
    return c;
}

} // namespace mlgrf
