#ifndef MLGRF_SOLVERS_HPP
#define MLGRF_SOLVERS_HPP

#include <functional>
#include <memory>

#include "mlgrf/csr.hpp"

namespace mlgrf
{

struct SolveReport
{
    int iterations = 0;
    double abs_residual = 0.0;
    double rel_residual = 0.0;
    bool converged = false;
    /// Preconditioned residual norms per iteration (index 0 = initial);
    /// filled only when IterSolveOptions::record_history is set.
    Vector residual_history;
};

/// Raised when a solve is required to converge but does not.
class SolverError : public std::runtime_error
{
public:
    SolverError(const std::string& what, SolveReport report)
        : std::runtime_error(what), report(std::move(report))
    {
    }

    SolveReport report;
};

struct IterSolveOptions
{
    double rtol = 1e-6;
    double atol = 1e-12;
    int max_iterations = 10000;
    bool record_history = false;
};

/// y = P(x), an approximate inverse; must be symmetric positive definite.
using Preconditioner = std::function<void(Span, std::span<double>)>;

Preconditioner identity_preconditioner();
Preconditioner jacobi_preconditioner(const CsrMatrix& a);
/// Symmetric Gauss-Seidel sweep pair (forward then backward).
Preconditioner symmetric_gauss_seidel_preconditioner(const CsrMatrix& a);

/**
   Preconditioned conjugate gradients for a symmetric positive definite
   matrix. Stops once the true residual satisfies
   ||b - A x|| <= max(atol, rtol * ||b||); the initial guess is honored
   (an exact x0 returns after the initial residual check).
*/
SolveReport cg_solve(const CsrMatrix& a, Span b, std::span<double> x,
                     const Preconditioner& precond, const IterSolveOptions& opts);

/// Generic symmetric operator for the saddle-point solver.
class LinearOperator
{
public:
    virtual ~LinearOperator() = default;
    virtual int size() const = 0;
    virtual void apply(Span x, std::span<double> y) const = 0;
};

/**
   Symmetric indefinite block operator

       [ M   B^T ]
       [ B   -C  ]

   with C either empty (zero block) or a diagonal.
*/
class BlockSaddleOperator : public LinearOperator
{
public:
    BlockSaddleOperator(const CsrMatrix& m, const CsrMatrix& b, Vector c_diag = {});

    int size() const override { return m_->rows() + b_->rows(); }
    void apply(Span x, std::span<double> y) const override;

    int flux_size() const { return m_->rows(); }
    int scalar_size() const { return b_->rows(); }

private:
    const CsrMatrix* m_;
    const CsrMatrix* b_;
    CsrMatrix bt_;
    Vector c_diag_;
};

/**
   Preconditioned MINRES for symmetric (possibly indefinite) systems with a
   symmetric positive definite preconditioner. Stopping uses the true
   residual, like cg_solve.
*/
SolveReport minres_solve(const LinearOperator& a, Span b, std::span<double> x,
                         const Preconditioner& precond, const IterSolveOptions& opts);

/**
   Sparse symmetric factorization (LDL^T) of a positive definite matrix,
   used as the coarse/Schur building block of the block-diagonal saddle
   preconditioner. Solves to round-off.
*/
class SparseCholesky
{
public:
    explicit SparseCholesky(const CsrMatrix& a);
    ~SparseCholesky();
    SparseCholesky(SparseCholesky&&) noexcept;
    SparseCholesky& operator=(SparseCholesky&&) noexcept;

    void solve(Span b, std::span<double> x) const;
    Vector solve(Span b) const;
    int size() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/**
   Block-diagonal preconditioner for the saddle operator: the flux block is
   diag(M)^-1, the scalar block is a direct factorization of the diffusion
   form B diag(M)^-1 B^T (refactored per coefficient realization).
*/
Preconditioner block_diagonal_saddle_preconditioner(const CsrMatrix& m, const CsrMatrix& b,
                                                    std::shared_ptr<SparseCholesky>* schur_out = nullptr);

} // namespace mlgrf

#endif
