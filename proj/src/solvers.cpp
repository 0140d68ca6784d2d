#include "mlgrf/solvers.hpp"

#include <cmath>

namespace mlgrf
{

Preconditioner identity_preconditioner()
{
    return [](Span x, std::span<double> y)
    { std::copy(x.begin(), x.end(), y.begin()); };
}

Preconditioner jacobi_preconditioner(const CsrMatrix& a)
{
    Vector inv = a.diagonal();
    for (double& d : inv)
    {
        if (!(d > 0.0))
            throw std::invalid_argument("jacobi preconditioner: nonpositive diagonal");
        d = 1.0 / d;
    }
    return [inv = std::move(inv)](Span x, std::span<double> y)
    {
        for (std::size_t i = 0; i < inv.size(); ++i)
            y[i] = inv[i] * x[i];
    };
}

Preconditioner symmetric_gauss_seidel_preconditioner(const CsrMatrix& a)
{
    Vector diag = a.diagonal();
    for (double d : diag)
        if (!(d > 0.0))
            throw std::invalid_argument("symmetric Gauss-Seidel: nonpositive diagonal");

    // M^-1 r with M = (D+L) D^-1 (D+U): forward solve, diagonal scale,
    // backward solve, using the CSR structure in place.
    return [&a, diag = std::move(diag)](Span r, std::span<double> y)
    {
        const auto& off = a.row_offsets();
        const auto& idx = a.col_indices();
        const auto& val = a.values();
        const int n = a.rows();

        for (int i = 0; i < n; ++i)
        {
            double s = r[i];
            for (int k = off[i]; k < off[i + 1]; ++k)
            {
                const int j = idx[k];
                if (j < i)
                    s -= val[k] * y[j];
            }
            y[i] = s / diag[i];
        }
        for (int i = n - 1; i >= 0; --i)
        {
            double s = diag[i] * y[i];
            for (int k = off[i]; k < off[i + 1]; ++k)
            {
                const int j = idx[k];
                if (j > i)
                    s -= val[k] * y[j];
            }
            y[i] = s / diag[i];
        }
    };
}

SolveReport cg_solve(const CsrMatrix& a, Span b, std::span<double> x,
                     const Preconditioner& precond, const IterSolveOptions& opts)
{
    const int n = a.rows();
    Vector r(n), z(n), p(n), q(n);

    a.apply(x, r);
    for (int i = 0; i < n; ++i)
        r[i] = b[i] - r[i];

    const double bnorm = norm2(b);
    const double threshold = std::max(opts.atol, opts.rtol * bnorm);

    SolveReport rep;
    auto finalize = [&](int iters)
    {
        rep.iterations = iters;
        rep.abs_residual = norm2(r);
        rep.rel_residual = bnorm > 0.0 ? rep.abs_residual / bnorm : rep.abs_residual;
        rep.converged = rep.abs_residual <= threshold;
    };

    precond(r, z);
    double rz = dot(r, z);
    if (opts.record_history)
        rep.residual_history.push_back(std::sqrt(std::max(rz, 0.0)));

    if (norm2(r) <= threshold)
    {
        finalize(0);
        return rep;
    }

    p = z;
    for (int it = 1; it <= opts.max_iterations; ++it)
    {
        a.apply(p, q);
        const double pq = dot(p, q);
        if (!(pq > 0.0))
        {
            finalize(it - 1);
            throw SolverError("cg_solve: operator not positive definite (p'Ap <= 0)", rep);
        }
        const double alpha = rz / pq;
        axpy(alpha, p, x);
        axpy(-alpha, q, r);

        precond(r, z);
        const double rz_next = dot(r, z);
        if (opts.record_history)
            rep.residual_history.push_back(std::sqrt(std::max(rz_next, 0.0)));

        if (norm2(r) <= threshold)
        {
            finalize(it);
            return rep;
        }
        const double beta = rz_next / rz;
        rz = rz_next;
        for (int i = 0; i < n; ++i)
            p[i] = z[i] + beta * p[i];
    }
    finalize(opts.max_iterations);
    return rep;
}

BlockSaddleOperator::BlockSaddleOperator(const CsrMatrix& m, const CsrMatrix& b, Vector c_diag)
    : m_(&m), b_(&b), bt_(csr_transpose(b)), c_diag_(std::move(c_diag))
{
    if (m.rows() != m.cols() || b.cols() != m.rows())
        throw std::invalid_argument("BlockSaddleOperator: shape mismatch");
    if (!c_diag_.empty() && static_cast<int>(c_diag_.size()) != b.rows())
        throw std::invalid_argument("BlockSaddleOperator: C diagonal size mismatch");
}

void BlockSaddleOperator::apply(Span x, std::span<double> y) const
{
    const int nf = flux_size();
    const int nc = scalar_size();
    Span u = x.subspan(0, nf);
    Span p = x.subspan(nf, nc);

    m_->apply(u, y.subspan(0, nf));
    bt_.apply_add(1.0, p, y.subspan(0, nf));

    b_->apply(u, y.subspan(nf, nc));
    if (!c_diag_.empty())
        for (int i = 0; i < nc; ++i)
            y[nf + i] -= c_diag_[i] * p[i];
}

SolveReport minres_solve(const LinearOperator& a, Span b, std::span<double> x,
                         const Preconditioner& precond, const IterSolveOptions& opts)
{
    const int n = a.size();
    const double bnorm = norm2(b);
    const double threshold = std::max(opts.atol, opts.rtol * bnorm);

    Vector r1(n), r2(n), y(n), v(n), w(n, 0.0), w1(n, 0.0), w2(n, 0.0), tmp(n);

    a.apply(x, r1);
    for (int i = 0; i < n; ++i)
        r1[i] = b[i] - r1[i];
    r2 = r1;
    precond(r1, y);

    double beta1 = dot(r1, y);
    SolveReport rep;
    if (beta1 < 0.0)
        throw SolverError("minres_solve: preconditioner not positive definite", rep);
    beta1 = std::sqrt(beta1);

    auto true_residual = [&]() -> double
    {
        a.apply(x, tmp);
        double s = 0.0;
        for (int i = 0; i < n; ++i)
        {
            const double d = b[i] - tmp[i];
            s += d * d;
        }
        return std::sqrt(s);
    };

    auto finalize = [&](int iters)
    {
        rep.iterations = iters;
        rep.abs_residual = true_residual();
        rep.rel_residual = bnorm > 0.0 ? rep.abs_residual / bnorm : rep.abs_residual;
        rep.converged = rep.abs_residual <= threshold;
    };

    if (opts.record_history)
        rep.residual_history.push_back(beta1);

    if (norm2(r1) <= threshold)
    {
        finalize(0);
        return rep;
    }

    double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0;
    double phibar = beta1, cs = -1.0, sn = 0.0, oldeps = 0.0;

    for (int it = 1; it <= opts.max_iterations; ++it)
    {
        const double s = 1.0 / beta;
        for (int i = 0; i < n; ++i)
            v[i] = s * y[i];
        a.apply(v, y);
        if (it >= 2)
            axpy(-beta / oldb, r1, y);
        const double alfa = dot(v, y);
        axpy(-alfa / beta, r2, y);
        r1 = r2;
        r2 = y;
        precond(r2, y);
        oldb = beta;
        beta = dot(r2, y);
        if (beta < 0.0)
            throw SolverError("minres_solve: preconditioner lost definiteness", rep);
        beta = std::sqrt(beta);

        oldeps = epsln;
        const double delta = cs * dbar + sn * alfa;
        double gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;

        double gamma = std::sqrt(gbar * gbar + beta * beta);
        gamma = std::max(gamma, 1e-300);
        cs = gbar / gamma;
        sn = beta / gamma;
        const double phi = cs * phibar;
        phibar = sn * phibar;

        w1 = w2;
        w2 = w;
        for (int i = 0; i < n; ++i)
            w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
        axpy(phi, w, x);

        if (opts.record_history)
            rep.residual_history.push_back(phibar);

        if (phibar <= threshold || it == opts.max_iterations)
        {
            // Confirm with the true residual; keep iterating if the
            // preconditioned estimate was optimistic.
            const double res = true_residual();
            if (res <= threshold || it == opts.max_iterations)
            {
                finalize(it);
                return rep;
            }
        }
    }
    finalize(opts.max_iterations);
    return rep;
}

Preconditioner block_diagonal_saddle_preconditioner(const CsrMatrix& m, const CsrMatrix& b,
                                                    std::shared_ptr<SparseCholesky>* schur_out)
{
    Vector hinv = m.diagonal();
    for (double& d : hinv)
    {
        if (!(d > 0.0))
            throw std::invalid_argument("saddle preconditioner: nonpositive mass diagonal");
        d = 1.0 / d;
    }

    // B diag(M)^-1 B^T, explicitly sparse, factored directly.
    CsrMatrix bt = csr_transpose(b);
    CsrMatrix schur = csr_matmul(b, csr_scale_rows(hinv, bt));
    auto chol = std::make_shared<SparseCholesky>(schur);
    if (schur_out)
        *schur_out = chol;

    const int nf = m.rows();
    const int nc = b.rows();
    return [hinv = std::move(hinv), chol, nf, nc](Span x, std::span<double> y)
    {
        for (int i = 0; i < nf; ++i)
            y[i] = hinv[i] * x[i];
        chol->solve(x.subspan(nf, nc), y.subspan(nf, nc));
    };
}

} // namespace mlgrf
