#include <doctest.h>

#include "mlgrf/assembly.hpp"
#include "mlgrf/hierarchy.hpp"
#include "mlgrf/rng.hpp"

using namespace mlgrf;

TEST_CASE("hierarchy shape from repeated refinement")
{
    const CartesianMesh coarse = build_cartesian_mesh(2, {0, 0, 0}, {1200, 2200, 0}, {60, 220, 1});
    const MeshHierarchy h = refine_hierarchy(coarse, 4);
    CHECK(h.num_levels() == 4);
    CHECK(h.levels[0].cell_counts()[0] == 480);
    CHECK(h.levels[0].cell_counts()[1] == 1760);
    CHECK(h.levels[3].cell_counts()[0] == 60);
    for (int l = 0; l + 1 < 4; ++l)
        for (int a = 0; a < 2; ++a)
            CHECK(h.levels[l].cell_counts()[a] == 2 * h.levels[l + 1].cell_counts()[a]);
    CHECK_THROWS_AS(refine_hierarchy(coarse, 0), std::invalid_argument);
}

TEST_CASE("cell prolongation is constant injection")
{
    const CartesianMesh coarse = build_cartesian_mesh(2, {0, 0, 0}, {1, 1, 0}, {1, 1, 1});
    const MeshHierarchy h = refine_hierarchy(coarse, 2);
    const CsrMatrix& p = h.cell_prolongation[0];
    CHECK(p.rows() == 4);
    CHECK(p.cols() == 1);
    CHECK(p.nnz() == 4);
    const Vector fine = p.multiply(Vector{3.25});
    for (double v : fine)
        CHECK(v == 3.25);
}

TEST_CASE("cell prolongation transposes volumes and spreads parents")
{
    const CartesianMesh coarse = build_cartesian_mesh(3, {0, 0, 0}, {2, 1, 1}, {2, 3, 2});
    const MeshHierarchy h = refine_hierarchy(coarse, 2);
    const CsrMatrix& p = h.cell_prolongation[0];

    // Children volumes sum to the parent volume: P^T vol_fine = vol_coarse.
    const Vector wf = assemble_p0_mass(h.levels[0]);
    const Vector wc = assemble_p0_mass(h.levels[1]);
    const Vector lifted = p.multiply_transpose(wf);
    for (std::size_t i = 0; i < wc.size(); ++i)
        CHECK(lifted[i] == doctest::Approx(wc[i]).epsilon(1e-14));

    // P c is constant on the children with the parent value.
    const Vector c = draw_standard_normal({3, 0, 0, 0}, wc.size());
    const Vector f = p.multiply(c);
    for (int cell = 0; cell < h.levels[0].num_cells(); ++cell)
    {
        auto cc = h.levels[0].cell_coords(cell);
        for (int a = 0; a < 3; ++a)
            cc[a] /= 2;
        CHECK(f[cell] == c[h.levels[1].cell_index(cc)]);
    }
}

TEST_CASE("flux prolongation conserves coarse-face fluxes")
{
    for (int dim : {2, 3})
    {
        const CartesianMesh coarse = dim == 2
            ? build_cartesian_mesh(2, {0, 0, 0}, {1, 1, 0}, {2, 2, 1})
            : build_cartesian_mesh(3, {0, 0, 0}, {1, 1, 1}, {2, 2, 2});
        const MeshHierarchy h = refine_hierarchy(coarse, 2);
        const CartesianMesh& fine = h.levels[0];
        const CsrMatrix& pu = h.flux_prolongation[0];

        // Columns: each coarse face splits its unit flux over its children.
        const CsrMatrix put = csr_transpose(pu);
        for (int cf = 0; cf < coarse.num_faces(); ++cf)
        {
            int axis;
            std::array<int, 3> cc;
            coarse.face_coords(cf, axis, cc);
            double child_sum = 0.0;
            for (int k = put.row_offsets()[cf]; k < put.row_offsets()[cf + 1]; ++k)
            {
                const int ff = put.col_indices()[k];
                int faxis;
                std::array<int, 3> fc;
                fine.face_coords(ff, faxis, fc);
                CHECK(faxis == axis);
                if (fc[axis] == 2 * cc[axis]) // geometric child of the coarse face
                    child_sum += put.values()[k];
            }
            CHECK(child_sum == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("divergence commutes with interpolation (volume-scaled identity)")
{
    for (int dim : {2, 3})
    {
        const CartesianMesh coarse = dim == 2
            ? build_cartesian_mesh(2, {0, 0, 0}, {1.5, 1, 0}, {3, 2, 1})
            : build_cartesian_mesh(3, {0, 0, 0}, {1, 2, 1}, {2, 2, 3});
        const MeshHierarchy h = refine_hierarchy(coarse, 2);
        const CsrMatrix bf = assemble_divergence(h.levels[0]);
        const CsrMatrix bc = assemble_divergence(h.levels[1]);
        const Vector wf = assemble_p0_mass(h.levels[0]);
        const Vector wc = assemble_p0_mass(h.levels[1]);

        // W_f^-1 B_f P_u = P_c W_c^-1 B_c entrywise.
        Vector wfi(wf.size()), wci(wc.size());
        for (std::size_t i = 0; i < wf.size(); ++i)
            wfi[i] = 1.0 / wf[i];
        for (std::size_t i = 0; i < wc.size(); ++i)
            wci[i] = 1.0 / wc[i];
        const CsrMatrix lhs = csr_scale_rows(wfi, csr_matmul(bf, h.flux_prolongation[0]));
        const CsrMatrix rhs = csr_matmul(h.cell_prolongation[0], csr_scale_rows(wci, bc));
        const CsrMatrix diff = csr_add(lhs, -1.0, rhs);
        double max_abs = 0.0;
        for (double v : diff.values())
            max_abs = std::max(max_abs, std::abs(v));
        CHECK(max_abs < 1e-13);

        // Variational coarsening recovers the assembled coarse operators.
        const CsrMatrix bg = csr_matmul(csr_transpose(h.cell_prolongation[0]),
                                        csr_matmul(bf, h.flux_prolongation[0]));
        const CsrMatrix bdiff = csr_add(bg, -1.0, bc);
        for (double v : bdiff.values())
            CHECK(std::abs(v) < 1e-13);

        const CsrMatrix mf = assemble_rt_mass(h.levels[0]);
        const CsrMatrix mc = assemble_rt_mass(h.levels[1]);
        const CsrMatrix mg = csr_matmul(csr_transpose(h.flux_prolongation[0]),
                                        csr_matmul(mf, h.flux_prolongation[0]));
        const CsrMatrix mdiff = csr_add(mg, -1.0, mc);
        for (double v : mdiff.values())
            CHECK(std::abs(v) < 1e-13);
    }
}
