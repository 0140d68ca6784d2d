#include <doctest.h>

#include "mlgrf/assembly.hpp"
#include "mlgrf/rng.hpp"

using namespace mlgrf;

TEST_CASE("cell mass diagonal")
{
    const CartesianMesh one = build_cartesian_mesh(2, {0, 0, 0}, {1, 1, 0}, {1, 1, 1});
    CHECK(assemble_p0_mass(one) == Vector{1.0});

    const CartesianMesh spe = build_cartesian_mesh(2, {0, 0, 0}, {1200, 2200, 0}, {60, 220, 1});
    const Vector w = assemble_p0_mass(spe);
    CHECK(w[0] == doctest::Approx(200.0));

    const CartesianMesh grid = build_cartesian_mesh(2, {0, 0, 0}, {1, 1, 0}, {2, 2, 1});
    const Vector w2 = assemble_p0_mass(grid);
    double trace = 0.0;
    for (double v : w2)
    {
        CHECK(v == doctest::Approx(0.25));
        trace += v;
    }
    CHECK(trace == doctest::Approx(1.0)); // total volume
}

TEST_CASE("divergence row of a single cell")
{
    const CartesianMesh one = build_cartesian_mesh(2, {0, 0, 0}, {1, 1, 0}, {1, 1, 1});
    const CsrMatrix b = assemble_divergence(one);
    CHECK(b.rows() == 1);
    CHECK(b.cols() == 4);
    // Faces: x-left, x-right, y-bottom, y-top.
    CHECK(b.value_at(0, 0) == -1.0);
    CHECK(b.value_at(0, 1) == +1.0);
    CHECK(b.value_at(0, 2) == -1.0);
    CHECK(b.value_at(0, 3) == +1.0);
}

TEST_CASE("uniform flux is divergence free and interior signs telescope")
{
    const CartesianMesh m = build_cartesian_mesh(2, {0, 0, 0}, {1, 1, 0}, {4, 3, 1});
    const CsrMatrix b = assemble_divergence(m);
    CHECK(b.nnz() == m.num_cells() * 4);

    Vector u(m.num_faces(), 0.0);
    for (int f = 0; f < m.num_faces(0); ++f)
        u[f] = 2.5; // equal x-face fluxes, zero y
    const Vector div = b.multiply(u);
    for (double v : div)
        CHECK(v == 0.0);

    // The total divergence of any flux equals its net boundary outflow.
    const Vector r = draw_standard_normal({21, 0, 0, 0}, m.num_faces());
    const Vector dr = b.multiply(r);
    double interior_total = 0.0;
    for (double v : dr)
        interior_total += v;
    double boundary = 0.0;
    for (int axis = 0; axis < 2; ++axis)
    {
        for (int f : m.boundary_faces(axis, 1))
            boundary += r[f];
        for (int f : m.boundary_faces(axis, 0))
            boundary -= r[f];
    }
    CHECK(interior_total == doctest::Approx(boundary).epsilon(1e-13));
}

TEST_CASE("face mass local blocks and scaling")
{
    const CartesianMesh unit = build_cartesian_mesh(2, {0, 0, 0}, {1, 1, 0}, {1, 1, 1});
    const CsrMatrix m = assemble_rt_mass(unit);
    CHECK(m.value_at(0, 0) == doctest::Approx(1.0 / 3.0));
    CHECK(m.value_at(1, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(m.value_at(0, 1) == doctest::Approx(1.0 / 6.0));
    CHECK(m.value_at(1, 0) == doctest::Approx(1.0 / 6.0));

    // Anisotropic cell: x-pair diagonal h_x / (3 h_y).
    const CartesianMesh cell = build_cartesian_mesh(2, {0, 0, 0}, {2.0, 0.5, 0}, {1, 1, 1});
    const CsrMatrix ma = assemble_rt_mass(cell);
    CHECK(ma.value_at(0, 0) == doctest::Approx(2.0 / (3.0 * 0.5)));
    CHECK(ma.value_at(2, 2) == doctest::Approx(0.5 / (3.0 * 2.0)));

    // Coefficient linearity.
    const CartesianMesh grid = build_cartesian_mesh(2, {0, 0, 0}, {1, 1, 0}, {3, 3, 1});
    const CsrMatrix m1 = assemble_rt_mass(grid);
    const CsrMatrix mc = assemble_rt_mass(grid, Vector(9, 4.0));
    for (int i = 0; i < m1.rows(); ++i)
        for (int k = m1.row_offsets()[i]; k < m1.row_offsets()[i + 1]; ++k)
            CHECK(mc.value_at(i, m1.col_indices()[k])
                  == doctest::Approx(4.0 * m1.values()[k]).epsilon(1e-14));

    CHECK_THROWS_AS(assemble_rt_mass(grid, Vector(9, -1.0)), std::invalid_argument);

    // Structural symmetry.
    const CsrMatrix mt = csr_transpose(m1);
    const CsrMatrix diff = csr_add(m1, -1.0, mt);
    for (double v : diff.values())
        CHECK(v == 0.0);
}

TEST_CASE("reduced operator is positive definite and tends to the mass matrix")
{
    const CartesianMesh m = build_cartesian_mesh(2, {0, 0, 0}, {1, 1, 0}, {4, 4, 1});
    const AssembledLevel lvl = assemble_level(m, 3.0);

    // x^T A x > 0 for random nonzero x.
    for (std::uint64_t s = 0; s < 5; ++s)
    {
        const Vector x = draw_standard_normal({100 + s, 0, 0, 0}, lvl.num_faces());
        const Vector ax = lvl.A.multiply(x);
        CHECK(dot(x, ax) > 0.0);
    }

    // Large kappa: A -> M entrywise.
    const AssembledLevel stiff = assemble_level(m, 1e9);
    const CsrMatrix diff = csr_add(stiff.A, -1.0, stiff.M);
    for (double v : diff.values())
        CHECK(std::abs(v) < 1e-12);

    CHECK_THROWS_AS(assemble_level(m, 0.0), std::invalid_argument);
}

TEST_CASE("one cell with every face constrained reduces to the identity")
{
    const CartesianMesh one = build_cartesian_mesh(2, {0, 0, 0}, {1, 1, 0}, {1, 1, 1});
    const AssembledLevel lvl = assemble_level(one, 2.0);
    CHECK(lvl.A.nnz() == 4);
    for (int i = 0; i < 4; ++i)
        CHECK(lvl.A.value_at(i, i) == 1.0);
}

TEST_CASE("discrete gradient satisfies the duality identity")
{
    const CartesianMesh m = build_cartesian_mesh(2, {0, 0, 0}, {1, 1, 0}, {5, 4, 1});
    const AssembledLevel lvl = assemble_level(m, 1.0);
    IterSolveOptions opts;
    opts.rtol = 1e-12;
    opts.atol = 1e-14;

    // theta = 0 -> 0.
    const Vector zero = discrete_gradient_apply(lvl, Vector(m.num_cells(), 0.0), opts);
    CHECK(norm_inf(zero) == 0.0);

    // (grad theta, v)_M = -(div v, theta) on the constrained-trace space.
    const Vector theta = draw_standard_normal({31, 0, 0, 0}, m.num_cells());
    const Vector g = discrete_gradient_apply(lvl, theta, opts);
    Vector v = draw_standard_normal({32, 0, 0, 0}, m.num_faces());
    for (int f : lvl.essential_faces)
        v[f] = 0.0;
    const double lhs = dot(g, lvl.M.multiply(v));
    const double rhs = -dot(lvl.B.multiply(v), theta);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));

    // Constant theta is discretely gradient-free.
    const Vector gc = discrete_gradient_apply(lvl, Vector(m.num_cells(), 7.0), opts);
    CHECK(norm_inf(gc) < 1e-10);
}
