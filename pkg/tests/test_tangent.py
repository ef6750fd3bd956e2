"""Tangent-bundle layer: lifts, Sasaki operators, the skew lift and its Jacobiator."""

import random

from conftest import random_bivector, random_field, random_oneform
from kvgeom.geometry import (
    Chart,
    ScalarField,
    SymBivector,
    VectorField,
    codazzi_tensor,
    coordinate_field,
    left_sym_product,
    lie_bracket,
    pair,
)
from kvgeom.symexpr import Expr
from kvgeom.tangent import (
    build_pi,
    lie_bracket_tangent,
    lift_oneform,
    lift_propositions_check,
    lift_scalar,
    lift_vector,
    make_tangent_chart,
    pi_sharp,
    sasaki_J,
    sasaki_nabla,
    schouten_jacobi,
)

M = Chart("M", ("x", "y"))
TC = make_tangent_chart(M)
X_ = Expr.var("x")
Y_ = Expr.var("y")


def test_vertical_lift_of_coordinate_field():
    L = Chart("L", ("x",))
    tc = make_tangent_chart(L)
    v = lift_vector(tc, coordinate_field(L, 0), "vertical")
    assert v.components == (Expr.const(0), Expr.const(1))


def test_fiber_names_avoid_collisions():
    weird = Chart("W", ("x", "u_x"))
    tc = make_tangent_chart(weird)
    assert len(set(tc.base.coords + tc.fiber)) == 4


def test_bracket_table_on_lifts():
    rng = random.Random(31)
    for _ in range(6):
        X = random_field(rng, M)
        Y = random_field(rng, M)
        Xh = lift_vector(TC, X, "horizontal")
        Yh = lift_vector(TC, Y, "horizontal")
        Xv = lift_vector(TC, X, "vertical")
        Yv = lift_vector(TC, Y, "vertical")
        assert lie_bracket_tangent(TC, Xh, Yh) == lift_vector(TC, lie_bracket(X, Y), "horizontal")
        assert lie_bracket_tangent(TC, Xh, Yv) == lift_vector(TC, left_sym_product(X, Y), "vertical")
        assert all(c.is_zero() for c in lie_bracket_tangent(TC, Xv, Yv).components)


def test_lifted_pairings():
    rng = random.Random(32)
    for _ in range(6):
        alpha = random_oneform(rng, M)
        X = random_field(rng, M)
        av = lift_oneform(TC, alpha, "vertical")
        ah = lift_oneform(TC, alpha, "horizontal")
        Xv = lift_vector(TC, X, "vertical")
        Xh = lift_vector(TC, X, "horizontal")
        assert pair(av, Xv) == pair(alpha, X)
        assert pair(ah, Xh) == pair(alpha, X)
        assert pair(av, Xh).is_zero()
        assert pair(ah, Xv).is_zero()


def test_sasaki_J_involution_and_lift_action():
    rng = random.Random(33)
    for _ in range(6):
        X = random_field(rng, M)
        assert sasaki_J(TC, lift_vector(TC, X, "horizontal")) == lift_vector(TC, X, "vertical")
        assert sasaki_J(TC, lift_vector(TC, X, "vertical")) == VectorField(
            TC.chart, tuple(-c for c in lift_vector(TC, X, "horizontal").components)
        )
        V = random_field(rng, TC.chart)
        assert sasaki_J(TC, sasaki_J(TC, V)) == VectorField(TC.chart, tuple(-c for c in V.components))


def test_sasaki_nabla_defining_cases_torsion_and_curvature():
    rng = random.Random(34)
    for _ in range(5):
        X = random_field(rng, M)
        Y = random_field(rng, M)
        Xh = lift_vector(TC, X, "horizontal")
        Yh = lift_vector(TC, Y, "horizontal")
        Xv = lift_vector(TC, X, "vertical")
        Yv = lift_vector(TC, Y, "vertical")
        assert sasaki_nabla(TC, Xh, Yh) == lift_vector(TC, left_sym_product(X, Y), "horizontal")
        assert sasaki_nabla(TC, Xh, Yv) == lift_vector(TC, left_sym_product(X, Y), "vertical")
        assert all(c.is_zero() for c in sasaki_nabla(TC, Xv, Yh).components)
        assert all(c.is_zero() for c in sasaki_nabla(TC, Xv, Yv).components)
        # torsion and curvature on lifted generators
        for W, V in ((Xh, Yh), (Xh, Yv), (Xv, Yh), (Xv, Yv)):
            torsion = tuple(
                a - b - c
                for a, b, c in zip(
                    sasaki_nabla(TC, W, V).components,
                    sasaki_nabla(TC, V, W).components,
                    lie_bracket_tangent(TC, W, V).components,
                )
            )
            assert all(e.is_zero() for e in torsion)
            r1 = sasaki_nabla(TC, W, sasaki_nabla(TC, V, Xh))
            r2 = sasaki_nabla(TC, V, sasaki_nabla(TC, W, Xh))
            r3 = sasaki_nabla(TC, lie_bracket_tangent(TC, W, V), Xh)
            curv = tuple(a - b - c for a, b, c in zip(r1.components, r2.components, r3.components))
            assert all(e.is_zero() for e in curv)


def test_sasaki_J_is_parallel():
    rng = random.Random(35)
    for _ in range(5):
        W = random_field(rng, TC.chart)
        V = random_field(rng, TC.chart)
        lhs = sasaki_nabla(TC, W, sasaki_J(TC, V))
        rhs = sasaki_J(TC, sasaki_nabla(TC, W, V))
        assert lhs == rhs


def test_build_pi_block_shape_and_sharp_identities():
    rng = random.Random(36)
    for _ in range(6):
        h = random_bivector(rng, M, 2)
        pi = build_pi(h)
        n = M.dim
        for i in range(n):
            for j in range(n):
                assert pi.entries[i][j].is_zero()
                assert pi.entries[n + i][n + j].is_zero()
                assert pi.entries[i][n + j] == h.entries[i][j]
        for alpha in (random_oneform(rng, M), random_oneform(rng, M)):
            sharp_alpha = tuple(
                sum((alpha.components[i] * h.entries[i][j] for i in range(n)), Expr.const(0))
                for j in range(n)
            )
            vert = pi_sharp(pi, lift_oneform(TC, alpha, "horizontal"))
            assert vert.components == tuple(Expr.const(0) for _ in range(n)) + sharp_alpha
            horiz = pi_sharp(pi, lift_oneform(TC, alpha, "vertical"))
            assert horiz.components == tuple(-c for c in sharp_alpha) + tuple(
                Expr.const(0) for _ in range(n)
            )


def test_build_pi_scalar_example():
    L = Chart("L", ("x",))
    h = SymBivector(L, ((Expr.var("x"),),))
    pi = build_pi(h)
    assert pi.entries[0][1] == Expr.var("x")
    assert build_pi(SymBivector.zero(L)).entries[0][1].is_zero()


def test_schouten_jacobi_examples():
    h = SymBivector.diagonal(M, [X_, Y_])
    assert schouten_jacobi(build_pi(h)).is_zero()
    h_bad = SymBivector(M, ((Expr.const(0), X_), (X_, Expr.const(0))))
    assert not schouten_jacobi(build_pi(h_bad)).is_zero()
    h_const = SymBivector(M, ((Expr.const(1), Expr.const(2)), (Expr.const(2), Expr.const(-1))))
    assert schouten_jacobi(build_pi(h_const)).is_zero()


def test_poisson_equivalence_on_random_bivectors():
    rng = random.Random(37)
    for chart in (M, Chart("P", ("x", "y", "z"))):
        for _ in range(10):
            h = random_bivector(rng, chart, 2)
            assert codazzi_tensor(h).is_zero() == schouten_jacobi(build_pi(h)).is_zero()


def test_lift_propositions_positive_case():
    h = SymBivector(M, ((X_, Expr.const(0)), (Expr.const(0), Expr.const(0))))
    rep = lift_propositions_check(h, ScalarField(M, Y_ ** 2))
    assert rep.hamiltonian_lift_ok
    assert rep.lie_pi_vanishes and rep.f_in_E and rep.agree
    assert all(e.is_zero() for row in rep.mixed_residuals for e in row)


def test_lift_propositions_negative_case():
    h = SymBivector(M, ((X_ ** 2, Expr.const(0)), (Expr.const(0), Expr.const(0))))
    rep = lift_propositions_check(h, ScalarField(M, X_ ** 2))
    assert rep.hamiltonian_lift_ok
    assert not rep.lie_pi_vanishes and not rep.f_in_E and rep.agree
    assert all(e.is_zero() for row in rep.mixed_residuals for e in row)


def test_lift_propositions_constant_function():
    rng = random.Random(38)
    h = random_bivector(rng, M, 2)
    rep = lift_propositions_check(h, ScalarField(M, Expr.const(4)))
    assert rep.hamiltonian_lift_ok and rep.lie_pi_vanishes and rep.f_in_E


def test_lift_scalar_reads_on_tangent_chart():
    f = ScalarField(M, X_ * Y_)
    lifted = lift_scalar(TC, f)
    assert lifted.chart == TC.chart
    assert lifted.value == X_ * Y_
