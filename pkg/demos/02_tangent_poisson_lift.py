"""Lift a symmetric bivector to a skew one on the tangent bundle and test it.

The lifted bivector pairs base coordinate forms with fiber ones; its
Jacobiator vanishes exactly when the base structure satisfies the Codazzi
identity, which the script checks on a positive and a negative instance.
"""

from kvgeom import (
    Chart,
    Expr,
    ScalarField,
    SymBivector,
    build_pi,
    codazzi_tensor,
    lift_propositions_check,
    make_tangent_chart,
    sasaki_J,
    schouten_jacobi,
)
from kvgeom.geometry import VectorField

M = Chart("M", ("x", "y"))
x, y = Expr.var("x"), Expr.var("y")

h = SymBivector.diagonal(M, [x, y])
pi = build_pi(h)
print("tangent chart coordinates:", pi.chart.coords)
print("mixed block entry Pi(dx, u_x):", pi.entries[0][2])
print("Jacobiator vanishes:", schouten_jacobi(pi).is_zero())

h_bad = SymBivector(M, ((Expr.const(0), x), (x, Expr.const(0))))
print("non-Codazzi instance lifts to non-Poisson:", not schouten_jacobi(build_pi(h_bad)).is_zero())
print("matching base verdict:", not codazzi_tensor(h_bad).is_zero())

# The almost complex structure swaps horizontal and vertical directions.
tc = make_tangent_chart(M)
V = VectorField(tc.chart, tuple(Expr.var(c) for c in tc.chart.coords))
JJV = sasaki_J(tc, sasaki_J(tc, V))
print("J o J = -identity:", JJV == VectorField(tc.chart, tuple(-c for c in V.components)))

# Hamiltonian lifts: vertical ones are Hamiltonian, horizontal ones preserve
# the lifted bivector exactly for leafwise-affine functions.
h_line = SymBivector(M, ((x, Expr.const(0)), (Expr.const(0), Expr.const(0))))
for expr in (y ** 2, x ** 2):
    rep = lift_propositions_check(h_line, ScalarField(M, expr))
    print(
        f"f = {expr}: vertical lift Hamiltonian: {rep.hamiltonian_lift_ok}, "
        f"horizontal lift preserves: {rep.lie_pi_vanishes}, leafwise-affine: {rep.f_in_E}"
    )
