"""Walk through the chart-level operators on two small bivector fields.

Everything below is exact: coefficients are rationals and every identity
verdict is a polynomial zero-test, so "0" really means zero.
"""

from kvgeom import (
    Chart,
    Expr,
    OneForm,
    ScalarField,
    SymBivector,
    bracket_h,
    codazzi_tensor,
    contravariant_D,
    hamiltonian,
    in_E,
    kv_bracket_form,
    lie_derivative_h,
    rank_at,
    sharp,
)
from kvgeom.geometry import coordinate_form

M = Chart("M", ("x", "y"))
x, y = Expr.var("x"), Expr.var("y")

# A linear diagonal structure; it satisfies the contravariant Codazzi identity.
h = SymBivector.diagonal(M, [x, y])
print("Codazzi defect vanishes:", codazzi_tensor(h).is_zero())
print("five-term self-bracket vanishes:", kv_bracket_form(h).is_zero())

# An off-diagonal linear structure that fails the identity.
h_bad = SymBivector(M, ((Expr.const(0), x), (x, Expr.const(0))))
defect = codazzi_tensor(h_bad)
print("off-diagonal defect entry (1,2,2):", defect.entry(0, 1, 1))

# The sharp map sends coordinate forms to the rows of the matrix.
dx = coordinate_form(M, 0)
print("sharp of dx:", [str(c) for c in sharp(h, dx).components])

# Brackets and the contravariant connection, fully expanded in coordinates.
alpha = OneForm(M, (y, Expr.const(0)))
beta = OneForm(M, (Expr.const(1), x))
print("[alpha, beta]_h:", [str(c) for c in bracket_h(h, alpha, beta).components])
print("D_alpha beta:", [str(c) for c in contravariant_D(h, alpha, beta).components])

# Hamiltonian fields and the Lie derivative of h along them.
f = ScalarField(M, x)
print("X_f:", [str(c) for c in hamiltonian(h, f).components])
print("(L_{X_f} h)(dx,dx):", lie_derivative_h(h, f).entries[0][0])

# Functions affine along the leaves, and the rank of the sharp map.
h_line = SymBivector(M, ((x, Expr.const(0)), (Expr.const(0), Expr.const(0))))
print("y^2 leafwise-affine for the line structure:", in_E(h_line, ScalarField(M, y ** 2)))
print("rank at (1,1):", rank_at(h, (1, 1)), " rank at (0,0):", rank_at(h, (0, 0)))
