"""Koszul-Vinberg operators on a single affine chart.

A chart carries the canonical flat connection of its coordinates, so every
covariant derivative below reduces to coordinate differentiation.  All
operators return fully normalized expressions; a structural condition holds
iff the corresponding residuals are exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import ChartMismatch, PreconditionViolated, UnknownVariable
from .symexpr import ONE, ZERO, Expr, Rational


def _as_expr(x) -> Expr:
    return x if isinstance(x, Expr) else Expr.const(x)


@dataclass(frozen=True)
class Chart:
    """Affine coordinate patch; dim 0 is allowed for derived point charts."""

    name: str
    coords: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if len(set(self.coords)) != len(self.coords):
            raise ValueError(f"chart {self.name}: duplicate coordinate names")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def index(self, v: str) -> int:
        try:
            return self.coords.index(v)
        except ValueError:
            raise UnknownVariable(f"{v!r} is not a coordinate of chart {self.name}") from None


def _check_scope(chart: Chart, e: Expr) -> Expr:
    extra = e.variables() - set(chart.coords)
    if extra:
        raise UnknownVariable(f"variables {sorted(extra)} not in chart {chart.name}")
    return e


def _same_chart(*objs) -> Chart:
    charts = {o.chart for o in objs}
    if len(charts) != 1:
        names = sorted(c.name for c in charts)
        raise ChartMismatch(f"operands live on different charts: {names}")
    return objs[0].chart


@dataclass(frozen=True)
class SymBivector:
    """Symmetric contravariant 2-tensor; entries[i][j] pairs the i-th and j-th coordinate forms."""

    chart: Chart
    entries: tuple[tuple[Expr, ...], ...]

    def __post_init__(self):
        n = self.chart.dim
        ent = tuple(tuple(_check_scope(self.chart, _as_expr(e)) for e in row) for row in self.entries)
        object.__setattr__(self, "entries", ent)
        if len(ent) != n or any(len(row) != n for row in ent):
            raise ValueError(f"bivector on {self.chart.name}: expected a {n}x{n} matrix")
        for i in range(n):
            for j in range(i + 1, n):
                if ent[i][j] != ent[j][i]:
                    raise ValueError(f"bivector entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) differ")

    @classmethod
    def zero(cls, chart: Chart) -> "SymBivector":
        n = chart.dim
        return cls(chart, tuple(tuple(ZERO for _ in range(n)) for _ in range(n)))

    @classmethod
    def diagonal(cls, chart: Chart, diag: Sequence) -> "SymBivector":
        n = chart.dim
        return cls(chart, tuple(tuple(_as_expr(diag[i]) if i == j else ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def standard(cls, chart: Chart) -> "SymBivector":
        return cls.diagonal(chart, [ONE] * chart.dim)


@dataclass(frozen=True)
class OneForm:
    chart: Chart
    components: tuple[Expr, ...]

    def __post_init__(self):
        comps = tuple(_check_scope(self.chart, _as_expr(c)) for c in self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) != self.chart.dim:
            raise ValueError("one-form component count does not match chart dimension")


@dataclass(frozen=True)
class VectorField:
    chart: Chart
    components: tuple[Expr, ...]

    def __post_init__(self):
        comps = tuple(_check_scope(self.chart, _as_expr(c)) for c in self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) != self.chart.dim:
            raise ValueError("vector field component count does not match chart dimension")


@dataclass(frozen=True)
class ScalarField:
    chart: Chart
    value: Expr

    def __post_init__(self):
        object.__setattr__(self, "value", _check_scope(self.chart, _as_expr(self.value)))


@dataclass(frozen=True)
class TrilinearForm:
    chart: Chart
    entries: tuple[tuple[tuple[Expr, ...], ...], ...]  # indexed [i][j][k]

    def entry(self, i: int, j: int, k: int) -> Expr:
        return self.entries[i][j][k]

    def is_zero(self) -> bool:
        return all(e.is_zero() for plane in self.entries for row in plane for e in row)

    def nonzero_entries(self) -> list[tuple[int, int, int, Expr]]:
        out = []
        n = self.chart.dim
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    e = self.entries[i][j][k]
                    if not e.is_zero():
                        out.append((i, j, k, e))
        return out


def coordinate_form(chart: Chart, i: int) -> OneForm:
    return OneForm(chart, tuple(ONE if j == i else ZERO for j in range(chart.dim)))


def coordinate_field(chart: Chart, i: int) -> VectorField:
    return VectorField(chart, tuple(ONE if j == i else ZERO for j in range(chart.dim)))


def differential(f: ScalarField) -> OneForm:
    return OneForm(f.chart, tuple(f.value.diff(v) for v in f.chart.coords))


def apply_field(X: VectorField, e: Expr) -> Expr:
    """Directional derivative X(e) in chart coordinates."""
    out = ZERO
    for xi, v in zip(X.components, X.chart.coords):
        out = out + xi * e.diff(v)
    return out


def pair(alpha: OneForm, X: VectorField) -> Expr:
    _same_chart(alpha, X)
    out = ZERO
    for a, x in zip(alpha.components, X.components):
        out = out + a * x
    return out


def bivector_pair(h: SymBivector, alpha: OneForm, beta: OneForm) -> Expr:
    """h(alpha, beta) = sum_ij alpha_i beta_j h_ij."""
    _same_chart(h, alpha, beta)
    out = ZERO
    n = h.chart.dim
    for i in range(n):
        if alpha.components[i].is_zero():
            continue
        for j in range(n):
            out = out + alpha.components[i] * beta.components[j] * h.entries[i][j]
    return out


def sharp(h: SymBivector, alpha: OneForm) -> VectorField:
    """alpha^# with components (alpha^#)_j = sum_i alpha_i h_ij."""
    _same_chart(h, alpha)
    n = h.chart.dim
    comps = []
    for j in range(n):
        s = ZERO
        for i in range(n):
            s = s + alpha.components[i] * h.entries[i][j]
        comps.append(s)
    return VectorField(h.chart, tuple(comps))


def nabla_form(X: VectorField, beta: OneForm) -> OneForm:
    """Covariant derivative of a one-form along X (flat chart connection)."""
    _same_chart(X, beta)
    return OneForm(X.chart, tuple(apply_field(X, b) for b in beta.components))


def left_sym_product(X: VectorField, Y: VectorField) -> VectorField:
    """X • Y = nabla_X Y: components sum_i X_i dY_j/dx_i."""
    _same_chart(X, Y)
    return VectorField(X.chart, tuple(apply_field(X, y) for y in Y.components))


def associator(X: VectorField, Y: VectorField, Z: VectorField) -> VectorField:
    """(X•Y)•Z - X•(Y•Z)."""
    a = left_sym_product(left_sym_product(X, Y), Z)
    b = left_sym_product(X, left_sym_product(Y, Z))
    return VectorField(X.chart, tuple(p - q for p, q in zip(a.components, b.components)))


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y] = X•Y - Y•X (torsion-free flat connection)."""
    a = left_sym_product(X, Y)
    b = left_sym_product(Y, X)
    return VectorField(X.chart, tuple(p - q for p, q in zip(a.components, b.components)))


def codazzi_tensor(h: SymBivector) -> TrilinearForm:
    """T(i,j,k) = sum_l (h_il d_l h_jk - h_jl d_l h_ik); h is K-V iff T = 0.

    T is antisymmetric in (i, j), so only i < j is computed.
    """
    chart = h.chart
    n = chart.dim
    H = h.entries
    dH = [[[H[j][k].diff(v) for v in chart.coords] for k in range(n)] for j in range(n)]
    table = [[[ZERO for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                s = ZERO
                for l in range(n):
                    s = s + H[i][l] * dH[j][k][l] - H[j][l] * dH[i][k][l]
                table[i][j][k] = s
                table[j][i][k] = -s
    return TrilinearForm(chart, tuple(tuple(tuple(row) for row in plane) for plane in table))


def is_kv(h: SymBivector) -> bool:
    return codazzi_tensor(h).is_zero()


def kv_bracket_form(h: SymBivector) -> TrilinearForm:
    """Five-term trilinear bracket of h with itself on the coordinate coframe.

    With the tangent-bundle left-symmetric structure (identity anchor,
    X•Y = nabla_X Y) the entry at (i,j,k) expands to minus the Codazzi
    defect, so both tables vanish together.  The two routes are kept
    independent so they can cross-check each other.
    """
    chart = h.chart
    n = chart.dim
    Xs = [sharp(h, coordinate_form(chart, i)) for i in range(n)]
    table = []
    for i in range(n):
        plane = []
        for j in range(n):
            row = []
            for k in range(n):
                t1 = apply_field(Xs[i], h.entries[j][k])
                t2 = apply_field(Xs[j], h.entries[i][k])
                t3 = left_sym_product(Xs[j], Xs[k]).components[i]
                t4 = left_sym_product(Xs[i], Xs[k]).components[j]
                t5 = lie_bracket(Xs[i], Xs[j]).components[k]
                row.append(t1 - t2 + t3 - t4 - t5)
            plane.append(tuple(row))
        table.append(tuple(plane))
    return TrilinearForm(chart, tuple(table))


def bracket_h(h: SymBivector, alpha: OneForm, beta: OneForm) -> OneForm:
    """[alpha, beta]_h = nabla_{alpha^#} beta - nabla_{beta^#} alpha."""
    _same_chart(h, alpha, beta)
    a = nabla_form(sharp(h, alpha), beta)
    b = nabla_form(sharp(h, beta), alpha)
    return OneForm(h.chart, tuple(p - q for p, q in zip(a.components, b.components)))


def contravariant_D(h: SymBivector, alpha: OneForm, beta: OneForm) -> OneForm:
    """D_alpha beta, with <D_alpha beta, X> = (nabla_X h)(alpha, beta) + <nabla_{alpha^#} beta, X>."""
    _same_chart(h, alpha, beta)
    chart = h.chart
    n = chart.dim
    nab = nabla_form(sharp(h, alpha), beta)
    comps = []
    for j, v in enumerate(chart.coords):
        s = ZERO
        for k in range(n):
            if alpha.components[k].is_zero():
                continue
            for l in range(n):
                s = s + alpha.components[k] * beta.components[l] * h.entries[k][l].diff(v)
        comps.append(s + nab.components[j])
    return OneForm(chart, tuple(comps))


def hamiltonian(h: SymBivector, f: ScalarField) -> VectorField:
    """X_f = (df)^#."""
    _same_chart(h, f)
    return sharp(h, differential(f))


def lie_derivative_contravariant(
    chart: Chart, T: Sequence[Sequence[Expr]], X: Sequence[Expr]
) -> tuple[tuple[Expr, ...], ...]:
    """(L_X T)^ij = X(T^ij) - T^kj d_k X^i - T^ik d_k X^j for any 2-contravariant tensor."""
    n = chart.dim
    dX = [[X[i].diff(v) for v in chart.coords] for i in range(n)]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            s = ZERO
            for k, v in enumerate(chart.coords):
                s = s + X[k] * T[i][j].diff(v)
            for k in range(n):
                s = s - T[k][j] * dX[i][k] - T[i][k] * dX[j][k]
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def lie_derivative_h(h: SymBivector, f: ScalarField) -> SymBivector:
    """L_{X_f} h computed from first principles (Lie derivative in coordinates)."""
    _same_chart(h, f)
    X = hamiltonian(h, f)
    return SymBivector(h.chart, lie_derivative_contravariant(h.chart, h.entries, X.components))


def hessian_contraction(h: SymBivector, f: ScalarField) -> tuple[tuple[Expr, ...], ...]:
    """Matrix <nabla_{X_i} df, X_j> = sum_{l,m} h_il h_jm d2f/dx_l dx_m on the coordinate coframe."""
    _same_chart(h, f)
    chart = h.chart
    n = chart.dim
    hess = [[f.value.diff(u).diff(v) for v in chart.coords] for u in chart.coords]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            s = ZERO
            for l in range(n):
                if h.entries[i][l].is_zero():
                    continue
                for m in range(n):
                    s = s + h.entries[i][l] * h.entries[j][m] * hess[l][m]
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def lie_derivative_residual(h: SymBivector, f: ScalarField) -> tuple[tuple[Expr, ...], ...]:
    """Residual of the identity L_{X_f}h = -nabla_{X_f}h - 2<nabla_{X_i}df, X_j>.

    The sign of the second-derivative term follows from expanding
    [df, dx_j]_h = -nabla_{X_j} df in affine coordinates; the identity holds
    exactly on K-V bivectors, where the sharp map intertwines the brackets.
    """
    L = lie_derivative_h(h, f).entries
    X = hamiltonian(h, f)
    hc = hessian_contraction(h, f)
    n = h.chart.dim
    return tuple(
        tuple(L[i][j] + apply_field(X, h.entries[i][j]) + 2 * hc[i][j] for j in range(n)) for i in range(n)
    )


def in_E_residuals(h: SymBivector, f: ScalarField) -> tuple[tuple[Expr, ...], ...]:
    return hessian_contraction(h, f)


def in_E(h: SymBivector, f: ScalarField) -> bool:
    """Whether f is affine along the leaves: all n^2 coframe residuals vanish."""
    return all(e.is_zero() for row in hessian_contraction(h, f) for e in row)


def special_class_check(h: SymBivector, f1: ScalarField, f2: ScalarField) -> bool:
    """Whether h(df1, df2) stays affine along the leaves; requires f1, f2 to be."""
    _same_chart(h, f1, f2)
    if not in_E(h, f1):
        raise PreconditionViolated("f1 is not affine along the leaves")
    if not in_E(h, f2):
        raise PreconditionViolated("f2 is not affine along the leaves")
    g = bivector_pair(h, differential(f1), differential(f2))
    return in_E(h, ScalarField(h.chart, g))


def evaluate_entries(h: SymBivector, point: Sequence[Rational]) -> linalg.Mat:
    pt = {v: Fraction(p) for v, p in zip(h.chart.coords, point)}
    return tuple(tuple(e.eval_at(pt) for e in row) for row in h.entries)


def rank_at(h: SymBivector, point: Sequence[Rational]) -> int:
    """Rank of the sharp map at an exact rational point."""
    return linalg.rank(evaluate_entries(h, point))
