"""Tangent-bundle constructions: lifts, the Sasaki operators, and the Poisson lift.

The horizontal/vertical splitting is hard-coded to the zero-Christoffel form
of an affine chart: horizontal directions are the base coordinate directions,
vertical ones the fiber directions.  The skew bivector built from a symmetric
bivector pairs base coordinate forms with fiber ones, and its Jacobiator is
computed directly from the coordinate formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from .errors import ChartMismatch
from .geometry import (
    Chart,
    OneForm,
    ScalarField,
    SymBivector,
    TrilinearForm,
    VectorField,
    codazzi_tensor,
    differential,
    hamiltonian,
    hessian_contraction,
    in_E,
    left_sym_product,
    lie_derivative_contravariant,
)
from .symexpr import ZERO, Expr


@dataclass(frozen=True)
class TangentChart:
    """Chart of the tangent bundle: base coordinates followed by fiber coordinates."""

    base: Chart
    fiber: tuple[str, ...]

    @property
    def chart(self) -> Chart:
        return Chart(f"T_{self.base.name}", self.base.coords + self.fiber)

    @property
    def dim(self) -> int:
        return 2 * self.base.dim


def make_tangent_chart(base: Chart) -> TangentChart:
    taken = set(base.coords)
    fiber = []
    for c in base.coords:
        name = f"u_{c}"
        while name in taken:
            name = "_" + name
        taken.add(name)
        fiber.append(name)
    return TangentChart(base, tuple(fiber))


@dataclass(frozen=True)
class SkewBivector:
    """Antisymmetric bivector on a tangent chart."""

    tangent: TangentChart
    entries: tuple[tuple[Expr, ...], ...]

    def __post_init__(self):
        n2 = self.tangent.dim
        if len(self.entries) != n2 or any(len(r) != n2 for r in self.entries):
            raise ValueError(f"expected a {n2}x{n2} matrix")
        for i in range(n2):
            for j in range(i, n2):
                if self.entries[i][j] != -self.entries[j][i]:
                    raise ValueError(f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) are not antisymmetric")

    @property
    def chart(self) -> Chart:
        return self.tangent.chart


def _require_base(tc: TangentChart, obj) -> None:
    if obj.chart != tc.base:
        raise ChartMismatch(f"expected an object on base chart {tc.base.name}")


def lift_vector(tc: TangentChart, X: VectorField, mode: str) -> VectorField:
    """X^h spans base directions, X^v fiber directions; components pull back from the base."""
    _require_base(tc, X)
    n = tc.base.dim
    zero = tuple(ZERO for _ in range(n))
    if mode == "horizontal":
        return VectorField(tc.chart, X.components + zero)
    if mode == "vertical":
        return VectorField(tc.chart, zero + X.components)
    raise ValueError("mode must be 'vertical' or 'horizontal'")


def lift_oneform(tc: TangentChart, alpha: OneForm, mode: str) -> OneForm:
    _require_base(tc, alpha)
    n = tc.base.dim
    zero = tuple(ZERO for _ in range(n))
    if mode == "horizontal":
        return OneForm(tc.chart, alpha.components + zero)
    if mode == "vertical":
        return OneForm(tc.chart, zero + alpha.components)
    raise ValueError("mode must be 'vertical' or 'horizontal'")


def lift_scalar(tc: TangentChart, f: ScalarField) -> ScalarField:
    """f o p: same expression read on the tangent chart."""
    _require_base(tc, f)
    return ScalarField(tc.chart, f.value)


def sasaki_J(tc: TangentChart, V: VectorField) -> VectorField:
    """J sends horizontal directions to vertical ones and vertical to minus horizontal."""
    if V.chart != tc.chart:
        raise ChartMismatch("expected a field on the tangent chart")
    n = tc.base.dim
    base_part = V.components[:n]
    fiber_part = V.components[n:]
    return VectorField(tc.chart, tuple(-c for c in fiber_part) + base_part)


def sasaki_nabla(tc: TangentChart, W: VectorField, V: VectorField) -> VectorField:
    """Sasaki connection; in these coordinates it is the flat chart connection."""
    if W.chart != tc.chart or V.chart != tc.chart:
        raise ChartMismatch("expected fields on the tangent chart")
    return left_sym_product(W, V)


def build_pi(h: SymBivector, tc: TangentChart | None = None) -> SkewBivector:
    """Skew lift of h: base-fiber block h_ij(x), base-base and fiber-fiber blocks zero."""
    tc = tc if tc is not None else make_tangent_chart(h.chart)
    if tc.base != h.chart:
        raise ChartMismatch("tangent chart does not sit over the bivector's chart")
    n = h.chart.dim
    rows = []
    for i in range(2 * n):
        row = []
        for j in range(2 * n):
            if i < n <= j:
                row.append(h.entries[i][j - n])
            elif j < n <= i:
                row.append(-h.entries[i - n][j])
            else:
                row.append(ZERO)
        rows.append(tuple(row))
    return SkewBivector(tc, tuple(rows))


def pi_sharp(pi: SkewBivector, alpha: OneForm) -> VectorField:
    """Pi_#(alpha) defined by beta(Pi_#(alpha)) = Pi(alpha, beta)."""
    if alpha.chart != pi.chart:
        raise ChartMismatch("expected a one-form on the tangent chart")
    n2 = pi.tangent.dim
    comps = []
    for j in range(n2):
        s = ZERO
        for i in range(n2):
            s = s + alpha.components[i] * pi.entries[i][j]
        comps.append(s)
    return VectorField(pi.chart, tuple(comps))


def schouten_jacobi(pi: SkewBivector) -> TrilinearForm:
    """Jacobiator J(i,j,k) = sum_l (P_li d_l P_jk + P_lj d_l P_ki + P_lk d_l P_ij).

    Totally antisymmetric, so only i < j < k is computed; the bivector is
    Poisson iff the table is zero.
    """
    chart = pi.chart
    n2 = chart.dim
    P = pi.entries
    coords = chart.coords
    dP = [[[P[i][j].diff(v) for v in coords] for j in range(n2)] for i in range(n2)]
    table = [[[ZERO for _ in range(n2)] for _ in range(n2)] for _ in range(n2)]
    for i in range(n2):
        for j in range(i + 1, n2):
            for k in range(j + 1, n2):
                s = ZERO
                for l in range(n2):
                    s = (
                        s
                        + P[l][i] * dP[j][k][l]
                        + P[l][j] * dP[k][i][l]
                        + P[l][k] * dP[i][j][l]
                    )
                table[i][j][k] = s
                table[j][k][i] = s
                table[k][i][j] = s
                table[j][i][k] = -s
                table[i][k][j] = -s
                table[k][j][i] = -s
    return TrilinearForm(chart, tuple(tuple(tuple(row) for row in plane) for plane in table))


@dataclass(frozen=True)
class LiftPropositionsReport:
    """Outcome of the two Hamiltonian-lift statements for (h, f)."""

    hamiltonian_lift_ok: bool  # X_f^v equals Pi_#(d(f o p)) symbolically
    lie_pi: SkewBivector  # L_{X_f^h} Pi
    lie_pi_vanishes: bool
    f_in_E: bool
    ambient_kv: bool
    agree: bool | None  # vanishing iff f in E; only asserted on K-V bivectors
    mixed_residuals: tuple[tuple[Expr, ...], ...]  # L Pi (dx_i^v, dx_j^h) - <nabla_{X_i} df, X_j>


def lift_propositions_check(h: SymBivector, f: ScalarField) -> LiftPropositionsReport:
    tc = make_tangent_chart(h.chart)
    pi = build_pi(h, tc)
    n = h.chart.dim

    X_f = hamiltonian(h, f)
    lhs = lift_vector(tc, X_f, "vertical")
    rhs = pi_sharp(pi, differential(lift_scalar(tc, f)))
    part1 = all(a == b for a, b in zip(lhs.components, rhs.components))

    W = lift_vector(tc, X_f, "horizontal")
    lie_entries = lie_derivative_contravariant(tc.chart, pi.entries, W.components)
    lie_pi = SkewBivector(tc, lie_entries)
    vanishes = all(e.is_zero() for row in lie_entries for e in row)

    f_in = in_E(h, f)
    kv = codazzi_tensor(h).is_zero()
    agree = (vanishes == f_in) if kv else None

    hc = hessian_contraction(h, f)
    mixed = tuple(
        tuple(lie_entries[n + i][j] - hc[i][j] for j in range(n)) for i in range(n)
    )
    return LiftPropositionsReport(part1, lie_pi, vanishes, f_in, kv, agree, mixed)


def lie_bracket_tangent(tc: TangentChart, V: VectorField, W: VectorField) -> VectorField:
    """Lie bracket of fields on the tangent chart (flat coordinates)."""
    a = left_sym_product(V, W)
    b = left_sym_product(W, V)
    return VectorField(tc.chart, tuple(p - q for p, q in zip(a.components, b.components)))
