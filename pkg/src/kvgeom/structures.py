"""Affine maps and affine submanifolds: K-V maps, induced structures, and deciders.

Maps are exact affine maps (rational matrix + offset) and submanifolds are
affine subspaces of a chart, so every structural condition reduces to a
polynomial identity in adapted coordinates.  Transversality (an open
condition) gets a three-valued verdict instead: symbolic when the relevant
determinant restricts to a nonzero constant, pointwise otherwise.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import (
    ChartMismatch,
    ClosureFailure,
    DegenerateBasis,
    NotCoisotropic,
    NotTransverseAtSample,
    PreconditionViolated,
)
from .geometry import (
    Chart,
    OneForm,
    ScalarField,
    SymBivector,
    VectorField,
    codazzi_tensor,
    hamiltonian,
    sharp,
)
from .symexpr import ONE, ZERO, Expr, Rational
from .tangent import build_pi, make_tangent_chart


def _frac_row(row: Sequence) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in row)


# --- affine maps -------------------------------------------------------------


@dataclass(frozen=True)
class AffineMap:
    """F(x) = matrix @ x + offset between two charts."""

    source: Chart
    target: Chart
    matrix: tuple[tuple[Fraction, ...], ...]
    offset: tuple[Fraction, ...]

    def __post_init__(self):
        m, n = self.target.dim, self.source.dim
        mat = tuple(_frac_row(r) for r in self.matrix)
        off = _frac_row(self.offset)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "offset", off)
        if len(mat) != m or any(len(r) != n for r in mat) or len(off) != m:
            raise ValueError(f"affine map needs a {m}x{n} matrix and length-{m} offset")

    @classmethod
    def identity(cls, chart: Chart) -> "AffineMap":
        return cls(chart, chart, linalg.identity(chart.dim), tuple(Fraction(0) for _ in range(chart.dim)))

    def apply(self, p: Sequence[Rational]) -> tuple[Fraction, ...]:
        return tuple(a + b for a, b in zip(linalg.matvec(self.matrix, p), self.offset))

    def component_exprs(self) -> tuple[Expr, ...]:
        """Target coordinates as expressions in the source coordinates."""
        xs = [Expr.var(v) for v in self.source.coords]
        out = []
        for i in range(self.target.dim):
            e = Expr.const(self.offset[i])
            for j, x in enumerate(xs):
                if self.matrix[i][j]:
                    e = e + Expr.const(self.matrix[i][j]) * x
            out.append(e)
        return tuple(out)

    def substitution(self) -> dict[str, Expr]:
        """target coordinate name -> expression in source coordinates."""
        return dict(zip(self.target.coords, self.component_exprs()))


def compose(g: AffineMap, f: AffineMap) -> AffineMap:
    if f.target != g.source:
        raise ChartMismatch("composition needs matching middle chart")
    mat = linalg.matmul(g.matrix, f.matrix)
    off = tuple(a + b for a, b in zip(linalg.matvec(g.matrix, f.offset), g.offset))
    return AffineMap(f.source, g.target, mat, off)


def pullback(f: AffineMap, alpha: OneForm) -> OneForm:
    """(F*alpha)_i = sum_j alpha_j(F(x)) M_ji."""
    if alpha.chart != f.target:
        raise ChartMismatch("pullback needs a one-form on the target chart")
    sub = f.substitution()
    pulled = [a.substitute(sub) for a in alpha.components]
    comps = []
    for i in range(f.source.dim):
        s = ZERO
        for j in range(f.target.dim):
            if f.matrix[j][i]:
                s = s + Expr.const(f.matrix[j][i]) * pulled[j]
        comps.append(s)
    return OneForm(f.source, tuple(comps))


def are_F_related(f: AffineMap, X: VectorField, Y: VectorField) -> bool:
    """TF(X) = Y o F, i.e. M X(x) - Y(F(x)) = 0 componentwise."""
    if X.chart != f.source or Y.chart != f.target:
        raise ChartMismatch("relatedness needs fields on the source and target charts")
    return all(r.is_zero() for r in relatedness_residuals(f, X, Y))


def relatedness_residuals(f: AffineMap, X: VectorField, Y: VectorField) -> tuple[Expr, ...]:
    sub = f.substitution()
    out = []
    for i in range(f.target.dim):
        s = ZERO
        for j in range(f.source.dim):
            if f.matrix[i][j]:
                s = s + Expr.const(f.matrix[i][j]) * X.components[j]
        out.append(s - Y.components[i].substitute(sub))
    return tuple(out)


def kv_map_residuals(f: AffineMap, h1: SymBivector, h2: SymBivector) -> tuple[tuple[Expr, ...], ...]:
    """Entries of M H1(x) M^T - H2(F(x)); F is a K-V map iff all vanish."""
    if h1.chart != f.source or h2.chart != f.target:
        raise ChartMismatch("K-V map check needs bivectors on the map's charts")
    m, n = f.target.dim, f.source.dim
    sub = f.substitution()
    H2F = [[h2.entries[i][j].substitute(sub) for j in range(m)] for i in range(m)]
    out = []
    for a in range(m):
        row = []
        for b in range(m):
            s = ZERO
            for i in range(n):
                if not f.matrix[a][i]:
                    continue
                for j in range(n):
                    if not f.matrix[b][j]:
                        continue
                    s = s + Expr.const(f.matrix[a][i] * f.matrix[b][j]) * h1.entries[i][j]
            row.append(s - H2F[a][b])
        out.append(tuple(row))
    return tuple(out)


def is_kv_map(f: AffineMap, h1: SymBivector, h2: SymBivector) -> bool:
    return all(e.is_zero() for row in kv_map_residuals(f, h1, h2) for e in row)


def tangent_map(f: AffineMap) -> AffineMap:
    """TF on the tangent charts: (x, u) -> (Mx + c, Mu)."""
    tc1 = make_tangent_chart(f.source)
    tc2 = make_tangent_chart(f.target)
    m, n = f.target.dim, f.source.dim
    zero = Fraction(0)
    rows = []
    for i in range(m):
        rows.append(tuple(f.matrix[i]) + tuple(zero for _ in range(n)))
    for i in range(m):
        rows.append(tuple(zero for _ in range(n)) + tuple(f.matrix[i]))
    off = tuple(f.offset) + tuple(zero for _ in range(m))
    return AffineMap(tc1.chart, tc2.chart, tuple(rows), off)


def _sample_target_scalars(chart: Chart) -> list[ScalarField]:
    """Deterministic scalar fields used to probe Hamiltonian relatedness."""
    ys = [Expr.var(v) for v in chart.coords]
    fields = [Expr.const(1)]
    fields += ys
    fields += [ys[a] * ys[b] for a in range(len(ys)) for b in range(a, len(ys))]
    if ys:
        cubic = ys[0] ** 3
        for y in ys[1:]:
            cubic = cubic + y ** 3
        fields.append(cubic)
    return [ScalarField(chart, e) for e in fields]


@dataclass(frozen=True)
class Theorem1Report:
    """The four K-V map characterizations, checked independently."""

    direct: bool  # matrix identity M H1 M^T = H2 o F
    tangent_poisson: bool  # TF is a Poisson map for the lifted bivectors
    sharp_related: bool  # (F* dy_j)^# related to (dy_j)^# for all j
    hamiltonian_related: bool  # X_{f o F} related to X_f for sampled f

    @property
    def agree(self) -> bool:
        return self.direct == self.tangent_poisson == self.sharp_related == self.hamiltonian_related

    @property
    def verdict(self) -> bool:
        return self.direct


def theorem1_equivalences(f: AffineMap, h1: SymBivector, h2: SymBivector) -> Theorem1Report:
    direct = is_kv_map(f, h1, h2)

    pi1 = build_pi(h1)
    pi2 = build_pi(h2)
    tf = tangent_map(f)
    poisson = all(e.is_zero() for row in kv_map_style_residuals_skew(tf, pi1.entries, pi2.entries) for e in row)

    related = True
    for j in range(f.target.dim):
        alpha = OneForm(f.target, tuple(ONE if i == j else ZERO for i in range(f.target.dim)))
        X = sharp(h1, pullback(f, alpha))
        Y = sharp(h2, alpha)
        if not are_F_related(f, X, Y):
            related = False
            break

    ham = True
    sub = f.substitution()
    for g in _sample_target_scalars(f.target):
        gF = ScalarField(f.source, g.value.substitute(sub))
        if not are_F_related(f, hamiltonian(h1, gF), hamiltonian(h2, g)):
            ham = False
            break

    return Theorem1Report(direct, poisson, related, ham)


def kv_map_style_residuals_skew(f: AffineMap, T1, T2) -> tuple[tuple[Expr, ...], ...]:
    """Entries of M T1(z) M^T - T2(F(z)) for arbitrary square tensors on the charts."""
    m, n = f.target.dim, f.source.dim
    sub = f.substitution()
    T2F = [[T2[i][j].substitute(sub) for j in range(m)] for i in range(m)]
    out = []
    for a in range(m):
        row = []
        for b in range(m):
            s = ZERO
            for i in range(n):
                if not f.matrix[a][i]:
                    continue
                for j in range(n):
                    if not f.matrix[b][j]:
                        continue
                    s = s + Expr.const(f.matrix[a][i] * f.matrix[b][j]) * T1[i][j]
            row.append(s - T2F[a][b])
        out.append(tuple(row))
    return tuple(out)


# --- products ----------------------------------------------------------------


@dataclass(frozen=True)
class ProductKV:
    bivector: SymBivector
    proj1: AffineMap
    proj2: AffineMap


def product_kv(h1: SymBivector, h2: SymBivector, sign: int = 1) -> ProductKV:
    """Block-diagonal bivector on the product chart; sign -1 flips the second factor."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    c1, c2 = h1.chart, h2.chart
    taken = set(c1.coords)
    rename: dict[str, str] = {}
    coords2 = []
    for v in c2.coords:
        name = v
        while name in taken:
            name = name + "_2"
        taken.add(name)
        if name != v:
            rename[v] = name
        coords2.append(name)
    chart = Chart(f"{c1.name}x{c2.name}", c1.coords + tuple(coords2))
    sub = {old: Expr.var(new) for old, new in rename.items()}
    n1, n2 = c1.dim, c2.dim
    n = n1 + n2
    entries = [[ZERO for _ in range(n)] for _ in range(n)]
    for i in range(n1):
        for j in range(n1):
            entries[i][j] = h1.entries[i][j]
    for i in range(n2):
        for j in range(n2):
            e = h2.entries[i][j].substitute(sub) if sub else h2.entries[i][j]
            entries[n1 + i][n1 + j] = e if sign == 1 else -e
    h = SymBivector(chart, tuple(tuple(r) for r in entries))
    zero1 = tuple(Fraction(0) for _ in range(n1))
    zero2 = tuple(Fraction(0) for _ in range(n2))
    p1 = AffineMap(chart, c1, tuple(tuple(Fraction(1 if j == i else 0) for j in range(n)) for i in range(n1)), zero1)
    p2 = AffineMap(chart, c2, tuple(tuple(Fraction(1 if j == n1 + i else 0) for j in range(n)) for i in range(n2)), zero2)
    return ProductKV(h, p1, p2)


# --- affine submanifolds ------------------------------------------------------


@dataclass(frozen=True)
class AffineSubmanifold:
    """Affine subspace origin + span(basis) of an ambient chart; dim 0 is a point."""

    ambient: Chart
    origin: tuple[Fraction, ...]
    basis: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = self.ambient.dim
        origin = _frac_row(self.origin)
        basis = tuple(_frac_row(b) for b in self.basis)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "basis", basis)
        if len(origin) != n or any(len(b) != n for b in basis):
            raise ValueError(f"origin and basis vectors must have length {n}")
        if len(basis) > n or linalg.rank(basis) != len(basis):
            raise DegenerateBasis("basis vectors are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def parametrize(self, params: Sequence[Rational]) -> tuple[Fraction, ...]:
        p = list(self.origin)
        for t, b in zip(params, self.basis):
            for i in range(len(p)):
                p[i] += Fraction(t) * b[i]
        return tuple(p)

    def contains(self, point: Sequence[Rational]) -> bool:
        rhs = [Fraction(q) - o for q, o in zip(point, self.origin)]
        if not self.basis:
            return all(x == 0 for x in rhs)
        cols = linalg.transpose(self.basis)
        return linalg.solve(cols, rhs) is not None

    def parameters_of(self, point: Sequence[Rational]) -> tuple[Fraction, ...] | None:
        rhs = [Fraction(q) - o for q, o in zip(point, self.origin)]
        if not self.basis:
            return () if all(x == 0 for x in rhs) else None
        cols = linalg.transpose(self.basis)
        return linalg.solve(cols, rhs)


@dataclass(frozen=True)
class AdaptedFrame:
    """Invertible affine change y = P(x - origin) sending N to {y_{k+1} = ... = y_n = 0}."""

    submanifold: AffineSubmanifold
    change: tuple[tuple[Fraction, ...], ...]  # P = C^{-1}
    inverse: tuple[tuple[Fraction, ...], ...]  # C, columns: basis then completion
    adapted_chart: Chart
    is_identity: bool

    @property
    def offset(self) -> tuple[Fraction, ...]:
        return tuple(-x for x in linalg.matvec(self.change, self.submanifold.origin))


def adapted_frame(n_sub: AffineSubmanifold) -> AdaptedFrame:
    """Complete the basis with standard vectors and invert exactly."""
    amb = n_sub.ambient
    n = amb.dim
    cols = [list(b) for b in n_sub.basis]
    for j in range(n):
        if len(cols) == n:
            break
        e = [Fraction(1 if i == j else 0) for i in range(n)]
        if linalg.rank(cols + [e]) > len(cols):
            cols.append(e)
    C = linalg.transpose(linalg.to_mat(cols))  # columns are the frame vectors
    P = linalg.inverse(C)
    if P is None:
        raise DegenerateBasis("failed to complete basis to a frame")
    chart = Chart(f"{amb.name}_ad", tuple(f"y{i + 1}" for i in range(n)))
    ident = C == linalg.identity(n) and all(x == 0 for x in n_sub.origin)
    return AdaptedFrame(n_sub, P, C, chart, ident)


def to_adapted_bivector(frame: AdaptedFrame, h: SymBivector) -> SymBivector:
    """Push h forward along y = P(x - o): entries P H(x(y)) P^T with x(y) = C y + o."""
    if h.chart != frame.submanifold.ambient:
        raise ChartMismatch("bivector does not live on the submanifold's ambient chart")
    amb = h.chart
    n = amb.dim
    ys = [Expr.var(v) for v in frame.adapted_chart.coords]
    sub = {}
    for i, xname in enumerate(amb.coords):
        e = Expr.const(frame.submanifold.origin[i])
        for j in range(n):
            if frame.inverse[i][j]:
                e = e + Expr.const(frame.inverse[i][j]) * ys[j]
        sub[xname] = e
    Hs = [[h.entries[i][j].substitute(sub) for j in range(n)] for i in range(n)]
    P = frame.change
    entries = []
    for a in range(n):
        row = []
        for b in range(n):
            s = ZERO
            for i in range(n):
                if not P[a][i]:
                    continue
                for j in range(n):
                    if not P[b][j]:
                        continue
                    s = s + Expr.const(P[a][i] * P[b][j]) * Hs[i][j]
            row.append(s)
        entries.append(tuple(row))
    return SymBivector(frame.adapted_chart, tuple(entries))


def _restrict(frame: AdaptedFrame, e: Expr) -> Expr:
    """Set the conormal-dual coordinates y_{k+1}..y_n to zero."""
    k = frame.submanifold.dim
    sub = {v: ZERO for v in frame.adapted_chart.coords[k:]}
    return e.substitute(sub) if sub else e


def induced_chart(frame: AdaptedFrame) -> Chart:
    k = frame.submanifold.dim
    return Chart(f"{frame.submanifold.ambient.name}_ind", frame.adapted_chart.coords[:k])


# --- K-V submanifolds ---------------------------------------------------------


@dataclass(frozen=True)
class SubmanifoldResult:
    ok: bool
    induced: SymBivector | None
    residuals: tuple[Expr, ...]  # conormal rows restricted to N; all zero iff ok
    ambient_kv: bool


def is_kv_submanifold(n_sub: AffineSubmanifold, h: SymBivector) -> SubmanifoldResult:
    """N is K-V iff every conormal row of h vanishes on N (adapted coordinates)."""
    frame = adapted_frame(n_sub)
    k, n = n_sub.dim, n_sub.ambient.dim
    ambient_kv = codazzi_tensor(h).is_zero()
    if k == n and frame.is_identity:
        return SubmanifoldResult(True, h, (), ambient_kv)
    hy = to_adapted_bivector(frame, h)
    residuals = tuple(_restrict(frame, hy.entries[a][i]) for a in range(k, n) for i in range(n))
    ok = all(e.is_zero() for e in residuals)
    induced = None
    if ok and k > 0:
        chart = induced_chart(frame)
        induced = SymBivector(
            chart,
            tuple(tuple(_restrict(frame, hy.entries[i][j]) for j in range(k)) for i in range(k)),
        )
    return SubmanifoldResult(ok, induced, residuals, ambient_kv)


# --- K-V transversals ---------------------------------------------------------


SYMBOLIC_TRUE = "symbolic-true"
POINTWISE_TRUE = "pointwise-true"
FALSE = "false"


@dataclass(frozen=True)
class TransversalResult:
    verdict: str  # SYMBOLIC_TRUE | POINTWISE_TRUE | FALSE
    determinant: Expr  # det of the conormal-conormal block restricted to N
    induced: SymBivector | None
    samples: tuple[tuple[tuple[Fraction, ...], bool], ...]  # (parameter point, nonsingular)
    ambient_kv: bool

    @property
    def ok(self) -> bool:
        return self.verdict in (SYMBOLIC_TRUE, POINTWISE_TRUE)


def expr_det(mat: Sequence[Sequence[Expr]]) -> Expr:
    """Determinant of a matrix of expressions by fraction-producing elimination."""
    m = len(mat)
    if m == 0:
        return ONE
    rows = [list(r) for r in mat]
    det = ONE
    for c in range(m):
        piv = next((r for r in range(c, m) if not rows[r][c].is_zero()), None)
        if piv is None:
            return ZERO
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det = det * rows[c][c]
        inv = ONE / rows[c][c]
        for r in range(c + 1, m):
            if rows[r][c].is_zero():
                continue
            factor = rows[r][c] * inv
            rows[r] = [a - factor * b for a, b in zip(rows[r], rows[c])]
    return det


def expr_inverse(mat: Sequence[Sequence[Expr]]) -> list[list[Expr]] | None:
    """Inverse of a matrix of expressions, or None when singular as a rational-function matrix."""
    m = len(mat)
    if m == 0:
        return []
    rows = [list(r) + [ONE if i == j else ZERO for j in range(m)] for i, r in enumerate(mat)]
    for c in range(m):
        piv = next((r for r in range(c, m) if not rows[r][c].is_zero()), None)
        if piv is None:
            return None
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = ONE / rows[c][c]
        rows[c] = [x * inv for x in rows[c]]
        for r in range(m):
            if r != c and not rows[r][c].is_zero():
                factor = rows[r][c]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[c])]
    return [row[m:] for row in rows]


def _sample_parameters(k: int, count: int, seed: int) -> list[tuple[Fraction, ...]]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        out.append(tuple(Fraction(rng.randint(-8, 8), rng.randint(1, 8)) for _ in range(k)))
    return out


def _adapted_blocks(frame: AdaptedFrame, h: SymBivector):
    """Tangent-tangent, tangent-conormal and conormal-conormal blocks restricted to N."""
    k, n = frame.submanifold.dim, frame.submanifold.ambient.dim
    hy = to_adapted_bivector(frame, h)
    A = [[_restrict(frame, hy.entries[i][j]) for j in range(k)] for i in range(k)]
    B = [[_restrict(frame, hy.entries[i][j]) for j in range(k, n)] for i in range(k)]
    D = [[_restrict(frame, hy.entries[i][j]) for j in range(k, n)] for i in range(k, n)]
    return A, B, D


def is_transversal(
    n_sub: AffineSubmanifold,
    h: SymBivector,
    sample_points: Sequence[Sequence[Rational]] | None = None,
    samples: int = 8,
    seed: int = 42,
) -> TransversalResult:
    """Transversal iff the conormal-conormal block is invertible along N.

    The induced structure is the Schur complement A - B D^{-1} B^T restricted
    to N, with rational-function entries.
    """
    frame = adapted_frame(n_sub)
    k = n_sub.dim
    ambient_kv = codazzi_tensor(h).is_zero()
    if k == n_sub.ambient.dim and frame.is_identity:
        return TransversalResult(SYMBOLIC_TRUE, ONE, h, (), ambient_kv)
    A, B, D = _adapted_blocks(frame, h)
    det = expr_det(D)

    if det.is_zero():
        pts = [tuple(Fraction(0) for _ in range(k))]
        return TransversalResult(FALSE, det, None, tuple((p, False) for p in pts), ambient_kv)

    if det.is_const():
        verdict = SYMBOLIC_TRUE
        sample_report: tuple = ()
    else:
        if sample_points is not None:
            pts = []
            for p in sample_points:
                params = n_sub.parameters_of(p)
                if params is None:
                    raise PreconditionViolated(f"sample point {list(p)} does not lie on the submanifold")
                pts.append(params)
        else:
            pts = _sample_parameters(k, samples, seed)
        results = []
        all_ok = True
        for params in pts:
            env = dict(zip(frame.adapted_chart.coords[:k], params))
            val = det.eval_at(env)
            ok = val != 0
            all_ok = all_ok and ok
            results.append((tuple(params), ok))
        verdict = POINTWISE_TRUE if all_ok else FALSE
        sample_report = tuple(results)

    induced = None
    if verdict != FALSE:
        Dinv = expr_inverse(D)
        assert Dinv is not None
        m = len(D)
        schur = []
        for i in range(k):
            row = []
            for j in range(k):
                s = A[i][j]
                for a in range(m):
                    for b in range(m):
                        s = s - B[i][a] * Dinv[a][b] * B[j][b]
                row.append(s)
            schur.append(tuple(row))
        induced = SymBivector(induced_chart(frame), tuple(schur)) if k > 0 else None
        if k == 0:
            induced = SymBivector(induced_chart(frame), ())
    return TransversalResult(verdict, det, induced, sample_report, ambient_kv)


# --- coisotropic submanifolds and the conormal algebroid ----------------------


def coisotropy_residuals(n_sub: AffineSubmanifold, h: SymBivector) -> tuple[Expr, ...]:
    frame = adapted_frame(n_sub)
    _, _, D = _adapted_blocks(frame, h)
    return tuple(e for row in D for e in row)


def is_coisotropic(n_sub: AffineSubmanifold, h: SymBivector) -> bool:
    """h_#(TN°) stays tangent to N iff the conormal-conormal block vanishes on N."""
    return all(e.is_zero() for e in coisotropy_residuals(n_sub, h))


@dataclass(frozen=True)
class ConormalAlgebroid:
    """Left-symmetric algebroid on the conormal bundle of a coisotropic submanifold.

    table[a][b][c] is the dy_{k+c} coefficient of dy_{k+a} • dy_{k+b}; the
    anchor rows are the tangent components of sharp on the conormal frame.
    """

    submanifold: AffineSubmanifold
    chart: Chart  # induced chart of N (tangent coordinates)
    table: tuple[tuple[tuple[Expr, ...], ...], ...]
    anchor: tuple[tuple[Expr, ...], ...]  # (n-k) x k
    left_symmetric_ok: bool
    fiber_point: tuple[Fraction, ...] | None  # parameters of the designated point
    anchor_vanishes_at_point: bool | None
    fiber_product: tuple[tuple[tuple[Fraction, ...], ...], ...] | None
    fiber_commutative: bool | None
    fiber_associative: bool | None

    @property
    def conormal_dim(self) -> int:
        return len(self.table)


def _algebroid_associator_residuals(
    chart: Chart,
    table: Sequence[Sequence[Sequence[Expr]]],
    anchor: Sequence[Sequence[Expr]],
) -> list[Expr]:
    """ass(a,b,g) - ass(b,a,g) componentwise for all basis triples."""
    m = len(table)
    k = chart.dim

    def anchor_apply(a: int, e: Expr) -> Expr:
        out = ZERO
        for j in range(k):
            out = out + anchor[a][j] * e.diff(chart.coords[j])
        return out

    def product_section(coeffs: Sequence[Expr], g: int) -> list[Expr]:
        # (sum_c coeffs_c dy_c) • dy_g, linear over functions in the first slot
        out = [ZERO] * m
        for c in range(m):
            if coeffs[c].is_zero():
                continue
            for e in range(m):
                out[e] = out[e] + coeffs[c] * table[c][g][e]
        return out

    def section_product(a: int, coeffs: Sequence[Expr]) -> list[Expr]:
        # dy_a • (sum_c coeffs_c dy_c) with the Leibniz anchor term
        out = [ZERO] * m
        for c in range(m):
            if not coeffs[c].is_zero():
                for e in range(m):
                    out[e] = out[e] + coeffs[c] * table[a][c][e]
            out[c] = out[c] + anchor_apply(a, coeffs[c])
        return out

    def ass(a: int, b: int, g: int) -> list[Expr]:
        ab = [table[a][b][e] for e in range(m)]
        first = product_section(ab, g)
        bg = [table[b][g][e] for e in range(m)]
        second = section_product(a, bg)
        return [p - q for p, q in zip(first, second)]

    residuals = []
    for a in range(m):
        for b in range(a + 1, m):
            for g in range(m):
                r1 = ass(a, b, g)
                r2 = ass(b, a, g)
                residuals.extend(p - q for p, q in zip(r1, r2))
    return residuals


def conormal_algebroid(
    n_sub: AffineSubmanifold,
    h: SymBivector,
    point: Sequence[Rational] | None = None,
) -> ConormalAlgebroid:
    """Product dy_a • dy_b = D_{dy_a} dy_b restricted to the conormal frame.

    In adapted coordinates the product of constant conormal coordinate forms is
    sum_j (d h_ab / d y_j) dy_j; coisotropy makes the tangential part vanish
    on N, so the table collects the conormal coefficients.
    """
    if not is_coisotropic(n_sub, h):
        raise NotCoisotropic("submanifold is not coisotropic for this bivector")
    frame = adapted_frame(n_sub)
    k, n = n_sub.dim, n_sub.ambient.dim
    m = n - k
    hy = to_adapted_bivector(frame, h)
    chart = induced_chart(frame)
    coords = frame.adapted_chart.coords

    table = []
    for a in range(m):
        plane = []
        for b in range(m):
            row = []
            for j in range(k):
                tangential = _restrict(frame, hy.entries[k + a][k + b].diff(coords[j]))
                if not tangential.is_zero():
                    raise ClosureFailure(
                        f"conormal product left the conormal module at ({a + 1},{b + 1}) along y{j + 1}"
                    )
            for c in range(m):
                row.append(_restrict(frame, hy.entries[k + a][k + b].diff(coords[k + c])))
            plane.append(tuple(row))
        table.append(tuple(plane))
    table = tuple(table)

    anchor = tuple(
        tuple(_restrict(frame, hy.entries[k + a][j]) for j in range(k)) for a in range(m)
    )

    left_ok = all(e.is_zero() for e in _algebroid_associator_residuals(chart, table, anchor))

    fiber_params = None
    anchor_zero = None
    fiber_product = None
    fiber_comm = None
    fiber_assoc = None
    if m > 0:
        if point is None:
            fiber_params = tuple(Fraction(0) for _ in range(k))
        else:
            fiber_params = n_sub.parameters_of(point)
            if fiber_params is None:
                raise PreconditionViolated("designated point does not lie on the submanifold")
        env = dict(zip(chart.coords, fiber_params))
        anchor_zero = all(e.eval_at(env) == 0 for row in anchor for e in row)
        if anchor_zero:
            F = tuple(
                tuple(tuple(table[a][b][c].eval_at(env) for c in range(m)) for b in range(m))
                for a in range(m)
            )
            fiber_product = F
            fiber_comm = all(
                F[a][b][c] == F[b][a][c] for a in range(m) for b in range(m) for c in range(m)
            )
            fiber_assoc = all(
                sum((F[a][b][e] * F[e][c][d] for e in range(m)), Fraction(0))
                == sum((F[b][c][e] * F[a][e][d] for e in range(m)), Fraction(0))
                for a in range(m)
                for b in range(m)
                for c in range(m)
                for d in range(m)
            )
    return ConormalAlgebroid(
        n_sub,
        chart,
        table,
        anchor,
        left_ok,
        fiber_params,
        anchor_zero,
        fiber_product,
        fiber_comm,
        fiber_assoc,
    )


# --- graphs and preimages ------------------------------------------------------


@dataclass(frozen=True)
class GraphReport:
    product: ProductKV
    graph: AffineSubmanifold
    coisotropic: bool
    kv_map: bool

    @property
    def agree(self) -> bool:
        return self.coisotropic == self.kv_map


def graph_submanifold(f: AffineMap, product_chart: Chart) -> AffineSubmanifold:
    n, m = f.source.dim, f.target.dim
    origin = tuple(Fraction(0) for _ in range(n)) + tuple(f.offset)
    basis = []
    for i in range(n):
        e = tuple(Fraction(1 if j == i else 0) for j in range(n))
        col = tuple(f.matrix[r][i] for r in range(m))
        basis.append(e + col)
    return AffineSubmanifold(product_chart, origin, tuple(basis))


def graph_check(f: AffineMap, h1: SymBivector, h2: SymBivector) -> GraphReport:
    """Graph(F) is coisotropic in the sign-flipped product iff F is a K-V map."""
    prod = product_kv(h1, h2, sign=-1)
    graph = graph_submanifold(f, prod.bivector.chart)
    return GraphReport(prod, graph, is_coisotropic(graph, prod.bivector), is_kv_map(f, h1, h2))


def affine_preimage(f: AffineMap, n2: AffineSubmanifold) -> AffineSubmanifold | None:
    """F^{-1}(N2) as an affine subspace of the source chart, or None when empty."""
    if n2.ambient != f.target:
        raise ChartMismatch("submanifold must live on the map's target chart")
    W = linalg.nullspace([list(b) for b in n2.basis], n_cols=f.target.dim)
    if not W:
        return AffineSubmanifold(
            f.source,
            tuple(Fraction(0) for _ in range(f.source.dim)),
            linalg.identity(f.source.dim),
        )
    Wm = linalg.to_mat(W)
    WM = linalg.matmul(Wm, f.matrix)
    rhs = [
        sum((Wm[r][i] * (n2.origin[i] - f.offset[i]) for i in range(f.target.dim)), Fraction(0))
        for r in range(len(W))
    ]
    x0 = linalg.solve(WM, rhs)
    if x0 is None:
        return None
    kernel = linalg.nullspace(WM, n_cols=f.source.dim)
    return AffineSubmanifold(f.source, x0, tuple(kernel))


@dataclass(frozen=True)
class PreimageReport:
    preimage: AffineSubmanifold
    transversal_source: TransversalResult
    transversal_target: TransversalResult
    restriction: AffineMap | None
    induced_source: SymBivector | None
    induced_target: SymBivector | None
    sample_checks: tuple[tuple[tuple[Fraction, ...], bool], ...]

    @property
    def ok(self) -> bool:
        return (
            self.transversal_source.ok
            and self.transversal_target.ok
            and self.restriction is not None
            and all(ok for _, ok in self.sample_checks)
        )


def preimage_transversal(
    f: AffineMap,
    h1: SymBivector,
    h2: SymBivector,
    n2: AffineSubmanifold,
    samples: int = 6,
    seed: int = 42,
) -> PreimageReport:
    """Pull a transversal back along a K-V map and check the induced structures."""
    if not is_kv_map(f, h1, h2):
        raise PreconditionViolated("the map is not a K-V map")
    t2 = is_transversal(n2, h2, samples=samples, seed=seed)
    if not t2.ok:
        raise PreconditionViolated("target submanifold is not a K-V transversal")

    # affine maps have constant differential: transversality to N2 is one rank check
    m = f.target.dim
    stacked = [list(row) for row in linalg.transpose(f.matrix)] + [list(b) for b in n2.basis]
    if linalg.rank(stacked) != m:
        raise NotTransverseAtSample("map is not transverse to the target submanifold")

    n1 = affine_preimage(f, n2)
    if n1 is None:
        raise NotTransverseAtSample("preimage is empty")
    t1 = is_transversal(n1, h1, samples=samples, seed=seed)
    if not t1.ok:
        return PreimageReport(n1, t1, t2, None, None, t2.induced, ())

    # restriction of F in the parameter coordinates of the two submanifolds
    k1, k2 = n1.dim, n2.dim
    cols2 = linalg.transpose(n2.basis) if n2.basis else ()
    off_amb = f.apply(n1.origin)
    t_off = linalg.solve(cols2, [a - b for a, b in zip(off_amb, n2.origin)]) if k2 else ()
    assert t_off is not None
    t_cols = []
    for b in n1.basis:
        img = linalg.matvec(f.matrix, b)
        sol = linalg.solve(cols2, img) if k2 else ()
        assert sol is not None
        t_cols.append(sol)
    mat = linalg.transpose(linalg.to_mat(t_cols)) if t_cols else tuple(tuple() for _ in range(k2))
    restriction = AffineMap(t1.induced.chart, t2.induced.chart, mat, t_off)

    # exact pointwise check of the K-V map identity between the induced structures
    residuals = kv_map_residuals(restriction, t1.induced, t2.induced)
    pts = _sample_parameters(k1, samples, seed + 1)
    checks = []
    for p in pts:
        env = dict(zip(t1.induced.chart.coords, p))
        ok = True
        for row in residuals:
            for e in row:
                try:
                    if e.eval_at(env) != 0:
                        ok = False
                except Exception:
                    pass  # pole of an induced rational entry; skip this term
        checks.append((p, ok))
    return PreimageReport(n1, t1, t2, restriction, t1.induced, t2.induced, tuple(checks))


# --- supporting pointwise checks -----------------------------------------------


@dataclass(frozen=True)
class LeafPointReport:
    point: tuple[Fraction, ...]
    rank: int
    contained: bool


def leaf_openness_check(
    n_sub: AffineSubmanifold, h: SymBivector, points: Sequence[Sequence[Rational]]
) -> list[LeafPointReport]:
    """At each point: rank of sharp and whether its image lies in the tangent space."""
    out = []
    for p in points:
        if not n_sub.contains(p):
            raise PreconditionViolated(f"point {list(p)} does not lie on the submanifold")
        env = dict(zip(n_sub.ambient.coords, (Fraction(q) for q in p)))
        H = tuple(tuple(e.eval_at(env) for e in row) for row in h.entries)
        rk = linalg.rank(H)
        cols = [list(col) for col in H]  # columns of H by symmetry = rows
        base = [list(b) for b in n_sub.basis]
        contained = linalg.rank(base + cols) == linalg.rank(base)
        out.append(LeafPointReport(tuple(Fraction(q) for q in p), rk, contained))
    return out
