"""Commutative associative algebras with scalar 2-cocycles and their dual K-V structures.

The dual of such an algebra carries an affine symmetric bivector
h_ij = b_ij + sum_k C^k_ij x_k whose Codazzi defect vanishes identically;
validated algebras double as a generator of exact K-V corpus instances.
The cocycle condition used throughout is B(u.v, w) = B(u, v.w), which is
what makes sum_k h_ik C^k_jm symmetric in (i, j).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .errors import InvalidAlgebra, InvalidSubspace
from .geometry import Chart, SymBivector
from .structures import AffineSubmanifold
from .symexpr import Expr, Rational


@dataclass(frozen=True)
class AlgebraSpec:
    """Structure constants C^k_ij (e_i . e_j = sum_k C^k_ij e_k) and cocycle b_ij."""

    dim: int
    product: tuple[tuple[tuple[Fraction, ...], ...], ...]  # indexed [i][j][k]
    cocycle: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_sparse(
        cls,
        dim: int,
        product: Mapping[tuple[int, int, int], Rational] | None = None,
        cocycle: Mapping[tuple[int, int], Rational] | None = None,
    ) -> "AlgebraSpec":
        """Build from 0-based sparse entries; (i,j,k) and (j,i,k) are both set."""
        C = [[[Fraction(0) for _ in range(dim)] for _ in range(dim)] for _ in range(dim)]
        for (i, j, k), q in (product or {}).items():
            C[i][j][k] = Fraction(q)
            C[j][i][k] = Fraction(q)
        b = [[Fraction(0) for _ in range(dim)] for _ in range(dim)]
        for (i, j), q in (cocycle or {}).items():
            b[i][j] = Fraction(q)
            b[j][i] = Fraction(q)
        return cls(dim, tuple(tuple(tuple(r) for r in p) for p in C), tuple(tuple(r) for r in b))

    def multiply(self, u: Sequence[Rational], v: Sequence[Rational]) -> tuple[Fraction, ...]:
        n = self.dim
        out = [Fraction(0)] * n
        for i in range(n):
            if not u[i]:
                continue
            for j in range(n):
                if not v[j]:
                    continue
                for k in range(n):
                    out[k] += Fraction(u[i]) * Fraction(v[j]) * self.product[i][j][k]
        return tuple(out)


@dataclass(frozen=True)
class AlgebraReport:
    commutative: bool
    associative: bool
    cocycle_symmetric: bool
    cocycle_ok: bool
    witness: tuple[int, ...] | None  # 1-based indices of the first violated law

    @property
    def valid(self) -> bool:
        return self.commutative and self.associative and self.cocycle_symmetric and self.cocycle_ok


def validate_algebra(a: AlgebraSpec) -> AlgebraReport:
    """Exact verdicts for commutativity, associativity and the cocycle law."""
    n = a.dim
    C = a.product
    b = a.cocycle
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                if C[i][j][k] != C[j][i][k]:
                    return AlgebraReport(False, False, False, False, (i + 1, j + 1, k + 1))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    lhs = sum((C[i][j][m] * C[m][k][l] for m in range(n)), Fraction(0))
                    rhs = sum((C[j][k][m] * C[i][m][l] for m in range(n)), Fraction(0))
                    if lhs != rhs:
                        return AlgebraReport(True, False, True, True, (i + 1, j + 1, k + 1))
    for i in range(n):
        for j in range(i + 1, n):
            if b[i][j] != b[j][i]:
                return AlgebraReport(True, True, False, False, (i + 1, j + 1))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = sum((C[i][j][m] * b[m][k] for m in range(n)), Fraction(0))
                rhs = sum((C[j][k][m] * b[i][m] for m in range(n)), Fraction(0))
                if lhs != rhs:
                    return AlgebraReport(True, True, True, False, (i + 1, j + 1, k + 1))
    return AlgebraReport(True, True, True, True, None)


def dual_chart(a: AlgebraSpec, name: str = "dual") -> Chart:
    return Chart(name, tuple(f"x{i + 1}" for i in range(a.dim)))


def algebra_to_kv(a: AlgebraSpec, chart: Chart | None = None) -> SymBivector:
    """Affine K-V bivector on the dual chart: h_ij = b_ij + sum_k C^k_ij x_k."""
    report = validate_algebra(a)
    if not report.valid:
        raise InvalidAlgebra(f"algebra laws violated at basis indices {report.witness}")
    chart = chart if chart is not None else dual_chart(a)
    if chart.dim != a.dim:
        raise InvalidAlgebra("chart dimension does not match the algebra")
    n = a.dim
    xs = [Expr.var(v) for v in chart.coords]
    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            e = Expr.const(a.cocycle[i][j])
            for k in range(n):
                if a.product[i][j][k]:
                    e = e + Expr.const(a.product[i][j][k]) * xs[k]
            row.append(e)
        entries.append(tuple(row))
    return SymBivector(chart, tuple(entries))


@dataclass(frozen=True)
class SubspaceSpec:
    algebra: AlgebraSpec
    basis: tuple[tuple[Fraction, ...], ...]
    kind: str  # "subalgebra" | "ideal"

    def __post_init__(self):
        if self.kind not in ("subalgebra", "ideal"):
            raise ValueError("kind must be 'subalgebra' or 'ideal'")
        object.__setattr__(self, "basis", linalg.to_mat(self.basis))


def validate_subspace(s: SubspaceSpec) -> bool:
    """Exact closure check: subalgebras absorb their own products, ideals all of them."""
    a = s.algebra
    n = a.dim
    rows = [list(v) for v in s.basis]
    if linalg.rank(rows) != len(rows):
        return False

    def in_span(v):
        return linalg.solve(linalg.transpose(linalg.to_mat(rows)), v) is not None if rows else all(x == 0 for x in v)

    gens = list(s.basis)
    others = gens if s.kind == "subalgebra" else [tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)]
    for u in gens:
        for v in others:
            if not in_span(a.multiply(u, v)):
                return False
    return True


def annihilator_submanifold(s: SubspaceSpec, chart: Chart | None = None) -> AffineSubmanifold:
    """S° = {alpha : alpha|_S = 0} as an affine subspace of the dual chart through 0."""
    if not validate_subspace(s):
        raise InvalidSubspace(f"basis does not span a {s.kind}")
    a = s.algebra
    chart = chart if chart is not None else dual_chart(a)
    if chart.dim != a.dim:
        raise InvalidSubspace("chart dimension does not match the algebra")
    basis = linalg.nullspace([list(v) for v in s.basis], n_cols=a.dim)
    origin = tuple(Fraction(0) for _ in range(a.dim))
    return AffineSubmanifold(chart, origin, tuple(basis))


# --- deterministic corpus generation ----------------------------------------


def _random_fraction(rng: random.Random, scale: int = 2) -> Fraction:
    den = rng.randint(1, 3)
    num = rng.randint(-scale * den, scale * den)
    return Fraction(num, den)


def random_algebra(rng: random.Random, dim: int) -> AlgebraSpec:
    """Random valid algebra: block sums of idempotent lines and truncated
    nilpotent chains, conjugated by a random invertible rational matrix."""
    blocks: list[int] = []
    remaining = dim
    while remaining > 0:
        size = rng.randint(1, remaining)
        blocks.append(size)
        remaining -= size
    C = [[[Fraction(0) for _ in range(dim)] for _ in range(dim)] for _ in range(dim)]
    offset = 0
    for size in blocks:
        if size == 1 and rng.random() < 0.5:
            if rng.random() < 0.7:
                C[offset][offset][offset] = Fraction(1)  # idempotent line
        else:
            # chain e_a e_b = e_{a+b+1} while inside the block (nilpotent truncation)
            for aa in range(size):
                for bb in range(size):
                    cc = aa + bb + 1
                    if cc < size:
                        C[offset + aa][offset + bb][offset + cc] = Fraction(1)
        offset += size

    # conjugate by a random invertible P: new constants of the pushed-forward product
    while True:
        P = [[_random_fraction(rng, 1) for _ in range(dim)] for _ in range(dim)]
        Pinv = linalg.inverse(P)
        if Pinv is not None:
            break
    base = AlgebraSpec(dim, tuple(tuple(tuple(r) for r in p) for p in C), tuple(tuple(Fraction(0) for _ in range(dim)) for _ in range(dim)))
    cols = linalg.transpose(linalg.to_mat(P))  # image of basis vectors
    newC = [[[Fraction(0) for _ in range(dim)] for _ in range(dim)] for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            prod = base.multiply(cols[i], cols[j])
            coeffs = linalg.matvec(Pinv, prod)
            for k in range(dim):
                newC[i][j][k] = coeffs[k]

    # cocycle from a random linear functional tau: B(u, v) = tau(u.v)
    tau = [_random_fraction(rng, 2) for _ in range(dim)]
    b = [[Fraction(0) for _ in range(dim)] for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            b[i][j] = sum((newC[i][j][k] * tau[k] for k in range(dim)), Fraction(0))
    return AlgebraSpec(
        dim,
        tuple(tuple(tuple(r) for r in p) for p in newC),
        tuple(tuple(r) for r in b),
    )
