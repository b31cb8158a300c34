"""Lie algebra and Lie bialgebra structure constants with exact consistency checks.

Conventions
-----------
``c[i][j][k]`` is the coefficient of ``e_k`` in ``[e_i, e_j]``.
``d[k][i][j]`` is the coefficient of ``e_i ^ e_j`` (``i < j``) in ``delta(e_k)``,
stored antisymmetrically in ``(i, j)``.  Transposing gives the bracket of the
dual algebra: ``[e^i, e^j] = sum_k d[k][i][j] e^k``.

The coadjoint action of the dual on the algebra is fixed by::

    <ad*_x xi, y> = <xi, [y, x]>      (x, y in g*, xi in g)

i.e. ``ad*_x = -(ad_x)^T``.  With this sign the Lie derivative of a left
invariant coframe along the left invariant field of ``x`` is
``L_X theta_xi = theta_{ad*_x xi}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, InvalidBialgebra
from .linalg import rank, span_basis
from .parser import parse_poly
from .polynomial import as_fraction


def _zeros3(n):
    return [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]


def _freeze3(a):
    return tuple(tuple(tuple(as_fraction(x) for x in row) for row in mat) for mat in a)


def _check_shape(a, n, what):
    if len(a) != n or any(len(m) != n or any(len(r) != n for r in m) for m in a):
        raise DimensionMismatch(f"{what} must have shape {n}x{n}x{n}")


@dataclass(frozen=True)
class LieAlgebraData:
    dim: int
    basis_names: tuple[str, ...]
    c: tuple

    def __post_init__(self):
        n = self.dim
        if n < 1:
            raise DimensionMismatch("dimension must be positive")
        names = tuple(self.basis_names) if self.basis_names else tuple(f"e{i + 1}" for i in range(n))
        if len(names) != n:
            raise DimensionMismatch(f"{len(names)} basis names for dimension {n}")
        object.__setattr__(self, "basis_names", names)
        _check_shape(self.c, n, "structure constants")
        c = _freeze3(self.c)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if c[i][j][k] != -c[j][i][k]:
                        raise InvalidBialgebra(
                            f"bracket not antisymmetric: c[{i}][{j}][{k}] = {c[i][j][k]}, "
                            f"c[{j}][{i}][{k}] = {c[j][i][k]}")
        object.__setattr__(self, "c", c)

    @classmethod
    def abelian(cls, n: int, names: Sequence[str] | None = None) -> "LieAlgebraData":
        return cls(n, tuple(names or ()), _zeros3(n))

    @classmethod
    def from_brackets(cls, names: Sequence[str], brackets: Sequence[str]) -> "LieAlgebraData":
        """Build from sparse relations like ``"[e1, e3] = e2 - 1/2*e1"``; antisymmetrises and fills zeros."""
        names = tuple(names)
        n = len(names)
        c = _zeros3(n)
        for rel in brackets:
            (i, j), coeffs = parse_bracket_relation(rel, names)
            for k, v in enumerate(coeffs):
                c[i][j][k] = v
                c[j][i][k] = -v
        return cls(n, names, c)

    def bracket(self, x: Sequence, y: Sequence) -> list[Fraction]:
        n = self.dim
        out = [Fraction(0)] * n
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j]:
                    continue
                f = x[i] * y[j]
                for k in range(n):
                    if self.c[i][j][k]:
                        out[k] += f * self.c[i][j][k]
        return out

    def ad(self, x: Sequence) -> list[list[Fraction]]:
        """Matrix of ad_x: column a holds [x, e_a]."""
        n = self.dim
        return [[sum((x[i] * self.c[i][a][p] for i in range(n)), Fraction(0)) for a in range(n)]
                for p in range(n)]

    def is_abelian(self) -> bool:
        return all(v == 0 for m in self.c for r in m for v in r)

    def derived_span(self) -> list[list[Fraction]]:
        """Row-reduced basis of [g, g]."""
        n = self.dim
        return span_basis([list(self.c[i][j]) for i in range(n) for j in range(i + 1, n)])

    def nilpotency_class(self) -> int | None:
        """Smallest k with g^(k+1) = 0 in the lower central series, or None if not nilpotent."""
        n = self.dim
        current = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        k = 0
        while current:
            nxt = span_basis([self.bracket(e, v) for e in _unit_vectors(n) for v in current])
            k += 1
            if not nxt:
                return k
            if len(nxt) == len(current):
                return None
            current = nxt
        return k


def _unit_vectors(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


_BRACKET_RE = re.compile(r"^\s*\[\s*([^,\]]+?)\s*,\s*([^\]]+?)\s*\]\s*=\s*(.+)$")


def parse_linear_combination(text: str, names: Sequence[str]) -> list[Fraction]:
    p = parse_poly(text, names)
    if p.degree() > 1 or p.constant_term() != 0:
        raise InvalidBialgebra(f"{text!r} is not a linear combination of {list(names)}")
    n = len(names)
    return [p.coeff(tuple(int(i == k) for i in range(n))) for k in range(n)]


def parse_bracket_relation(text: str, names: Sequence[str]):
    m = _BRACKET_RE.match(text)
    if not m:
        raise InvalidBialgebra(f"cannot read bracket relation {text!r}; expected '[a, b] = ...'")
    a, b, rhs = m.groups()
    for nm in (a, b):
        if nm not in names:
            raise InvalidBialgebra(f"unknown basis element {nm!r} in {text!r}")
    i, j = names.index(a), names.index(b)
    if i == j:
        raise InvalidBialgebra(f"bracket of {a!r} with itself must vanish: {text!r}")
    return (i, j), parse_linear_combination(rhs, names)


@dataclass(frozen=True)
class LieBialgebraData:
    algebra: LieAlgebraData
    d: tuple
    dual_names: tuple[str, ...] = ()

    def __post_init__(self):
        n = self.algebra.dim
        _check_shape(self.d, n, "cobracket constants")
        d = _freeze3(self.d)
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    if d[k][i][j] != -d[k][j][i]:
                        raise InvalidBialgebra(f"cobracket not antisymmetric at d[{k}][{i}][{j}]")
        object.__setattr__(self, "d", d)
        names = tuple(self.dual_names) if self.dual_names else tuple(
            f"{nm}*" for nm in self.algebra.basis_names)
        if len(names) != n:
            raise DimensionMismatch("dual basis names do not match dimension")
        object.__setattr__(self, "dual_names", names)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def c(self):
        return self.algebra.c

    @classmethod
    def trivial(cls, algebra: LieAlgebraData, dual_names=()) -> "LieBialgebraData":
        return cls(algebra, _zeros3(algebra.dim), tuple(dual_names))

    @classmethod
    def from_dual_brackets(cls, algebra: LieAlgebraData, dual_names: Sequence[str],
                           dual_brackets: Sequence[str]) -> "LieBialgebraData":
        """Cobracket given through the dual algebra, e.g. ``"[x, y] = z"``."""
        dual = LieAlgebraData.from_brackets(dual_names, dual_brackets)
        n = algebra.dim
        if dual.dim != n:
            raise DimensionMismatch(f"dual has dimension {dual.dim}, algebra {n}")
        d = _zeros3(n)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    d[k][i][j] = dual.c[i][j][k]
        return cls(algebra, d, tuple(dual_names))

    def delta_terms(self, k: int) -> list[tuple[int, int, Fraction]]:
        """Nonzero terms (i, j, coeff), i < j, of delta(e_k)."""
        n = self.dim
        return [(i, j, self.d[k][i][j]) for i in range(n) for j in range(i + 1, n) if self.d[k][i][j]]

    def is_trivial(self) -> bool:
        return all(v == 0 for m in self.d for r in m for v in r)


def check_jacobi(alg: LieAlgebraData) -> Fraction:
    """Largest absolute Jacobi violation over all (i, j, k, l); zero iff Jacobi holds."""
    n = alg.dim
    c = alg.c
    _check_shape(c, n, "structure constants")
    worst = Fraction(0)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    s = Fraction(0)
                    for m in range(n):
                        s += c[i][j][m] * c[m][k][l] + c[j][k][m] * c[m][i][l] + c[k][i][m] * c[m][j][l]
                    if abs(s) > worst:
                        worst = abs(s)
    return worst


def _delta_matrix(b: LieBialgebraData, x: Sequence) -> list[list[Fraction]]:
    """Antisymmetric matrix W of delta(x) = sum_{a<b} W[a][b] e_a ^ e_b."""
    n = b.dim
    return [[sum((x[k] * b.d[k][a][bb] for k in range(n)), Fraction(0)) for bb in range(n)]
            for a in range(n)]


def _ad_on_wedge2(A, W):
    # ad_x(sum W_ab e_a ^ e_b) has matrix A W + W A^T
    n = len(W)
    return [[sum((A[a][p] * W[p][q] for p in range(n)), Fraction(0))
             + sum((W[a][p] * A[q][p] for p in range(n)), Fraction(0))
             for q in range(n)] for a in range(n)]


def cocycle_defect(b: LieBialgebraData, i: int, j: int) -> list[list[Fraction]]:
    """delta([e_i, e_j]) - ad_{e_i} delta(e_j) + ad_{e_j} delta(e_i) as an antisymmetric matrix."""
    n = b.dim
    alg = b.algebra
    ei = [Fraction(int(k == i)) for k in range(n)]
    ej = [Fraction(int(k == j)) for k in range(n)]
    lhs = _delta_matrix(b, alg.bracket(ei, ej))
    t1 = _ad_on_wedge2(alg.ad(ei), _delta_matrix(b, ej))
    t2 = _ad_on_wedge2(alg.ad(ej), _delta_matrix(b, ei))
    return [[lhs[a][q] - t1[a][q] + t2[a][q] for q in range(n)] for a in range(n)]


def check_cocycle(b: LieBialgebraData) -> Fraction:
    """Largest absolute violation of the 1-cocycle condition for delta."""
    n = b.dim
    _check_shape(b.d, n, "cobracket constants")
    worst = Fraction(0)
    for i in range(n):
        for j in range(i + 1, n):
            defect = cocycle_defect(b, i, j)
            for row in defect:
                for v in row:
                    if abs(v) > worst:
                        worst = abs(v)
    return worst


def dual_algebra(b: LieBialgebraData) -> LieAlgebraData:
    """Lie algebra on g* whose constants are the transposed cobracket."""
    n = b.dim
    cstar = [[[b.d[k][i][j] for k in range(n)] for j in range(n)] for i in range(n)]
    alg = LieAlgebraData(n, b.dual_names, cstar)
    residual = check_jacobi(alg)
    if residual:
        raise InvalidBialgebra(f"dual bracket violates Jacobi (residual {residual})")
    return alg


def coadjoint(b: LieBialgebraData, x: Sequence, xi: Sequence) -> list:
    """ad*_x xi in g, defined by <ad*_x xi, y> = <xi, [y, x]_{g*}>.

    Bilinear in ``x`` and ``xi``. Entries may be rationals or :class:`Poly`
    (the latter is used for pointwise evaluation along a map into g*).
    """
    n = b.dim
    if len(x) != n or len(xi) != n:
        raise DimensionMismatch(f"expected vectors of length {n}")
    out = []
    for l in range(n):
        acc = 0
        # [e^l, e^i] = sum_k d[k][l][i] e^k ; <xi, [e^l, x]> = sum_{i,k} x_i xi_k d[k][l][i]
        for i in range(n):
            if not _nonzero(x[i]):
                continue
            for k in range(n):
                coef = b.d[k][l][i]
                if coef and _nonzero(xi[k]):
                    acc = acc + x[i] * xi[k] * coef
        out.append(acc if not isinstance(acc, int) else Fraction(acc))
    return out


def _nonzero(v) -> bool:
    return bool(v)


def dual_bracket(b: LieBialgebraData, x: Sequence, y: Sequence) -> list:
    """[x, y] in g* computed from the cobracket; entries may be polynomials."""
    n = b.dim
    out = []
    for k in range(n):
        acc = 0
        for i in range(n):
            if not _nonzero(x[i]):
                continue
            for j in range(n):
                coef = b.d[k][i][j]
                if coef and _nonzero(y[j]):
                    acc = acc + x[i] * y[j] * coef
        out.append(acc if not isinstance(acc, int) else Fraction(acc))
    return out


def rank_of_derived(alg: LieAlgebraData) -> int:
    return len(alg.derived_span())


def heisenberg_dual_bialgebra() -> LieBialgebraData:
    """g = R x| R^2 (rotation type) with g* the Heisenberg algebra [x, y] = z."""
    alg = LieAlgebraData.from_brackets(("xi", "eta", "zeta"), ["[xi, zeta] = eta", "[eta, zeta] = -xi"])
    return LieBialgebraData.from_dual_brackets(alg, ("x", "y", "z"), ["[x, y] = z"])


__all__ = [
    "LieAlgebraData",
    "LieBialgebraData",
    "check_jacobi",
    "check_cocycle",
    "cocycle_defect",
    "dual_algebra",
    "coadjoint",
    "dual_bracket",
    "heisenberg_dual_bialgebra",
    "parse_bracket_relation",
    "parse_linear_combination",
    "rank",
]
