"""First-order deformations of a momentum map.

A deformation ``mu_t = mu exp(t H + O(t^2))`` is described by ``H: M -> g*``
with components ``H_i = <H, e_i>``.  It keeps the action fixed iff

    X_i H_j - X_j H_i - H([e_i, e_j]) = 0
    X_{H_i} + sum_l (ad*_H e_i)_l X_l = 0

where ``X_i = pi#(alpha_i)``.  The forms ``beta_i = alpha_{ad*_H e_i} + dH_i``
are the t-derivative of ``mu_t^* theta_i`` at ``t = 0``, so the second identity
reads ``pi#(beta_i) = 0``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .bialgebra import coadjoint
from .calculus import FormField, VectorField, exterior_d, sharp
from .errors import ChartMismatch, DimensionMismatch
from .imm import AlphaMap
from .linalg import solve
from .poisson import combine_fields, fn_bracket, hamiltonian_field
from .polynomial import Poly


@dataclass(frozen=True, eq=False)
class DeformationCandidate:
    H: tuple
    context: AlphaMap

    def __post_init__(self):
        if len(self.H) != self.context.dim:
            raise DimensionMismatch(f"H has {len(self.H)} components, algebra dimension {self.context.dim}")
        for h in self.H:
            if h.variables != self.context.chart.coord_names:
                raise ChartMismatch("H must be written in the manifold coordinates")
        object.__setattr__(self, "H", tuple(self.H))


@dataclass
class DeformationResidual:
    r1: dict          # (i, j) -> Poly
    r2: list          # VectorField per basis element

    @property
    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.r1.values()) and all(v.is_zero() for v in self.r2)

    @property
    def r1_zero(self) -> bool:
        return all(p.is_zero() for p in self.r1.values())

    @property
    def r2_zero(self) -> bool:
        return all(v.is_zero() for v in self.r2)


def _unit(n: int, i: int) -> list[Fraction]:
    e = [Fraction(0)] * n
    e[i] = Fraction(1)
    return e


def _fields(ctx: AlphaMap) -> list[VectorField]:
    return [sharp(ctx.manifold.pi, f) for f in ctx.forms]


def coadjoint_field(D: DeformationCandidate, i: int) -> list[Poly]:
    """Components of ad*_{H(m)} e_i as polynomials in m."""
    return coadjoint(D.context.bialgebra, list(D.H), _unit(D.context.dim, i))


def deformation_residual(D: DeformationCandidate) -> DeformationResidual:
    ctx = D.context
    b = ctx.bialgebra
    n = ctx.dim
    X = _fields(ctx)
    r1 = {}
    for i in range(n):
        for j in range(i + 1, n):
            r = X[i](D.H[j]) - X[j](D.H[i])
            for k in range(n):
                if b.c[i][j][k]:
                    r = r - D.H[k] * b.c[i][j][k]
            r1[(i, j)] = r
    r2 = []
    for i in range(n):
        ad = coadjoint_field(D, i)
        r2.append(hamiltonian_field(D.H[i], ctx.manifold) + combine_fields(X, ad))
    return DeformationResidual(r1, r2)


def beta_forms(D: DeformationCandidate) -> list[FormField]:
    """beta_i = alpha_{ad*_H e_i} + dH_i."""
    ctx = D.context
    out = []
    for i in range(ctx.dim):
        dh = exterior_d(FormField.scalar(D.H[i], ctx.chart))
        out.append(ctx.combination(coadjoint_field(D, i)) + dh)
    return out


def beta_crosscheck(D: DeformationCandidate, residual: DeformationResidual | None = None) -> list[VectorField]:
    """pi#(beta_i) - r2_i; identically zero by construction."""
    residual = residual or deformation_residual(D)
    return [sharp(D.context.manifold.pi, b) - r for b, r in zip(beta_forms(D), residual.r2)]


@dataclass
class HamiltonianDeformation:
    candidate: DeformationCandidate
    Phi: Poly
    probe: Poly
    commutation: list     # X_i{Phi, f} - {Phi, X_i f} per basis element


def random_probe(chart, seed: int, degree: int = 3) -> Poly:
    """Seeded random polynomial with small integer coefficients."""
    rng = random.Random(seed)
    f = chart.zero()
    m = chart.dim
    for _ in range(6):
        exps = [0] * m
        for _ in range(rng.randint(0, degree)):
            exps[rng.randrange(m)] += 1
        term = Poly(chart.coord_names, {tuple(exps): Fraction(rng.randint(-5, 5))})
        f = f + term
    return f


def hamiltonian_deformation(Phi: Poly, ctx: AlphaMap, seed: int = 0) -> HamiltonianDeformation:
    """H_i = X_i Phi, together with the commutation residual on a seeded probe function."""
    if Phi.variables != ctx.chart.coord_names:
        raise ChartMismatch("Phi must be written in the manifold coordinates")
    X = _fields(ctx)
    H = tuple(x(Phi) for x in X)
    M = ctx.manifold
    f = random_probe(ctx.chart, seed)
    comm = [x(fn_bracket(Phi, f, M)) - fn_bracket(Phi, x(f), M) for x in X]
    return HamiltonianDeformation(DeformationCandidate(H, ctx), Phi, f, comm)


def find_potential(H: Sequence[Poly], ctx: AlphaMap, max_degree: int = 4) -> Poly | None:
    """Heuristic: look for Phi of degree <= max_degree with X_i Phi = H_i (exact linear solve).

    Returns ``None`` when no polynomial of that degree works; this says
    nothing about potentials of higher degree or non-polynomial ones.
    """
    chart = ctx.chart
    m = chart.dim
    monos = []

    def rec(prefix, left):
        if len(prefix) == m:
            monos.append(tuple(prefix))
            return
        for e in range(left + 1):
            rec(prefix + [e], left - e)

    rec([], max_degree)
    monos = [e for e in monos if sum(e) > 0]
    X = _fields(ctx)
    images = [[x(Poly(chart.coord_names, {e: Fraction(1)})) for e in monos] for x in X]
    keys = sorted({k for row in images for p in row for k in p.terms}
                  | {k for h in H for k in h.terms})
    rows, rhs = [], []
    for i, row in enumerate(images):
        for k in keys:
            rows.append([p.coeff(k) for p in row])
            rhs.append(H[i].coeff(k))
    sol = solve(rows, rhs, len(monos))
    if sol is None:
        return None
    x, _ = sol
    return Poly(chart.coord_names, {e: v for e, v in zip(monos, x) if v})
