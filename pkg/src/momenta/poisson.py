"""Poisson manifolds: Jacobi check, brackets of functions and 1-forms, Poisson actions.

Sign conventions: ``{f, g} = pi(df, dg)`` and ``X_f = pi#(df)`` so that
``X_f(g) = {f, g}``; for ``pi = d/dx ^ d/dy`` this gives ``{x, y} = 1`` and
``X_x = d/dy``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .calculus import (
    BivectorField,
    ChartDomain,
    FormField,
    VectorField,
    contract2,
    exterior_d,
    is_zero_field,
    lie_derivative,
    sharp,
    sup_norm,
    vector_bracket,
    vector_wedge,
)
from .errors import ChartMismatch, DimensionMismatch, NotPoisson
from .polynomial import Poly


def schouten_residual(pi: BivectorField) -> dict[tuple[int, int, int], Poly]:
    """Components J^{ijk} (i<j<k) of the Jacobiator of ``pi``; all zero iff ``pi`` is Poisson.

    J^{ijk} = sum_l pi^{il} d_l pi^{jk} + pi^{jl} d_l pi^{ki} + pi^{kl} d_l pi^{ij},
    which is half the Schouten bracket [pi, pi].
    """
    chart = pi.chart
    m = chart.dim
    grads = {(i, j): pi[i, j].gradient() for i in range(m) for j in range(m) if i < j}

    def dpi(a, b, l):
        if a == b:
            return chart.zero()
        return grads[(a, b)][l] if a < b else -grads[(b, a)][l]

    out = {}
    for i, j, k in itertools.combinations(range(m), 3):
        acc = chart.zero()
        for l in range(m):
            for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                p = pi[a, l]
                if p:
                    q = dpi(b, c, l)
                    if q:
                        acc = acc + p * q
        out[(i, j, k)] = acc
    return out


def default_samples(chart: ChartDomain, n: int = 5) -> np.ndarray:
    return chart.grid(n)


@dataclass(frozen=True, eq=False)
class PoissonManifold:
    chart: ChartDomain
    pi: BivectorField
    checked: bool = True

    def __post_init__(self):
        if not self.pi.chart.same_coords(self.chart):
            raise ChartMismatch("bivector chart differs from manifold chart")
        if self.checked:
            res = schouten_residual(self.pi)
            bad = {k: v for k, v in res.items() if not v.is_zero()}
            if bad:
                k, v = next(iter(bad.items()))
                raise NotPoisson(f"bivector fails the Jacobi identity; J{k} = {v}")

    @property
    def dim(self) -> int:
        return self.chart.dim

    def df(self, f: Poly) -> FormField:
        return exterior_d(FormField.scalar(f, self.chart))


def fn_bracket(f: Poly, g: Poly, M: PoissonManifold) -> Poly:
    """{f, g} = pi(df, dg)."""
    return contract2(M.pi, M.df(f), M.df(g))


def hamiltonian_field(f: Poly, M: PoissonManifold) -> VectorField:
    """X_f = pi#(df); satisfies X_f(g) = {f, g}."""
    return sharp(M.pi, M.df(f))


def oneform_bracket(w1: FormField, w2: FormField, M: PoissonManifold) -> FormField:
    """Koszul bracket [w1, w2]_pi = L_{pi# w1} w2 - L_{pi# w2} w1 - d(pi(w1, w2))."""
    pi = M.pi
    a = lie_derivative(sharp(pi, w1), w2)
    b = lie_derivative(sharp(pi, w2), w1)
    c = exterior_d(FormField.scalar(contract2(pi, w1, w2), M.chart))
    return a - b - c


@dataclass
class ActionResidual:
    """Residuals of an infinitesimal action against a Lie bialgebra."""

    poisson: list[BivectorField]
    homomorphism: dict[tuple[int, int], VectorField]
    antihomomorphism: dict[tuple[int, int], VectorField]

    @property
    def is_poisson(self) -> bool:
        return all(r.is_zero() for r in self.poisson)

    @property
    def is_homomorphism(self) -> bool:
        return all(r.is_zero() for r in self.homomorphism.values())

    @property
    def is_antihomomorphism(self) -> bool:
        return all(r.is_zero() for r in self.antihomomorphism.values())


def cobracket_bivector(X: Sequence[VectorField], b, k: int) -> BivectorField:
    """(X ^ X)(delta(e_k)) = sum_{i<j} d[k][i][j] X_i ^ X_j."""
    chart = X[0].chart
    out = BivectorField.zero(chart)
    for i, j, coef in b.delta_terms(k):
        out = out + vector_wedge(X[i], X[j]) * coef
    return out


def combine_fields(X: Sequence[VectorField], coeffs: Sequence) -> VectorField:
    chart = X[0].chart
    out = VectorField.zero(chart)
    for Xi, c in zip(X, coeffs):
        if c:
            out = out + Xi * c
    return out


def homomorphism_residuals(X: Sequence[VectorField], b) -> tuple[dict, dict]:
    """[X_i, X_j] - X_[e_i,e_j] and [X_i, X_j] + X_[e_i,e_j] for all i < j."""
    n = len(X)
    hom, anti = {}, {}
    for i in range(n):
        for j in range(i + 1, n):
            br = vector_bracket(X[i], X[j])
            target = combine_fields(X, b.c[i][j])
            hom[(i, j)] = br - target
            anti[(i, j)] = br + target
    return hom, anti


def poisson_action_residual(X: Sequence[VectorField], b, M: PoissonManifold) -> ActionResidual:
    """Per basis element: L_{X_k} pi - sum_{i<j} d[k][i][j] X_i ^ X_j, plus (anti)homomorphism residuals."""
    if len(X) != b.dim:
        raise DimensionMismatch(f"{len(X)} vector fields for a {b.dim}-dimensional algebra")
    for Xi in X:
        if not Xi.chart.same_coords(M.chart):
            raise ChartMismatch("vector field chart differs from manifold chart")
    res = [lie_derivative(X[k], M.pi) - cobracket_bivector(X, b, k) for k in range(b.dim)]
    hom, anti = homomorphism_residuals(X, b)
    return ActionResidual(res, hom, anti)


def residual_sup(field_, chart: ChartDomain, n: int = 5) -> float:
    return 0.0 if is_zero_field(field_) else sup_norm(field_, chart.grid(n))
