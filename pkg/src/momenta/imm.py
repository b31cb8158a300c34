"""Infinitesimal momentum maps: axioms, induced fields, gauge action, verification of a full map."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .bialgebra import LieBialgebraData, dual_algebra
from .calculus import (
    ChartDomain,
    FormField,
    VectorField,
    contract2,
    exterior_d,
    pullback,
    sharp,
)
from .errors import ChartMismatch, DimensionMismatch, TruncationWarning
from .group import GroupModel, mc_term
from .poisson import PoissonManifold, homomorphism_residuals, oneform_bracket
from .polynomial import Poly

DEFAULT_TRUNCATION = 8


@dataclass(frozen=True, eq=False)
class AlphaMap:
    manifold: PoissonManifold
    bialgebra: LieBialgebraData
    forms: tuple

    def __post_init__(self):
        if len(self.forms) != self.bialgebra.dim:
            raise DimensionMismatch(f"{len(self.forms)} forms for a {self.bialgebra.dim}-dimensional algebra")
        for f in self.forms:
            if f.degree != 1:
                raise DimensionMismatch("alpha must consist of 1-forms")
            if not f.chart.same_coords(self.manifold.chart):
                raise ChartMismatch("alpha form lives on a different chart")
        object.__setattr__(self, "forms", tuple(self.forms))

    @property
    def chart(self) -> ChartDomain:
        return self.manifold.chart

    @property
    def dim(self) -> int:
        return self.bialgebra.dim

    def combination(self, coeffs: Sequence) -> FormField:
        """alpha evaluated on sum_k coeffs[k] e_k (coefficients may be polynomials)."""
        out = FormField.zero(self.chart, 1)
        for f, c in zip(self.forms, coeffs):
            if c:
                out = out + f * c
        return out

    def with_forms(self, forms) -> "AlphaMap":
        return AlphaMap(self.manifold, self.bialgebra, tuple(forms))


@dataclass(frozen=True, eq=False)
class MomentumCandidate:
    components: tuple
    group: GroupModel
    source: ChartDomain

    def __post_init__(self):
        if len(self.components) != self.group.dim:
            raise DimensionMismatch(f"map has {len(self.components)} components, group dimension {self.group.dim}")
        for p in self.components:
            if p.variables != self.source.coord_names:
                raise ChartMismatch("momentum map components must be written in the manifold coordinates")
        object.__setattr__(self, "components", tuple(self.components))


def mc_residual(alpha: AlphaMap) -> list[FormField]:
    """d alpha_k + (1/2) alpha ^ alpha o delta(e_k)."""
    forms = list(alpha.forms)
    return [exterior_d(forms[k]) + mc_term(forms, alpha.bialgebra, k) for k in range(alpha.dim)]


def bracket_morphism_residual(alpha: AlphaMap) -> dict[tuple[int, int], FormField]:
    """[alpha_i, alpha_j]_pi - alpha_[e_i, e_j] for i < j."""
    n = alpha.dim
    out = {}
    for i in range(n):
        for j in range(i + 1, n):
            br = oneform_bracket(alpha.forms[i], alpha.forms[j], alpha.manifold)
            out[(i, j)] = br - alpha.combination(alpha.bialgebra.c[i][j])
    return out


@dataclass
class InducedFields:
    fields: list
    homomorphism: dict
    antihomomorphism: dict

    @property
    def is_homomorphism(self) -> bool:
        return all(v.is_zero() for v in self.homomorphism.values())

    @property
    def is_antihomomorphism(self) -> bool:
        return all(v.is_zero() for v in self.antihomomorphism.values())


def induced_fields(alpha: AlphaMap) -> InducedFields:
    """X_k = pi#(alpha_k) together with both (anti)homomorphism residuals."""
    X = [sharp(alpha.manifold.pi, f) for f in alpha.forms]
    hom, anti = homomorphism_residuals(X, alpha.bialgebra)
    return InducedFields(X, hom, anti)


def _bracket_with(b: LieBialgebraData, forms: Sequence[FormField], H: Sequence[Poly]) -> list[FormField]:
    """[w, H]_{g*} componentwise: sum_{i,j} w_i H_j d[k][i][j]."""
    n = b.dim
    chart = forms[0].chart
    out = []
    for k in range(n):
        acc = FormField.zero(chart, 1)
        for i in range(n):
            for j in range(n):
                coef = b.d[k][i][j]
                if coef and H[j]:
                    acc = acc + forms[i] * (H[j] * coef)
        out.append(acc)
    return out


def action_fields(alpha: AlphaMap) -> list[VectorField]:
    """Left-action fields X_k = -pi#(alpha_k).

    ``pi#(alpha_k)`` is a Lie algebra homomorphism; the opposite sign gives the
    anti-homomorphism of a left action, for which a Poisson action satisfies
    ``L_{X_k} pi = sum_{i<j} d[k][i][j] X_i ^ X_j``.
    """
    return [-sharp(alpha.manifold.pi, f) for f in alpha.forms]


def gauge_transform(alpha: AlphaMap, H: Sequence[Poly], truncation: int | None = None) -> AlphaMap:
    """alpha' = exp(ad H)(alpha) + int_0^1 exp(t ad H)(dH) dt, with ad H(w) = [w, H] in g*.

    The series is summed term by term: ``sum_k (ad H)^k alpha / k!`` plus
    ``sum_k (ad H)^k dH / (k+1)!``. When g* is nilpotent of class ``s``,
    ``(ad H)^s = 0`` and the default truncation makes the result exact.
    """
    b = alpha.bialgebra
    n = b.dim
    if len(H) != n:
        raise DimensionMismatch(f"H needs {n} components")
    chart = alpha.chart
    for h in H:
        if h.variables != chart.coord_names:
            raise ChartMismatch("H must be written in the manifold coordinates")
    nil = dual_algebra(b).nilpotency_class()
    if truncation is None:
        truncation = nil if nil is not None else DEFAULT_TRUNCATION
    if nil is None or truncation < nil:
        warnings.warn(f"gauge series truncated after {truncation} terms", TruncationWarning, stacklevel=2)
    dH = [exterior_d(FormField.scalar(h, chart)) for h in H]
    result = [FormField.zero(chart, 1) for _ in range(n)]
    term_a = list(alpha.forms)
    term_h = dH
    for k in range(truncation):
        fa = Fraction(1, math.factorial(k))
        fh = Fraction(1, math.factorial(k + 1))
        result = [r + a * fa + h * fh for r, a, h in zip(result, term_a, term_h)]
        term_a = _bracket_with(b, term_a, H)
        term_h = _bracket_with(b, term_h, H)
        if all(f.is_zero() for f in term_a) and all(f.is_zero() for f in term_h):
            break
    return alpha.with_forms(result)


def pullback_alpha(mu: MomentumCandidate, manifold: PoissonManifold) -> AlphaMap:
    """alpha_k = mu^* theta_k."""
    G = mu.group
    forms = [pullback(th, list(mu.components), manifold.chart) for th in G.thetas()]
    return AlphaMap(manifold, G.bialgebra, tuple(forms))


@dataclass
class MomentumVerification:
    alpha: AlphaMap
    field_residuals: list          # X_k - pi#(alpha_k)
    poisson_residuals: dict        # pi(alpha_i, alpha_j) - pi_dual(theta_i, theta_j) o mu
    alpha_residuals: list | None   # alpha - alpha_expected

    @property
    def fields_match(self) -> bool:
        return all(r.is_zero() for r in self.field_residuals)

    @property
    def is_poisson_map(self) -> bool:
        return all(r.is_zero() for r in self.poisson_residuals.values())

    @property
    def alpha_matches(self) -> bool | None:
        if self.alpha_residuals is None:
            return None
        return all(r.is_zero() for r in self.alpha_residuals)


def momentum_verify(mu: MomentumCandidate, manifold: PoissonManifold, X: Sequence[VectorField] | None = None,
                    alpha_expected: AlphaMap | None = None) -> MomentumVerification:
    """Check X_k = pi#(mu^* theta_k) and whether ``mu`` is a Poisson map."""
    alpha = pullback_alpha(mu, manifold)
    G = mu.group
    n = G.dim
    pi = manifold.pi
    induced = [sharp(pi, f) for f in alpha.forms]
    if X is None:
        X = induced
    if len(X) != n:
        raise DimensionMismatch(f"{len(X)} fields for a {n}-dimensional algebra")
    field_res = [x - y for x, y in zip(X, induced)]
    th = G.thetas()
    images = list(mu.components)
    poisson_res = {}
    for i in range(n):
        for j in range(i + 1, n):
            lhs = contract2(pi, alpha.forms[i], alpha.forms[j])
            rhs = contract2(G.pi_dual, th[i], th[j]).substitute(images)
            poisson_res[(i, j)] = lhs - rhs
    alpha_res = None
    if alpha_expected is not None:
        alpha_res = [a - e for a, e in zip(alpha.forms, alpha_expected.forms)]
    return MomentumVerification(alpha, field_res, poisson_res, alpha_res)
