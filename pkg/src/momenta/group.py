"""Dual Poisson-Lie groups in exponential coordinates.

A :class:`GroupModel` holds a polynomial group law ``u . v`` (identity at the
origin), the left invariant coframe ``theta`` (row ``k`` is ``theta_{e_k}``),
the multiplicative bivector ``pi_dual`` and the Lie bialgebra whose dual the
group integrates.

The group law is written over ``2n`` variables: the chart coordinates for the
left factor followed by the same names with a trailing ``'`` for the right
factor.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bialgebra import (
    LieAlgebraData,
    LieBialgebraData,
    coadjoint,
    heisenberg_dual_bialgebra,
)
from .calculus import (
    BivectorField,
    ChartDomain,
    FormField,
    VectorField,
    contract2,
    exterior_d,
    sharp,
    wedge,
)
from .errors import (
    AmbiguousSolution,
    ChartMismatch,
    DimensionMismatch,
    NoSolutionAtDegree,
    NonInvertibleFrame,
)
from .linalg import solve
from .poisson import PoissonManifold, homomorphism_residuals, oneform_bracket, schouten_residual
from .polynomial import Poly


def primed(names: Sequence[str]) -> tuple[str, ...]:
    return tuple(f"{n}'" for n in names)


def law_variables(chart: ChartDomain) -> tuple[str, ...]:
    return chart.coord_names + primed(chart.coord_names)


def _left(chart: ChartDomain) -> list[Poly]:
    """Chart coordinates as polynomials in the 2n law variables (left factor)."""
    return [Poly.var(law_variables(chart), i) for i in range(chart.dim)]


def _right(chart: ChartDomain) -> list[Poly]:
    n = chart.dim
    return [Poly.var(law_variables(chart), n + i) for i in range(n)]


def determinant(M: Sequence[Sequence[Poly]]) -> Poly:
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = None
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * determinant(minor)
        term = term if j % 2 == 0 else -term
        total = term if total is None else total + term
    return total if total is not None else M[0][0] - M[0][0]


def adjugate(M: Sequence[Sequence[Poly]]) -> list[list[Poly]]:
    n = len(M)
    if n == 1:
        return [[M[0][0] - M[0][0] + 1]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(M) if k != i]
            cof = determinant(minor)
            adj[j][i] = cof if (i + j) % 2 == 0 else -cof
    return adj


def left_translation_differential(chart: ChartDomain, mult: Sequence[Poly]) -> list[list[Poly]]:
    """J(u)[i][j] = d(u.v)_i / dv_j at v = 0; column j is the left invariant field of e^j."""
    n = chart.dim
    coords = [chart.coord(i) for i in range(n)]
    zero = chart.zero()
    # restrict to v = 0 after differentiating in the right factor
    images = coords + [zero] * n
    return [[mult[i].diff(n + j).substitute(images) for j in range(n)] for i in range(n)]


def derive_coframe(chart: ChartDomain, mult: Sequence[Poly]) -> list[list[Poly]]:
    """Left invariant coframe as the inverse of the left-translation differential at the identity.

    Raises :class:`NonInvertibleFrame` unless that differential has a nonzero
    constant determinant (so that the inverse is polynomial).
    """
    J = left_translation_differential(chart, mult)
    det = determinant(J)
    if det.is_zero() or not det.is_constant():
        raise NonInvertibleFrame(f"left-translation differential has determinant {det}; "
                                 "supply the coframe explicitly")
    inv = 1 / det.constant_term()
    return [[p * inv for p in row] for row in adjugate(J)]


@dataclass(frozen=True, eq=False)
class GroupModel:
    chart: ChartDomain
    mult: tuple
    coframe: tuple | None
    pi_dual: BivectorField
    bialgebra: LieBialgebraData
    kind: str = "custom"
    frame: tuple | None = field(default=None)

    def __post_init__(self):
        n = self.chart.dim
        if self.bialgebra.dim != n:
            raise DimensionMismatch(f"group of dimension {n} but bialgebra of dimension {self.bialgebra.dim}")
        if len(self.mult) != n:
            raise DimensionMismatch(f"group law has {len(self.mult)} components, expected {n}")
        lv = law_variables(self.chart)
        for p in self.mult:
            if p.variables != lv:
                raise ChartMismatch(f"group law must be written over {lv}")
        if not self.pi_dual.chart.same_coords(self.chart):
            raise ChartMismatch("pi_dual lives on a different chart")
        object.__setattr__(self, "mult", tuple(self.mult))
        if self.coframe is not None:
            cf = tuple(tuple(row) for row in self.coframe)
            if len(cf) != n or any(len(r) != n for r in cf):
                raise DimensionMismatch("coframe must be an n x n matrix")
            object.__setattr__(self, "coframe", cf)
        if self.frame is None:
            try:
                J = left_translation_differential(self.chart, self.mult)
                det = determinant(J)
                if det.is_constant() and not det.is_zero():
                    object.__setattr__(self, "frame", tuple(tuple(r) for r in J))
            except Exception:  # pragma: no cover - defensive
                pass

    @property
    def dim(self) -> int:
        return self.chart.dim

    def require_coframe(self):
        if self.coframe is None:
            raise NonInvertibleFrame(f"group {self.kind!r} has no polynomial coframe")
        return self.coframe

    def theta(self, k: int) -> FormField:
        return FormField.one_form(self.chart, list(self.require_coframe()[k]))

    def thetas(self) -> list[FormField]:
        return [self.theta(k) for k in range(self.dim)]

    def left_invariant_field(self, a: int) -> VectorField:
        J = left_translation_differential(self.chart, self.mult)
        return VectorField(self.chart, [J[i][a] for i in range(self.dim)])

    def poisson_manifold(self) -> PoissonManifold:
        return PoissonManifold(self.chart, self.pi_dual, checked=False)

    def with_pi(self, pi: BivectorField) -> "GroupModel":
        return GroupModel(self.chart, self.mult, self.coframe, pi, self.bialgebra, self.kind, self.frame)

    def multiply(self, u: Sequence, v: Sequence):
        pt = list(u) + list(v)
        return [p.evaluate(pt) for p in self.mult]

    def inverse_numeric(self, u: Sequence[float]) -> np.ndarray:
        """Inverse element by Newton iteration on u . w = 0 (exact negation for exponential laws)."""
        w = -np.asarray(u, dtype=float)
        f = [p.compile() for p in self.mult]
        for _ in range(50):
            val = np.array([fi(np.concatenate([u, w])[None, :])[0] for fi in f])
            if np.max(np.abs(val)) < 1e-15:
                break
            n = self.dim
            Jw = np.array([[p.diff(n + j).compile()(np.concatenate([u, w])[None, :])[0]
                            for j in range(n)] for p in self.mult])
            w = w - np.linalg.solve(Jw, val)
        return w

    def exp_coords(self, x: Sequence) -> list:
        """exp of an element of g* in these coordinates (exponential charts: the identity)."""
        if self.kind in ("abelian", "heisenberg"):
            return list(x)
        raise NotImplementedError(f"exp not available for group kind {self.kind!r}")


def linear_lie_poisson(chart: ChartDomain, algebra: LieAlgebraData) -> BivectorField:
    """pi^{ij}(u) = sum_k c[i][j][k] u_k (the Lie-Poisson structure of g on g*)."""
    n = chart.dim
    upper = {}
    for i in range(n):
        for j in range(i + 1, n):
            acc = chart.zero()
            for k in range(n):
                if algebra.c[i][j][k]:
                    acc = acc + chart.coord(k) * algebra.c[i][j][k]
            upper[(i, j)] = acc
    return BivectorField(chart, upper)


def builtin_group(kind: str, n: int | None = None, bialgebra: LieBialgebraData | None = None,
                  pi: str | BivectorField = "default", degree_bound: int = 2) -> GroupModel:
    """Builtin groups: ``"abelian"`` (R^n), ``"heisenberg"`` and ``"affine"``.

    ``pi`` selects the multiplicative bivector: ``"zero"``, ``"linear"``
    (abelian only), ``"derive"`` (solve for it), an explicit
    :class:`BivectorField`, or ``"default"`` (linear for abelian groups with a
    non-abelian algebra, derived for the Heisenberg group, zero otherwise).
    """
    kind = kind.lower()
    if kind == "abelian":
        if bialgebra is None:
            if n is None:
                raise DimensionMismatch("abelian group needs a dimension or a bialgebra")
            bialgebra = LieBialgebraData.trivial(LieAlgebraData.abelian(n))
        n = bialgebra.dim
        names = _coord_names(bialgebra, ("u",))
        chart = ChartDomain(names)
        mult = [a + b for a, b in zip(_left(chart), _right(chart))]
        coframe = [[chart.const(int(i == j)) for j in range(n)] for i in range(n)]
        if isinstance(pi, BivectorField):
            pib = pi
        elif pi in ("linear",) or (pi == "default" and not bialgebra.algebra.is_abelian()):
            pib = linear_lie_poisson(chart, bialgebra.algebra)
        elif pi in ("zero", "default"):
            pib = BivectorField.zero(chart)
        elif pi == "derive":
            pib = derive_multiplicative_bivector(bialgebra, chart, mult, degree_bound).pi
        else:
            raise ValueError(f"unknown pi option {pi!r}")
        return GroupModel(chart, mult, coframe, pib, bialgebra, "abelian")
    if kind == "heisenberg":
        bialgebra = bialgebra or heisenberg_dual_bialgebra()
        if bialgebra.dim != 3:
            raise DimensionMismatch("the Heisenberg group is 3-dimensional")
        chart = ChartDomain(("a", "b", "c"))
        a, b, c = _left(chart)
        a2, b2, c2 = _right(chart)
        half = Fraction(1, 2)
        mult = [a + a2, b + b2, c + c2 + (a * b2 - b * a2) * half]
        coframe = derive_coframe(chart, mult)
        if isinstance(pi, BivectorField):
            pib = pi
        elif pi == "zero":
            pib = BivectorField.zero(chart)
        elif pi in ("derive", "default"):
            pib = derive_multiplicative_bivector(bialgebra, chart, mult, degree_bound).pi
        else:
            raise ValueError(f"unknown pi option {pi!r}")
        return GroupModel(chart, mult, coframe, pib, bialgebra, "heisenberg")
    if kind == "affine":
        if bialgebra is None:
            alg = LieAlgebraData.abelian(2, ("xi", "eta"))
            bialgebra = LieBialgebraData.from_dual_brackets(alg, ("x", "y"), ["[x, y] = y"])
        if bialgebra.dim != 2:
            raise DimensionMismatch("the affine group is 2-dimensional")
        chart = ChartDomain(("a", "b"), box=((Fraction(-1, 2), Fraction(1)), (Fraction(-1), Fraction(1))))
        a, b = _left(chart)
        a2, b2 = _right(chart)
        # (1 + a, b) realises (s, b) with (s, b)(s', b') = (s s', b + s b')
        mult = [a + a2 + a * a2, b + b2 + a * b2]
        pib = pi if isinstance(pi, BivectorField) else BivectorField.zero(chart)
        # coframe is rational (1/(1+a)), not polynomial
        return GroupModel(chart, mult, None, pib, bialgebra, "affine")
    raise ValueError(f"unknown builtin group {kind!r}")


def _coord_names(b: LieBialgebraData, fallback) -> tuple[str, ...]:
    names = b.dual_names
    if all(nm.isidentifier() for nm in names):
        return names
    return tuple(f"u{i + 1}" for i in range(b.dim))


def custom_group(coords: Sequence[str], law: Sequence[str], bialgebra: LieBialgebraData,
                 coframe: Sequence[Sequence[str]] | None = None,
                 pi: BivectorField | None = None, box=None) -> GroupModel:
    """Group from law strings over ``coords`` and their primed copies."""
    from .parser import parse_poly

    chart = ChartDomain(tuple(coords), box)
    lv = law_variables(chart)
    mult = [parse_poly(s, lv) for s in law]
    if coframe is None:
        cf = derive_coframe(chart, mult)
    else:
        cf = [[parse_poly(s, chart) if isinstance(s, str) else s for s in row] for row in coframe]
    pib = pi if pi is not None else BivectorField.zero(chart)
    return GroupModel(chart, mult, cf, pib, bialgebra, "custom")


# identities


def identity_residual(G: GroupModel) -> list[Poly]:
    """mult(u, 0) - u and mult(0, u) - u, per component."""
    n = G.dim
    coords = [G.chart.coord(i) for i in range(n)]
    zero = G.chart.zero()
    out = []
    for i, p in enumerate(G.mult):
        out.append(p.substitute(coords + [zero] * n) - coords[i])
        out.append(p.substitute([zero] * n + coords) - coords[i])
    return out


def associativity_residual(G: GroupModel) -> list[Poly]:
    """(u v) w - u (v w) as polynomials in 3n variables."""
    n = G.dim
    names = G.chart.coord_names
    vars3 = names + primed(names) + tuple(f"{x}''" for x in names)
    U = [Poly.var(vars3, i) for i in range(n)]
    V = [Poly.var(vars3, n + i) for i in range(n)]
    W = [Poly.var(vars3, 2 * n + i) for i in range(n)]
    uv = [p.substitute(U + V) for p in G.mult]
    vw = [p.substitute(V + W) for p in G.mult]
    left = [p.substitute(uv + W) for p in G.mult]
    right = [p.substitute(U + vw) for p in G.mult]
    return [a - b for a, b in zip(left, right)]


def coframe_at_identity_residual(G: GroupModel) -> list[Fraction]:
    cf = G.require_coframe()
    origin = [0] * G.dim
    return [cf[i][j].evaluate(origin) - int(i == j) for i in range(G.dim) for j in range(G.dim)]


def left_invariance_residual(G: GroupModel) -> list[list[Poly]]:
    """(l_u^* theta_k)(v) - theta_k(v), component j, in the 2n law variables."""
    cf = G.require_coframe()
    n = G.dim
    V = _right(G.chart)
    out = []
    for k in range(n):
        at_uv = [cf[k][i].substitute(list(G.mult)) for i in range(n)]
        row = []
        for j in range(n):
            acc = Poly.zero(law_variables(G.chart))
            for i in range(n):
                dm = G.mult[i].diff(n + j)
                if at_uv[i] and dm:
                    acc = acc + at_uv[i] * dm
            row.append(acc - cf[k][j].substitute(V))
        out.append(row)
    return out


def mc_term(forms: Sequence[FormField], b: LieBialgebraData, k: int) -> FormField:
    """(1/2) w ^ w o delta(e_k) = sum_{i<j} d[k][i][j] w_i ^ w_j."""
    chart = forms[0].chart
    out = FormField.zero(chart, 2)
    for i, j, coef in b.delta_terms(k):
        out = out + wedge(forms[i], forms[j]) * coef
    return out


def maurer_cartan_residual(G: GroupModel) -> list[FormField]:
    """d theta_k + (1/2) theta ^ theta o delta(e_k), per basis element."""
    th = G.thetas()
    return [exterior_d(th[k]) + mc_term(th, G.bialgebra, k) for k in range(G.dim)]


def _pushforward_terms(pi_at: Sequence[Sequence[Poly]], jac: Sequence[Sequence[Poly]], i: int, j: int,
                       zero: Poly) -> Poly:
    n = len(jac)
    acc = zero
    for k in range(n):
        if not jac[i][k] and not jac[j][k]:
            continue
        for l in range(n):
            p = pi_at[k][l]
            if not p:
                continue
            a = jac[i][k] * jac[j][l]
            if a:
                acc = acc + a * p
    return acc


def multiplicativity_residual(G: GroupModel, pi: BivectorField | None = None) -> dict[tuple[int, int], Poly]:
    """pi(u v) - l_{u*} pi(v) - r_{v*} pi(u), component (i, j) with i < j, in 2n variables."""
    pi = G.pi_dual if pi is None else pi
    n = G.dim
    lv = law_variables(G.chart)
    zero = Poly.zero(lv)
    U, V = _left(G.chart), _right(G.chart)
    M = pi.matrix()
    pi_uv = [[M[k][l].substitute(list(G.mult)) for l in range(n)] for k in range(n)]
    pi_u = [[M[k][l].substitute(U) for l in range(n)] for k in range(n)]
    pi_v = [[M[k][l].substitute(V) for l in range(n)] for k in range(n)]
    jac_v = [[G.mult[i].diff(n + k) for k in range(n)] for i in range(n)]
    jac_u = [[G.mult[i].diff(k) for k in range(n)] for i in range(n)]
    out = {}
    for i in range(n):
        for j in range(i + 1, n):
            r = pi_uv[i][j] - _pushforward_terms(pi_v, jac_v, i, j, zero) \
                - _pushforward_terms(pi_u, jac_u, i, j, zero)
            out[(i, j)] = r
    return out


def pi_at_identity(G: GroupModel, pi: BivectorField | None = None) -> dict[tuple[int, int], Fraction]:
    pi = G.pi_dual if pi is None else pi
    origin = [0] * G.dim
    return {k: v.evaluate(origin) for k, v in pi.upper.items()}


@dataclass
class LinearizationReport:
    constants: list      # L[i][j][k] = coefficient of u_k in pi^{ij}
    expected: list       # bracket constants of g
    match: bool
    mismatches: list


def linearization(G: GroupModel, pi: BivectorField | None = None) -> LinearizationReport:
    """Degree-one part of pi_dual at the identity against the bracket of g."""
    pi = G.pi_dual if pi is None else pi
    n = G.dim
    L = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            p = pi[i, j]
            for k in range(n):
                L[i][j][k] = p.coeff(tuple(int(t == k) for t in range(n)))
    expected = [[list(row) for row in mat] for mat in G.bialgebra.c]
    mism = [(i, j, k, L[i][j][k], expected[i][j][k]) for i in range(n) for j in range(i + 1, n)
            for k in range(n) if L[i][j][k] != expected[i][j][k]]
    return LinearizationReport(L, expected, not mism, mism)


@dataclass
class DerivedBivector:
    pi: BivectorField
    degree_bound: int
    kernel_dim: int


def _monomials(n: int, lo: int, hi: int) -> list[tuple[int, ...]]:
    out = []
    for deg in range(lo, hi + 1):
        for combo in itertools.combinations_with_replacement(range(n), deg):
            e = [0] * n
            for v in combo:
                e[v] += 1
            out.append(tuple(e))
    return out


def derive_multiplicative_bivector(b: LieBialgebraData, chart: ChartDomain, mult: Sequence[Poly],
                                   degree_bound: int) -> DerivedBivector:
    """Solve for a multiplicative bivector of bounded degree whose linearisation is the bracket of g.

    Multiplicativity is linear in the bivector, so the coefficients of
    ``pi^{ij}`` (monomials of degree 1..bound) are found by one exact linear
    solve. Free variables are set to zero with low-degree unknowns ordered
    first, which yields a minimal-degree representative.
    """
    n = chart.dim
    if degree_bound < 0:
        raise ValueError("degree_bound must be non-negative")
    needs_linear = any(v for mat in b.c for row in mat for v in row)
    if degree_bound == 0:
        if needs_linear:
            raise NoSolutionAtDegree(0, "the bracket of g requires a linear part")
        return DerivedBivector(BivectorField.zero(chart), 0, 0)
    probe = GroupModel(chart, mult, None, BivectorField.zero(chart), b, "probe")
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    monos = _monomials(n, 1, degree_bound)
    unknowns = [(deg_sum, s, m) for m in monos for s in slots for deg_sum in [sum(m)]]
    unknowns.sort(key=lambda t: t[0])
    unknowns = [(s, m) for _, s, m in unknowns]
    columns = []
    for s, m in unknowns:
        basis = BivectorField(chart, {s: Poly(chart.coord_names, {m: 1})})
        res = multiplicativity_residual(probe, basis)
        columns.append({(k, e): c for k, p in res.items() for e, c in p.terms.items()})
    row_keys = sorted({key for col in columns for key in col})
    rows = [[col.get(key, Fraction(0)) for col in columns] for key in row_keys]
    rhs = [Fraction(0)] * len(rows)
    # linear part pinned to the bracket of g
    for s in slots:
        i, j = s
        for k in range(n):
            e = tuple(int(t == k) for t in range(n))
            rows.append([Fraction(int(u == (s, e))) for u in unknowns])
            rhs.append(b.c[i][j][k])
    sol = solve(rows, rhs, len(unknowns))
    if sol is None:
        raise NoSolutionAtDegree(degree_bound)
    x, kernel = sol
    upper = {s: chart.zero() for s in slots}
    for (s, m), v in zip(unknowns, x):
        if v:
            upper[s] = upper[s] + Poly(chart.coord_names, {m: v})
    pi = BivectorField(chart, upper)
    if any(not r.is_zero() for r in schouten_residual(pi).values()):
        raise NoSolutionAtDegree(degree_bound, "the canonical multiplicative solution is not Poisson")
    if kernel:
        warnings.warn(f"solution space has dimension {len(kernel)}; returning the minimal-degree "
                      "representative", AmbiguousSolution, stacklevel=2)
    return DerivedBivector(pi, degree_bound, len(kernel))


def dressing_fields(G: GroupModel) -> list[VectorField]:
    """L_k = pi_dual#(theta_k)."""
    return [sharp(G.pi_dual, th) for th in G.thetas()]


def dressing_residuals(G: GroupModel):
    """Dressing fields plus ([L_i, L_j] - L_[i,j], [L_i, L_j] + L_[i,j]) residuals."""
    L = dressing_fields(G)
    hom, anti = homomorphism_residuals(L, G.bialgebra)
    return L, hom, anti


def theta_bracket_residual(G: GroupModel) -> dict[tuple[int, int], FormField]:
    """[theta_i, theta_j]_{pi_dual} - theta_[e_i, e_j] for i < j."""
    th = G.thetas()
    M = G.poisson_manifold()
    n = G.dim
    out = {}
    for i in range(n):
        for j in range(i + 1, n):
            target = FormField.zero(G.chart, 1)
            for k in range(n):
                if G.bialgebra.c[i][j][k]:
                    target = target + th[k] * G.bialgebra.c[i][j][k]
            out[(i, j)] = oneform_bracket(th[i], th[j], M) - target
    return out


def _theta_combination(th: Sequence[FormField], coeffs: Sequence[Fraction]) -> FormField:
    out = FormField.zero(th[0].chart, 1)
    for t, c in zip(th, coeffs):
        if c:
            out = out + t * c
    return out


def theta2_residual(G: GroupModel) -> dict[tuple[int, int, int], Poly]:
    """For each basis x = e^a of g* and i < j:

    X(pi(theta_i, theta_j)) - x([e_i, e_j]) - pi(theta_{ad*_x e_i}, theta_j) - pi(theta_i, theta_{ad*_x e_j}),

    with X the left invariant vector field of x.
    """
    th = G.thetas()
    pi = G.pi_dual
    n = G.dim
    b = G.bialgebra
    unit = [[Fraction(int(t == s)) for t in range(n)] for s in range(n)]
    out = {}
    for a in range(n):
        X = G.left_invariant_field(a)
        ad_th = [_theta_combination(th, coadjoint(b, unit[a], unit[i])) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                val = X(contract2(pi, th[i], th[j])) - b.c[i][j][a] \
                    - contract2(pi, ad_th[i], th[j]) - contract2(pi, th[i], ad_th[j])
                out[(a, i, j)] = val
    return out


def coframe_pairing(G: GroupModel, i: int, j: int) -> Poly:
    """pi_dual(theta_i, theta_j)."""
    return contract2(G.pi_dual, G.theta(i), G.theta(j))


def validate_group(G: GroupModel) -> dict[str, bool]:
    """Exact structural checks; keys name the invariant."""
    out = {
        "identity": all(p.is_zero() for p in identity_residual(G)),
        "associativity": all(p.is_zero() for p in associativity_residual(G)),
        "pi_at_identity": all(v == 0 for v in pi_at_identity(G).values()),
        "multiplicativity": all(p.is_zero() for p in multiplicativity_residual(G).values()),
        "schouten": all(p.is_zero() for p in schouten_residual(G.pi_dual).values()),
        "linearization": linearization(G).match,
    }
    if G.coframe is not None:
        out["coframe_at_identity"] = all(v == 0 for v in coframe_at_identity_residual(G))
        out["left_invariance"] = all(p.is_zero() for row in left_invariance_residual(G) for p in row)
        out["maurer_cartan"] = all(f.is_zero() for f in maurer_cartan_residual(G))
        out["theta_bracket"] = all(f.is_zero() for f in theta_bracket_residual(G).values())
    return out
