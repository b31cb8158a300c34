"""Reconstruction of a momentum map from an infinitesimal one.

The forms ``alpha_k - theta_k`` cut out an involutive distribution on
``M x G*``; a leaf through ``(m0, u0)`` is the graph of a map ``mu`` with
``mu^* theta = alpha``.  Leaves are computed by lifting paths in ``M``: along
``m(s)`` the group point solves ``theta(u') = alpha(m')``, i.e.
``u' = J(u) alpha_{m(s)}(m'(s))`` with ``J`` the inverse coframe matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bialgebra import dual_algebra
from .calculus import ChartDomain, FormField, contract2, exterior_d, wedge
from .errors import (
    ChartMismatch,
    DimensionMismatch,
    FrameSingular,
    NotAbelian,
    NotClosed,
    NotConstant,
    OutOfDomain,
)
from .group import GroupModel, maurer_cartan_residual, mc_term
from .imm import AlphaMap, mc_residual
from .linalg import nullspace, solve
from .ode import PolyArray, richardson_error, rk4
from .poisson import fn_bracket
from .polynomial import Poly

DEFAULT_STEP = 1e-3
DEFAULT_TOL = 1e-6


# involutivity


def product_chart(M: ChartDomain, G: ChartDomain) -> tuple[ChartDomain, tuple[str, ...]]:
    """Chart on M x G*, renaming group coordinates that collide with manifold ones."""
    gnames = []
    for nm in G.coord_names:
        new = nm
        while new in M.coord_names or new in gnames:
            new = new + "_g"
        gnames.append(new)
    return ChartDomain(M.coord_names + tuple(gnames), M.box + G.box), tuple(gnames)


def _lift_form(w: FormField, chart: ChartDomain, offset: int, names: Sequence[str]) -> FormField:
    """Re-express a 1-form on a factor as a 1-form on the product chart."""
    comps = [chart.zero()] * chart.dim
    for i, p in enumerate(w.coeffs()):
        comps[offset + i] = p.rename(names).embed(chart.coord_names)
    return FormField.one_form(chart, comps)


@dataclass
class InvolutivityReport:
    alpha_mc: list
    group_mc: list
    combined: list
    product: ChartDomain

    @property
    def involutive(self) -> bool:
        return all(f.is_zero() for f in self.alpha_mc) and all(f.is_zero() for f in self.group_mc)

    @property
    def combined_zero(self) -> bool:
        return all(f.is_zero() for f in self.combined)


def involutivity_report(alpha: AlphaMap, G: GroupModel) -> InvolutivityReport:
    """MC residuals of alpha and theta and the combined identity on M x G*.

    The combined residual is
    ``d(alpha_k - theta_k) + sum_{i<j} d[k][i][j] ((alpha_i - theta_i) ^ alpha_j + theta_i ^ (alpha_j - theta_j))``.
    """
    if alpha.dim != G.dim:
        raise DimensionMismatch(f"alpha has {alpha.dim} forms but the group has dimension {G.dim}")
    a_mc = mc_residual(alpha)
    g_mc = maurer_cartan_residual(G)
    P, gnames = product_chart(alpha.chart, G.chart)
    A = [_lift_form(f, P, 0, alpha.chart.coord_names) for f in alpha.forms]
    T = [_lift_form(t, P, alpha.chart.dim, gnames) for t in G.thetas()]
    combined = []
    for k in range(G.dim):
        r = exterior_d(A[k] - T[k])
        for i, j, coef in G.bialgebra.delta_terms(k):
            r = r + (wedge(A[i] - T[i], A[j]) + wedge(T[i], A[j] - T[j])) * coef
        combined.append(r)
    return InvolutivityReport(a_mc, g_mc, combined, P)


# leaf lifting


@dataclass
class LeafSpec:
    alpha: AlphaMap
    group: GroupModel
    base_m: tuple
    base_u: tuple
    step: float = DEFAULT_STEP
    grid: tuple = (10,)
    seed: int = 0

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        if len(self.base_m) != self.alpha.chart.dim:
            raise DimensionMismatch("base_m has the wrong dimension")
        if len(self.base_u) != self.group.dim:
            raise DimensionMismatch("base_u has the wrong dimension")
        if not self.alpha.chart.contains(self.base_m):
            raise OutOfDomain(f"base point {tuple(self.base_m)} outside the manifold box")
        if isinstance(self.grid, int):
            self.grid = (self.grid,) * self.alpha.chart.dim
        elif len(self.grid) == 1:
            self.grid = tuple(self.grid) * self.alpha.chart.dim
        self.grid = tuple(int(g) for g in self.grid)
        if len(self.grid) != self.alpha.chart.dim:
            raise DimensionMismatch("grid needs one count per manifold coordinate")


class _LiftSystem:
    """Compiled right-hand side of the lifting ODE."""

    def __init__(self, alpha: AlphaMap, G: GroupModel):
        self.n = G.dim
        self.mdim = alpha.chart.dim
        self.alpha = PolyArray([p for f in alpha.forms for p in f.coeffs()], (self.n, self.mdim))
        if G.frame is not None:
            self.frame = PolyArray([p for row in G.frame for p in row], (self.n, self.n))
            self.coframe = None
        else:
            self.frame = None
            self.coframe = PolyArray([p for row in G.require_coframe() for p in row], (self.n, self.n))

    def velocity(self, u: np.ndarray, a: np.ndarray) -> np.ndarray:
        if self.frame is not None:
            return np.einsum("pij,pj->pi", self.frame(u), a)
        th = self.coframe(u)
        det = np.linalg.det(th)
        if np.any(np.abs(det) < 1e-12):
            raise FrameSingular("coframe matrix is singular along the path")
        return np.linalg.solve(th, a[..., None])[..., 0]

    def lift(self, u0: np.ndarray, start: np.ndarray, end: np.ndarray, step: float) -> np.ndarray:
        """Lift straight segments start -> end (batched) with steps no longer than ``step``."""
        delta = end - start
        length = float(np.max(np.linalg.norm(delta, axis=1))) if delta.size else 0.0
        if length == 0.0:
            return np.array(u0, dtype=float)
        n_steps = max(1, math.ceil(length / step - 1e-9))

        def rhs(s, u):
            m = start + s * delta
            a = np.einsum("pkd,pd->pk", self.alpha(m), delta)
            return self.velocity(u, a)

        return rk4(rhs, u0, 0.0, 1.0, n_steps)

    def lift_polyline(self, u0: np.ndarray, waypoints: Sequence[np.ndarray], step: float) -> np.ndarray:
        u = np.array(u0, dtype=float)
        for a, b in zip(waypoints[:-1], waypoints[1:]):
            u = self.lift(u, a, b, step)
        return u


@dataclass
class LiftResult:
    endpoint: np.ndarray
    error_estimate: float
    path: list


def _system(spec: LeafSpec) -> _LiftSystem:
    return _LiftSystem(spec.alpha, spec.group)


def leaf_lift(spec: LeafSpec, path: Sequence[Sequence[float]]) -> LiftResult:
    """Lift a polyline in M starting at ``base_m``; endpoint plus step-halving error estimate."""
    chart = spec.alpha.chart
    pts = [np.asarray(p, dtype=float) for p in path]
    base = np.asarray([float(x) for x in spec.base_m])
    if not pts or not np.allclose(pts[0], base, rtol=0, atol=1e-15):
        pts = [base] + pts
    for p in pts:
        if len(p) != chart.dim:
            raise DimensionMismatch("path point has the wrong dimension")
        if not chart.contains(p):
            raise OutOfDomain(f"path point {tuple(p)} outside the manifold box")
    sys_ = _system(spec)
    u0 = np.asarray([[float(x) for x in spec.base_u]])
    wps = [p[None, :] for p in pts]
    coarse = sys_.lift_polyline(u0, wps, spec.step)[0]
    fine = sys_.lift_polyline(u0, wps, spec.step / 2)[0]
    err = float(np.max(richardson_error(coarse, fine)))
    return LiftResult(fine, err, [tuple(p) for p in pts])


def axis_path(base: Sequence[float], target: Sequence[float], order: Sequence[int]) -> list[np.ndarray]:
    """Axis-aligned polyline from base to target, moving coordinates in ``order``."""
    cur = np.array(base, dtype=float)
    out = [cur.copy()]
    for a in order:
        if cur[a] != target[a]:
            cur = cur.copy()
            cur[a] = target[a]
            out.append(cur)
    return out


@dataclass
class MomentumLeaf:
    spec: LeafSpec
    points: np.ndarray
    samples: np.ndarray
    path_discrepancy: float
    ode_error: float
    checked: list = field(default_factory=list)

    def base_value(self) -> tuple:
        return tuple(self.spec.base_u)


def _march_grid(sys_: _LiftSystem, spec: LeafSpec, step: float) -> tuple[np.ndarray, np.ndarray]:
    chart = spec.alpha.chart
    axes = [np.linspace(float(lo), float(hi), k) for (lo, hi), k in zip(chart.box, spec.grid)]
    base = np.array([float(x) for x in spec.base_m])
    pts = base[None, :].copy()
    us = np.array([[float(x) for x in spec.base_u]])
    for a, vals in enumerate(axes):
        b = base[a]
        new_u = np.empty((pts.shape[0], len(vals), us.shape[1]))
        ascending = [int(i) for i in np.argsort(vals, kind="stable")]
        pos = [i for i in ascending if vals[i] > b]
        neg = [i for i in reversed(ascending) if vals[i] < b]
        for i in ascending:
            if vals[i] == b:
                new_u[:, i] = us
        for order in (pos, neg):
            cur_m = pts.copy()
            cur_u = us.copy()
            for i in order:
                target = cur_m.copy()
                target[:, a] = vals[i]
                cur_u = sys_.lift(cur_u, cur_m, target, step)
                cur_m = target
                new_u[:, i] = cur_u
        k = len(vals)
        pts = np.repeat(pts, k, axis=0)
        pts[:, a] = np.tile(vals, len(pts) // k)
        us = new_u.reshape(-1, us.shape[1])
    return pts, us


def leaf_map(spec: LeafSpec, n_check: int = 10) -> MomentumLeaf:
    """Lift to every grid point along axis-aligned paths; check path independence on a random subset."""
    sys_ = _system(spec)
    pts, coarse = _march_grid(sys_, spec, spec.step)
    _, fine = _march_grid(sys_, spec, spec.step / 2)
    err = float(np.max(richardson_error(coarse, fine))) if fine.size else 0.0
    rng = np.random.default_rng(spec.seed)
    k = min(n_check, len(pts))
    idx = sorted(int(i) for i in rng.choice(len(pts), size=k, replace=False))
    # second route: reverse axis order
    reverse = list(range(spec.alpha.chart.dim))[::-1]
    u = lift_points(spec, pts[idx], reverse, spec.step / 2, sys_)
    disc = float(np.max(np.abs(u - fine[idx]))) if k else 0.0
    return MomentumLeaf(spec, pts, fine, disc, err, idx)


def lift_points(spec: LeafSpec, points, order: Sequence[int] | None = None, step: float | None = None,
                system: _LiftSystem | None = None) -> np.ndarray:
    """mu at many points at once, each reached by an axis-aligned path from ``base_m``."""
    chart = spec.alpha.chart
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != chart.dim:
        raise DimensionMismatch(f"points need {chart.dim} coordinates")
    for p in pts:
        if not chart.contains(p):
            raise OutOfDomain(f"point {tuple(p)} outside the manifold box")
    sys_ = system or _system(spec)
    order = list(range(chart.dim)) if order is None else list(order)
    k = len(pts)
    cur = np.repeat(np.array([[float(x) for x in spec.base_m]]), k, axis=0)
    u = np.repeat(np.array([[float(x) for x in spec.base_u]]), k, axis=0)
    for a in order:
        target = cur.copy()
        target[:, a] = pts[:, a]
        u = sys_.lift(u, cur, target, step or spec.step)
        cur = target
    return u


def translate_leaf_base(spec: LeafSpec, g: Sequence) -> LeafSpec:
    """Same spec with base_u replaced by g . base_u (left multiplication on the G* factor)."""
    new_u = spec.group.multiply(list(g), list(spec.base_u))
    return LeafSpec(spec.alpha, spec.group, spec.base_m, tuple(new_u), spec.step, spec.grid, spec.seed)


# obstruction


@dataclass
class ObstructionResult:
    values: dict            # (i, j) -> array over grid points
    sup: dict               # (i, j) -> float
    at_base: dict           # (i, j) -> exact value at (base_m, base_u) when rational
    tolerance: float

    @property
    def max_sup(self) -> float:
        return max(self.sup.values(), default=0.0)

    @property
    def accepted(self) -> bool:
        return self.max_sup <= self.tolerance


def obstruction_polys(alpha: AlphaMap, G: GroupModel) -> dict[tuple[int, int], tuple[Poly, Poly]]:
    """(pi(alpha_i, alpha_j) on M, pi_dual(theta_i, theta_j) on G*) for i < j."""
    th = G.thetas()
    out = {}
    for i in range(G.dim):
        for j in range(i + 1, G.dim):
            out[(i, j)] = (contract2(alpha.manifold.pi, alpha.forms[i], alpha.forms[j]),
                           contract2(G.pi_dual, th[i], th[j]))
    return out


def phi_at(alpha: AlphaMap, G: GroupModel, m: Sequence, u: Sequence) -> dict:
    """phi(i, j) at a single point of M x G* (exact for rational input)."""
    return {k: pm.evaluate(list(m)) - pg.evaluate(list(u))
            for k, (pm, pg) in obstruction_polys(alpha, G).items()}


def obstruction_phi(leaf: MomentumLeaf, tol: float = DEFAULT_TOL) -> ObstructionResult:
    """phi(i, j)(m) = pi(alpha_i, alpha_j)(m) - pi_dual(theta_i, theta_j)(mu(m)) over the leaf samples."""
    spec = leaf.spec
    polys = obstruction_polys(spec.alpha, spec.group)
    values, sups = {}, {}
    for k, (pm, pg) in polys.items():
        v = pm.compile()(leaf.points) - pg.compile()(leaf.samples)
        values[k] = v
        sups[k] = float(np.max(np.abs(v))) if v.size else 0.0
    at_base = phi_at(spec.alpha, spec.group, spec.base_m, spec.base_u)
    return ObstructionResult(values, sups, at_base, tol)


# abelian case


def _potential(alpha_form: FormField, center: Sequence[Fraction]) -> Poly:
    """Exact line integral of a closed 1-form from ``center`` (Poincare lemma on a box)."""
    chart = alpha_form.chart
    names = chart.coord_names
    tname = "__t"
    ext = names + (tname,)
    t = Poly.var(ext, len(names))
    coords = [Poly.var(ext, i) for i in range(len(names))]
    ray = [Poly.constant(ext, c) + t * (x - Poly.constant(ext, c)) for x, c in zip(coords, center)]
    integrand = Poly.zero(ext)
    for i, p in enumerate(alpha_form.coeffs()):
        if p:
            integrand = integrand + p.substitute(ray) * (coords[i] - Poly.constant(ext, center[i]))
    anti = integrand.integrate(tname)
    back = [Poly.var(names, i) for i in range(len(names))]
    at1 = anti.substitute(back + [Poly.constant(names, 1)])
    at0 = anti.substitute(back + [Poly.constant(names, 0)])
    return at1 - at0


@dataclass
class AbelianAnalysis:
    potentials: list            # H_k
    cocycle: list               # c[i][j], antisymmetric rational matrix
    has_momentum_map: bool
    shift: list | None          # w with w([e_i, e_j]) = c(i, j); momentum map mu = H + w + z
    annihilator_basis: list     # basis of {z : z|[g,g] = 0}
    verdict: str

    @property
    def family_dimension(self) -> int:
        return len(self.annihilator_basis) if self.has_momentum_map else 0


def abelian_analyze(alpha: AlphaMap, center: Sequence | None = None) -> AbelianAnalysis:
    """Potentials, the 2-cocycle c(i, j) = {H_i, H_j} - H_[i,j] and the affine family of momentum maps."""
    b = alpha.bialgebra
    if not b.is_trivial():
        raise NotAbelian("the abelian analysis needs a zero cobracket (abelian G*)")
    for k, f in enumerate(alpha.forms):
        df = exterior_d(f)
        if not df.is_zero():
            raise NotClosed(f"d alpha_{k} = {df} is not zero")
    chart = alpha.chart
    center = list(center) if center is not None else list(chart.center())
    H = [_potential(f, center) for f in alpha.forms]
    for f, h in zip(alpha.forms, H):
        assert exterior_d(FormField.scalar(h, chart)) == f
    n = b.dim
    c = [[Fraction(0)] * n for _ in range(n)]
    M = alpha.manifold
    for i in range(n):
        for j in range(i + 1, n):
            val = fn_bracket(H[i], H[j], M)
            for k in range(n):
                if b.c[i][j][k]:
                    val = val - H[k] * b.c[i][j][k]
            if not val.is_constant():
                raise NotConstant(f"{{H_{i}, H_{j}}} - H_[{i},{j}] = {val} is not constant", val)
            c[i][j] = val.constant_term()
            c[j][i] = -c[i][j]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rows = [list(b.c[i][j]) for i, j in pairs]
    rhs = [c[i][j] for i, j in pairs]
    sol = solve(rows, rhs, n) if rows else ([Fraction(0)] * n, nullspace([], n))
    ann = nullspace(rows, n) if rows else nullspace([], n)
    if sol is None:
        return AbelianAnalysis(H, c, False, None, ann, "no momentum map")
    w, _ = sol
    return AbelianAnalysis(H, c, True, w, ann, "momentum map family")


def abelian_momentum_map(analysis: AbelianAnalysis, z: Sequence | None = None) -> list[Poly]:
    """mu_k = H_k + w_k + z_k for z in the annihilator of [g, g]."""
    if not analysis.has_momentum_map:
        raise ValueError("no momentum map exists for this infinitesimal momentum map")
    z = z or [0] * len(analysis.potentials)
    return [h + (w + Fraction(zz)) for h, w, zz in zip(analysis.potentials, analysis.shift, z)]


# Heisenberg case


@dataclass
class HeisenbergAnalysis:
    c: Fraction
    c_poly: Poly
    has_momentum_map: bool
    leaf_constants: tuple | None      # (c1, c2) = (phi(eta, zeta), phi(xi, zeta)) on the base leaf
    shift: tuple | None               # g = exp(s x) exp(t y) moving the base leaf onto a momentum map
    base_u: tuple | None              # g . base_u
    central_direction: tuple          # z in coordinates
    verdict: str


def _check_heisenberg_dual(G: GroupModel) -> None:
    b = G.bialgebra
    if b.dim != 3:
        raise DimensionMismatch("Heisenberg analysis needs a 3-dimensional algebra")
    dual = dual_algebra(b)
    expected = [[[Fraction(0)] * 3 for _ in range(3)] for _ in range(3)]
    expected[0][1][2] = Fraction(1)
    expected[1][0][2] = Fraction(-1)
    if [[list(r) for r in m] for m in dual.c] != expected:
        raise DimensionMismatch("g* must be the Heisenberg algebra [x, y] = z in the given basis")


def heisenberg_analyze(alpha: AlphaMap, G: GroupModel, base_m: Sequence | None = None,
                       base_u: Sequence | None = None) -> HeisenbergAnalysis:
    """Constancy of pi(alpha_xi, alpha_eta), existence test and the normalising shift of the base leaf."""
    _check_heisenberg_dual(G)
    if alpha.dim != 3:
        raise DimensionMismatch("alpha must have three forms")
    cpoly = contract2(alpha.manifold.pi, alpha.forms[0], alpha.forms[1])
    if not cpoly.is_constant():
        raise NotConstant(f"pi(alpha_xi, alpha_eta) = {cpoly} is not constant; alpha is not a valid "
                          "infinitesimal momentum map", cpoly)
    c = cpoly.constant_term()
    z_dir = (Fraction(0), Fraction(0), Fraction(1))
    if c != 0:
        return HeisenbergAnalysis(c, cpoly, False, None, None, None, z_dir, "no momentum map")
    base_m = list(base_m) if base_m is not None else list(alpha.chart.center())
    base_u = list(base_u) if base_u is not None else [Fraction(0)] * 3
    phi0 = phi_at(alpha, G, base_m, base_u)
    c1, c2 = phi0[(1, 2)], phi0[(0, 2)]
    # solve phi(eta, zeta) = phi(xi, zeta) = 0 at g . base_u with g = exp(s x) exp(t y)
    st = ("s", "t")
    s, t = Poly.var(st, 0), Poly.var(st, 1)
    zero = Poly.zero(st)
    exp_sx = [s, zero, zero]
    exp_ty = [zero, t, zero]
    g_poly = [p.substitute(exp_sx + exp_ty) for p in G.mult]
    shifted = [p.substitute(g_poly + [Poly.constant(st, v) for v in base_u]) for p in G.mult]
    pols = obstruction_polys(alpha, G)
    eqs = []
    for key in ((1, 2), (0, 2)):
        pm, pg = pols[key]
        eqs.append(Poly.constant(st, pm.evaluate(base_m)) - pg.substitute(shifted))
    if any(e.degree() > 1 for e in eqs):
        raise NotConstant("shift equations are not affine; cannot normalise the leaf exactly")
    rows = [[e.coeff((1, 0)), e.coeff((0, 1))] for e in eqs]
    rhs = [-e.constant_term() for e in eqs]
    sol = solve(rows, rhs, 2)
    if sol is None:
        return HeisenbergAnalysis(c, cpoly, False, (c1, c2), None, None, z_dir, "no momentum map")
    (sv, tv), _ = sol
    g = tuple(p.evaluate([sv, tv]) for p in g_poly)
    new_u = tuple(G.multiply(list(g), base_u))
    return HeisenbergAnalysis(c, cpoly, True, (c1, c2), g, new_u, z_dir,
                              "momentum map unique up to central translation")
