"""Exact exterior calculus for polynomial fields on a single box chart."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ChartMismatch, DegreeError, OutsideBoxWarning
from .parser import parse_poly
from .polynomial import Poly, as_fraction


@dataclass(frozen=True)
class ChartDomain:
    """Coordinate names plus a closed rational box used for sampling."""

    coord_names: tuple[str, ...]
    box: tuple[tuple[Fraction, Fraction], ...] = field(default=None)

    def __post_init__(self):
        names = tuple(self.coord_names)
        if not names:
            raise ValueError("a chart needs at least one coordinate")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate coordinate names in {names}")
        object.__setattr__(self, "coord_names", names)
        box = self.box
        if box is None:
            box = tuple((Fraction(-1), Fraction(1)) for _ in names)
        box = tuple((as_fraction(lo), as_fraction(hi)) for lo, hi in box)
        if len(box) != len(names):
            raise ValueError("box must have one interval per coordinate")
        for lo, hi in box:
            if not lo < hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "box", box)

    @property
    def dim(self) -> int:
        return len(self.coord_names)

    def zero(self) -> Poly:
        return Poly.zero(self.coord_names)

    def const(self, value) -> Poly:
        return Poly.constant(self.coord_names, value)

    def coord(self, i) -> Poly:
        return Poly.var(self.coord_names, i)

    def parse(self, text: str) -> Poly:
        return parse_poly(text, self)

    def center(self) -> tuple[Fraction, ...]:
        return tuple((lo + hi) / 2 for lo, hi in self.box)

    def contains(self, point: Sequence) -> bool:
        return all(float(lo) <= float(x) <= float(hi) for x, (lo, hi) in zip(point, self.box))

    def same_coords(self, other: "ChartDomain") -> bool:
        return self.coord_names == other.coord_names

    def grid(self, n: int | Sequence[int]) -> np.ndarray:
        """Tensor grid of sample points, shape (prod(n), dim)."""
        counts = [n] * self.dim if isinstance(n, int) else list(n)
        axes = [np.linspace(float(lo), float(hi), k) for (lo, hi), k in zip(self.box, counts)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)


def _check_chart(a: ChartDomain, b: ChartDomain) -> None:
    if not a.same_coords(b):
        raise ChartMismatch(f"charts {a.coord_names} and {b.coord_names} differ")


def _check_poly(chart: ChartDomain, p: Poly) -> Poly:
    if p.variables != chart.coord_names:
        raise ChartMismatch(f"polynomial over {p.variables} used on chart {chart.coord_names}")
    return p


def _sort_sign(indices: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting ``indices`` (0 if a repeat occurs) and the sorted tuple."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    # bubble sort parity
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


class FormField:
    """A differential p-form: one polynomial per strictly increasing index tuple."""

    __slots__ = ("chart", "degree", "components")

    def __init__(self, chart: ChartDomain, degree: int, components: Mapping | None = None):
        if not 0 <= degree:
            raise DegreeError(f"negative form degree {degree}")
        self.chart = chart
        self.degree = degree
        comps = {}
        keys = list(itertools.combinations(range(chart.dim), degree)) if degree <= chart.dim else []
        for k in keys:
            comps[k] = chart.zero()
        if components:
            for k, v in components.items():
                k = tuple(k)
                sign, key = _sort_sign(k)
                if len(k) != degree or sign == 0 or key not in comps:
                    raise DegreeError(f"index {k} invalid for a {degree}-form on dim {chart.dim}")
                if not isinstance(v, Poly):
                    v = chart.parse(v) if isinstance(v, str) else chart.const(v)
                comps[key] = comps[key] + _check_poly(chart, v) * sign
        self.components = comps

    @classmethod
    def zero(cls, chart: ChartDomain, degree: int) -> "FormField":
        return cls(chart, degree)

    @classmethod
    def scalar(cls, f: Poly, chart: ChartDomain) -> "FormField":
        return cls(chart, 0, {(): f})

    @classmethod
    def one_form(cls, chart: ChartDomain, comps: Sequence) -> "FormField":
        if len(comps) != chart.dim:
            raise DegreeError(f"1-form needs {chart.dim} components, got {len(comps)}")
        return cls(chart, 1, {(i,): c for i, c in enumerate(comps)})

    @classmethod
    def coordinate(cls, chart: ChartDomain, i: int) -> "FormField":
        return cls(chart, 1, {(i,): chart.const(1)})

    def __getitem__(self, key):
        if isinstance(key, int):
            key = (key,)
        sign, k = _sort_sign(key)
        if sign == 0:
            return self.chart.zero()
        return self.components[k] * sign

    def coeffs(self) -> list[Poly]:
        """Components as a list (1-forms: one per coordinate)."""
        return [self.components[k] for k in sorted(self.components)]

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.components.values())

    def _binary(self, other: "FormField", op) -> "FormField":
        _check_chart(self.chart, other.chart)
        if self.degree != other.degree:
            raise DegreeError(f"degrees {self.degree} and {other.degree} differ")
        return FormField(self.chart, self.degree,
                         {k: op(self.components[k], other.components[k]) for k in self.components})

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __neg__(self):
        return FormField(self.chart, self.degree, {k: -v for k, v in self.components.items()})

    def __mul__(self, f):
        """Multiply by a function (Poly) or a rational constant."""
        if isinstance(f, Poly):
            _check_poly(self.chart, f)
        elif not isinstance(f, (int, Fraction)):
            return NotImplemented
        return FormField(self.chart, self.degree, {k: v * f for k, v in self.components.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, FormField):
            return NotImplemented
        return (self.chart.same_coords(other.chart) and self.degree == other.degree
                and self.components == other.components)

    def __hash__(self):
        return hash((self.chart.coord_names, self.degree, tuple(sorted(self.components.items()))))

    def max_degree(self) -> int:
        return max((p.degree() for p in self.components.values()), default=-1)

    def __str__(self) -> str:
        parts = []
        names = self.chart.coord_names
        for k in sorted(self.components):
            p = self.components[k]
            if p.is_zero():
                continue
            basis = "^".join("d" + names[i] for i in k) or "1"
            parts.append(f"({p})*{basis}" if k else f"({p})")
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


class VectorField:
    __slots__ = ("chart", "components")

    def __init__(self, chart: ChartDomain, components: Sequence):
        if len(components) != chart.dim:
            raise DegreeError(f"vector field needs {chart.dim} components")
        comps = []
        for c in components:
            if not isinstance(c, Poly):
                c = chart.parse(c) if isinstance(c, str) else chart.const(c)
            comps.append(_check_poly(chart, c))
        self.chart = chart
        self.components = tuple(comps)

    @classmethod
    def zero(cls, chart: ChartDomain) -> "VectorField":
        return cls(chart, [chart.zero()] * chart.dim)

    @classmethod
    def coordinate(cls, chart: ChartDomain, i: int) -> "VectorField":
        return cls(chart, [chart.const(1 if j == i else 0) for j in range(chart.dim)])

    def __getitem__(self, i: int) -> Poly:
        return self.components[i]

    def __call__(self, f: Poly) -> Poly:
        """Directional derivative X(f)."""
        _check_poly(self.chart, f)
        out = self.chart.zero()
        for i, xi in enumerate(self.components):
            if xi:
                out = out + xi * f.diff(i)
        return out

    def __add__(self, other: "VectorField") -> "VectorField":
        _check_chart(self.chart, other.chart)
        return VectorField(self.chart, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        _check_chart(self.chart, other.chart)
        return VectorField(self.chart, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "VectorField":
        return VectorField(self.chart, [-a for a in self.components])

    def __mul__(self, f):
        if isinstance(f, Poly):
            _check_poly(self.chart, f)
        elif not isinstance(f, (int, Fraction)):
            return NotImplemented
        return VectorField(self.chart, [a * f for a in self.components])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.chart.same_coords(other.chart) and self.components == other.components

    def __hash__(self):
        return hash((self.chart.coord_names, self.components))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __str__(self) -> str:
        parts = [f"({c})*d/d{n}" for c, n in zip(self.components, self.chart.coord_names) if c]
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


class BivectorField:
    """Antisymmetric contravariant 2-tensor; only the upper triangle is stored."""

    __slots__ = ("chart", "upper")

    def __init__(self, chart: ChartDomain, upper: Mapping | None = None):
        self.chart = chart
        m = chart.dim
        comps = {(i, j): chart.zero() for i in range(m) for j in range(i + 1, m)}
        if upper:
            for (i, j), v in upper.items():
                if i == j:
                    raise DegreeError("diagonal bivector entries must vanish")
                if not isinstance(v, Poly):
                    v = chart.parse(v) if isinstance(v, str) else chart.const(v)
                _check_poly(chart, v)
                if i < j:
                    comps[(i, j)] = comps[(i, j)] + v
                else:
                    comps[(j, i)] = comps[(j, i)] - v
        self.upper = comps

    @classmethod
    def zero(cls, chart: ChartDomain) -> "BivectorField":
        return cls(chart)

    @classmethod
    def from_matrix(cls, chart: ChartDomain, matrix: Sequence[Sequence]) -> "BivectorField":
        """Build from a full matrix, checking antisymmetry exactly."""
        m = chart.dim
        if len(matrix) != m or any(len(row) != m for row in matrix):
            raise DegreeError(f"bivector matrix must be {m}x{m}")
        polys = [[c if isinstance(c, Poly) else
                  (chart.parse(c) if isinstance(c, str) else chart.const(c)) for c in row]
                 for row in matrix]
        for i in range(m):
            if not polys[i][i].is_zero():
                raise DegreeError("bivector matrix has a nonzero diagonal")
            for j in range(i + 1, m):
                if polys[i][j] != -polys[j][i]:
                    raise DegreeError(f"bivector matrix not antisymmetric at ({i},{j})")
        return cls(chart, {(i, j): polys[i][j] for i in range(m) for j in range(i + 1, m)})

    def __getitem__(self, key) -> Poly:
        i, j = key
        if i == j:
            return self.chart.zero()
        return self.upper[(i, j)] if i < j else -self.upper[(j, i)]

    def matrix(self) -> list[list[Poly]]:
        m = self.chart.dim
        return [[self[i, j] for j in range(m)] for i in range(m)]

    def __add__(self, other):
        _check_chart(self.chart, other.chart)
        return BivectorField(self.chart, {k: v + other.upper[k] for k, v in self.upper.items()})

    def __sub__(self, other):
        _check_chart(self.chart, other.chart)
        return BivectorField(self.chart, {k: v - other.upper[k] for k, v in self.upper.items()})

    def __neg__(self):
        return BivectorField(self.chart, {k: -v for k, v in self.upper.items()})

    def __mul__(self, f):
        if not isinstance(f, (Poly, int, Fraction)):
            return NotImplemented
        return BivectorField(self.chart, {k: v * f for k, v in self.upper.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BivectorField):
            return NotImplemented
        return self.chart.same_coords(other.chart) and self.upper == other.upper

    def __hash__(self):
        return hash((self.chart.coord_names, tuple(sorted(self.upper.items()))))

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.upper.values())

    def __str__(self) -> str:
        n = self.chart.coord_names
        parts = [f"({v})*d/d{n[i]}^d/d{n[j]}" for (i, j), v in sorted(self.upper.items()) if v]
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


# operations


def exterior_d(omega: FormField) -> FormField:
    chart = omega.chart
    p = omega.degree
    if p >= chart.dim:
        return FormField.zero(chart, p + 1)
    out: dict[tuple, Poly] = {}
    for idx, f in omega.components.items():
        if f.is_zero():
            continue
        for i in range(chart.dim):
            if i in idx:
                continue
            df = f.diff(i)
            if df.is_zero():
                continue
            sign, key = _sort_sign((i,) + idx)
            out[key] = out.get(key, chart.zero()) + df * sign
    return FormField(chart, p + 1, out)


def d(f: Poly | FormField, chart: ChartDomain | None = None) -> FormField:
    """Exterior derivative; a bare polynomial is treated as a 0-form."""
    if isinstance(f, Poly):
        if chart is None:
            chart = ChartDomain(f.variables)
        return exterior_d(FormField.scalar(f, chart))
    return exterior_d(f)


def wedge(w1: FormField, w2: FormField) -> FormField:
    _check_chart(w1.chart, w2.chart)
    chart = w1.chart
    p = w1.degree + w2.degree
    if p > chart.dim:
        return FormField.zero(chart, p)
    out: dict[tuple, Poly] = {}
    for i1, f1 in w1.components.items():
        if f1.is_zero():
            continue
        for i2, f2 in w2.components.items():
            if f2.is_zero():
                continue
            sign, key = _sort_sign(i1 + i2)
            if sign == 0:
                continue
            out[key] = out.get(key, chart.zero()) + (f1 * f2) * sign
    return FormField(chart, p, out)


def interior(X: VectorField, omega: FormField) -> FormField:
    _check_chart(X.chart, omega.chart)
    chart = omega.chart
    if omega.degree == 0:
        raise DegreeError("cannot contract a 0-form")
    out: dict[tuple, Poly] = {}
    for idx, f in omega.components.items():
        if f.is_zero():
            continue
        for k, i in enumerate(idx):
            xi = X.components[i]
            if xi.is_zero():
                continue
            rest = idx[:k] + idx[k + 1:]
            term = xi * f
            out[rest] = out.get(rest, chart.zero()) + (term if k % 2 == 0 else -term)
    return FormField(chart, omega.degree - 1, out)


def vector_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """Lie bracket [X, Y] with [X, Y](f) = X(Y(f)) - Y(X(f))."""
    _check_chart(X.chart, Y.chart)
    return VectorField(X.chart, [X(Y.components[j]) - Y(X.components[j]) for j in range(X.chart.dim)])


def lie_derivative(X: VectorField, T):
    """Lie derivative of a form, bivector, vector field or function along ``X``."""
    if isinstance(T, Poly):
        return X(T)
    if isinstance(T, FormField):
        _check_chart(X.chart, T.chart)
        if T.degree == 0:
            return FormField.scalar(X(T.components[()]), T.chart)
        return interior(X, exterior_d(T)) + exterior_d(interior(X, T))
    if isinstance(T, BivectorField):
        _check_chart(X.chart, T.chart)
        chart = T.chart
        m = chart.dim
        dX = [[X.components[i].diff(k) for k in range(m)] for i in range(m)]
        out = {}
        for i in range(m):
            for j in range(i + 1, m):
                val = X(T[i, j])
                for k in range(m):
                    bkj = T[k, j]
                    if bkj and dX[i][k]:
                        val = val - bkj * dX[i][k]
                    bik = T[i, k]
                    if bik and dX[j][k]:
                        val = val - bik * dX[j][k]
                out[(i, j)] = val
        return BivectorField(chart, out)
    if isinstance(T, VectorField):
        return vector_bracket(X, T)
    raise TypeError(f"cannot take Lie derivative of {type(T).__name__}")


def _require_one_form(w: FormField) -> None:
    if w.degree != 1:
        raise DegreeError(f"expected a 1-form, got degree {w.degree}")


def contract2(beta: BivectorField, w1: FormField, w2: FormField) -> Poly:
    """beta(w1, w2) = sum_{i<j} beta^{ij} (w1_i w2_j - w1_j w2_i)."""
    _check_chart(beta.chart, w1.chart)
    _check_chart(beta.chart, w2.chart)
    _require_one_form(w1)
    _require_one_form(w2)
    out = beta.chart.zero()
    for (i, j), b in beta.upper.items():
        if b.is_zero():
            continue
        a1i, a1j = w1.components[(i,)], w1.components[(j,)]
        a2i, a2j = w2.components[(i,)], w2.components[(j,)]
        cross = a1i * a2j - a1j * a2i
        if cross:
            out = out + b * cross
    return out


def sharp(beta: BivectorField, w: FormField) -> VectorField:
    """beta#(w) with components sum_i beta^{ij} w_i, so that <sharp(beta, w1), w2> = beta(w1, w2)."""
    _check_chart(beta.chart, w.chart)
    _require_one_form(w)
    chart = beta.chart
    m = chart.dim
    comps = []
    for j in range(m):
        acc = chart.zero()
        for i in range(m):
            b = beta[i, j]
            wi = w.components[(i,)]
            if b and wi:
                acc = acc + b * wi
        comps.append(acc)
    return VectorField(chart, comps)


def pair(w: FormField, X: VectorField) -> Poly:
    """<w, X> for a 1-form and a vector field."""
    _check_chart(w.chart, X.chart)
    _require_one_form(w)
    out = w.chart.zero()
    for i in range(w.chart.dim):
        a, b = w.components[(i,)], X.components[i]
        if a and b:
            out = out + a * b
    return out


def vector_wedge(X: VectorField, Y: VectorField) -> BivectorField:
    _check_chart(X.chart, Y.chart)
    m = X.chart.dim
    return BivectorField(X.chart, {(i, j): X[i] * Y[j] - X[j] * Y[i]
                                   for i in range(m) for j in range(i + 1, m)})


def pullback(omega: FormField, images: Sequence[Poly], source: ChartDomain) -> FormField:
    """Pull ``omega`` back along the polynomial map whose coordinate images are ``images``."""
    if len(images) != omega.chart.dim:
        raise ChartMismatch(f"map has {len(images)} components, target chart dim {omega.chart.dim}")
    for img in images:
        _check_poly(source, img)
    dmu = [exterior_d(FormField.scalar(img, source)) for img in images]
    out = FormField.zero(source, omega.degree)
    for idx, f in omega.components.items():
        if f.is_zero():
            continue
        term = FormField.scalar(f.substitute(images), source)
        for i in idx:
            term = wedge(term, dmu[i])
        out = out + term
    return out


def eval_at(field_, point: Sequence):
    """Evaluate a polynomial or field at a point (exact for rational input)."""
    chart = getattr(field_, "chart", None)
    if chart is not None and len(point) == chart.dim and not chart.contains(point):
        warnings.warn(f"point {tuple(point)} outside chart box", OutsideBoxWarning, stacklevel=2)
    if isinstance(field_, Poly):
        return field_.evaluate(point)
    if isinstance(field_, VectorField):
        return [c.evaluate(point) for c in field_.components]
    if isinstance(field_, FormField):
        return {k: v.evaluate(point) for k, v in field_.components.items()}
    if isinstance(field_, BivectorField):
        return {k: v.evaluate(point) for k, v in field_.upper.items()}
    raise TypeError(f"cannot evaluate {type(field_).__name__}")


def field_polys(field_) -> list[Poly]:
    """Flatten any field into its component polynomials."""
    if isinstance(field_, Poly):
        return [field_]
    if isinstance(field_, VectorField):
        return list(field_.components)
    if isinstance(field_, FormField):
        return [field_.components[k] for k in sorted(field_.components)]
    if isinstance(field_, BivectorField):
        return [field_.upper[k] for k in sorted(field_.upper)]
    if isinstance(field_, (list, tuple)):
        return [p for f in field_ for p in field_polys(f)]
    raise TypeError(f"cannot flatten {type(field_).__name__}")


def is_zero_field(field_) -> bool:
    return all(p.is_zero() for p in field_polys(field_))


def sup_norm(field_, points: np.ndarray) -> float:
    """Max absolute component value over sample points."""
    best = 0.0
    for p in field_polys(field_):
        if p.is_zero():
            continue
        vals = p.compile()(points)
        if vals.size:
            best = max(best, float(np.max(np.abs(vals))))
    return best
