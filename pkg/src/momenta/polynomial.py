"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Poly` is a mapping from exponent tuples to :class:`~fractions.Fraction`
coefficients over a fixed, ordered tuple of variable names. Zero coefficients
are never stored. Terms print in graded-lexicographic order, highest first.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ChartMismatch, DegreeCapExceeded

DEFAULT_DEGREE_CAP = 64
_degree_cap = DEFAULT_DEGREE_CAP


def set_degree_cap(cap: int) -> int:
    """Set the global degree cap; returns the previous value."""
    global _degree_cap
    old = _degree_cap
    _degree_cap = int(cap)
    return old


def get_degree_cap() -> int:
    return _degree_cap


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**12)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Fraction")


class Poly:
    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: dict[tuple, Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != n:
                    raise ValueError(f"exponent {exp} does not match {n} variables")
                if any(e < 0 for e in exp):
                    raise ValueError("negative exponent")
                c = as_fraction(coeff)
                if c:
                    clean[exp] = clean.get(exp, Fraction(0)) + c
                    if not clean[exp]:
                        del clean[exp]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> "Poly":
        # terms already canonical (Fraction, nonzero)
        p = cls.__new__(cls)
        p.variables = variables
        p.terms = terms
        p._hash = None
        return p

    # constructors

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Poly":
        return cls._raw(tuple(variables), {})

    @classmethod
    def constant(cls, variables: Sequence[str], value) -> "Poly":
        variables = tuple(variables)
        c = as_fraction(value)
        return cls._raw(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def var(cls, variables: Sequence[str], name_or_index) -> "Poly":
        variables = tuple(variables)
        i = variables.index(name_or_index) if isinstance(name_or_index, str) else int(name_or_index)
        exp = [0] * len(variables)
        exp[i] = 1
        return cls._raw(variables, {tuple(exp): Fraction(1)})

    @classmethod
    def gens(cls, variables: Sequence[str]) -> list["Poly"]:
        return [cls.var(variables, i) for i in range(len(variables))]

    # basic queries

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_constant(self) -> bool:
        return self.degree() <= 0

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def coeff(self, exponent: Iterable[int]) -> Fraction:
        return self.terms.get(tuple(exponent), Fraction(0))

    def max_abs_coeff(self) -> Fraction:
        return max((abs(c) for c in self.terms.values()), default=Fraction(0))

    def homogeneous_part(self, degree: int) -> "Poly":
        return Poly._raw(self.variables, {e: c for e, c in self.terms.items() if sum(e) == degree})

    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    # arithmetic

    def _check(self, other: "Poly") -> None:
        if self.variables != other.variables:
            raise ChartMismatch(f"variables {self.variables} vs {other.variables}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.constant(self.variables, other)

    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly) and not isinstance(other, (int, Fraction)):
            return NotImplemented
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Poly._raw(self.variables, terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly) and not isinstance(other, (int, Fraction)):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def scale(self, k) -> "Poly":
        k = as_fraction(k)
        if not k:
            return Poly.zero(self.variables)
        return Poly._raw(self.variables, {e: c * k for e, c in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        if not self.terms or not other.terms:
            return Poly.zero(self.variables)
        if self.degree() + other.degree() > _degree_cap:
            raise DegreeCapExceeded(f"product degree exceeds cap {_degree_cap}")
        terms: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Poly._raw(self.variables, {e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, k) -> "Poly":
        if isinstance(k, Poly):
            if not k.is_constant() or k.is_zero():
                return NotImplemented
            k = k.constant_term()
        return self.scale(1 / as_fraction(k))

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        if n and self.degree() * n > _degree_cap:
            raise DegreeCapExceeded(f"power degree exceeds cap {_degree_cap}")
        result = Poly.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    # calculus

    def diff(self, var) -> "Poly":
        i = self.variables.index(var) if isinstance(var, str) else int(var)
        terms = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                terms[ne] = c * k
        return Poly._raw(self.variables, terms)

    def gradient(self) -> list["Poly"]:
        return [self.diff(i) for i in range(self.nvars)]

    def integrate(self, var) -> "Poly":
        """Antiderivative in one variable with zero constant of integration."""
        i = self.variables.index(var) if isinstance(var, str) else int(var)
        terms = {}
        for e, c in self.terms.items():
            ne = e[:i] + (e[i] + 1,) + e[i + 1:]
            terms[ne] = c / (e[i] + 1)
        return Poly._raw(self.variables, terms)

    # evaluation and substitution

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple, np.ndarray)):
            point = tuple(point[0])
        return self.evaluate(point)

    def evaluate(self, point: Sequence):
        """Evaluate at a point; exact when all inputs are rational."""
        if len(point) != self.nvars:
            raise ChartMismatch(f"point has {len(point)} coordinates, expected {self.nvars}")
        exact = all(isinstance(v, (int, Fraction)) for v in point)
        if exact:
            pt = [Fraction(v) for v in point]
            total = Fraction(0)
        else:
            pt = [float(v) for v in point]
            total = 0.0
        if not self.terms:
            return total
        return _horner(self.sorted_terms_lex(), pt, 0, total)

    def sorted_terms_lex(self) -> list[tuple[tuple, Fraction]]:
        return sorted(self.terms.items(), reverse=True)

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Compose with a polynomial map: variable ``i`` is replaced by ``images[i]``."""
        if len(images) != self.nvars:
            raise ChartMismatch(f"expected {self.nvars} images, got {len(images)}")
        if not images:
            return self
        target = images[0].variables
        for img in images:
            if img.variables != target:
                raise ChartMismatch("substitution images live on different charts")
        result = Poly.zero(target)
        if not self.terms:
            return result
        cache: dict[tuple[int, int], Poly] = {}

        def power(i: int, k: int) -> Poly:
            key = (i, k)
            if key not in cache:
                cache[key] = Poly.constant(target, 1) if k == 0 else power(i, k - 1) * images[i]
            return cache[key]

        for e, c in self.terms.items():
            term = Poly.constant(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def rename(self, variables: Sequence[str]) -> "Poly":
        variables = tuple(variables)
        if len(variables) != self.nvars:
            raise ChartMismatch("rename must keep the number of variables")
        return Poly._raw(variables, dict(self.terms))

    def embed(self, variables: Sequence[str]) -> "Poly":
        """Re-express over a superset of variables (by name)."""
        variables = tuple(variables)
        idx = []
        for v in self.variables:
            if v not in variables:
                raise ChartMismatch(f"variable {v!r} missing from target {variables}")
            idx.append(variables.index(v))
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for k, j in zip(e, idx):
                ne[j] = k
            terms[tuple(ne)] = c
        return Poly._raw(variables, terms)

    # numeric compilation

    def compile(self):
        """Return a vectorised float evaluator ``f(X) -> array`` for ``X`` of shape (N, nvars)."""
        if not self.terms:
            def zero(X):
                X = np.asarray(X, dtype=float)
                return np.zeros(X.shape[0])
            return zero
        exps = np.array([e for e in self.terms], dtype=np.int64)
        coeffs = np.array([float(c) for c in self.terms.values()])
        maxdeg = int(exps.max()) if exps.size else 0

        def f(X):
            X = np.asarray(X, dtype=float)
            if maxdeg == 0:
                return np.full(X.shape[0], coeffs.sum())
            # powers[k] = X**k, shape (maxdeg+1, N, nvars)
            powers = np.empty((maxdeg + 1,) + X.shape)
            powers[0] = 1.0
            for k in range(1, maxdeg + 1):
                powers[k] = powers[k - 1] * X
            cols = np.arange(X.shape[1])
            # advanced indices split by a slice: result shape (terms, nvars, N)
            monos = np.prod(powers[exps, :, cols[None, :]], axis=1)
            return coeffs @ monos

        return f

    # printing

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r}, vars={self.variables})"


def _horner(terms, pt, var_index, zero):
    # terms sorted lexicographically descending; recursive Horner in variable var_index
    if var_index == len(pt):
        return sum((c for _, c in terms), zero) if isinstance(zero, Fraction) else \
            sum((float(c) for _, c in terms), zero)
    groups: dict[int, list] = {}
    for e, c in terms:
        groups.setdefault(e[var_index], []).append((e, c))
    degs = sorted(groups, reverse=True)
    x = pt[var_index]
    acc = zero
    prev = degs[0]
    for d in degs:
        acc = acc * x ** (prev - d) + _horner(groups[d], pt, var_index + 1, zero)
        prev = d
    return acc * x ** prev


def format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for e, c in p.sorted_terms():
        mono = "*".join(
            (v if k == 1 else f"{v}^{k}") for v, k in zip(p.variables, e) if k
        )
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{format_coeff(mag)}*{mono}"
        else:
            body = format_coeff(mag)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
