"""Random generators and independent oracles shared by the test modules."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from hypothesis import strategies as st

from momenta.calculus import BivectorField, ChartDomain, FormField, VectorField
from momenta.polynomial import Poly

NAMES = ("x", "y", "z", "w")


def chart_of(dim: int) -> ChartDomain:
    return ChartDomain(NAMES[:dim])


def random_poly(rng: random.Random, chart: ChartDomain, degree: int = 3, terms: int = 4) -> Poly:
    m = chart.dim
    out = {}
    for _ in range(rng.randint(0, terms)):
        exps = [0] * m
        for _ in range(rng.randint(0, degree)):
            exps[rng.randrange(m)] += 1
        c = Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2, 3)))
        out[tuple(exps)] = out.get(tuple(exps), 0) + c
    return Poly(chart.coord_names, out)


def random_form(rng, chart, degree, poly_degree=3) -> FormField:
    comps = {idx: random_poly(rng, chart, poly_degree, 3)
             for idx in itertools.combinations(range(chart.dim), degree)}
    return FormField(chart, degree, comps)


def random_vector(rng, chart, poly_degree=2) -> VectorField:
    return VectorField(chart, [random_poly(rng, chart, poly_degree, 3) for _ in range(chart.dim)])


def random_bivector(rng, chart, poly_degree=2) -> BivectorField:
    return BivectorField(chart, {(i, j): random_poly(rng, chart, poly_degree, 3)
                                 for i in range(chart.dim) for j in range(i + 1, chart.dim)})


@st.composite
def charts(draw, min_dim=1, max_dim=4):
    return chart_of(draw(st.integers(min_dim, max_dim)))


@st.composite
def polys(draw, chart, degree=3, max_terms=4):
    m = chart.dim
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        exps = draw(st.lists(st.integers(0, degree), min_size=m, max_size=m))
        while sum(exps) > degree:
            k = exps.index(max(exps))
            exps[k] -= 1
        num = draw(st.integers(-5, 5))
        den = draw(st.sampled_from((1, 2, 3)))
        terms[tuple(exps)] = terms.get(tuple(exps), 0) + Fraction(num, den)
    return Poly(chart.coord_names, terms)


@st.composite
def forms(draw, chart, degree, poly_degree=3):
    comps = {idx: draw(polys(chart, poly_degree, 3)) for idx in itertools.combinations(range(chart.dim), degree)}
    return FormField(chart, degree, comps)


@st.composite
def vectors(draw, chart, poly_degree=2):
    return VectorField(chart, [draw(polys(chart, poly_degree, 3)) for _ in range(chart.dim)])


# oracles


def perm_sign(seq) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def wedge_oracle(w1: FormField, w2: FormField) -> dict:
    """(w1 ^ w2)_I = sum over splits I = J u K of sign(J, K) w1_J w2_K."""
    chart = w1.chart
    p, q = w1.degree, w2.degree
    out = {}
    for I in itertools.combinations(range(chart.dim), p + q):
        acc = chart.zero()
        for J in itertools.combinations(I, p):
            K = tuple(i for i in I if i not in J)
            acc = acc + w1[J] * w2[K] * perm_sign(J + K)
        out[I] = acc
    return out


def d_oracle(w: FormField) -> dict:
    """(dw)_I = sum_r (-1)^r d_{i_r} w_{I minus i_r}."""
    chart = w.chart
    out = {}
    for I in itertools.combinations(range(chart.dim), w.degree + 1):
        acc = chart.zero()
        for r, i in enumerate(I):
            rest = I[:r] + I[r + 1:]
            acc = acc + w[rest].diff(i) * (-1) ** r
        out[I] = acc
    return out


def lie_one_form_oracle(X: VectorField, w: FormField) -> list:
    """(L_X w)_j = sum_i X^i d_i w_j + w_i d_j X^i."""
    m = X.chart.dim
    out = []
    for j in range(m):
        acc = X.chart.zero()
        for i in range(m):
            acc = acc + X[i] * w[(j,)].diff(i) + w[(i,)] * X[i].diff(j)
        out.append(acc)
    return out


def schouten_oracle(pi: BivectorField) -> dict:
    """Jacobiator of the coordinate functions, {x_i, {x_j, x_k}} + cyclic, expanded directly."""
    chart = pi.chart
    m = chart.dim

    def bracket(f, g):
        acc = chart.zero()
        for a in range(m):
            for b in range(m):
                if a != b:
                    acc = acc + pi[a, b] * f.diff(a) * g.diff(b)
        return acc

    xs = [chart.coord(i) for i in range(m)]
    out = {}
    for i, j, k in itertools.combinations(range(m), 3):
        out[(i, j, k)] = (bracket(xs[i], bracket(xs[j], xs[k])) + bracket(xs[j], bracket(xs[k], xs[i]))
                          + bracket(xs[k], bracket(xs[i], xs[j])))
    return out


def jacobi_oracle(c) -> Fraction:
    """Max |[[e_i, e_j], e_k] + cyclic| over all triples, via explicit vector brackets."""
    n = len(c)

    def br(x, y):
        return [sum(x[i] * y[j] * c[i][j][k] for i in range(n) for j in range(n)) for k in range(n)]

    e = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    worst = Fraction(0)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                v = [a + b + cc for a, b, cc in zip(br(br(e[i], e[j]), e[k]), br(br(e[j], e[k]), e[i]),
                                                     br(br(e[k], e[i]), e[j]))]
                worst = max([worst] + [abs(t) for t in v])
    return worst
