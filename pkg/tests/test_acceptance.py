"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or ``python tests/test_acceptance.py``.
"""

import itertools
import random
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from momenta.calculus import BivectorField, ChartDomain, FormField, contract2, exterior_d, lie_derivative, sharp, wedge
from momenta.cli import main as cli_main
from momenta.cli import run
from momenta.deform import DeformationCandidate, beta_forms, deformation_residual, hamiltonian_deformation, random_probe
from momenta.group import (
    builtin_group,
    derive_multiplicative_bivector,
    linearization,
    maurer_cartan_residual,
    multiplicativity_residual,
    theta2_residual,
    theta_bracket_residual,
)
from momenta.imm import AlphaMap, MomentumCandidate, gauge_transform, mc_residual, pullback_alpha
from momenta.poisson import PoissonManifold, fn_bracket, oneform_bracket, schouten_residual
from momenta.reconstruct import (
    LeafSpec,
    abelian_analyze,
    heisenberg_analyze,
    leaf_map,
    obstruction_phi,
)
from momenta.scenario import load_scenario
from support import chart_of, random_form, random_poly, random_vector, lie_one_form_oracle

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "momenta" / "fixtures"
F = Fraction
COMMANDS = ("validate", "reconstruct", "obstruction", "abelian", "heisenberg", "deform")


@pytest.fixture
def criterion(capsys):
    """Run a criterion body, time it and print one summary line whatever the outcome."""

    def _run(number, title, body, limit=None):
        t0 = time.perf_counter()
        detail, ok = "", False
        try:
            detail = body() or ""
            elapsed = time.perf_counter() - t0
            if limit is not None and elapsed >= limit:
                raise AssertionError(f"runtime {elapsed:.1f}s exceeds {limit}s")
            ok = True
        finally:
            elapsed = time.perf_counter() - t0
            verdict = "PASS" if ok else "FAIL"
            with capsys.disabled():
                print(f"\n[acceptance] criterion {number:>2} {verdict}  {title}  ({elapsed:.2f}s) {detail}")

    return _run


def _zero_all(items):
    return all(x.is_zero() for x in items)


# 1


def test_criterion_01_heisenberg_group(criterion):
    def body():
        G = builtin_group("heisenberg")
        assert _zero_all(maurer_cartan_residual(G))
        assert _zero_all(theta_bracket_residual(G).values())
        assert _zero_all(multiplicativity_residual(G).values())
        assert _zero_all(theta2_residual(G).values())
        th = G.thetas()
        assert contract2(G.pi_dual, th[0], th[1]).is_zero()
        return "all residuals exact zero"

    criterion(1, "Heisenberg group identities", body, limit=5)


# 2


def test_criterion_02_derive_bivector(criterion):
    def body():
        G = builtin_group("heisenberg", pi="zero")
        res = derive_multiplicative_bivector(G.bialgebra, G.chart, G.mult, 2)
        H = G.with_pi(res.pi)
        assert _zero_all(multiplicativity_residual(H).values())
        assert _zero_all(schouten_residual(res.pi).values())
        lin = linearization(H)
        assert lin.match and not lin.mismatches
        return f"pi = {res.pi}"

    criterion(2, "derived multiplicative bivector", body, limit=30)


# 3


def test_criterion_03_identity_scenario(criterion):
    def body():
        sc = load_scenario(FIXTURES / "heisenberg_identity.scn")
        rep = run("validate", sc)
        assert rep.verdict == "pass"
        assert all(c.residual_poly == "0" and c.sup_norm == 0 for c in rep.checks)
        spec = LeafSpec(sc.alpha, sc.group, (0, 0, 0), (0, 0, 0), step=1e-3, grid=10)
        leaf = leaf_map(spec)
        assert leaf.points.shape == (1000, 3)
        err = float(np.max(np.abs(leaf.samples - leaf.points)))
        phi = obstruction_phi(leaf, 1e-9)
        assert err < 1e-6
        assert phi.max_sup < 1e-9
        assert leaf.path_discrepancy < 1e-6
        return f"sup|mu-m|={err:.1e} phi={phi.max_sup:.1e} path={leaf.path_discrepancy:.1e}"

    criterion(3, "identity scenario reconstruction", body, limit=60)


# 4


def test_criterion_04_abelian_translation(criterion):
    def body():
        sc = load_scenario(FIXTURES / "abelian_translation.scn")
        an = abelian_analyze(sc.alpha)
        assert an.cocycle[0][1] == 1 and an.verdict == "no momentum map"
        rng = random.Random(4)
        worst = 0.0
        for _ in range(5):
            base_u = (F(rng.randint(-9, 9), 7), F(rng.randint(-9, 9), 7))
            base_m = (F(rng.randint(-4, 4), 5), F(rng.randint(-4, 4), 5))
            leaf = leaf_map(LeafSpec(sc.alpha, sc.group, base_m, base_u, step=1e-2, grid=5))
            phi = obstruction_phi(leaf)
            worst = max(worst, float(np.max(np.abs(phi.values[(0, 1)] - 1.0))))
        assert worst < 1e-9
        return f"c(xi1,xi2)=1, |phi-1|<={worst:.1e} on 5 leaves"

    criterion(4, "abelian translation obstruction", body)


# 5


def test_criterion_05_abelian_rotation(criterion):
    def body():
        sc = load_scenario(FIXTURES / "abelian_rotation.scn")
        an = abelian_analyze(sc.alpha)
        assert an.cocycle == [[0]] and an.has_momentum_map and an.family_dimension == 1
        t = F(3, 7)
        a = leaf_map(LeafSpec(sc.alpha, sc.group, (0, 0), (F(1, 5),), step=1e-3, grid=10))
        b = leaf_map(LeafSpec(sc.alpha, sc.group, (0, 0), (F(1, 5) + t,), step=1e-3, grid=10))
        diff = float(np.max(np.abs(b.samples - a.samples - float(t))))
        assert diff < 1e-9
        return f"family dim 1, leaves differ by t within {diff:.1e}"

    criterion(5, "abelian rotation affine family", body)


# 6


def _perturbation_scenario(seed: int, G):
    """M = G* x R^2 with mu = (a, b, c + f(p, q, a^2 + b^2)); alpha = mu^* theta."""
    rng = random.Random(seed)
    ch = ChartDomain(("a", "b", "c", "p", "q"))
    a, b, c, p, q = (ch.coord(i) for i in range(5))
    pi = BivectorField(ch, {(0, 2): b, (1, 2): -a, (3, 4): ch.const(rng.choice((1, 2, F(1, 2))))})
    M = PoissonManifold(ch, pi)
    s = a * a + b * b
    f = ch.zero()
    for _ in range(4):
        term = ch.const(F(rng.randint(-3, 3), rng.choice((1, 2, 3))))
        for _ in range(rng.randint(1, 3)):
            term = term * rng.choice((p, q, s, p, q))
        f = f + term
    mu = MomentumCandidate([a, b, c + f], G, ch)
    return pullback_alpha(mu, M), mu, rng


def test_criterion_06_heisenberg_central_freedom(criterion):
    def body():
        G = builtin_group("heisenberg")
        ident = load_scenario(FIXTURES / "heisenberg_identity.scn")
        cases = [(ident.alpha, None, random.Random(0))] + [_perturbation_scenario(s, G) for s in range(20)]
        worst = 0.0
        for alpha, mu, rng in cases:
            pab = contract2(alpha.manifold.pi, alpha.forms[0], alpha.forms[1])
            assert pab.is_constant()
            dim = alpha.chart.dim
            base_m = tuple(F(rng.randint(-3, 3), 4) for _ in range(dim))
            base_u = tuple(F(rng.randint(-5, 5), 6) for _ in range(3))
            an = heisenberg_analyze(alpha, G, base_m, base_u)
            assert an.c == 0 and an.has_momentum_map
            t = F(rng.randint(1, 9), 10)
            u1 = an.base_u
            u2 = (u1[0], u1[1], u1[2] + t)
            grid = 4 if dim == 3 else 3
            l1 = leaf_map(LeafSpec(alpha, G, base_m, u1, step=1e-2, grid=grid))
            l2 = leaf_map(LeafSpec(alpha, G, base_m, u2, step=1e-2, grid=grid))
            assert obstruction_phi(l1).accepted and obstruction_phi(l2).accepted
            d = l2.samples - l1.samples
            worst = max(worst, float(np.max(np.abs(d[:, :2]))), float(np.max(np.abs(d[:, 2] - float(t)))))
            # a non-central shift leaves the momentum map locus
            off = leaf_map(LeafSpec(alpha, G, base_m, (u1[0] + F(1, 2), u1[1], u1[2]), step=1e-2, grid=2))
            assert not obstruction_phi(off).accepted
        broken = load_scenario(FIXTURES / "heisenberg_broken.scn")
        assert heisenberg_analyze(broken.alpha, broken.group).c == 2
        assert worst < 1e-6
        return f"21 scenarios with c=0, central offset error {worst:.1e}; broken fixture c=2"

    criterion(6, "Heisenberg central freedom", body)


# 7


def test_criterion_07_gauge(criterion):
    def body():
        G = builtin_group("heisenberg")
        alpha = AlphaMap(G.poisson_manifold(), G.bialgebra, tuple(G.thetas()))
        rng = random.Random(7)
        for _ in range(10):
            H = [random_poly(rng, G.chart, 3, 4) for _ in range(3)]
            assert _zero_all(mc_residual(gauge_transform(alpha, H)))
        ab = load_scenario(FIXTURES / "abelian_translation.scn")
        for _ in range(10):
            H = [random_poly(rng, ab.alpha.chart, 3, 4) for _ in range(2)]
            out = gauge_transform(ab.alpha, H)
            for f, g, h in zip(out.forms, ab.alpha.forms, H):
                assert f == g + exterior_d(FormField.scalar(h, ab.alpha.chart))
        return "10 Heisenberg and 10 abelian gauge transforms exact"

    criterion(7, "gauge transformations", body)


# 8


def test_criterion_08_deformations(criterion):
    def body():
        sc = load_scenario(FIXTURES / "abelian_rotation.scn")
        hd = hamiltonian_deformation(sc.deform["Phi"], sc.alpha)
        res = deformation_residual(hd.candidate)
        assert res.r1_zero and res.r2_zero
        assert _zero_all(sharp(sc.manifold.pi, b) for b in beta_forms(hd.candidate))
        H = (random_probe(sc.alpha.chart, 2024, 3),)
        bad = deformation_residual(DeformationCandidate(H, sc.alpha))
        assert not bad.is_zero
        return f"Hamiltonian residual 0; random H residual {bad.r2[0]}"

    criterion(8, "infinitesimal deformations", body, limit=10)


# 9


def _random_poisson(rng: random.Random, dim: int) -> PoissonManifold:
    ch = chart_of(dim)
    if dim <= 2:
        comps = {(0, 1): random_poly(rng, ch, 3, 3)} if dim == 2 else {}
        return PoissonManifold(ch, BivectorField(ch, comps))
    g = random_poly(rng, ch, 1, 2)
    C = random_poly(rng, ch, 2, 3)
    comps = {(0, 1): g * C.diff(2), (1, 2): g * C.diff(0), (0, 2): -(g * C.diff(1))}
    return PoissonManifold(ch, BivectorField(ch, comps))


def test_criterion_09_property_suite(criterion):
    n = 100

    def body():
        rng = random.Random(9)
        counts = dict.fromkeys(("d2", "graded", "assoc", "cartan", "koszul", "jacobi"), 0)
        for _ in range(n):
            ch = chart_of(rng.randint(1, 4))
            w = random_form(rng, ch, rng.randint(0, ch.dim))
            assert exterior_d(exterior_d(w)).is_zero()
            counts["d2"] += 1
            p, q = rng.randint(0, 2), rng.randint(0, 2)
            w1, w2 = random_form(rng, ch, min(p, ch.dim)), random_form(rng, ch, min(q, ch.dim))
            sign = (-1) ** (w1.degree * w2.degree)
            assert wedge(w1, w2) == wedge(w2, w1) * sign
            counts["graded"] += 1
            ws = [random_form(rng, ch, min(rng.randint(0, 2), ch.dim), 2) for _ in range(3)]
            assert wedge(wedge(ws[0], ws[1]), ws[2]) == wedge(ws[0], wedge(ws[1], ws[2]))
            counts["assoc"] += 1
            X = random_vector(rng, ch)
            v = random_form(rng, ch, 1)
            assert lie_derivative(X, v).coeffs() == lie_one_form_oracle(X, v)
            counts["cartan"] += 1
            M = _random_poisson(rng, rng.randint(2, 4))
            f, g, h = (random_poly(rng, M.chart, 2, 3) for _ in range(3))
            assert oneform_bracket(M.df(f), M.df(g), M) == M.df(fn_bracket(f, g, M))
            counts["koszul"] += 1
            jac = (fn_bracket(f, fn_bracket(g, h, M), M) + fn_bracket(g, fn_bracket(h, f, M), M)
                   + fn_bracket(h, fn_bracket(f, g, M), M))
            assert jac.is_zero()
            counts["jacobi"] += 1
        assert all(v >= 100 for v in counts.values())
        return " ".join(f"{k}={v}" for k, v in counts.items())

    criterion(9, "calculus property suite", body, limit=60)


# 10


def test_criterion_10_determinism(criterion, tmp_path):
    def body():
        fixtures = sorted(FIXTURES.glob("*.scn"))
        assert fixtures
        runs = 0
        for fx, cmd in itertools.product(fixtures, COMMANDS):
            outs = []
            for k in range(2):
                out = tmp_path / f"{fx.stem}.{cmd}.{k}.json"
                cli_main([cmd, str(fx), "--seed", "11", "--out", str(out)])
                outs.append(out.read_bytes())
            assert outs[0] == outs[1], f"{fx.name} {cmd} differs between runs"
            runs += 1
        return f"{runs} fixture/command pairs byte-identical"

    criterion(10, "deterministic reports", body)


if __name__ == "__main__":  # pragma: no cover
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
