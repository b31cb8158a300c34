import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momenta.deform import (
    DeformationCandidate,
    beta_crosscheck,
    beta_forms,
    deformation_residual,
    find_potential,
    hamiltonian_deformation,
    random_probe,
)
from momenta.calculus import sharp
from momenta.errors import ChartMismatch, DimensionMismatch
from momenta.scenario import load_scenario
from support import polys


@pytest.fixture(scope="module")
def rotation(fixtures_dir):
    return load_scenario(fixtures_dir / "abelian_rotation.scn")


@pytest.fixture(scope="module")
def translation(fixtures_dir):
    return load_scenario(fixtures_dir / "abelian_translation.scn")


def test_rotation_hamiltonian_deformation(rotation):
    hd = hamiltonian_deformation(rotation.deform["Phi"], rotation.alpha)
    res = deformation_residual(hd.candidate)
    assert res.is_zero
    assert all(v.is_zero() for v in hd.commutation)
    pi = rotation.manifold.pi
    assert all(sharp(pi, b).is_zero() for b in beta_forms(hd.candidate))


def test_translation_hamiltonian_deformation(translation):
    hd = hamiltonian_deformation(translation.deform["Phi"], translation.alpha)
    one = translation.manifold.chart.const(1)
    assert hd.candidate.H[0] == one
    assert deformation_residual(hd.candidate).is_zero


def test_random_H_is_not_a_deformation(rotation):
    ch = rotation.manifold.chart
    H = (random_probe(ch, 11, 3),)
    assert not H[0].is_constant()
    res = deformation_residual(DeformationCandidate(H, rotation.alpha))
    assert not res.r2_zero


def test_r1_detects_non_closed(translation):
    ch = translation.manifold.chart
    y = ch.coord(1)
    # X_1 = d/dx, X_2 = d/dy, so X_1 H_2 - X_2 H_1 = -1
    res = deformation_residual(DeformationCandidate((y, ch.zero()), translation.alpha))
    assert res.r1[(0, 1)] == ch.const(-1)


def test_heisenberg_casimir_gives_trivial_deformation(heis_alpha):
    a, b = heis_alpha.chart.coord(0), heis_alpha.chart.coord(1)
    hd = hamiltonian_deformation(a * a + b * b, heis_alpha)
    assert all(h.is_zero() for h in hd.candidate.H)


@settings(max_examples=40)
@given(st.data())
def test_heisenberg_r1_vanishes_for_hamiltonian_H(heis_alpha, data):
    Phi = data.draw(polys(heis_alpha.chart, 3, 4))
    hd = hamiltonian_deformation(Phi, heis_alpha)
    assert deformation_residual(hd.candidate).r1_zero


@settings(max_examples=40)
@given(st.data())
def test_residual_linear_and_beta_consistent(heis_alpha, data):
    ch = heis_alpha.chart
    H1 = tuple(data.draw(polys(ch, 2, 3)) for _ in range(3))
    H2 = tuple(data.draw(polys(ch, 2, 3)) for _ in range(3))
    D1, D2 = DeformationCandidate(H1, heis_alpha), DeformationCandidate(H2, heis_alpha)
    D12 = DeformationCandidate(tuple(p + q for p, q in zip(H1, H2)), heis_alpha)
    r1, r2, r12 = deformation_residual(D1), deformation_residual(D2), deformation_residual(D12)
    assert all(r12.r1[k] == r1.r1[k] + r2.r1[k] for k in r12.r1)
    assert all(a == b + c for a, b, c in zip(r12.r2, r1.r2, r2.r2))
    assert all(v.is_zero() for v in beta_crosscheck(D12, r12))


def test_candidate_validation(rotation, heis_alpha):
    ch = rotation.manifold.chart
    with pytest.raises(DimensionMismatch):
        DeformationCandidate((ch.zero(), ch.zero()), rotation.alpha)
    with pytest.raises(ChartMismatch):
        hamiltonian_deformation(heis_alpha.chart.coord(0), rotation.alpha)


def test_find_potential(translation):
    ch = translation.manifold.chart
    x, y = ch.coord(0), ch.coord(1)
    Phi = x * x * y - y
    H = hamiltonian_deformation(Phi, translation.alpha).candidate.H
    found = find_potential(H, translation.alpha, 3)
    assert found is not None
    assert hamiltonian_deformation(found, translation.alpha).candidate.H == H
    assert find_potential((y, ch.zero()), translation.alpha, 3) is None


def _mu_t_forms(G, H, t):
    from momenta.calculus import pullback
    ch = G.chart
    images = [ch.coord(i) for i in range(3)] + [h * t for h in H]
    comps = [p.substitute(images) for p in G.mult]
    return [pullback(th, comps, ch) for th in G.thetas()]


def test_beta_is_derivative_of_deformed_pullback(heis, heis_alpha):
    """beta_i = d/dt (mu exp(tH))^* theta_i at t = 0 for mu = id, by exact symmetric difference."""
    from fractions import Fraction
    from momenta.deform import DeformationCandidate, beta_forms
    ch = heis.chart
    a, b, c = (ch.coord(i) for i in range(3))
    H = (a * b + c, b * b - a, a * c)
    beta = beta_forms(DeformationCandidate(H, heis_alpha))
    t = Fraction(1, 1000)
    plus, minus = _mu_t_forms(heis, H, t), _mu_t_forms(heis, H, -t)
    pt = [Fraction(1, 3), Fraction(-1, 2), Fraction(1, 5)]
    for bt, fp, fm in zip(beta, plus, minus):
        for k in range(3):
            diff = (fp[(k,)].evaluate(pt) - fm[(k,)].evaluate(pt)) / (2 * t)
            assert abs(float(diff - bt[(k,)].evaluate(pt))) < 1e-4
