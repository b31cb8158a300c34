"""Command line entry point: ``momenta <command> <scenario.scn> [options]``."""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from typing import Callable

import numpy as np

from . import deform as deform_mod
from . import group as grp
from .bialgebra import check_cocycle, check_jacobi, dual_algebra
from .calculus import ChartDomain, field_polys, sup_norm
from .errors import MomentaError
from .imm import action_fields, bracket_morphism_residual, mc_residual, momentum_verify
from .poisson import poisson_action_residual, schouten_residual
from .polynomial import Poly
from .reconstruct import (
    LeafSpec,
    abelian_analyze,
    heisenberg_analyze,
    involutivity_report,
    leaf_map,
    obstruction_phi,
)
from .report import FAIL, PASS, WARN, Check, Report, emit_report
from .scenario import Scenario, load_scenario

COMMANDS = ("validate", "reconstruct", "obstruction", "abelian", "heisenberg", "deform")


def _flatten(residual) -> list:
    if isinstance(residual, dict):
        return [p for k in sorted(residual) for p in _flatten(residual[k])]
    if isinstance(residual, (list, tuple)):
        return [p for r in residual for p in _flatten(r)]
    if isinstance(residual, (Fraction, int)):
        return [residual]
    return field_polys(residual)


def exact_check(name: str, residual, chart: ChartDomain | None, sample_grid: int = 5) -> Check:
    """Pass iff every component of ``residual`` is exactly zero; sup-norm over a sample grid."""
    items = _flatten(residual)
    bad = [p for p in items if (p != 0 if isinstance(p, (Fraction, int)) else not p.is_zero())]
    if not bad:
        return Check(name, PASS, "0", 0.0, 0.0)
    text = "; ".join(str(p) for p in bad)
    sup = 0.0
    pts = chart.grid(sample_grid) if chart is not None else None
    for p in bad:
        if isinstance(p, (Fraction, int)):
            sup = max(sup, abs(float(p)))
        elif pts is not None:
            sup = max(sup, sup_norm(p, pts))
    return Check(name, FAIL, text, sup, 0.0)


def numeric_check(name: str, value: float, tol: float, detail: str = "") -> Check:
    return Check(name, PASS if value <= tol else FAIL, "", float(value), tol, detail=detail)


def _guard(report: Report, name: str, fn: Callable[[], None]) -> None:
    try:
        fn()
    except MomentaError as exc:
        report.add(Check(name, FAIL, "", None, None, exc.code, str(exc)))


def _leaf_spec(sc: Scenario, grid, step, seed) -> LeafSpec:
    sc.require("alpha", "group")
    base_m = sc.options.base_m or sc.alpha.chart.center()
    base_u = sc.options.base_u or (Fraction(0),) * sc.group.dim
    return LeafSpec(sc.alpha, sc.group, tuple(base_m), tuple(base_u), step, grid, seed)


# commands


def _validate(sc: Scenario, r: Report, opts: dict) -> None:
    ng = opts["sample_grid"]
    b = sc.bialgebra
    r.add(exact_check("bialgebra.jacobi", check_jacobi(b.algebra), None))
    def dual_ok():
        dual_algebra(b)
        r.add(Check("bialgebra.dual_jacobi", PASS))
    _guard(r, "bialgebra.dual_jacobi", dual_ok)
    r.add(exact_check("bialgebra.cocycle", check_cocycle(b), None))
    G = sc.group
    if G is not None:
        ch = G.chart
        r.add(exact_check("group.identity", grp.identity_residual(G), ch, ng))
        r.add(exact_check("group.associativity", grp.associativity_residual(G), ch, ng))
        r.add(exact_check("group.pi_at_identity", grp.pi_at_identity(G), ch, ng))
        r.add(exact_check("group.multiplicativity", grp.multiplicativity_residual(G), ch, ng))
        r.add(exact_check("group.schouten", schouten_residual(G.pi_dual), ch, ng))
        lin = grp.linearization(G)
        r.add(Check("group.linearization", PASS if lin.match else FAIL,
                    "; ".join(f"({i},{j},{k}): {a} != {e}" for i, j, k, a, e in lin.mismatches) or "0"))
        if G.coframe is None:
            r.add(Check("group.coframe", WARN, "", None, None, "E008", "no polynomial coframe; frame checks skipped"))
        else:
            r.add(exact_check("group.coframe_at_identity", grp.coframe_at_identity_residual(G), ch, ng))
            r.add(exact_check("group.left_invariance", grp.left_invariance_residual(G), ch, ng))
            r.add(exact_check("group.maurer_cartan", grp.maurer_cartan_residual(G), ch, ng))
            r.add(exact_check("group.theta_bracket", grp.theta_bracket_residual(G), ch, ng))
            r.add(exact_check("group.theta2", grp.theta2_residual(G), ch, ng))
    M = sc.manifold
    if M is not None:
        r.add(exact_check("manifold.schouten", schouten_residual(M.pi), M.chart, ng))
    if sc.alpha is not None:
        a = sc.alpha
        r.add(exact_check("alpha.maurer_cartan", mc_residual(a), a.chart, ng))
        r.add(exact_check("alpha.bracket_morphism", bracket_morphism_residual(a), a.chart, ng))
        act = poisson_action_residual(action_fields(a), b, a.manifold)
        r.add(exact_check("action.poisson", act.poisson, a.chart, ng))
        r.add(exact_check("action.antihomomorphism", act.antihomomorphism, a.chart, ng))
    if sc.mu is not None and M is not None:
        def mu_checks():
            v = momentum_verify(sc.mu, M, alpha_expected=sc.alpha)
            if v.alpha_residuals is not None:
                r.add(exact_check("mu.pullback_alpha", v.alpha_residuals, M.chart, ng))
            r.add(exact_check("mu.poisson_map", v.poisson_residuals, M.chart, ng))
        _guard(r, "mu", mu_checks)


def _leaf_checks(sc: Scenario, r: Report, opts: dict, with_phi: bool, with_table: bool) -> None:
    inv = involutivity_report(sc.alpha, sc.group)
    ch = inv.product
    r.add(exact_check("involutivity.alpha_mc", inv.alpha_mc, sc.alpha.chart, opts["sample_grid"]))
    r.add(exact_check("involutivity.group_mc", inv.group_mc, sc.group.chart, opts["sample_grid"]))
    r.add(exact_check("involutivity.combined", inv.combined, ch, 3))
    if not inv.involutive:
        r.notes.append("distribution is not involutive; leaf lifting skipped")
        return
    spec = _leaf_spec(sc, opts["grid"], opts["step"], opts["seed"])
    leaf = leaf_map(spec)
    tol = opts["tol"]
    r.add(numeric_check("leaf.ode_error", leaf.ode_error, tol, "step-halving estimate"))
    r.add(numeric_check("leaf.path_independence", leaf.path_discrepancy, tol,
                        f"{len(leaf.checked)} grid points lifted along two axis orders"))
    if sc.mu is not None:
        exact = np.stack([p.compile()(leaf.points) for p in sc.mu.components], axis=1)
        r.add(numeric_check("leaf.matches_mu", float(np.max(np.abs(exact - leaf.samples))), tol,
                            "samples against the scenario's momentum map"))
    if with_phi:
        ob = obstruction_phi(leaf, tol)
        names = sc.bialgebra.algebra.basis_names or tuple(f"e{i + 1}" for i in range(sc.bialgebra.dim))
        for (i, j), s in sorted(ob.sup.items()):
            r.add(numeric_check(f"phi({names[i]},{names[j]})", s, tol,
                                f"value at base point {ob.at_base[(i, j)]}"))
    r.notes.append("checks are infinitesimal on the chart box; no global integration of the action")
    if with_table:
        r.data["leaf"] = {"base_m": [str(x) for x in spec.base_m], "base_u": [str(x) for x in spec.base_u],
                          "grid": list(spec.grid), "step": spec.step,
                          "points": leaf.points.tolist(), "samples": leaf.samples.tolist()}


def _reconstruct(sc, r, opts):
    sc.require("alpha", "group")
    _guard(r, "reconstruct", lambda: _leaf_checks(sc, r, opts, False, True))


def _obstruction(sc, r, opts):
    sc.require("alpha", "group")
    _guard(r, "obstruction", lambda: _leaf_checks(sc, r, opts, True, False))


def _abelian(sc, r, opts):
    sc.require("alpha")

    def body():
        an = abelian_analyze(sc.alpha, sc.options.base_m)
        r.data["abelian"] = {
            "potentials": [str(h) for h in an.potentials],
            "cocycle": [[str(v) for v in row] for row in an.cocycle],
            "shift": None if an.shift is None else [str(v) for v in an.shift],
            "family_basis": [[str(v) for v in z] for z in an.annihilator_basis],
            "verdict": an.verdict,
        }
        nz = [f"c({i},{j}) = {v}" for i, row in enumerate(an.cocycle) for j, v in enumerate(row) if i < j and v]
        r.add(Check("abelian.momentum_map", PASS if an.has_momentum_map else FAIL, "; ".join(nz) or "0",
                    max([abs(float(v)) for row in an.cocycle for v in row], default=0.0), 0.0,
                    detail=an.verdict))
    _guard(r, "abelian", body)


def _heisenberg(sc, r, opts):
    sc.require("alpha", "group")

    def body():
        h = heisenberg_analyze(sc.alpha, sc.group, sc.options.base_m, sc.options.base_u)
        r.add(Check("heisenberg.c_constant", PASS, str(h.c_poly), 0.0, 0.0))
        r.data["heisenberg"] = {
            "c": str(h.c), "verdict": h.verdict,
            "leaf_constants": None if h.leaf_constants is None else [str(v) for v in h.leaf_constants],
            "shift": None if h.shift is None else [str(v) for v in h.shift],
            "base_u": None if h.base_u is None else [str(v) for v in h.base_u],
        }
        r.add(Check("heisenberg.c_zero", PASS if h.c == 0 else FAIL, str(h.c), abs(float(h.c)), 0.0,
                    detail=h.verdict))
        if h.has_momentum_map:
            base_m = sc.options.base_m or sc.alpha.chart.center()
            spec = LeafSpec(sc.alpha, sc.group, tuple(base_m), h.base_u, opts["step"], opts["grid"], opts["seed"])
            ob = obstruction_phi(leaf_map(spec), opts["tol"])
            r.add(numeric_check("heisenberg.shifted_leaf_phi", ob.max_sup, opts["tol"]))
    _guard(r, "heisenberg", body)


def _random_H(sc: Scenario, degree: int, seed: int) -> tuple:
    chart = sc.alpha.chart
    return tuple(deform_mod.random_probe(chart, seed * 1000 + 17 * i + 1, degree) for i in range(sc.bialgebra.dim))


def _deform(sc, r, opts):
    sc.require("alpha", "deform")
    ng = opts["sample_grid"]
    ch = sc.alpha.chart

    def run_candidate(prefix, D):
        res = deform_mod.deformation_residual(D)
        r.add(exact_check(f"{prefix}.inf1", res.r1, ch, ng))
        r.add(exact_check(f"{prefix}.inf2", res.r2, ch, ng))
        r.add(exact_check(f"{prefix}.beta_crosscheck", deform_mod.beta_crosscheck(D, res), ch, ng))
        r.data.setdefault("deform", {})[prefix] = {"H": [str(h) for h in D.H],
                                                  "beta": [str(b) for b in deform_mod.beta_forms(D)]}

    def body():
        d = sc.deform
        if d["H"] is not None:
            run_candidate("deform.H", deform_mod.DeformationCandidate(d["H"], sc.alpha))
        if d["Phi"] is not None:
            hd = deform_mod.hamiltonian_deformation(d["Phi"], sc.alpha, opts["seed"])
            r.add(exact_check("deform.Phi.commutation", hd.commutation, ch, ng))
            run_candidate("deform.Phi", hd.candidate)
        if d["random_H"] is not None:
            H = _random_H(sc, d["random_H"], opts["seed"])
            run_candidate("deform.random", deform_mod.DeformationCandidate(H, sc.alpha))
    _guard(r, "deform", body)
    r.notes.append("candidates are verified only; no potential is constructed by averaging")


_DISPATCH = {"validate": _validate, "reconstruct": _reconstruct, "obstruction": _obstruction,
             "abelian": _abelian, "heisenberg": _heisenberg, "deform": _deform}


def resolve_seed(cli_seed: int | None, scenario_seed: int | None = None) -> int:
    if cli_seed is not None:
        return cli_seed
    env = os.environ.get("MOMENTA_SEED")
    if env is not None and env.strip():
        return int(env)
    return scenario_seed or 0


def run(command: str, scenario: Scenario, grid=None, step=None, tol=None, seed=None) -> Report:
    """Execute one command against a loaded scenario and collect the checks."""
    if command not in _DISPATCH:
        raise ValueError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
    o = scenario.options
    g = grid if grid is not None else o.grid
    opts = {
        "grid": (g,) if isinstance(g, int) else tuple(g),
        "step": step if step is not None else o.step,
        "tol": tol if tol is not None else o.tol,
        "seed": resolve_seed(seed, o.seed),
        "sample_grid": o.sample_grid,
    }
    report = Report(command, os.path.basename(scenario.path), opts["seed"])
    report.data["options"] = {"grid": list(opts["grid"]), "step": opts["step"], "tol": opts["tol"]}
    report.data["dims"] = list(scenario.dims)
    try:
        _DISPATCH[command](scenario, report, opts)
    except MomentaError as exc:
        report.add(Check(command, FAIL, "", None, None, exc.code, str(exc)))
    return report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="momenta", description="Momentum maps of Poisson-Lie group actions.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("scenario")
    p.add_argument("--grid", type=int, default=None, help="grid points per axis")
    p.add_argument("--step", type=float, default=None, help="ODE step length")
    p.add_argument("--tol", type=float, default=None, help="tolerance for numerical checks")
    p.add_argument("--seed", type=int, default=None, help="seed (default: MOMENTA_SEED or the scenario)")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out", default=None, help="output path (default: standard output)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sc = load_scenario(args.scenario)
    except MomentaError as exc:
        report = Report(args.command, os.path.basename(args.scenario), resolve_seed(args.seed))
        report.add(Check("load_scenario", FAIL, "", None, None, exc.code, str(exc)))
    else:
        report = run(args.command, sc, args.grid, args.step, args.tol, args.seed)
    try:
        emit_report(report, args.format, args.out)
    except MomentaError as exc:
        sys.stderr.write(f"momenta: {exc} [{exc.code}]\n")
        return 2
    if report.verdict != PASS:
        sys.stderr.write(f"momenta: check failed: {report.first_failure.name}\n")
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
