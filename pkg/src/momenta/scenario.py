"""Scenario files: TOML documents describing a bialgebra, a group, a Poisson manifold and the maps under test.

Example::

    [algebra]
    basis = ["xi", "eta", "zeta"]
    brackets = ["[xi, zeta] = eta", "[eta, zeta] = -xi"]
    dual_basis = ["x", "y", "z"]
    dual_brackets = ["[x, y] = z"]

    [group]
    kind = "heisenberg"        # abelian | heisenberg | affine | custom
    pi = "derive"              # derive | linear | zero | default | matrix of strings

    [manifold]
    source = "group"           # or coords / box / pi

    [alpha]
    source = "theta"           # or one entry per basis element: list of components or "d(<poly>)"

    [options]
    grid = 10
    step = 1e-3

Errors are collected over the whole file: syntax problems raise
:class:`ScenarioParseError` (with line and column), everything else raises a
single :class:`ConsistencyError` listing each ``(section, key, message)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .bialgebra import LieAlgebraData, LieBialgebraData
from .calculus import BivectorField, ChartDomain, FormField, exterior_d
from .errors import (
    ConsistencyError,
    MissingSection,
    MomentaError,
    PolySyntaxError,
    ScenarioParseError,
    UnknownVariable,
)
from .group import GroupModel, builtin_group, custom_group, law_variables
from .imm import AlphaMap, MomentumCandidate
from .parser import parse_poly
from .poisson import PoissonManifold
from .polynomial import Poly

SECTIONS = ("algebra", "group", "manifold", "alpha", "mu", "deform", "options")
_D_RE = re.compile(r"^\s*d\s*\((.*)\)\s*$", re.S)


@dataclass
class Options:
    grid: tuple = (10,)
    step: float = 1e-3
    tol: float = 1e-6
    seed: int = 0
    truncation: int | None = None
    sample_grid: int = 5
    base_m: tuple | None = None
    base_u: tuple | None = None


@dataclass
class Scenario:
    path: str
    raw: dict
    bialgebra: LieBialgebraData
    group: GroupModel | None
    manifold: PoissonManifold | None
    alpha: AlphaMap | None
    mu: MomentumCandidate | None
    deform: dict | None
    options: Options
    sections: frozenset = field(default_factory=frozenset)

    def require(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, _ATTR.get(n, n)) is None]
        if missing:
            raise MissingSection(f"scenario lacks required section(s): {', '.join(missing)}")

    @property
    def dims(self) -> tuple[int, int]:
        """(algebra dimension, manifold dimension)."""
        return self.bialgebra.dim, (self.manifold.dim if self.manifold is not None else 0)

    def echo(self) -> dict:
        return self.raw


_ATTR = {"algebra": "bialgebra"}


class _Collector:
    def __init__(self, source: str):
        self.source = source
        self.syntax: list[tuple[str, int | None, int | None]] = []
        self.errors: list[tuple[str, str, str]] = []

    def error(self, section: str, key: str, msg: str) -> None:
        self.errors.append((section, key, msg))

    def locate(self, text: str, offset: int) -> tuple[int | None, int | None]:
        for quote in ('"', "'"):
            idx = self.source.find(quote + text + quote)
            if idx >= 0:
                line = self.source.count("\n", 0, idx) + 1
                col = idx - (self.source.rfind("\n", 0, idx) + 1) + 2 + offset
                return line, col
        return None, None

    def poly(self, text: Any, names, section: str, key: str) -> Poly | None:
        if isinstance(text, (int, float)) and not isinstance(text, bool):
            text = str(Fraction(str(text)))
        if not isinstance(text, str):
            self.error(section, key, f"expected a polynomial string, got {text!r}")
            return None
        try:
            return parse_poly(text, names)
        except PolySyntaxError as exc:
            line, col = self.locate(text, exc.position)
            self.syntax.append((f"[{section}] {key}: {exc} in {text!r}", line, col))
        except UnknownVariable as exc:
            self.error(section, key, str(exc))
        return None

    def number(self, value: Any, section: str, key: str) -> Fraction | None:
        try:
            if isinstance(value, bool):
                raise TypeError
            return Fraction(str(value)) if isinstance(value, float) else Fraction(value)
        except (TypeError, ValueError, ZeroDivisionError):
            self.error(section, key, f"expected a number, got {value!r}")
            return None

    def names(self, value: Any, section: str, key: str) -> tuple[str, ...] | None:
        if not isinstance(value, list) or not all(isinstance(v, str) and v.isidentifier() for v in value):
            self.error(section, key, "expected a list of identifiers")
            return None
        if len(set(value)) != len(value):
            self.error(section, key, "names must be distinct")
            return None
        return tuple(value)


def _decode(text: str, path: str) -> dict:
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line = getattr(exc, "lineno", None)
        col = getattr(exc, "colno", None)
        if line is None:
            m = re.search(r"line (\d+), column (\d+)", str(exc))
            if m:
                line, col = int(m.group(1)), int(m.group(2))
        msg = getattr(exc, "msg", str(exc))
        raise ScenarioParseError(f"{path}: {msg}", line, col) from None


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioParseError(f"cannot read {path}: {exc.strerror}") from None
    return loads_scenario(text, str(path))


def loads_scenario(text: str, path: str = "<string>") -> Scenario:
    raw = _decode(text, path)
    col = _Collector(text)
    for sec in raw:
        if sec not in SECTIONS:
            col.error(sec, "", "unknown section")
    for sec in SECTIONS:
        if sec in raw and not isinstance(raw[sec], dict):
            raise ScenarioParseError(f"{path}: {sec!r} must be a table")
    if "algebra" not in raw:
        raise MissingSection("scenario needs an [algebra] section")
    opts = _options(raw.get("options", {}), col)
    b = _algebra(raw["algebra"], col)
    G = _group(raw.get("group"), b, col) if b is not None else None
    M = _manifold(raw.get("manifold"), G, col)
    alpha = _alpha(raw.get("alpha"), b, G, M, col) if (b is not None and M is not None) else None
    mu = _mu(raw.get("mu"), G, M, col)
    deform = _deform(raw.get("deform"), b, M, col)
    if M is not None:
        for key in ("base_m",):
            v = getattr(opts, key)
            if v is not None and len(v) != M.dim:
                col.error("options", key, f"needs {M.dim} coordinates")
    if G is not None and opts.base_u is not None and len(opts.base_u) != G.dim:
        col.error("options", "base_u", f"needs {G.dim} coordinates")
    if col.syntax:
        (msg, line, c), *rest = col.syntax
        others = [m + ("" if ln is None else f" (line {ln}, column {cc})") for m, ln, cc in rest]
        raise ScenarioParseError(msg, line, c, others)
    if col.errors:
        raise ConsistencyError(col.errors)
    return Scenario(path, raw, b, G, M, alpha, mu, deform, opts, frozenset(raw))


def _options(sec: dict, col: _Collector) -> Options:
    o = Options()
    for key, val in sec.items():
        if key == "grid":
            vals = val if isinstance(val, list) else [val]
            if not all(isinstance(v, int) and not isinstance(v, bool) and v >= 1 for v in vals):
                col.error("options", key, "grid counts must be positive integers")
            else:
                o.grid = tuple(vals)
        elif key in ("step", "tol"):
            if not isinstance(val, (int, float)) or isinstance(val, bool) or val <= 0:
                col.error("options", key, "must be a positive number")
            else:
                setattr(o, key, float(val))
        elif key in ("seed", "truncation", "sample_grid"):
            if not isinstance(val, int) or isinstance(val, bool) or val < 0:
                col.error("options", key, "must be a non-negative integer")
            else:
                setattr(o, key, val)
        elif key in ("base_m", "base_u"):
            if not isinstance(val, list):
                col.error("options", key, "must be a list of numbers")
                continue
            nums = [col.number(v, "options", key) for v in val]
            if all(n is not None for n in nums):
                setattr(o, key, tuple(nums))
        else:
            col.error("options", key, "unknown option")
    return o


def _algebra(sec: dict, col: _Collector) -> LieBialgebraData | None:
    names = None
    if "basis" in sec:
        names = col.names(sec["basis"], "algebra", "basis")
    n = sec.get("dim")
    if n is not None and (not isinstance(n, int) or isinstance(n, bool) or n < 1):
        col.error("algebra", "dim", "must be a positive integer")
        return None
    if names is None:
        if n is None:
            col.error("algebra", "basis", "give basis names or dim")
            return None
        names = tuple(f"e{i + 1}" for i in range(n))
    elif n is not None and n != len(names):
        col.error("algebra", "dim", f"dim = {n} but {len(names)} basis names")
        return None
    n = len(names)
    dual = tuple(f"u{i + 1}" for i in range(n))
    if "dual_basis" in sec:
        dual = col.names(sec["dual_basis"], "algebra", "dual_basis")
        if dual is None:
            return None
        if len(dual) != n:
            col.error("algebra", "dual_basis", f"needs {n} names")
            return None
    unknown = set(sec) - {"basis", "dim", "brackets", "dual_basis", "dual_brackets"}
    for key in sorted(unknown):
        col.error("algebra", key, "unknown key")
    try:
        alg = LieAlgebraData.from_brackets(names, _str_list(sec.get("brackets", []), "algebra", "brackets", col))
    except MomentaError as exc:
        col.error("algebra", "brackets", str(exc))
        return None
    try:
        db = _str_list(sec.get("dual_brackets", []), "algebra", "dual_brackets", col)
        return LieBialgebraData.from_dual_brackets(alg, dual, db)
    except MomentaError as exc:
        col.error("algebra", "dual_brackets", str(exc))
        return None


def _str_list(val, section, key, col) -> list[str]:
    if not isinstance(val, list) or not all(isinstance(v, str) for v in val):
        col.error(section, key, "expected a list of strings")
        return []
    return val


def _box(val, m: int, section: str, col: _Collector):
    if not isinstance(val, list) or len(val) != m or not all(isinstance(r, list) and len(r) == 2 for r in val):
        col.error(section, "box", f"expected {m} intervals [lo, hi]")
        return None
    out = []
    for lo, hi in val:
        a, b = col.number(lo, section, "box"), col.number(hi, section, "box")
        if a is None or b is None:
            return None
        if not a < b:
            col.error(section, "box", f"empty interval [{lo}, {hi}]")
            return None
        out.append((a, b))
    return tuple(out)


def _matrix(val, chart: ChartDomain, section: str, key: str, col: _Collector) -> BivectorField | None:
    m = chart.dim
    if not isinstance(val, list) or len(val) != m or not all(isinstance(r, list) and len(r) == m for r in val):
        col.error(section, key, f"expected a {m} x {m} matrix")
        return None
    polys = [[col.poly(v, chart.coord_names, section, key) for v in row] for row in val]
    if any(p is None for row in polys for p in row):
        return None
    for i in range(m):
        for j in range(m):
            if polys[i][j] != -polys[j][i]:
                col.error(section, key, f"matrix is not antisymmetric at ({i + 1}, {j + 1})")
                return None
    return BivectorField.from_matrix(chart, polys)


def _group(sec: dict | None, b: LieBialgebraData, col: _Collector) -> GroupModel | None:
    if sec is None:
        if b.is_trivial():
            return builtin_group("abelian", bialgebra=b, pi="default")
        return None
    kind = sec.get("kind", "abelian")
    pi = sec.get("pi", "default")
    degree = sec.get("pi_degree", 2)
    known = {"kind", "pi", "pi_degree", "coords", "law", "coframe", "box"}
    for key in sorted(set(sec) - known):
        col.error("group", key, "unknown key")
    if not isinstance(degree, int) or isinstance(degree, bool) or degree < 0:
        col.error("group", "pi_degree", "must be a non-negative integer")
        return None
    pi_opt = pi if isinstance(pi, str) else "zero"
    if isinstance(pi, str) and pi not in ("default", "derive", "linear", "zero"):
        col.error("group", "pi", f"unknown option {pi!r}")
        return None
    try:
        if kind in ("abelian", "heisenberg", "affine"):
            G = builtin_group(kind, bialgebra=b, pi=pi_opt, degree_bound=degree)
        elif kind == "custom":
            coords = col.names(sec.get("coords"), "group", "coords")
            law = sec.get("law")
            if coords is None:
                return None
            if not isinstance(law, list) or len(law) != len(coords):
                col.error("group", "law", f"expected {len(coords)} component strings")
                return None
            box = _box(sec["box"], len(coords), "group", col) if "box" in sec else None
            lv = law_variables(ChartDomain(coords))
            if any(col.poly(s, lv, "group", "law") is None for s in law):
                return None
            cf = sec.get("coframe")
            G = custom_group(coords, law, b, cf, None, box)
            if pi_opt == "derive" or (pi_opt == "default" and not b.is_trivial()):
                from .group import derive_multiplicative_bivector
                G = G.with_pi(derive_multiplicative_bivector(b, G.chart, G.mult, degree).pi)
        else:
            col.error("group", "kind", f"unknown group kind {kind!r}")
            return None
    except MomentaError as exc:
        col.error("group", "pi" if "bivector" in str(exc) else "kind", str(exc))
        return None
    except ValueError as exc:
        col.error("group", "pi", str(exc))
        return None
    if not isinstance(pi, str):
        mat = _matrix(pi, G.chart, "group", "pi", col)
        if mat is None:
            return None
        G = G.with_pi(mat)
    return G


def _manifold(sec: dict | None, G: GroupModel | None, col: _Collector) -> PoissonManifold | None:
    if sec is None:
        return None
    checked = not sec.get("unchecked", False)
    if sec.get("source") == "group":
        if G is None:
            col.error("manifold", "source", "no group available")
            return None
        return PoissonManifold(G.chart, G.pi_dual, checked=False)
    for key in sorted(set(sec) - {"coords", "box", "pi", "unchecked", "source"}):
        col.error("manifold", key, "unknown key")
    coords = col.names(sec.get("coords"), "manifold", "coords")
    if coords is None:
        return None
    box = _box(sec["box"], len(coords), "manifold", col) if "box" in sec else None
    chart = ChartDomain(coords, box)
    if "pi" not in sec:
        pi = BivectorField.zero(chart)
    else:
        pi = _matrix(sec["pi"], chart, "manifold", "pi", col)
        if pi is None:
            return None
    try:
        return PoissonManifold(chart, pi, checked=checked)
    except MomentaError as exc:
        col.error("manifold", "pi", str(exc))
        return None


def _alpha(sec: dict | None, b: LieBialgebraData, G: GroupModel | None, M: PoissonManifold,
           col: _Collector) -> AlphaMap | None:
    if sec is None:
        return None
    names = b.algebra.basis_names
    if sec.get("source") == "theta":
        if G is None or G.coframe is None:
            col.error("alpha", "source", "theta needs a group with a polynomial coframe")
            return None
        if not G.chart.same_coords(M.chart):
            col.error("alpha", "source", "theta needs the manifold to be the group chart")
            return None
        return AlphaMap(M, b, tuple(G.thetas()))
    forms_keys = [k for k in sec if k != "source"]
    extra = [k for k in forms_keys if k not in names]
    if extra:
        col.error("alpha", ", ".join(extra),
                  f"{len(forms_keys)} forms given for a {b.dim}-dimensional algebra with basis {list(names)}")
    forms = []
    ok = not extra
    for nm in names:
        if nm not in sec:
            col.error("alpha", nm, "missing form")
            ok = False
            continue
        f = _one_form(sec[nm], M.chart, "alpha", nm, col)
        ok = ok and f is not None
        forms.append(f)
    if not ok:
        return None
    return AlphaMap(M, b, tuple(forms))


def _one_form(val, chart: ChartDomain, section: str, key: str, col: _Collector) -> FormField | None:
    if isinstance(val, str):
        m = _D_RE.match(val)
        if not m:
            col.error(section, key, "expected a component list or 'd(<poly>)'")
            return None
        p = col.poly(m.group(1), chart.coord_names, section, key)
        return None if p is None else exterior_d(FormField.scalar(p, chart))
    if not isinstance(val, list) or len(val) != chart.dim:
        col.error(section, key, f"expected {chart.dim} components")
        return None
    comps = [col.poly(v, chart.coord_names, section, key) for v in val]
    if any(c is None for c in comps):
        return None
    return FormField.one_form(chart, comps)


def _mu(sec: dict | None, G: GroupModel | None, M: PoissonManifold | None, col: _Collector):
    if sec is None:
        return None
    if G is None or M is None:
        col.error("mu", "components", "needs [group] and [manifold]")
        return None
    comps = sec.get("components")
    if not isinstance(comps, list) or len(comps) != G.dim:
        col.error("mu", "components", f"expected {G.dim} component strings")
        return None
    polys = [col.poly(c, M.chart.coord_names, "mu", "components") for c in comps]
    if any(p is None for p in polys):
        return None
    return MomentumCandidate(tuple(polys), G, M.chart)


def _deform(sec: dict | None, b: LieBialgebraData | None, M: PoissonManifold | None, col: _Collector):
    if sec is None:
        return None
    if M is None or b is None:
        col.error("deform", "", "needs [algebra] and [manifold]")
        return None
    out = {"H": None, "Phi": None, "random_H": None}
    if "H" in sec:
        H = sec["H"]
        if not isinstance(H, list) or len(H) != b.dim:
            col.error("deform", "H", f"expected {b.dim} component strings")
        else:
            polys = [col.poly(h, M.chart.coord_names, "deform", "H") for h in H]
            if all(p is not None for p in polys):
                out["H"] = tuple(polys)
    if "Phi" in sec:
        out["Phi"] = col.poly(sec["Phi"], M.chart.coord_names, "deform", "Phi")
    if "random_H" in sec:
        v = sec["random_H"]
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            col.error("deform", "random_H", "must be a non-negative integer degree")
        else:
            out["random_H"] = v
    for key in sorted(set(sec) - {"H", "Phi", "random_H"}):
        col.error("deform", key, "unknown key")
    if out["H"] is None and out["Phi"] is None and out["random_H"] is None:
        col.error("deform", "H", "give H, Phi or random_H")
    return out
