"""Run configuration files.

A config is an INI-style file::

    [reference]
    x1 = xi1
    x2 = xi2
    x3 = 0

    [deformed]
    x1 = R*sin(xi1/R)
    x2 = xi2
    x3 = R - R*cos(xi1/R)
    R = 2              ; any other key is a named parameter

    [domain]
    xi1 = -1, 1
    xi2 = -1, 1

    [run]              ; every key optional
    grid = 21, 21
    scales = 0.5, 2, 10
    tol = 1e-10
    nullity_tol = 1e-11
    seeds = 0, 1, 2
    motions = 10
    families = graph-polynomial, graph-trigonometric, cylinder-roll, sphere-chart
    csv = strains.csv
    report = report.json

A surface section may also carry ``domain = a, b, c, d``; it must agree with
``[domain]`` and with the other surface.
"""

import configparser
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .errors import ConfigError, ParseError, UnknownIdentifier
from .families import FAMILIES
from .harness import DEFAULT_TOL, NULLITY_TOL
from .surface_lang import SurfaceExpr, parse_expr, validate

COMPONENT_KEYS = ("x1", "x2", "x3")


@dataclass
class RunConfig:
    reference: SurfaceExpr
    deformed: SurfaceExpr
    domain: tuple
    grid: tuple = (21, 21)
    scales: tuple = (0.5, 2.0, 10.0)
    seeds: tuple = (0, 1, 2)
    tol: float = DEFAULT_TOL
    nullity_tol: float = NULLITY_TOL
    motions: int = 10
    families: tuple = tuple(FAMILIES)
    csv_path: Optional[str] = None
    report_path: Optional[str] = None
    source: Optional[str] = field(default=None, compare=False)

    def echo(self):
        return {
            "source": self.source,
            "reference": _surface_echo(self.reference),
            "deformed": _surface_echo(self.deformed),
            "domain": [list(self.domain[0]), list(self.domain[1])],
            "run": run_echo(self.grid, self.scales, self.seeds, self.tol, self.nullity_tol,
                            self.motions, self.families),
        }


def run_echo(grid, scales, seeds, tol, nullity_tol, motions, families):
    return {
        "grid": list(grid),
        "scales": list(scales),
        "seeds": list(seeds),
        "tol": tol,
        "nullity_tol": nullity_tol,
        "motions": motions,
        "families": list(families),
    }


def _surface_echo(s):
    return {"components": list(s.texts()), "params": dict(s.params)}


def _floats(text, where, count=None):
    try:
        values = tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())
    except ValueError:
        raise ConfigError(where, f"expected comma-separated numbers, got {text!r}") from None
    if count is not None and len(values) != count:
        raise ConfigError(where, f"expected {count} numbers, got {len(values)}")
    return values


def parse_grid(text, where="run.grid"):
    parts = text.lower().replace("x", ",").split(",")
    try:
        values = tuple(int(p) for p in parts if p.strip())
    except ValueError:
        raise ConfigError(where, f"expected two integers, got {text!r}") from None
    if len(values) == 1:
        values = values * 2
    if len(values) != 2 or min(values) < 2:
        raise ConfigError(where, "grid resolution must be two integers >= 2")
    return values


def _surface(section, name, domain):
    for key in COMPONENT_KEYS:
        if key not in section:
            raise ConfigError(f"{name}.{key}", "missing key")
    params = {}
    for key, raw in section.items():
        if key in COMPONENT_KEYS or key == "domain":
            continue
        try:
            params[key] = float(raw)
        except ValueError:
            raise ConfigError(f"{name}.{key}", f"parameter value must be a number, got {raw!r}") from None
    comps = []
    for key in COMPONENT_KEYS:
        text = section[key]
        try:
            node = parse_expr(text)
            validate(node, params)
        except (ParseError, UnknownIdentifier) as exc:
            raise ConfigError(f"{name}.{key}", f"{exc} in {text!r}") from None
        comps.append(node)
    try:
        return SurfaceExpr(tuple(comps), params, domain, label=name)
    except ValueError as exc:
        raise ConfigError(name, str(exc)) from None


def _resolve_domain(parser):
    declared = {}
    if parser.has_section("domain"):
        sec = parser["domain"]
        for key in ("xi1", "xi2"):
            if key not in sec:
                raise ConfigError(f"domain.{key}", "missing key")
        declared["domain"] = (_floats(sec["xi1"], "domain.xi1", 2), _floats(sec["xi2"], "domain.xi2", 2))
    for name in ("reference", "deformed"):
        if "domain" in parser[name]:
            v = _floats(parser[name]["domain"], f"{name}.domain", 4)
            declared[f"{name}.domain"] = ((v[0], v[1]), (v[2], v[3]))
    if not declared:
        raise ConfigError("domain", "no parameter domain declared")
    values = set(declared.values())
    if len(values) > 1:
        raise ConfigError("domain", "reference and deformed surfaces must share one parameter domain "
                          f"(got {', '.join(f'{k}={v}' for k, v in declared.items())})")
    domain = values.pop()
    if not (domain[0][1] > domain[0][0] and domain[1][1] > domain[1][0]):
        raise ConfigError("domain", f"domain {domain} has no interior")
    return domain


def load_config(path) -> RunConfig:
    path = Path(path)
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    parser.optionxform = str
    try:
        with path.open() as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(str(path), f"malformed config: {exc}") from None
    for name in ("reference", "deformed"):
        if not parser.has_section(name):
            raise ConfigError(name, "missing section")
    domain = _resolve_domain(parser)
    reference = _surface(parser["reference"], "reference", domain)
    deformed = _surface(parser["deformed"], "deformed", domain)

    cfg = RunConfig(reference=reference, deformed=deformed, domain=domain, source=str(path))
    if parser.has_section("run"):
        run = parser["run"]
        if "grid" in run:
            cfg.grid = parse_grid(run["grid"])
        if "scales" in run:
            cfg.scales = _floats(run["scales"], "run.scales")
            if not cfg.scales or min(cfg.scales) <= 0:
                raise ConfigError("run.scales", "scale factors must be positive")
        if "seeds" in run:
            try:
                cfg.seeds = tuple(int(s) for s in run["seeds"].split(",") if s.strip())
            except ValueError:
                raise ConfigError("run.seeds", "expected comma-separated integers") from None
        for key in ("tol", "nullity_tol"):
            if key in run:
                (value,) = _floats(run[key], f"run.{key}", 1)
                if not value > 0:
                    raise ConfigError(f"run.{key}", "tolerance must be positive")
                setattr(cfg, key, value)
        if "motions" in run:
            try:
                cfg.motions = int(run["motions"])
            except ValueError:
                raise ConfigError("run.motions", "expected an integer") from None
            if cfg.motions < 1:
                raise ConfigError("run.motions", "need at least one rigid motion")
        if "families" in run:
            fams = tuple(f.strip() for f in run["families"].split(",") if f.strip())
            unknown = [f for f in fams if f not in FAMILIES]
            if unknown:
                raise ConfigError("run.families", f"unknown families {unknown}")
            cfg.families = fams
        cfg.csv_path = run.get("csv")
        cfg.report_path = run.get("report")
        known = {"grid", "scales", "seeds", "tol", "nullity_tol", "motions", "families", "csv", "report"}
        extra = sorted(set(run) - known)
        if extra:
            raise ConfigError(f"run.{extra[0]}", "unknown key")
    return cfg
