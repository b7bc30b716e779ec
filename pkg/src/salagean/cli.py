"""Command-line front end.

Every invocation writes JSON lines: first a ``config`` record echoing the
resolved configuration, then the command's records.  Exit status is 0 when
every verdict is validated/sharp, 1 when any counterexample (or membership
violation) was found, and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import records
from .bounds import BoundVariant, variants_for
from .classes import (
    AtomMeasure,
    GRID_ORDER,
    ClassParams,
    atoms_to_p,
    caratheodory_to_s,
    Constant,
    Monomial,
    NormalizedPolynomial,
    check_membership,
    koebe,
    member_from_spec,
    rotated_koebe,
    schwarz_to_s,
)
from .errors import SalageanError
from .fuzz import Functional, audit_suite, empirical_max, expand_grid, summarize
from .series import NormalizedFunction, TruncatedSeries, pow_real, salagean_normalized

DEFAULT_GRID = {
    "n": [0, 1, 2, 3],
    "alpha": [0.5, 1.0, 2.0],
    "beta": [0.0, 0.25, 0.5],
    "mu": [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0],
    "r": [0.25, 0.5, 0.75],
    "functionals": ["a2", "a3", "a4", "fekete_szego", "distortion"],
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str = "bounds"
    alpha: float = 1.0
    beta: float = 0.0
    n: int = 0
    mu: float = 0.0
    r: float = 0.5
    order: int = 32
    trials: int = 10_000
    seed: int = 0
    variant: str = "both"
    f: str = "koebe"
    phi: Optional[str] = None
    atoms: Optional[str] = None
    grid: Optional[str] = None
    out: Optional[str] = None
    grid_spec: dict = field(default_factory=lambda: dict(DEFAULT_GRID))

    def params(self) -> ClassParams:
        return ClassParams(self.alpha, self.beta, self.n)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        if self.command != "audit":
            d.pop("grid_spec")
        return d


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(RunConfig)}
_CASTS = {"alpha": float, "beta": float, "mu": float, "r": float, "n": int, "order": int, "trials": int, "seed": int}


def read_key_values(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _split(value: str) -> list:
    return [v.strip() for v in value.split(",") if v.strip()]


def read_grid(path) -> dict:
    raw = read_key_values(path)
    grid = dict(DEFAULT_GRID)
    for key, value in raw.items():
        if key not in grid:
            raise UsageError(f"unknown grid key {key!r}")
        items = _split(value)
        grid[key] = items if key == "functionals" else [int(v) if key == "n" else float(v) for v in items]
    return grid


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    if getattr(args, "config", None):
        for key, value in read_key_values(args.config).items():
            if key not in _FIELD_TYPES or key in ("command", "grid_spec"):
                raise UsageError(f"unknown config key {key!r}")
            setattr(cfg, key, _CASTS.get(key, str)(value))
    for key in _FIELD_TYPES:
        value = getattr(args, key, None)
        if value is not None and key != "command":
            setattr(cfg, key, value)
    if cfg.variant not in ("printed", "derived", "both"):
        raise UsageError("--variant must be printed, derived or both")
    if cfg.grid:
        cfg.grid_spec = read_grid(cfg.grid)
    return cfg


# --- spec parsing ----------------------------------------------------------


def parse_function(text: str, order: int) -> NormalizedFunction:
    """``koebe``, ``identity``, ``rotkoebe:<xi>`` or ``poly:<a2>,<a3>,...``."""
    kind, _, rest = text.partition(":")
    if kind == "koebe":
        return koebe(order)
    if kind in ("identity", "z"):
        return NormalizedFunction.identity(order)
    if kind == "rotkoebe":
        return rotated_koebe(float(rest), order)
    if kind == "poly":
        return NormalizedFunction.from_coeffs([complex(v) for v in _split(rest)])
    raise UsageError(f"unknown function spec {text!r}")


def parse_schwarz(text: str):
    """``const:<c>``, ``mono:<c>:<m>`` or ``poly:<c0>,<c1>,...`` (scaled to sup-norm <= 1)."""
    kind, _, rest = text.partition(":")
    if kind == "const":
        return Constant(complex(rest))
    if kind == "mono":
        c, _, m = rest.partition(":")
        return Monomial(complex(c), int(m or 1))
    if kind == "poly":
        return NormalizedPolynomial.from_raw([complex(v) for v in _split(rest)])
    raise UsageError(f"unknown Schwarz spec {text!r}")


def parse_atoms(text: str) -> AtomMeasure:
    """``w1@t1,w2@t2,...``; weights are normalized to sum to 1."""
    pairs = [item.split("@") for item in _split(text)]
    if not pairs or any(len(p) != 2 for p in pairs):
        raise UsageError(f"atoms must look like 'w@t,w@t', got {text!r}")
    w = np.array([float(p[0]) for p in pairs])
    if (w < 0).any() or w.sum() <= 0:
        raise UsageError("atom weights must be nonnegative with positive total")
    w = w / w.sum()
    w[-1] = 1.0 - float(np.sum(w[:-1]))
    return AtomMeasure(tuple(w), tuple(float(p[1]) for p in pairs))


def _member_spec(cfg: RunConfig):
    if cfg.atoms:
        return parse_atoms(cfg.atoms)
    if cfg.phi:
        return parse_schwarz(cfg.phi)
    return Constant(0)


# --- commands --------------------------------------------------------------


def _coeff_rows(name: str, s: TruncatedSeries, start: int = 0) -> list:
    return [
        {"record": "coefficient", "series": name, "k": k + start, "re": float(c.real), "im": float(c.imag), "abs": float(abs(c))}
        for k, c in enumerate(s.coeffs)
    ]


def cmd_expand(cfg: RunConfig):
    params = cfg.params()
    f = parse_function(cfg.f, cfg.order)
    out = _coeff_rows("f", f.series)
    out += _coeff_rows("f_over_z_pow", pow_real(f.over_z(), params.alpha))
    out += _coeff_rows("L_n", salagean_normalized(f, params))
    return out, 0


def cmd_member(cfg: RunConfig):
    params = cfg.params()
    spec = _member_spec(cfg)
    f = member_from_spec(spec, params, cfg.order)
    lser = salagean_normalized(f, params)
    err = float(np.abs(lser.coeffs - _reference_s(spec, params, lser.order)).max())
    out = [{"record": "member", "params": params.to_dict(), "spec": spec.to_dict(), "order": cfg.order, "roundtrip_error": err}]
    out += _coeff_rows("f", f.series)
    report = check_membership(member_from_spec(spec, params, max(cfg.order, GRID_ORDER)), params)
    out.append({"record": "membership", **report.to_dict()})
    return out, 1 if report.verdict == "violation" else 0


def _reference_s(spec, params: ClassParams, order: int) -> np.ndarray:
    if isinstance(spec, AtomMeasure):
        p = atoms_to_p(np.array([spec.weights]), np.array([spec.angles]), order + 1)
        return caratheodory_to_s(p, params.beta)[0]
    return schwarz_to_s(spec.coefficients(), params.beta, order + 1)[0]


def cmd_check(cfg: RunConfig):
    params = cfg.params()
    if cfg.phi or cfg.atoms:
        f = member_from_spec(_member_spec(cfg), params, max(cfg.order, GRID_ORDER))
    else:
        f = parse_function(cfg.f, cfg.order)
    report = check_membership(f, params)
    return [{"record": "membership", **report.to_dict()}], 1 if report.verdict == "violation" else 0


def _bound_row(v: BoundVariant, functional: str) -> dict:
    return {"record": "bound", "params": v.params.to_dict(), "functional": functional, "variant": v.label, "bound": v.value()}


def cmd_bounds(cfg: RunConfig):
    params = cfg.params()
    out = []
    for name in ("a2", "a3", "a4"):
        out += [_bound_row(v, name) for v in variants_for(name, params, None, cfg.variant)]
    return out, 0


def _audit_rows(recs) -> tuple:
    out, status = [], 0
    for rec in recs:
        lines = records.audit_lines(rec)
        status = max(status, int(any(line["verdict"] == "counterexample" for line in lines)))
        out += lines
    return out, status


def cmd_fekete(cfg: RunConfig):
    params = cfg.params()
    fn = Functional("fekete_szego", cfg.mu)
    out = [_bound_row(v, fn.label) for v in variants_for(fn.name, params, fn.extra, cfg.variant)]
    status = 0
    if cfg.trials > 0:
        rows, status = _audit_rows([empirical_max(params, fn, cfg.trials, cfg.seed, variants=cfg.variant)])
        out += rows
    return out, status


def cmd_distortion(cfg: RunConfig):
    params = cfg.params()
    fns = [Functional("distortion_lower", cfg.r), Functional("distortion_upper", cfg.r)]
    out = []
    for fn in fns:
        out += [_bound_row(v, fn.label) for v in variants_for(fn.name, params, fn.extra, cfg.variant)]
    status = 0
    if cfg.trials > 0:
        recs = [empirical_max(params, fn, cfg.trials, cfg.seed, order=max(cfg.order, GRID_ORDER), variants=cfg.variant) for fn in fns]
        rows, status = _audit_rows(recs)
        out += rows
    return out, status


def grid_functionals(grid: dict) -> list:
    fns = []
    for name in grid["functionals"]:
        if name == "fekete_szego":
            fns += [Functional("fekete_szego", mu) for mu in grid["mu"]]
        elif name == "distortion":
            for r in grid["r"]:
                fns += [Functional("distortion_lower", r), Functional("distortion_upper", r)]
        else:
            fns.append(Functional.parse(name))
    return fns


def cmd_audit(cfg: RunConfig):
    grid = cfg.grid_spec
    cells = expand_grid(grid["n"], grid["alpha"], grid["beta"])
    recs = audit_suite(cells, grid_functionals(grid), cfg.trials, cfg.seed, variants=cfg.variant)
    out, status = _audit_rows(recs)
    out.append({"record": "summary", **summarize(recs)})
    return out, status


COMMANDS = {
    "expand": cmd_expand,
    "member": cmd_member,
    "check": cmd_check,
    "bounds": cmd_bounds,
    "fekete": cmd_fekete,
    "distortion": cmd_distortion,
    "audit": cmd_audit,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float, help="class parameter alpha > 0 (default 1)")
    common.add_argument("--beta", type=float, help="class parameter 0 <= beta < 1 (default 0)")
    common.add_argument("--n", type=int, help="Salagean order n >= 0 (default 0)")
    common.add_argument("--mu", type=float, help="Fekete-Szego parameter (default 0)")
    common.add_argument("--r", type=float, help="distortion radius in (0, 1) (default 0.5)")
    common.add_argument("--order", type=int, help="truncation order (default 32)")
    common.add_argument("--trials", type=int, help="samples per audit cell (default 10000)")
    common.add_argument("--seed", type=int, help="random seed (default 0)")
    common.add_argument("--variant", choices=["printed", "derived", "both"], help="bound variants (default both)")
    common.add_argument("--f", help="function: koebe | identity | rotkoebe:<xi> | poly:<a2>,<a3>,...")
    common.add_argument("--phi", help="Schwarz function: const:<c> | mono:<c>:<m> | poly:<c0>,<c1>,...")
    common.add_argument("--atoms", help="Caratheodory atoms: w@t,w@t,...")
    common.add_argument("--grid", help="grid file with key = value lines (audit)")
    common.add_argument("--out", help="write records here instead of stdout")
    common.add_argument("--config", help="config file with key = value lines; flags override it")

    parser = argparse.ArgumentParser(prog="salagean", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=COMMANDS[name].__name__.replace("cmd_", ""))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        rows, status = COMMANDS[cfg.command](cfg)
    except (UsageError, SalageanError, ValueError, OSError) as exc:
        print(f"salagean {args.command}: error: {exc}", file=sys.stderr)
        return 2
    lines = [records.dumps({"record": "config", "command": cfg.command, "config": cfg.to_dict(), "seed": cfg.seed})]
    lines += [records.dumps(row) for row in rows]
    text = "\n".join(lines) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
