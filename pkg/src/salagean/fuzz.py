"""Randomized extremal search and bound auditing.

Members are sampled in batches from a mix of Schwarz functions and
Caratheodory atom measures, each functional is maximized over the batch, the
best sample is refined by hill climbing, and the result is judged against
every bound variant.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .bounds import BoundVariant, variants_for
from .classes import (
    DEFAULT_ORDER,
    GRID_ORDER,
    AtomMeasure,
    ClassParams,
    Constant,
    Monomial,
    NormalizedPolynomial,
    atoms_to_p,
    bernardi_transform,
    caratheodory_to_s,
    check_membership,
    member_from_spec,
    members_from_s,
    membership_rows,
    grid_real_parts,
    salagean_rows,
    schwarz_to_s,
    spec_from_dict,
)
from .errors import SalageanError

VALIDATION_TOL = 1e-9
SHARP_TOL = 1e-6
DISTORTION_ANGLES = 256
REFINE_STEPS = 200
REFINE_PROPOSALS = 8
MAX_POLY_DEGREE = 6
MAX_ATOMS = 6
SAMPLE_BLOCK = 512

# kind codes for batch sampling
CONSTANT, MONOMIAL, POLYNOMIAL, ATOMS = range(4)
# share of atom measures; the Schwarz share splits 30/30/40
KIND_PROBS = (0.75 * 0.3, 0.75 * 0.3, 0.75 * 0.4, 0.25)


class SamplingError(SalageanError, RuntimeError):
    """A sampled member failed its membership check: a construction bug."""


@dataclass(frozen=True)
class Functional:
    name: str
    extra: Optional[float] = None

    _PATTERN = re.compile(r"^\|?(a2|a3|a4|fekete_szego|distortion_lower|distortion_upper)\|?(?:\((?:\w+=)?([^)]*)\))?$")

    @classmethod
    def parse(cls, text: str) -> Functional:
        m = cls._PATTERN.match(text.strip())
        if not m:
            raise ValueError(f"unknown functional {text!r}")
        name, extra = m.group(1), m.group(2)
        if name in ("a2", "a3", "a4"):
            return cls(name)
        if extra is None:
            raise ValueError(f"{name} needs a parameter, e.g. {name}(0.5)")
        return cls(name, float(extra))

    @property
    def label(self) -> str:
        if self.extra is None:
            return self.name
        key = "mu" if self.name == "fekete_szego" else "r"
        return f"{self.name}({key}={self.extra!r})"

    @property
    def sense(self) -> str:
        return "min" if self.name == "distortion_lower" else "max"

    @property
    def needs_grid_order(self) -> bool:
        return self.name.startswith("distortion")


def evaluate(functional: Functional, f_rows: np.ndarray, params: ClassParams) -> np.ndarray:
    """Value of the functional for each row of member coefficients."""
    f_rows = np.atleast_2d(f_rows)
    name = functional.name
    if name in ("a2", "a3", "a4"):
        return np.abs(f_rows[:, int(name[1])])
    if name == "fekete_szego":
        return np.abs(f_rows[:, 3] - functional.extra * f_rows[:, 2] ** 2)
    values = grid_real_parts(salagean_rows(f_rows, params), [functional.extra], DISTORTION_ANGLES)
    return values.min(axis=1) if name == "distortion_lower" else values.max(axis=1)


# --- sampling --------------------------------------------------------------


@dataclass
class SampleBatch:
    """Vectorized draw of member specifications."""

    kinds: np.ndarray
    phi: np.ndarray  # (B, MAX_POLY_DEGREE + 1) Schwarz coefficients after scaling
    raw: np.ndarray  # unscaled polynomial coefficients
    scale: np.ndarray
    degree: np.ndarray
    weights: np.ndarray
    angles: np.ndarray
    atom_count: np.ndarray

    def __len__(self):
        return self.kinds.size

    def spec(self, i: int):
        kind = self.kinds[i]
        if kind == CONSTANT:
            return Constant(self.phi[i, 0])
        if kind == MONOMIAL:
            m = int(self.degree[i])
            return Monomial(self.phi[i, m], m)
        if kind == POLYNOMIAL:
            d = int(self.degree[i])
            return NormalizedPolynomial(tuple(self.raw[i, : d + 1]), float(self.scale[i]))
        m = int(self.atom_count[i])
        return AtomMeasure(tuple(self.weights[i, :m]), tuple(self.angles[i, :m]))

    def s_rows(self, beta: float, terms: int) -> np.ndarray:
        s = np.empty((len(self), terms), dtype=np.complex128)
        schwarz = self.kinds != ATOMS
        if schwarz.any():
            s[schwarz] = schwarz_to_s(self.phi[schwarz], beta, terms)
        if (~schwarz).any():
            p = atoms_to_p(self.weights[~schwarz], self.angles[~schwarz], terms)
            s[~schwarz] = caratheodory_to_s(p, beta)
        return s


def _unit(rng, size):
    return np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size))


def draw_batch(rng: np.random.Generator, trials: int) -> SampleBatch:
    kinds = rng.choice(4, size=trials, p=KIND_PROBS)
    width = MAX_POLY_DEGREE + 1
    phi = np.zeros((trials, width), dtype=np.complex128)
    raw = np.zeros((trials, width), dtype=np.complex128)
    scale = np.ones(trials)
    degree = np.zeros(trials, dtype=np.int64)

    # constants on the unit circle
    idx = np.flatnonzero(kinds == CONSTANT)
    phi[idx, 0] = _unit(rng, idx.size)

    # rotated monomials c z^m, half of them with |c| = 1
    idx = np.flatnonzero(kinds == MONOMIAL)
    m = rng.integers(1, MAX_POLY_DEGREE, size=idx.size)
    rho = np.where(rng.random(idx.size) < 0.5, 1.0, rng.random(idx.size))
    degree[idx] = m
    phi[idx, m] = rho * _unit(rng, idx.size)

    # random polynomials scaled to sup-norm <= 1
    idx = np.flatnonzero(kinds == POLYNOMIAL)
    d = rng.integers(1, MAX_POLY_DEGREE + 1, size=idx.size)
    coeffs = rng.standard_normal((idx.size, width)) + 1j * rng.standard_normal((idx.size, width))
    coeffs[np.arange(width)[None, :] > d[:, None]] = 0.0
    if idx.size:
        z = np.exp(2j * np.pi * np.arange(720) / 720)
        sup = np.abs(_kernels.polyval(coeffs, z)).max(axis=1)
        sc = (1.0 - d * np.pi / 720) / sup
        raw[idx] = coeffs
        scale[idx] = sc
        degree[idx] = d
        phi[idx] = coeffs * sc[:, None]

    # Caratheodory atom measures with Dirichlet weights
    idx = np.flatnonzero(kinds == ATOMS)
    count = np.zeros(trials, dtype=np.int64)
    weights = np.zeros((trials, MAX_ATOMS))
    angles = np.zeros((trials, MAX_ATOMS))
    cnt = rng.integers(2, MAX_ATOMS + 1, size=idx.size)
    w = rng.gamma(1.0, size=(idx.size, MAX_ATOMS))
    w[np.arange(MAX_ATOMS)[None, :] >= cnt[:, None]] = 0.0
    weights[idx] = w / w.sum(axis=1, keepdims=True)
    angles[idx] = rng.uniform(0.0, 2.0 * np.pi, size=(idx.size, MAX_ATOMS))
    count[idx] = cnt
    return SampleBatch(kinds, phi, raw, scale, degree, weights, angles, count)


def draw_trials(seed: int, trials: int) -> SampleBatch:
    """``trials`` draws built from fixed-size blocks with their own streams.

    Block b always comes from ``default_rng([seed, 0, b])``, so a smaller
    sample is always a prefix of a larger one with the same seed.
    """
    blocks = [draw_batch(np.random.default_rng([seed, 0, b]), SAMPLE_BLOCK) for b in range(-(-trials // SAMPLE_BLOCK))]
    joined = {
        f.name: np.concatenate([getattr(blk, f.name) for blk in blocks])[:trials]
        for f in dataclasses.fields(SampleBatch)
    }
    return SampleBatch(**joined)


def random_member(params: ClassParams, rng_seed: int, order: int = DEFAULT_ORDER):
    """One random class member, deterministic in ``rng_seed``.

    Returns ``(member, spec)``.
    """
    spec = draw_trials(rng_seed, 1).spec(0)
    return member_from_spec(spec, params, order), spec


# --- refinement ------------------------------------------------------------


def _jitter_complex(rng, c: complex, step: float, cap: float = 1.0) -> complex:
    rho = min(cap, max(0.0, abs(c) + 0.5 * step * rng.standard_normal()))
    psi = np.angle(c) + np.pi * step * rng.standard_normal()
    return complex(rho * np.exp(1j * psi))


def perturb(spec, rng: np.random.Generator, step: float):
    if isinstance(spec, Constant):
        return Constant(_jitter_complex(rng, spec.c, step))
    if isinstance(spec, Monomial):
        return Monomial(_jitter_complex(rng, spec.c, step), spec.degree)
    if isinstance(spec, NormalizedPolynomial):
        raw = np.asarray(spec.raw)
        size = np.abs(raw).max() or 1.0
        noise = rng.standard_normal(raw.size) + 1j * rng.standard_normal(raw.size)
        return NormalizedPolynomial.from_raw(raw + step * size * noise)
    w = np.log(np.maximum(np.asarray(spec.weights), 1e-300)) + step * rng.standard_normal(len(spec.weights))
    w = np.exp(w - w.max())
    w /= w.sum()
    w[-1] = 1.0 - math.fsum(w[:-1])
    if w[-1] < 0:
        return spec
    t = np.asarray(spec.angles) + np.pi * step * rng.standard_normal(len(spec.angles))
    return AtomMeasure(tuple(w), tuple(t))


def rows_from_specs(specs: Sequence, params: ClassParams, order: int) -> np.ndarray:
    """Member coefficient rows for a list of heterogeneous specs, built in one batch."""
    s = np.empty((len(specs), order), dtype=np.complex128)
    schwarz = [i for i, sp in enumerate(specs) if not isinstance(sp, AtomMeasure)]
    atoms = [i for i, sp in enumerate(specs) if isinstance(sp, AtomMeasure)]
    if schwarz:
        coeffs = [specs[i].coefficients() for i in schwarz]
        phi = np.zeros((len(schwarz), max(c.size for c in coeffs)), dtype=np.complex128)
        for row, c in enumerate(coeffs):
            phi[row, : c.size] = c
        s[schwarz] = schwarz_to_s(phi, params.beta, order)
    if atoms:
        width = max(len(specs[i].weights) for i in atoms)
        w = np.zeros((len(atoms), width))
        t = np.zeros((len(atoms), width))
        for row, i in enumerate(atoms):
            m = len(specs[i].weights)
            w[row, :m], t[row, :m] = specs[i].weights, specs[i].angles
        s[atoms] = caratheodory_to_s(atoms_to_p(w, t, order), params.beta)
    return members_from_s(s, params)


def spec_value(spec, params: ClassParams, functional: Functional, order: int) -> float:
    """Functional value of the member built from ``spec`` (the replay path)."""
    return float(evaluate(functional, rows_from_specs([spec], params, order), params)[0])


def hill_climb(spec, value: float, params, functional, order, rng, steps: int = REFINE_STEPS):
    """Greedy local search around ``spec`` with geometrically shrinking steps.

    Each step draws a handful of perturbations and keeps the best one if it
    improves the objective.  Improvements are re-evaluated on their own so the
    returned value is exactly what a replay of the returned spec gives.
    """
    sign = -1.0 if functional.sense == "min" else 1.0
    best, best_val = spec, value
    for i in range(steps):
        step = 0.3 * (1e-4 / 0.3) ** (i / max(steps - 1, 1))
        cands = []
        for _ in range(REFINE_PROPOSALS):
            try:
                cands.append(perturb(best, rng, step))
            except SalageanError:
                continue
        if not cands:
            continue
        try:
            vals = evaluate(functional, rows_from_specs(cands, params, order), params)
        except SalageanError:
            continue
        j = int(np.argmax(sign * vals))
        if sign * vals[j] > sign * best_val:
            val = spec_value(cands[j], params, functional, order)
            if sign * val > sign * best_val:
                best, best_val = cands[j], val
    return best, best_val


# --- records ---------------------------------------------------------------


@dataclass(frozen=True)
class BoundCheck:
    variant: str
    value: float
    margin: float
    verdict: str

    def to_dict(self) -> dict:
        return {"variant": self.variant, "bound": self.value, "margin": self.margin, "verdict": self.verdict}


@dataclass(frozen=True)
class AuditRecord:
    """Outcome of one extremal search.

    ``empirical_max`` is the extreme value in the direction the bounds point:
    the maximum for upper bounds, the minimum for ``distortion_lower``.
    A positive margin means the bound held.
    """

    params: ClassParams
    functional: str
    trials: int
    empirical_max: float
    argmax_spec: dict
    bounds: tuple
    seed: int
    order: int
    replay_value: float

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "functional": self.functional,
            "trials": self.trials,
            "empirical_max": self.empirical_max,
            "argmax_spec": self.argmax_spec,
            "bounds": [b.to_dict() for b in self.bounds],
            "seed": self.seed,
            "order": self.order,
            "replay_value": self.replay_value,
        }

    @property
    def verdicts(self) -> dict:
        return {b.variant: b.verdict for b in self.bounds}


def judge(margin: float, replay_ok: bool) -> str:
    if not math.isfinite(margin):
        return "inconclusive"
    if margin < -SHARP_TOL:
        return "counterexample" if replay_ok else "inconclusive"
    if margin > SHARP_TOL:
        return "validated"
    # Inside the band: a tiny overshoot is truncation noise, not a refutation.
    return "sharp" if replay_ok else "inconclusive"


def check_bounds(variants: Sequence[BoundVariant], extreme: float, replay_ok: bool) -> tuple:
    out = []
    for v in variants:
        value = v.value()
        margin = extreme - value if v.kind == "lower" else value - extreme
        out.append(BoundCheck(v.label, value, margin, judge(margin, replay_ok)))
    return tuple(out)


def replay_witness(record: AuditRecord) -> float:
    spec = spec_from_dict(record.argmax_spec)
    return spec_value(spec, record.params, Functional.parse(record.functional), record.order)


# --- search ----------------------------------------------------------------


def cell_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0])


def _audit_cell(
    params: ClassParams,
    functionals: Sequence[Functional],
    trials: int,
    seed: int,
    order: Optional[int] = None,
    variants: str = "both",
    refine: bool = True,
    verify: bool = True,
    candidates: Optional[Sequence] = None,
) -> list:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not functionals:
        return []
    if order is None:
        order = GRID_ORDER if any(fn.needs_grid_order for fn in functionals) else DEFAULT_ORDER
    rng = np.random.default_rng([seed, 1])
    if candidates is None:
        batch = draw_trials(seed, trials)
        specs = batch.spec
        f_rows = members_from_s(batch.s_rows(params.beta, order), params)
    else:
        candidates = list(candidates)[:trials]
        trials = len(candidates)
        specs = candidates.__getitem__
        f_rows = rows_from_specs(candidates, params, order)
    if verify:
        _, margins, _, verdicts = membership_rows(f_rows, params)
        bad = np.flatnonzero(verdicts == "violation")
        if bad.size:
            raise SamplingError(
                f"sampled member {specs(int(bad[0]))} violates membership at {params} "
                f"(margin {margins[bad[0]]:.3g})"
            )

    records = []
    for fn in functionals:
        values = evaluate(fn, f_rows, params)
        i = int(np.argmin(values) if fn.sense == "min" else np.argmax(values))
        spec, best = specs(i), float(values[i])
        if refine:
            spec, best = hill_climb(spec, best, params, fn, order, rng)
        replay = spec_value(spec, params, fn, order)
        replay_ok = abs(replay - best) <= VALIDATION_TOL
        bound_name = fn.name
        checks = check_bounds(variants_for(bound_name, params, fn.extra, variants), best, replay_ok)
        records.append(
            AuditRecord(params, fn.label, trials, best, spec.to_dict(), checks, int(seed), order, replay)
        )
    return records


def empirical_max(
    params: ClassParams,
    functional,
    trials: int = 10_000,
    rng_seed: int = 0,
    *,
    order: Optional[int] = None,
    variants: str = "both",
    refine: bool = True,
    verify: bool = True,
    candidates: Optional[Sequence] = None,
) -> AuditRecord:
    """Search for the extreme value of one functional over sampled members.

    ``candidates`` replaces the random draw with explicit specs.
    """
    fn = functional if isinstance(functional, Functional) else Functional.parse(functional)
    return _audit_cell(params, [fn], trials, rng_seed, order, variants, refine, verify, candidates)[0]


def expand_grid(n_values, alpha_values, beta_values) -> list:
    return [ClassParams(a, b, n) for n, a, b in itertools.product(n_values, alpha_values, beta_values)]


def audit_suite(
    param_grid: Sequence[ClassParams],
    functionals: Sequence,
    trials_per_cell: int = 10_000,
    rng_seed: int = 0,
    *,
    variants: str = "both",
    refine: bool = True,
    verify: bool = True,
) -> list:
    """Audit every functional on every parameter cell.

    All functionals of a cell share one sample drawn from the stream
    ``cell_seed(rng_seed, cell_index)``, so any single cell can be replayed
    with :func:`empirical_max` using the seed stored in its records.
    """
    if not param_grid:
        raise ValueError("parameter grid is empty")
    fns = [fn if isinstance(fn, Functional) else Functional.parse(fn) for fn in functionals]
    records = []
    for index, params in enumerate(param_grid):
        records.extend(
            _audit_cell(params, fns, trials_per_cell, cell_seed(rng_seed, index), None, variants, refine, verify)
        )
    return records


def summarize(records: Sequence[AuditRecord]) -> dict:
    counts = Counter()
    per_variant: dict = {}
    for rec in records:
        for b in rec.bounds:
            counts[b.verdict] += 1
            per_variant.setdefault(b.variant, Counter())[b.verdict] += 1
    return {
        "records": len(records),
        "verdicts": dict(sorted(counts.items())),
        "by_variant": {k: dict(sorted(v.items())) for k, v in sorted(per_variant.items())},
    }


# --- property audits -------------------------------------------------------


@dataclass
class PropertyAudit:
    name: str
    checked: int = 0
    verdicts: Counter = field(default_factory=Counter)
    worst_margin: float = math.inf

    def add(self, report):
        self.checked += 1
        self.verdicts[report.verdict] += 1
        self.worst_margin = min(self.worst_margin, report.margin)

    @property
    def passed(self) -> bool:
        return self.checked > 0 and self.verdicts["member"] == self.checked

    def to_dict(self) -> dict:
        return {
            "property": self.name,
            "checked": self.checked,
            "verdicts": dict(sorted(self.verdicts.items())),
            "worst_margin": self.worst_margin,
            "passed": self.passed,
        }


def sample_members(params: ClassParams, trials: int, seed: int, order: int = GRID_ORDER) -> list:
    batch = draw_trials(seed, trials)
    return [member_from_spec(batch.spec(i), params, order) for i in range(trials)]


def bernardi_audit(params: ClassParams, cs=(0.0, 1.0, 2.0), trials: int = 50, seed: int = 0) -> PropertyAudit:
    """Check that the integral transform keeps sampled members inside the class."""
    audit = PropertyAudit(f"bernardi(c in {list(cs)})")
    for f in sample_members(params, trials, seed):
        for c in cs:
            audit.add(check_membership(bernardi_transform(f, c, params), params))
    return audit


def inclusion_audit(params: ClassParams, trials: int = 200, seed: int = 0) -> PropertyAudit:
    """Members of T_{n+1}(beta) tested against T_n(beta/alpha).

    Audit only: failures are findings about the inclusion claim.
    """
    if params.beta / params.alpha >= 1:
        raise ValueError("inclusion audit needs beta/alpha < 1")
    upper = ClassParams(params.alpha, params.beta, params.n + 1)
    target = ClassParams(params.alpha, params.beta / params.alpha, params.n)
    audit = PropertyAudit(f"T_{upper.n} subset of T_{target.n}(beta/alpha)")
    for f in sample_members(upper, trials, seed):
        audit.add(check_membership(f, target))
    return audit


def power_quotient_audit(params: ClassParams, trials: int = 200, seed: int = 0) -> PropertyAudit:
    """Members of T_n(beta) tested for ``Re (f/z)^alpha > beta``."""
    target = ClassParams(params.alpha, params.beta, 0)
    audit = PropertyAudit("Re (f/z)^alpha > beta")
    for f in sample_members(params, trials, seed):
        audit.add(check_membership(f, target))
    return audit
