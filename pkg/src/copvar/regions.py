"""Variability discs of a_-1, a_0, a_1 and the bounds that go with them.

The residue disc holds for every p in (0, 1). The a_0 disc is only known to
be the variability domain for p <= sqrt(3) - 1 and the a_1 disc for
p <= 1 - sqrt(2)/2; outside these windows the constructors raise
:class:`RegionNotEstablished` instead of extrapolating.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import schwarz
from .cofunc import CoCandidate, LaurentTriple, a0_from_c, a1_from_c, residue_from_c0

A0_P_MAX = math.sqrt(3.0) - 1.0
A1_P_MAX = 1.0 - math.sqrt(2.0) / 2.0
MEMBERSHIP_ABS_TOL = 1e-9
MEMBERSHIP_REL_TOL = 1e-12


class RegionNotEstablished(ValueError):
    """The requested disc is not a proven variability domain for this p."""


@dataclass(frozen=True)
class Disc:
    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if self.radius < 0:
            raise ValueError(f"radius must be >= 0, got {self.radius}")

    @property
    def leftmost(self) -> float:
        return self.center.real - self.radius

    def excess(self, w: complex) -> float:
        """|w - center| - radius; positive outside the disc."""
        return abs(complex(w) - self.center) - self.radius

    def contains(self, w: complex, tol: float = MEMBERSHIP_ABS_TOL) -> bool:
        return self.excess(w) <= tol + MEMBERSHIP_REL_TOL * self.radius

    def point(self, theta: float) -> complex:
        return self.center + self.radius * complex(math.cos(theta), math.sin(theta))


@dataclass(frozen=True)
class ValidityWindow:
    theorem: str
    p_max: float

    def admits(self, p: float) -> bool:
        return 0.0 < p <= self.p_max


WINDOWS = {
    "residue": ValidityWindow("residue", 1.0),
    "a0": ValidityWindow("a0", A0_P_MAX),
    "a1": ValidityWindow("a1", A1_P_MAX),
}


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError(f"pole p must lie in (0, 1), got {p}")
    return p


def residue_disc(p: float) -> Disc:
    p = _check_p(p)
    q = 1.0 - p**4
    return Disc(-p * p / q, p**4 / q)


def a0_disc(p: float) -> Disc:
    p = _check_p(p)
    if p > A0_P_MAX:
        raise RegionNotEstablished(f"a0 variability disc is not established for p={p} > sqrt(3)-1")
    q = (1.0 - p * p) * (1.0 - p**4)
    return Disc(-p * (1 - p * p + p**4) / q, p**3 * (2 - p * p) / q)


def a1_disc(p: float) -> Disc:
    p = _check_p(p)
    if p > A1_P_MAX:
        raise RegionNotEstablished(f"a1 variability disc is not established for p={p} > 1-sqrt(2)/2")
    q = (1.0 - p * p) ** 2 * (1.0 - p**4)
    return Disc(-(p**4) / q, p * p / q)


DISCS = {"residue": residue_disc, "a0": a0_disc, "a1": a1_disc}


def re_a0_lower_bound(p: float) -> float:
    p = _check_p(p)
    return -p / (1.0 - p * p) ** 2


def a1_modulus_bound(p: float) -> float:
    p = _check_p(p)
    return p * p / (1.0 - p * p) ** 3


def livingston_a0_check(p: float, a_minus1: complex, a_0: complex) -> float:
    """Slack (1+p^2)/p - |p + a0 (1-p^2)/a_-1|; nonnegative on the concave class."""
    p = _check_p(p)
    if a_minus1 == 0:
        raise ValueError("residue must be nonzero")
    return (1 + p * p) / p - abs(p + complex(a_0) * (1 - p * p) / complex(a_minus1))


def boundary_point(p: float, which: str, theta: float) -> complex:
    """Coefficient of the extremal candidate with omega = exp(i theta)."""
    if which not in DISCS:
        raise ValueError(f"unknown coefficient {which!r}")
    p = _check_p(p)
    if not WINDOWS[which].admits(p):
        raise RegionNotEstablished(f"{which} disc is not established for p={p}")
    c0 = complex(math.cos(theta), math.sin(theta))
    if which == "residue":
        return residue_from_c0(p, c0)
    if which == "a0":
        return a0_from_c(p, c0, 0)
    return a1_from_c(p, c0, 0, 0)


def theorem1_objective(p: float, phi):
    """min over the residue disc of Re a0 for fixed tau = exp(i phi), in closed form."""
    p = _check_p(p)
    phi = np.asarray(phi, dtype=float)
    d = (1 - p**4) * (1 - p * p)
    u = (1 + p * p) * np.cos(phi) - p * p
    return -p / d * u - p**3 / d * np.sqrt((1 + p * p) ** 2 * np.sin(phi) ** 2 + u * u)


@dataclass(frozen=True)
class MinSearchResult:
    value: float
    tau: complex
    a_minus1: complex
    grid_phi: int
    grid_disc: int


def min_re_a0_search(p: float, grid_phi: int = 512, grid_disc: int = 512) -> MinSearchResult:
    """Grid minimum of Re[(a_-1/(1-p^2)) (-p + tau (1+p^2)/p)].

    tau runs over the unit circle and a_-1 over the boundary of the residue
    disc; the expression is linear in a_-1, so its minimum over the closed
    disc lies on the boundary.
    """
    if grid_phi < 64 or grid_disc < 64:
        raise ValueError("grid sizes must be >= 64")
    p = _check_p(p)
    disc = residue_disc(p)
    tau = np.exp(2j * np.pi * np.arange(grid_phi) / grid_phi)
    residues = disc.center + disc.radius * np.exp(2j * np.pi * np.arange(grid_disc) / grid_disc)
    values = (residues[None, :] / (1 - p * p) * (-p + tau[:, None] * (1 + p * p) / p)).real
    i, j = np.unravel_index(int(np.argmin(values)), values.shape)
    return MinSearchResult(float(values[i, j]), complex(tau[i]), complex(residues[j]), grid_phi, grid_disc)


# --- sampled verification ------------------------------------------------


@dataclass
class CheckTally:
    checked: int = 0
    violations: int = 0
    max_excess: float = -math.inf
    worst: str | None = None

    def record(self, excess: float, allowed: float, spec_text: str):
        self.checked += 1
        if excess > allowed:
            self.violations += 1
        self._offer(excess, spec_text)

    def _offer(self, excess: float, spec_text: str | None):
        # ties resolve to the lexicographically smallest spec so merging is order-independent
        if excess > self.max_excess or (
            excess == self.max_excess and spec_text is not None and (self.worst is None or spec_text < self.worst)
        ):
            self.max_excess = excess
            self.worst = spec_text

    def merge(self, other: "CheckTally"):
        self.checked += other.checked
        self.violations += other.violations
        self._offer(other.max_excess, other.worst)


ASSERTED = ("residue_disc", "a0_disc", "a1_disc", "re_a0_bound", "a1_modulus_bound", "livingston", "schwarz_pick")
FINDINGS = ("re_a0_bound_uncertified", "a1_modulus_bound_uncertified")


@dataclass
class VerificationReport:
    p: float
    n_samples: int
    seed: int
    tol: float
    max_degree: int
    checks: dict[str, CheckTally] = field(default_factory=lambda: {k: CheckTally() for k in ASSERTED})
    findings: dict[str, CheckTally] = field(default_factory=lambda: {k: CheckTally() for k in FINDINGS})
    skipped: list[str] = field(default_factory=list)
    rotation_samples: int = 0
    rotation_boundary_max_dev: float = 0.0

    @property
    def total_violations(self) -> int:
        return sum(t.violations for t in self.checks.values())

    def merge(self, other: "VerificationReport"):
        for k in ASSERTED:
            self.checks[k].merge(other.checks[k])
        for k in FINDINGS:
            self.findings[k].merge(other.findings[k])
        self.rotation_samples += other.rotation_samples
        self.rotation_boundary_max_dev = max(self.rotation_boundary_max_dev, other.rotation_boundary_max_dev)

    def to_dict(self) -> dict:
        def tally(t: CheckTally) -> dict:
            d = asdict(t)
            if t.checked == 0:
                d["max_excess"] = None
            return d

        return {
            "p": self.p,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "tol": self.tol,
            "max_degree": self.max_degree,
            "total_violations": self.total_violations,
            "checks": {k: tally(v) for k, v in self.checks.items()},
            "findings": {k: _as_finding(tally(v)) for k, v in self.findings.items()},
            "skipped": list(self.skipped),
            "rotation_samples": self.rotation_samples,
            "rotation_boundary_max_dev": self.rotation_boundary_max_dev,
        }


def _as_finding(d: dict) -> dict:
    d["exceedances"] = d.pop("violations")
    return d


def _verify_one(report: VerificationReport, spec: SchwarzSpec, discs: dict[str, Disc]):
    p, tol = report.p, report.tol
    candidate = CoCandidate(p, spec)
    text = schwarz.format_spec(candidate.omega)
    coeffs = schwarz.coefficients_at(candidate.omega, p, 2)
    c0, c1, c2 = coeffs.c
    triple = LaurentTriple(residue_from_c0(p, c0), a0_from_c(p, c0, c1), a1_from_c(p, c0, c1, c2))
    report.checks["schwarz_pick"].record(coeffs.schwarz_pick_excess(), tol, text)
    values = {"residue": triple.a_minus1, "a0": triple.a_0, "a1": triple.a_1}
    for name, disc in discs.items():
        allowed = tol + MEMBERSHIP_REL_TOL * disc.radius
        report.checks[f"{name}_disc"].record(disc.excess(values[name]), allowed, text)
    re_excess = re_a0_lower_bound(p) - triple.a_0.real
    mod_excess = abs(triple.a_1) - a1_modulus_bound(p)
    if candidate.certified_member:
        report.checks["re_a0_bound"].record(re_excess, tol, text)
        report.checks["a1_modulus_bound"].record(mod_excess, tol, text)
        report.checks["livingston"].record(-livingston_a0_check(p, triple.a_minus1, triple.a_0), tol, text)
    else:
        report.findings["re_a0_bound_uncertified"].record(re_excess, tol, text)
        report.findings["a1_modulus_bound_uncertified"].record(mod_excess, tol, text)
    if schwarz.is_unimodular_constant(candidate.omega):
        report.rotation_samples += 1
        dev = max(abs(disc.excess(values[name])) for name, disc in discs.items())
        report.rotation_boundary_max_dev = max(report.rotation_boundary_max_dev, dev)


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    env = os.environ.get("COPVAR_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def verify_samples(
    p: float,
    n_samples: int,
    seed: int,
    tol: float = MEMBERSHIP_ABS_TOL,
    max_degree: int = 3,
    specs: list[SchwarzSpec] | None = None,
    workers: int | None = None,
) -> VerificationReport:
    """Check sampled candidates against every bound that applies at p.

    The discs hold for every Schwarz function in their windows, so they are
    asserted for all samples. The Re a0 bound, the |a1| bound and the
    Livingston constraint are asserted only for certified members; for the
    remaining candidates an exceedance is recorded as a finding. Explicit
    ``specs`` replace the seeded sampler.
    """
    p = _check_p(p)
    if specs is None:
        if n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        specs = [schwarz.sample(schwarz.derived_seed(seed, i), max_degree) for i in range(n_samples)]
    report = VerificationReport(p, len(specs), seed, tol, max_degree)
    discs = {"residue": residue_disc(p)}
    for name in ("a0", "a1"):
        if WINDOWS[name].admits(p):
            discs[name] = DISCS[name](p)
        else:
            report.skipped.append(f"{name}_disc")

    n_workers = min(_worker_count(workers), len(specs))
    chunks = [specs[i::n_workers] for i in range(n_workers)]

    def run(chunk):
        part = VerificationReport(p, len(chunk), seed, tol, max_degree)
        for spec in chunk:
            _verify_one(part, spec, discs)
        return part

    if n_workers == 1:
        parts = [run(specs)]
    else:
        with ThreadPoolExecutor(n_workers) as pool:
            parts = list(pool.map(run, chunks))
    for part in parts:
        report.merge(part)
    return report
