"""Holomorphic self-maps of the unit disc used as generators.

A Schwarz function here is any holomorphic map of the open unit disc into its
closure. Five concrete families are supported, each an immutable value:

* ``Constant(c)`` with ``|c| <= 1``
* ``Rotation(theta)``, the unimodular constant ``exp(i theta)``
* ``MoebiusX(x, p)``, the automorphism ``-(m + x) / (1 + x m)`` with
  ``m = (z - p) / (1 - p z)``; ``p`` may be left unbound and is then filled in
  by :func:`bind` from the pole of the candidate that uses it
* ``Blaschke(rotation, zeros)``, a finite Blaschke product
* ``ConvexMix(weights, parts)``, a convex combination of the above

Every spec has a canonical text form used by the CLI, see :func:`parse_spec`
and :func:`format_spec`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Union

import numpy as np

from .series import DEFAULT_NODES, ContourSpec, default_radius, taylor_coefficients

UNIT_TOL = 1e-12
SAMPLE_ZERO_RADIUS = 0.95
VALIDATE_RADIUS = 0.999
_VARIANTS = ("const", "rot", "moebius", "blaschke", "mix")


@dataclass(frozen=True)
class Constant:
    c: complex

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        if abs(self.c) > 1.0 + UNIT_TOL:
            raise ValueError(f"constant must satisfy |c| <= 1, got {self.c}")


@dataclass(frozen=True)
class Rotation:
    theta: float

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise ValueError("rotation angle must be finite")
        object.__setattr__(self, "theta", float(self.theta) % (2.0 * math.pi))

    @property
    def value(self) -> complex:
        return cmath.exp(1j * self.theta)


@dataclass(frozen=True)
class MoebiusX:
    x: float
    p: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.x < 1.0:
            raise ValueError(f"MoebiusX requires x in [0, 1), got {self.x}; use moebius() for x = 1")
        if self.p is not None and not 0.0 < self.p < 1.0:
            raise ValueError(f"MoebiusX center must lie in (0, 1), got {self.p}")


@dataclass(frozen=True)
class Blaschke:
    rotation: complex
    zeros: tuple[complex, ...] = ()

    def __post_init__(self):
        rotation = complex(self.rotation)
        if abs(abs(rotation) - 1.0) > UNIT_TOL:
            raise ValueError(f"Blaschke rotation must be unimodular, got {rotation}")
        zeros = tuple(complex(a) for a in self.zeros)
        for a in zeros:
            if not abs(a) < 1.0:
                raise ValueError(f"Blaschke zeros must lie in the open disc, got {a}")
        object.__setattr__(self, "rotation", rotation)
        object.__setattr__(self, "zeros", zeros)


@dataclass(frozen=True)
class ConvexMix:
    weights: tuple[float, ...]
    parts: tuple["SchwarzSpec", ...]

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        parts = tuple(self.parts)
        if len(weights) != len(parts) or not parts:
            raise ValueError("ConvexMix needs one weight per part and at least one part")
        if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > 1e-12:
            raise ValueError(f"ConvexMix weights must be nonnegative and sum to 1, got {weights}")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "parts", parts)


SchwarzSpec = Union[Constant, Rotation, MoebiusX, Blaschke, ConvexMix]


@dataclass(frozen=True)
class SchwarzCoefficients:
    """Taylor data c_0..c_K of a Schwarz function at the point p."""

    p: float
    c: tuple[complex, ...]

    def schwarz_pick_excess(self) -> float:
        """max(|c0| - 1, |c1| - (1 - |c0|^2) / (1 - p^2)); nonpositive for self-maps."""
        c0 = abs(self.c[0])
        excess = c0 - 1.0
        if len(self.c) > 1:
            excess = max(excess, abs(self.c[1]) - (1.0 - c0 * c0) / (1.0 - self.p * self.p))
        return excess


def moebius(x: float, p: float | None = None) -> SchwarzSpec:
    """MoebiusX(x, p), degenerating to Constant(-1) at x = 1."""
    if x == 1.0:
        return Constant(-1.0)
    return MoebiusX(x, p)


def bind(spec: SchwarzSpec, p: float) -> SchwarzSpec:
    """Fill in the center of every unbound MoebiusX with p."""
    if isinstance(spec, MoebiusX) and spec.p is None:
        return replace(spec, p=p)
    if isinstance(spec, ConvexMix):
        return ConvexMix(spec.weights, tuple(bind(s, p) for s in spec.parts))
    return spec


def is_unimodular_constant(spec: SchwarzSpec) -> bool:
    if isinstance(spec, Rotation):
        return True
    if isinstance(spec, Constant):
        return abs(abs(spec.c) - 1.0) <= UNIT_TOL
    return False


def is_constant(spec: SchwarzSpec) -> bool:
    return isinstance(spec, (Constant, Rotation))


def _eval(spec: SchwarzSpec, z: np.ndarray) -> np.ndarray:
    if isinstance(spec, Constant):
        return np.full(z.shape, spec.c, dtype=complex)
    if isinstance(spec, Rotation):
        return np.full(z.shape, spec.value, dtype=complex)
    if isinstance(spec, MoebiusX):
        if spec.p is None:
            raise ValueError("MoebiusX center p is unbound; call bind(spec, p) first")
        m = (z - spec.p) / (1.0 - spec.p * z)
        return -(m + spec.x) / (1.0 + spec.x * m)
    if isinstance(spec, Blaschke):
        out = np.full(z.shape, spec.rotation, dtype=complex)
        for a in spec.zeros:
            out = out * (z - a) / (1.0 - a.conjugate() * z)
        return out
    if isinstance(spec, ConvexMix):
        out = np.zeros(z.shape, dtype=complex)
        for w, part in zip(spec.weights, spec.parts):
            out = out + w * _eval(part, z)
        return out
    raise TypeError(f"not a SchwarzSpec: {spec!r}")


def evaluate(spec: SchwarzSpec, z):
    """omega(z) for scalar or array z inside the open unit disc."""
    arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(arr) >= 1.0):
        raise ValueError("Schwarz functions are evaluated only for |z| < 1")
    out = _eval(spec, arr)
    return complex(out) if out.ndim == 0 else out


def as_function(spec: SchwarzSpec):
    """Vectorised callable z -> omega(z) without the |z| < 1 guard.

    Every supported variant is analytic on a neighbourhood of the closed disc,
    so contour routines may sample it on circles that touch the unit circle.
    """
    return lambda z: _eval(spec, np.asarray(z, dtype=complex))


def _moebius_coefficients(x: float, p: float, max_order: int) -> list[complex]:
    # omega_x is Moebius in t = z - p:  c_k = -(1 - x^2)/(1 - p^2) * ((p - x)/(1 - p^2))^(k-1)
    d = 1.0 - p * p
    ratio = (p - x) / d
    coeffs = [complex(-x)]
    for k in range(1, max_order + 1):
        coeffs.append(complex(-(1.0 - x * x) / d * ratio ** (k - 1)))
    return coeffs


def _coefficients(spec: SchwarzSpec, p: float, max_order: int, nodes: int) -> list[complex]:
    if isinstance(spec, (Constant, Rotation)):
        c = spec.c if isinstance(spec, Constant) else spec.value
        return [complex(c)] + [0j] * max_order
    if isinstance(spec, MoebiusX) and spec.p in (None, p):
        return _moebius_coefficients(spec.x, p, max_order)
    if isinstance(spec, ConvexMix):
        total = np.zeros(max_order + 1, dtype=complex)
        for w, part in zip(spec.weights, spec.parts):
            total += w * np.asarray(_coefficients(part, p, max_order, nodes))
        return [complex(c) for c in total]
    return oracle_coefficients(spec, p, max_order, nodes)


def oracle_coefficients(spec: SchwarzSpec, p: float, max_order: int, nodes: int = DEFAULT_NODES) -> list[complex]:
    """Taylor coefficients at p by contour quadrature, for any variant."""
    spec = bind(spec, p)
    contour = ContourSpec(p, default_radius(p), nodes)
    return taylor_coefficients(as_function(spec), contour, max_order)


def coefficients_at(spec: SchwarzSpec, p: float, max_order: int = 2, nodes: int = DEFAULT_NODES) -> SchwarzCoefficients:
    """Taylor coefficients of omega at p, closed form where one exists.

    Unbound MoebiusX specs are centred at p. Blaschke products (and MoebiusX
    maps centred elsewhere) go through the contour oracle.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if max_order < 0:
        raise ValueError(f"max_order must be >= 0, got {max_order}")
    return SchwarzCoefficients(p, tuple(_coefficients(spec, p, max_order, nodes)))


def validate(spec: SchwarzSpec, radial_levels: int = 32, angular_nodes: int = 256, p: float | None = None) -> float:
    """Largest |omega| over a polar grid with radii up to 0.999.

    ``p`` binds an unbound MoebiusX before sampling.
    """
    if radial_levels < 1 or angular_nodes < 1:
        raise ValueError("grid sizes must be positive")
    if p is not None:
        spec = bind(spec, p)
    radii = VALIDATE_RADIUS * np.arange(1, radial_levels + 1) / radial_levels
    theta = 2.0 * np.pi * np.arange(angular_nodes) / angular_nodes
    z = np.concatenate([[0.0], (radii[:, None] * np.exp(1j * theta)[None, :]).ravel()])
    return float(np.max(np.abs(_eval(spec, z))))


def _random_point_in_disc(rng: np.random.Generator, radius: float) -> complex:
    r = radius * math.sqrt(rng.random())
    return complex(cmath.rect(r, 2.0 * math.pi * rng.random()))


def _sample_simple(rng: np.random.Generator, max_degree: int, variant: str) -> SchwarzSpec:
    if variant == "const":
        return Constant(_random_point_in_disc(rng, 1.0))
    if variant == "rot":
        return Rotation(2.0 * math.pi * rng.random())
    if variant == "moebius":
        return MoebiusX(float(rng.random()))
    degree = int(rng.integers(0, max_degree + 1))
    rotation = cmath.exp(2j * math.pi * rng.random())
    zeros = tuple(_random_point_in_disc(rng, SAMPLE_ZERO_RADIUS) for _ in range(degree))
    return Blaschke(rotation, zeros)


def sample(seed, max_degree: int = 3) -> SchwarzSpec:
    """Deterministic pseudo-random spec; the variant is chosen uniformly.

    ``seed`` is anything accepted by ``numpy.random.default_rng``. MoebiusX
    samples are left unbound. ConvexMix draws 2 or 3 non-mix parts with
    Dirichlet weights.
    """
    if max_degree < 0:
        raise ValueError(f"max_degree must be >= 0, got {max_degree}")
    rng = np.random.default_rng(seed)
    variant = _VARIANTS[int(rng.integers(len(_VARIANTS)))]
    if variant != "mix":
        return _sample_simple(rng, max_degree, variant)
    k = int(rng.integers(2, 4))
    weights = rng.dirichlet(np.ones(k))
    weights = tuple(float(w) for w in weights[:-1]) + (1.0 - float(sum(weights[:-1])),)
    parts = tuple(_sample_simple(rng, max_degree, _VARIANTS[int(rng.integers(4))]) for _ in range(k))
    return ConvexMix(weights, parts)


def derived_seed(master: int, index: int) -> int:
    """Per-sample seed from (master, index), independent of scheduling."""
    return int(np.random.SeedSequence([master, index]).generate_state(1, dtype=np.uint64)[0])


# --- text form -----------------------------------------------------------


def format_complex(c: complex) -> str:
    c = complex(c)
    if c.imag == 0.0:
        return repr(c.real)
    sign = "-" if math.copysign(1.0, c.imag) < 0 else "+"
    return f"{c.real!r}{sign}{abs(c.imag)!r}i"


def parse_complex(text: str) -> complex:
    text = text.strip().replace(" ", "")
    if not text:
        raise ValueError("empty complex literal")
    try:
        return complex(text.replace("i", "j"))
    except ValueError:
        raise ValueError(f"cannot parse complex number {text!r}") from None


def format_spec(spec: SchwarzSpec) -> str:
    """Canonical text form, e.g. ``moebius:0.9`` or ``mix:0.5,0.5|rot:0.0|const:-1.0``."""
    if isinstance(spec, Constant):
        return f"const:{format_complex(spec.c)}"
    if isinstance(spec, Rotation):
        return f"rot:{spec.theta!r}"
    if isinstance(spec, MoebiusX):
        return f"moebius:{spec.x!r}" + ("" if spec.p is None else f"@{spec.p!r}")
    if isinstance(spec, Blaschke):
        return f"blaschke:{format_complex(spec.rotation)};" + ",".join(format_complex(a) for a in spec.zeros)
    if isinstance(spec, ConvexMix):
        head = "mix:" + ",".join(repr(w) for w in spec.weights)
        return "|".join([head] + [format_spec(s) for s in spec.parts])
    raise TypeError(f"not a SchwarzSpec: {spec!r}")


def _parse_simple(text: str) -> SchwarzSpec:
    kind, sep, body = text.strip().partition(":")
    if not sep:
        raise ValueError(f"missing ':' in Schwarz spec {text!r}")
    if kind == "const":
        return Constant(parse_complex(body))
    if kind == "rot":
        return Rotation(float(body))
    if kind == "moebius":
        x_text, _, p_text = body.partition("@")
        return moebius(float(x_text), float(p_text) if p_text else None)
    if kind == "blaschke":
        rot_text, _, zeros_text = body.partition(";")
        zeros = tuple(parse_complex(a) for a in zeros_text.split(",") if a.strip())
        return Blaschke(parse_complex(rot_text), zeros)
    raise ValueError(f"unknown Schwarz spec kind {kind!r}")


def parse_spec(text: str) -> SchwarzSpec:
    """Inverse of :func:`format_spec`. Raises ValueError on malformed input."""
    pieces = text.strip().split("|")
    if not pieces[0].startswith("mix:"):
        if len(pieces) != 1:
            raise ValueError(f"'|' is only allowed in mix specs: {text!r}")
        return _parse_simple(pieces[0])
    weights = tuple(float(w) for w in pieces[0][4:].split(","))
    parts = tuple(_parse_simple(s) for s in pieces[1:])
    return ConvexMix(weights, parts)
