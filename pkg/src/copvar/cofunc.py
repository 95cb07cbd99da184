"""Candidate functions with a simple pole at p built from a Schwarz function.

For p in (0, 1) and a Schwarz function omega the candidate is

    f(z) = (z - p/(1+p^2) * (1 + omega(z)) * z^2) / ((1 - z/p) (1 - p z)).

Its Laurent coefficients a_-1, a_0, a_1 at p are affine in the Taylor data
c_0, c_1, c_2 of omega at p. Those maps are implemented in closed form here
and checked against direct contour quadrature of f.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import schwarz
from .schwarz import SchwarzSpec
from .series import DEFAULT_NODES, ContourSpec, contour_coefficient, default_radius, derivative_at

POLE_EPS = 1e-8
CONDITIONING_P = 0.95


class PoleError(ValueError):
    """Evaluation requested at (or numerically at) the pole."""


class ConditioningWarning(UserWarning):
    pass


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError(f"pole p must lie in (0, 1), got {p}")
    return p


@dataclass(frozen=True)
class CoCandidate:
    """The candidate (p, omega).

    ``certified_member`` is True only for constant omega, the case where
    membership in the concave class is known; other generators give members of
    the representation family whose class membership is unknown.
    """

    p: float
    omega: SchwarzSpec
    certified_member: bool = field(init=False)

    def __post_init__(self):
        p = _check_p(self.p)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "omega", schwarz.bind(self.omega, p))
        object.__setattr__(self, "certified_member", schwarz.is_constant(self.omega))
        if p > CONDITIONING_P:
            warnings.warn(
                f"p={p} > {CONDITIONING_P}: coefficient formulas lose accuracy as 1/(1-p^2)^3 grows",
                ConditioningWarning,
                stacklevel=3,
            )

    def __call__(self, z):
        return _representation(self, np.asarray(z, dtype=complex))


@dataclass(frozen=True)
class LaurentTriple:
    a_minus1: complex
    a_0: complex
    a_1: complex

    def __post_init__(self):
        for name in ("a_minus1", "a_0", "a_1"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if self.a_minus1 == 0:
            raise ValueError("residue of a simple pole cannot vanish")

    def as_tuple(self) -> tuple[complex, complex, complex]:
        return (self.a_minus1, self.a_0, self.a_1)

    def max_delta(self, other: "LaurentTriple") -> float:
        return max(abs(a - b) for a, b in zip(self.as_tuple(), other.as_tuple()))


def _representation(candidate: CoCandidate, z: np.ndarray) -> np.ndarray:
    p = candidate.p
    omega = schwarz.as_function(candidate.omega)(z)
    return (z - p / (1.0 + p * p) * (1.0 + omega) * z * z) / ((1.0 - z / p) * (1.0 - z * p))


def evaluate_f(candidate: CoCandidate, z, pole_eps: float = POLE_EPS):
    """f(z) for |z| < 1 away from the pole."""
    arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(arr) >= 1.0):
        raise ValueError("candidates are evaluated only for |z| < 1")
    if np.any(np.abs(arr - candidate.p) <= pole_eps):
        raise PoleError(f"z is within {pole_eps} of the pole p={candidate.p}")
    out = _representation(candidate, arr)
    return complex(out) if out.ndim == 0 else out


def residue_from_c0(p: float, c0: complex) -> complex:
    """a_-1 = -p^2/(1-p^4) + p^4/(1-p^4) c0."""
    p = _check_p(p)
    q = 1.0 - p**4
    return -p * p / q + p**4 / q * complex(c0)


def a0_from_c(p: float, c0: complex, c1: complex) -> complex:
    """Solve ((1-p^2)/p) a0 + (1-p^2+p^4)/(1-p^4) = (2p^2-p^4)/(1-p^4) c0 + p^3/(1+p^2) c1."""
    p = _check_p(p)
    q = 1.0 - p**4
    rhs = (2 * p * p - p**4) / q * complex(c0) + p**3 / (1 + p * p) * complex(c1)
    return (rhs - (1 - p * p + p**4) / q) * p / (1 - p * p)


def phi_from_c(p: float, c0: complex, c1: complex, c2: complex) -> complex:
    """The linear functional c0/(1-p^4) + (2p-p^3)/(1+p^2) c1 + (p^2-p^4)/(1+p^2) c2."""
    p = _check_p(p)
    s = 1.0 + p * p
    return complex(c0) / (1 - p**4) + (2 * p - p**3) / s * complex(c1) + (p * p - p**4) / s * complex(c2)


def a1_from_c(p: float, c0: complex, c1: complex, c2: complex) -> complex:
    """Solve a1 ((1-p^2)/p)^2 + p^2/(1-p^4) = phi_from_c(p, c0, c1, c2)."""
    p = _check_p(p)
    return (phi_from_c(p, c0, c1, c2) - p * p / (1 - p**4)) * (p / (1 - p * p)) ** 2


def laurent_closed(candidate: CoCandidate, nodes: int = DEFAULT_NODES) -> LaurentTriple:
    c0, c1, c2 = schwarz.coefficients_at(candidate.omega, candidate.p, 2, nodes).c
    p = candidate.p
    return LaurentTriple(residue_from_c0(p, c0), a0_from_c(p, c0, c1), a1_from_c(p, c0, c1, c2))


def default_contour(p: float, nodes: int = DEFAULT_NODES) -> ContourSpec:
    return ContourSpec(p, default_radius(p), nodes)


def laurent_oracle(candidate: CoCandidate, contour: ContourSpec | None = None) -> LaurentTriple:
    """Laurent triple by quadrature of f itself on a circle around p."""
    p = candidate.p
    if contour is None:
        contour = default_contour(p)
    if abs(contour.center - p) > 1e-15:
        raise ValueError(f"contour must be centred at the pole p={p}")
    if not contour.radius < min(p, 1.0 - p):
        raise ValueError("contour must stay inside the punctured disc of analyticity")
    return LaurentTriple(*(contour_coefficient(candidate, contour, n) for n in (-1, 0, 1)))


def normalization_check(candidate: CoCandidate, nodes: int = DEFAULT_NODES) -> tuple[complex, complex]:
    """(f(0), f'(0)); f'(0) comes from a contour oracle of radius p/2 at 0."""
    f0 = evaluate_f(candidate, 0.0)
    fprime0 = derivative_at(candidate, 0.0, candidate.p / 2.0, nodes)
    return f0, fprime0
