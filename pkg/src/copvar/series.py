"""Contour-integral extraction of Taylor and Laurent coefficients.

Coefficients are read off from equispaced samples on a circle with the
trapezoid rule, which converges geometrically for integrands analytic on an
annulus around the circle. These routines are the numerical oracle that every
closed-form coefficient map in the package is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

ComplexFunc = Callable[[np.ndarray], np.ndarray]

DEFAULT_NODES = 512


class ContourError(ArithmeticError):
    """Raised when a contour quadrature cannot produce a finite result."""


@dataclass(frozen=True)
class ContourSpec:
    center: complex
    radius: float
    nodes: int = DEFAULT_NODES

    def __post_init__(self):
        center = complex(self.center)
        if not np.isfinite(center.real) or not np.isfinite(center.imag):
            raise ValueError(f"contour center must be finite, got {self.center!r}")
        object.__setattr__(self, "center", center)
        if not self.radius > 0 or not np.isfinite(self.radius):
            raise ValueError(f"contour radius must be positive, got {self.radius!r}")
        if self.nodes < 16 or self.nodes % 2:
            raise ValueError(f"nodes must be an even integer >= 16, got {self.nodes!r}")

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """Return (z_k, z_k - center) for the quadrature nodes."""
        theta = 2.0 * np.pi * np.arange(self.nodes) / self.nodes
        offsets = self.radius * np.exp(1j * theta)
        return self.center + offsets, offsets


def default_radius(p: float) -> float:
    """Contour radius for expansions at the pole p: min(p, 1 - p) / 2."""
    return min(p, 1.0 - p) / 2.0


def _sample(f: ComplexFunc, contour: ContourSpec) -> tuple[np.ndarray, np.ndarray]:
    z, offsets = contour.points()
    try:
        with np.errstate(all="raise"):
            values = np.asarray(f(z), dtype=complex)
    except (ArithmeticError, FloatingPointError, ValueError) as exc:
        raise ContourError(f"evaluation failed on contour {contour}: {exc}") from exc
    if values.shape != z.shape:
        values = np.broadcast_to(values, z.shape)
    if not np.all(np.isfinite(values)):
        raise ContourError(f"non-finite function value on contour {contour}")
    return values, offsets


def _check_finite(value: complex, what: str) -> complex:
    if not (np.isfinite(value.real) and np.isfinite(value.imag)):
        raise ContourError(f"non-finite {what}")
    return value


def contour_coefficient(f: ComplexFunc, contour: ContourSpec, n: int) -> complex:
    """n-th Laurent coefficient of ``f`` at the contour center.

    ``f`` must accept a complex ndarray and return values of the same shape.
    Computes (1/2 pi i) * integral of f(z) (z - center)^-(n+1) dz.
    """
    if n < -1:
        raise ValueError(f"n must be >= -1, got {n}")
    values, offsets = _sample(f, contour)
    with np.errstate(all="raise"):
        try:
            coeff = complex(np.mean(values * offsets ** (-n)))
        except FloatingPointError as exc:
            raise ContourError(f"overflow extracting coefficient {n}") from exc
    return _check_finite(coeff, f"coefficient a_{n}")


def taylor_coefficients(f: ComplexFunc, contour: ContourSpec, max_order: int) -> list[complex]:
    """Taylor coefficients c_0..c_max_order of ``f`` at the contour center.

    All orders come from a single set of samples via the FFT.
    """
    if max_order < 0:
        raise ValueError(f"max_order must be >= 0, got {max_order}")
    if max_order >= contour.nodes // 2:
        raise ValueError("max_order must be below nodes/2 to avoid aliasing")
    values, _ = _sample(f, contour)
    spectrum = np.fft.fft(values) / contour.nodes
    scale = contour.radius ** -np.arange(max_order + 1, dtype=float)
    with np.errstate(all="raise"):
        try:
            coeffs = spectrum[: max_order + 1] * scale
        except FloatingPointError as exc:
            raise ContourError("overflow scaling Taylor coefficients") from exc
    return [_check_finite(complex(c), f"Taylor coefficient c_{k}") for k, c in enumerate(coeffs)]


def derivative_at(f: ComplexFunc, point: complex, radius: float, nodes: int = DEFAULT_NODES) -> complex:
    """f'(point) from the first Taylor coefficient on a circle of given radius."""
    return contour_coefficient(f, ContourSpec(point, radius, nodes), 1)
