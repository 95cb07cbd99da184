"""Kernel representation of the a_1 functional and the counterexample families.

The a_1 relation is a linear functional of the Schwarz function,

    Phi_p(omega) = c0/(1-p^4) + (2p-p^3)/(1+p^2) c1 + (p^2-p^4)/(1+p^2) c2,

which can also be written as a contour integral against a rational kernel
with a third-order pole at p. Two kernels share that singular part: ``kappa``
(only the pole at p) and ``K`` (with reflected terms, real and nonnegative
on the unit circle for small p).

The second half of the module reproduces the candidates built from the
automorphisms omega_x whose a_0 or a_1 coefficient escapes the bounds that
hold on the concave class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import schwarz
from .cofunc import phi_from_c
from .regions import A0_P_MAX, A1_P_MAX, a1_modulus_bound, re_a0_lower_bound
from .schwarz import SchwarzSpec
from .series import DEFAULT_NODES, ContourSpec, contour_coefficient

S_BRACKET = (0.25, 0.35)
ROOT_TOL = 1e-12
POSITIVITY_TOL = 1e-10
SEARCH_GRID = 1024


def bisect(f: Callable[[float], float], lo: float, hi: float, tol: float = ROOT_TOL) -> float:
    """Root of a continuous f on [lo, hi] with a sign change, by bisection."""
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise ValueError(f"no sign change on [{lo}, {hi}]: f={f_lo}, {f_hi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bisect_predicate(pred: Callable[[float], bool], lo: float, hi: float, tol: float = 1e-9) -> float:
    """Smallest point where a monotone predicate flips from False to True."""
    if pred(lo) or not pred(hi):
        raise ValueError(f"predicate must be False at {lo} and True at {hi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# --- kernels ---------------------------------------------------------------


def kernel_eval(p: float, z, variant: str = "kappa"):
    """kappa_p(z) or K_p(z); accepts scalars or arrays."""
    arr = np.asarray(z, dtype=complex)
    if np.any(arr == p):
        raise ValueError(f"kernel is singular at z = p = {p}")
    s = 1.0 + p * p
    a, b, c = 1.0 / (1.0 - p**4), (2 * p - p**3) / s, (p * p - p**4) / s
    t = arr - p
    if variant == "kappa":
        out = a / t + b / t**2 + c / t**3
    elif variant == "K":
        u = 1.0 - p * arr
        if np.any(u == 0):
            raise ValueError(f"K_p is singular at z = 1/p = {1 / p}")
        out = a * (1 / t + p / u) + b * (1 / t**2 + 1 / u**2) + c * (1 / t**3 + arr / u**3)
    else:
        raise ValueError(f"unknown kernel variant {variant!r}")
    return complex(out) if out.ndim == 0 else out


def q_poly(p: float, x):
    """4p^4(p^2-2) x^2 + 4p^3(3-p^2) x + 1 - 8p^2 + 5p^4 - 2p^6."""
    return 4 * p**4 * (p * p - 2) * x * x + 4 * p**3 * (3 - p * p) * x + 1 - 8 * p * p + 5 * p**4 - 2 * p**6


def q_vertex(p: float) -> float:
    return (3 - p * p) / (2 * p * (2 - p * p))


def s_poly(p: float) -> float:
    return 1 - 8 * p**2 - 12 * p**3 - 3 * p**4 + 4 * p**5 + 2 * p**6


def s_root() -> float:
    """Zero of s_poly in (0.25, 0.35)."""
    return bisect(s_poly, *S_BRACKET)


def circle_kernel_values(p: float, theta) -> np.ndarray:
    z = np.exp(1j * np.asarray(theta, dtype=float))
    return z * kernel_eval(p, z, "K")


def kernel_identity_residual(p: float, theta):
    """|e^{it} K_p(e^{it}) (1+p^2) |1 - p e^{it}|^6 - Q_p(cos t)|."""
    theta = np.asarray(theta, dtype=float)
    lhs = circle_kernel_values(p, theta) * (1 + p * p) * np.abs(1 - p * np.exp(1j * theta)) ** 6
    res = np.abs(lhs - q_poly(p, np.cos(theta)))
    return float(res) if res.ndim == 0 else res


@dataclass(frozen=True)
class KernelReport:
    p: float
    grid: int
    theta_grid: tuple[float, ...]
    values: tuple[complex, ...]
    identity_residuals: tuple[float, ...]
    min_real: float
    argmin_theta: float
    max_abs_imag: float
    mean: complex

    @property
    def positive(self) -> bool:
        return self.min_real >= -POSITIVITY_TOL and self.max_abs_imag <= POSITIVITY_TOL

    def summary(self) -> dict:
        return {
            "p": self.p,
            "grid": self.grid,
            "min_real": self.min_real,
            "argmin_theta": self.argmin_theta,
            "max_abs_imag": self.max_abs_imag,
            "max_identity_residual": max(self.identity_residuals),
            "mean": [self.mean.real, self.mean.imag],
            "expected_mean": 1.0 / (1.0 - self.p**4),
            "positive": self.positive,
        }


def kernel_positivity(p: float, grid: int = 1024) -> KernelReport:
    """Sample e^{it} K_p(e^{it}) on an equispaced grid; the mean is the trapezoid rule."""
    if grid < 256:
        raise ValueError("grid must be >= 256")
    theta = 2.0 * np.pi * np.arange(grid) / grid
    values = circle_kernel_values(p, theta)
    residuals = kernel_identity_residual(p, theta)
    k = int(np.argmin(values.real))
    return KernelReport(
        p=p,
        grid=grid,
        theta_grid=tuple(theta.tolist()),
        values=tuple(values.tolist()),
        identity_residuals=tuple(residuals.tolist()),
        min_real=float(values.real[k]),
        argmin_theta=float(theta[k]),
        max_abs_imag=float(np.max(np.abs(values.imag))),
        mean=complex(np.mean(values)),
    )


def phi_functional(
    p: float,
    omega: SchwarzSpec,
    mode: str = "coefficients",
    kernel: str = "kappa",
    radius: float | None = None,
    nodes: int = DEFAULT_NODES,
) -> complex:
    """Phi_p(omega) from Taylor data, or as (1/2 pi i) * contour integral of kernel * omega.

    The contour is the circle |z| = radius, by default (1 + p)/2: it encloses
    the pole at p and keeps clear of singularities of omega outside the unit
    disc. ``radius=1`` integrates over the unit circle itself.
    """
    omega = schwarz.bind(omega, p)
    if mode == "coefficients":
        c0, c1, c2 = schwarz.coefficients_at(omega, p, 2, nodes).c
        return phi_from_c(p, c0, c1, c2)
    if mode != "contour":
        raise ValueError(f"unknown mode {mode!r}")
    if radius is None:
        radius = (1.0 + p) / 2.0
    if not p < radius <= 1.0:
        raise ValueError(f"contour radius must lie in (p, 1], got {radius}")
    w = schwarz.as_function(omega)
    return contour_coefficient(lambda z: kernel_eval(p, z, kernel) * w(z), ContourSpec(0.0, radius, nodes), -1)


def gmax(p: float) -> tuple[float, float]:
    """Maximum of g(x) = (2-p^2) x + p (1-x^2) over [0, 1] and its location."""
    x_vertex = (2 - p * p) / (2 * p)
    if x_vertex >= 1.0:
        return 2 - p * p, 1.0
    return (2 - p * p) * x_vertex + p * (1 - x_vertex**2), x_vertex


# --- counterexamples --------------------------------------------------------


def counterexample_coeff(p: float, x, which: str):
    """a_0 or a_1 of the candidate built from omega_x, in closed form."""
    x = np.asarray(x, dtype=float)
    if which == "a0":
        out = -p / (1 - p * p) ** 2 * (1 + (1 - x) * p * p / (1 + p * p) * (p * (1 + x) - (2 - p * p)))
    elif which == "a1":
        out = -p * p / (1 - p * p) ** 3 * (1 + (1 - x) / (1 + p * p) * (-1 + (1 + x) * (2 * p - p * p * x)))
    else:
        raise ValueError(f"unknown coefficient {which!r}")
    return float(out) if out.ndim == 0 else out


def r_poly(p: float, x):
    return -1 + 2 * p + x * (2 * p - p * p) - p * p * x * x


def a0_threshold_x(p: float) -> float:
    """x above which omega_x pushes Re a_0 below the class bound."""
    return (2 - p * p - p) / p


def counterexample_margin(p: float, x, which: str):
    """Bound exceedance written in factored form to keep its sign exact near zero."""
    x = np.asarray(x, dtype=float)
    if which == "a0":
        out = p / (1 - p * p) ** 2 * (1 - x) * p * p / (1 + p * p) * (p * (1 + x) - (2 - p * p))
    elif which == "a1":
        out = a1_modulus_bound(p) * (1 - x) / (1 + p * p) * r_poly(p, x)
    else:
        raise ValueError(f"unknown coefficient {which!r}")
    return float(out) if out.ndim == 0 else out


def counterexample_bound(p: float, which: str) -> float:
    return re_a0_lower_bound(p) if which == "a0" else a1_modulus_bound(p)


@dataclass(frozen=True)
class CounterexampleFinding:
    p: float
    x: float
    coefficient: str
    value: float
    bound: float
    margin: float
    grid: int

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "x": self.x,
            "coefficient": self.coefficient,
            "value": self.value,
            "bound": self.bound,
            "margin": self.margin,
            "grid": self.grid,
        }


def counterexample_search(p: float, which: str, grid: int = SEARCH_GRID) -> CounterexampleFinding | None:
    """Best omega_x over x in [0, 1), or None if no x beats the bound.

    A uniform grid is followed by one refinement pass of the same size around
    the best point.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    xs = np.arange(grid) / grid
    margins = counterexample_margin(p, xs, which)
    k = int(np.argmax(margins))
    h = 1.0 / grid
    lo, hi = max(0.0, xs[k] - h), min(1.0, xs[k] + h)
    fine = lo + (hi - lo) * np.arange(grid) / grid
    fine_margins = counterexample_margin(p, fine, which)
    j = int(np.argmax(fine_margins))
    x_best, m_best = (fine[j], fine_margins[j]) if fine_margins[j] > margins[k] else (xs[k], margins[k])
    if not m_best > 0:
        return None
    x_best = float(x_best)
    return CounterexampleFinding(
        p=p,
        x=x_best,
        coefficient=which,
        value=counterexample_coeff(p, x_best, which),
        bound=counterexample_bound(p, which),
        margin=float(m_best),
        grid=grid,
    )


def counterexample_threshold(which: str, tol: float = 1e-9, grid: int = SEARCH_GRID) -> float:
    """Smallest p at which counterexample_search finds a violation, by bisection on p."""
    lo, hi = {"a0": (0.5, 0.95), "a1": (0.2, 0.5)}[which]
    return bisect_predicate(lambda p: counterexample_search(p, which, grid) is not None, lo, hi, tol)


def theoretical_threshold(which: str) -> float:
    return A0_P_MAX if which == "a0" else A1_P_MAX
