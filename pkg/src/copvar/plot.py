"""Static SVG figures for the regions and kernel commands."""

from __future__ import annotations

import io
import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import regions  # noqa: E402
from .extremal import KernelReport, q_poly  # noqa: E402


def _to_svg(fig) -> str:
    buf = io.StringIO()
    with plt.rc_context({"svg.hashsalt": "copvar", "svg.fonttype": "none"}):
        fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)
    return buf.getvalue()


def _circle(ax, center: complex, radius: float, **kw):
    t = np.linspace(0, 2 * math.pi, 361)
    ax.plot(center.real + radius * np.cos(t), center.imag + radius * np.sin(t), **kw)


def regions_svg(p: float) -> str:
    """One panel per coefficient: the disc where established, plus the class bounds."""
    fig, axes = plt.subplots(1, 3, figsize=(12, 4))
    for ax, (name, make) in zip(axes, regions.DISCS.items()):
        ax.set_title(f"{name}, p = {p:g}")
        ax.set_aspect("equal")
        ax.axhline(0, color="0.8", lw=0.5)
        if regions.WINDOWS[name].admits(p):
            disc = make(p)
            _circle(ax, disc.center, disc.radius, color="C0", label="variability disc")
            ax.plot([disc.center.real], [disc.center.imag], "C0+")
        else:
            ax.text(0.5, 0.5, "not established", transform=ax.transAxes, ha="center")
        if name == "a0":
            ax.axvline(regions.re_a0_lower_bound(p), color="C3", ls="--", label="Re a0 bound")
        if name == "a1":
            _circle(ax, 0j, regions.a1_modulus_bound(p), color="C3", ls="--", label="|a1| bound")
        ax.legend(loc="upper right", fontsize=7)
    fig.tight_layout()
    return _to_svg(fig)


def kernel_svg(report: KernelReport) -> str:
    theta = np.asarray(report.theta_grid)
    values = np.asarray(report.values)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(theta, values.real, label="Re e^{it} K(e^{it})")
    scale = (1 + report.p**2) * np.abs(1 - report.p * np.exp(1j * theta)) ** 6
    ax.plot(theta, q_poly(report.p, np.cos(theta)) / scale, ls=":", label="Q(cos t) / scale")
    ax.axhline(0, color="0.5", lw=0.5)
    ax.set_xlabel("t")
    ax.set_title(f"kernel on the unit circle, p = {report.p:g}")
    ax.legend(fontsize=7)
    fig.tight_layout()
    return _to_svg(fig)
