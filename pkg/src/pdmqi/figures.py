"""Matplotlib rendering of the report data, one PNG beside each CSV.

Pure presentation: every function takes already-computed arrays/rows and a
target path, and writes a single PNG with the Agg backend.  Nothing here
feeds back into the numerics.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_DPI = 130


def _save(fig, path: Path):
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_position_density(path: Path, x, psi, rho, rho_s, rho_f,
                            n: int, a: float):
    """psi, |psi|^2, entropic and Fisher densities against x."""
    fig, axes = plt.subplots(2, 2, figsize=(8, 6), constrained_layout=True)
    for ax, (y, label) in zip(axes.ravel(), [
            (psi, r"$\psi(x)$"), (rho, r"$\rho(x)$"),
            (rho_s, r"$\rho_s(x)$"), (rho_f, r"$\rho_F(x)$")]):
        ax.plot(x, y, lw=1.2)
        ax.set_xlabel("x")
        ax.set_ylabel(label)
        ax.grid(alpha=0.3)
    fig.suptitle(f"position densities, n={n}, a={a:g}")
    _save(fig, path)


def render_momentum_density(path: Path, p, phi, rho_p, rho_s_p, rho_f_p,
                            n: int, a: float):
    """phi, |phi|^2, entropic and Fisher densities against p."""
    fig, axes = plt.subplots(2, 2, figsize=(8, 6), constrained_layout=True)
    for ax, (y, label) in zip(axes.ravel(), [
            (phi, r"$\phi(p)$"), (rho_p, r"$\rho(p)$"),
            (rho_s_p, r"$\rho_s(p)$"), (rho_f_p, r"$\rho_F(p)$")]):
        ax.plot(p, y, lw=1.2)
        ax.set_xlabel("p")
        ax.set_ylabel(label)
        ax.grid(alpha=0.3)
    fig.suptitle(f"momentum densities, n={n}, a={a:g}")
    _save(fig, path)


def render_mass(path: Path, curves_x, curves_k):
    """Mass profile in position and reciprocal space, one curve per width.

    ``curves_x``: iterable of (a, x, m_x); ``curves_k``: of (a, k, m_k).
    """
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4),
                                   constrained_layout=True)
    for a, x, mx in curves_x:
        ax1.plot(x, mx, lw=1.2, label=f"a={a:g}")
    ax1.set_xlabel("x")
    ax1.set_ylabel("m(x)")
    ax1.legend()
    ax1.grid(alpha=0.3)
    for a, k, mk in curves_k:
        ax2.plot(k, mk, lw=1.2, label=f"a={a:g}")
    ax2.set_xlabel("k")
    ax2.set_ylabel("m(k)")
    ax2.legend()
    ax2.grid(alpha=0.3)
    fig.suptitle("solitonic mass profile")
    _save(fig, path)


def render_entropy_summary(path: Path, rows):
    """S_x and S_p against the width a, one line per level.

    ``rows``: iterable of dicts with keys n, a, S_x, S_p.
    """
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4),
                                   constrained_layout=True)
    levels = sorted({r["n"] for r in rows})
    for n in levels:
        sub = sorted((r for r in rows if r["n"] == n), key=lambda r: r["a"])
        a_vals = [r["a"] for r in sub]
        ax1.plot(a_vals, [r["S_x"] for r in sub], "o-", label=f"n={n}")
        ax2.plot(a_vals, [r["S_p"] for r in sub], "o-", label=f"n={n}")
    for ax, label in ((ax1, r"$S_x$"), (ax2, r"$S_p$")):
        ax.set_xlabel("a")
        ax.set_ylabel(label)
        ax.legend()
        ax.grid(alpha=0.3)
    fig.suptitle("Shannon entropy vs mass-profile width")
    _save(fig, path)


def render_fisher_summary(path: Path, rows):
    """F_x and F_p against the width a, one line per level."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4),
                                   constrained_layout=True)
    levels = sorted({r["n"] for r in rows})
    for n in levels:
        sub = sorted((r for r in rows if r["n"] == n), key=lambda r: r["a"])
        a_vals = [r["a"] for r in sub]
        ax1.plot(a_vals, [r["F_x"] for r in sub], "o-", label=f"n={n}")
        ax2.plot(a_vals, [r["F_p"] for r in sub], "o-", label=f"n={n}")
    ax1.set_ylabel(r"$F_x$")
    ax2.set_ylabel(r"$F_p$")
    for ax in (ax1, ax2):
        ax.set_xlabel("a")
        ax.legend()
        ax.grid(alpha=0.3)
    fig.suptitle("Fisher information vs mass-profile width")
    _save(fig, path)


def render_spectrum(path: Path, rows):
    """Closed-form vs finite-difference energies per block.

    ``rows``: iterable of dicts with keys case, n, E_closed_form, E_fd.
    """
    cases = []
    for r in rows:
        if r["case"] not in cases:
            cases.append(r["case"])
    fig, axes = plt.subplots(1, len(cases), figsize=(4 * len(cases), 4),
                             constrained_layout=True, squeeze=False)
    for ax, case in zip(axes[0], cases):
        sub = [r for r in rows if r["case"] == case]
        ns = [r["n"] for r in sub]
        ax.plot(ns, [r["E_closed_form"] for r in sub], "s--",
                label="closed form")
        ax.plot(ns, [r["E_fd"] for r in sub], "o-", label="finite difference")
        ax.set_title(case)
        ax.set_xlabel("n")
        ax.set_ylabel("E")
        ax.legend()
        ax.grid(alpha=0.3)
    _save(fig, path)
