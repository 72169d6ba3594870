"""Identity validation and oracle comparison reports.

These back the CLI's validate and oracle-compare subcommands and double as
the plumbing the acceptance tests drive: residuals of the secular
factorization (perturbed = secular-function times unperturbed), of the
autocorrelation identity, of the evenness/star symmetries, and side-by-side
eigenvalue tables against the matrix-truncation oracle.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from . import charfn, oracle
from .potential import OperatorSpec
from .spectrum import classify_spectrum, weight_table

LATTICE_EXCLUSION = 0.05


def identity_grid(lam_max: float = 30.0, step: float = 0.01) -> np.ndarray:
    """Real evaluation grid on [0.05, lam_max] avoiding the even lattice."""
    grid = np.arange(0.05, lam_max + step / 2.0, step)
    dist = np.abs(grid / 2.0 - np.round(grid / 2.0)) * 2.0
    return grid[dist >= LATTICE_EXCLUSION]


def factorization_residuals(op: OperatorSpec, lam: np.ndarray) -> np.ndarray:
    """|perturbed - secular * unperturbed| scaled by max(1, |perturbed|)."""
    ctx = charfn.CharContext(op)
    table = weight_table(op)
    norms = {k: x / op.alpha for k, x in table.weights.items()} if op.alpha else {}
    d = charfn.char_perturbed(ctx, lam)
    d0 = charfn.char_unperturbed(lam)
    if op.alpha == 0.0:
        q = np.ones_like(lam, dtype=float)
    else:
        q = np.array([charfn.secular_function(op.alpha, norms, l * l) for l in lam])
    return np.abs(d - q * d0) / np.maximum(1.0, np.abs(d))


def autocorr_identity_residuals(op: OperatorSpec, lam: np.ndarray) -> np.ndarray:
    spec = op.potential
    lhs = charfn.autocorr_transform(spec, lam) + charfn.autocorr_transform_star(spec, lam)
    rhs = charfn.fourier_transform(spec, lam) * charfn.fourier_transform_star(spec, lam)
    return np.abs(lhs - rhs)


def symmetry_residuals(op: OperatorSpec, lam: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Relative deviations from evenness and star-conjugation symmetry."""
    ctx = charfn.CharContext(op)
    d = charfn.char_perturbed(ctx, lam)
    d_neg = charfn.char_perturbed(ctx, -lam)
    d_star = np.conj(charfn.char_perturbed(ctx, np.conj(lam)))
    scale = np.maximum(1.0, np.abs(d))
    return np.abs(d - d_neg) / scale, np.abs(d - d_star) / scale


def identity_report(op: OperatorSpec, lam_max: float = 30.0) -> dict:
    grid = identity_grid(lam_max)
    fact = factorization_residuals(op, grid)
    auto = autocorr_identity_residuals(op, grid)
    complex_grid = grid[:100] + 1j * np.linspace(-1.5, 1.5, min(100, len(grid)))
    even_r, star_r = symmetry_residuals(op, complex_grid)
    report = {
        "secular_factorization_max": float(np.max(fact)),
        "autocorr_identity_max": float(np.max(auto)),
        "evenness_max": float(np.max(even_r)),
        "star_symmetry_max": float(np.max(star_r)),
    }
    report["passed"] = bool(
        report["secular_factorization_max"] <= 1e-9
        and report["autocorr_identity_max"] <= 1e-10
        and report["evenness_max"] <= 1e-10
        and report["star_symmetry_max"] <= 1e-10
    )
    return report


def validation_csv_rows(op: OperatorSpec, lam_max: float = 30.0):
    """(lambda, Re perturbed, factorization residual) rows for plotting."""
    grid = identity_grid(lam_max)
    ctx = charfn.CharContext(op)
    d = np.real(charfn.char_perturbed(ctx, grid))
    resid = factorization_residuals(op, grid)
    return [(float(l), float(v), float(r)) for l, v, r in zip(grid, d, resid)]


def char_samples(op: OperatorSpec, lam_max: float = 30.0, step: float = 0.01):
    """(lambda, Re perturbed) samples for plotting."""
    grid = np.arange(step, lam_max + step / 2.0, step)
    ctx = charfn.CharContext(op)
    d = np.real(charfn.char_perturbed(ctx, grid))
    return [(float(l), float(v)) for l, v in zip(grid, d)]


def oracle_comparison(
    op: OperatorSpec,
    window: float,
    n: Optional[int] = None,
    cluster_radius: float = 1e-6,
    tol: float = 1e-8,
) -> dict:
    """Side-by-side table of classified vs oracle eigenvalues up to window."""
    if n is None:
        n = max(op.potential.K + 8, int(math.ceil(2.0 * math.sqrt(max(window, 4.0)))) + 16)
    solver = [(e.z, e.multiplicity) for e in classify_spectrum(op, window).entries]
    truth = [(z, m) for z, m in oracle.oracle_spectrum(op, n, cluster_radius) if z <= window]
    rows = []
    max_dev = 0.0
    structure_ok = len(solver) == len(truth)
    for (zs, ms), (zo, mo) in zip(solver, truth):
        dev = abs(zs - zo)
        max_dev = max(max_dev, dev)
        structure_ok = structure_ok and ms == mo
        rows.append({"z_solver": zs, "m_solver": ms, "z_oracle": zo, "m_oracle": mo, "deviation": dev})
    return {
        "truncation": n,
        "max_deviation": max_dev,
        "entries": rows,
        "passed": bool(structure_ok and max_dev <= tol),
    }
