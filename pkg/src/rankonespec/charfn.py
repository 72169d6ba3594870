"""Entire-function machinery for the perturbed characteristic function.

Everything here reduces to two primitive finite Fourier integrals,

    U(mu)  = integral_0^pi e^{-i mu x} dx,
    X(mu)  = integral_0^pi x e^{-i mu x} dx,

evaluated in closed form away from mu = 0 and by truncated power series
inside a configurable switch radius (the removable singularities of the
closed forms sit exactly on the even-integer lattice in lambda). On top of
these sit the potential's Fourier transform, the transform of its one-sided
autocorrelation, and the characteristic functions of the unperturbed and
perturbed operators. The odd-ratio factor entering the perturbed function
has its own removable singularity at lambda = 0; near the origin it is
evaluated from numerically extracted Taylor coefficients.

All evaluators accept scalar or ndarray lambda (real or complex) and return
complex values of matching shape.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Mapping

import numpy as np

from .errors import PoleError
from .numerics import one_minus_exp
from .potential import OperatorSpec, PotentialSpec, exp_coefficients

DEFAULT_SINGULARITY_RADIUS = 1e-4
DEFAULT_SERIES_TERMS = 8

_PI = math.pi
# machine-precision series window for the ramp integral, whose closed form
# subtracts two O(pi) quantities
_RAMP_SERIES_CUTOFF = 0.5
_RAMP_SERIES_TERMS = 24


def _as_lambda_array(lam):
    arr = np.asarray(lam, dtype=complex)
    scalar = arr.ndim == 0
    return np.atleast_1d(arr), scalar


def _unit_transform(mu, radius, terms):
    """integral_0^pi e^{-i mu x} dx; series inside |mu| < radius."""
    out = np.empty_like(mu)
    near = np.abs(mu) < radius
    far = ~near
    mf = mu[far]
    out[far] = one_minus_exp(-1j * _PI * mf) / (1j * mf)
    zn = -1j * _PI * mu[near]
    # pi * sum z^n / (n+1)!
    acc = np.zeros_like(zn)
    for n in range(terms - 1, 0, -1):
        acc = zn / (n + 1) * (1.0 + acc)
    out[near] = _PI * (1.0 + acc)
    return out


def _ramp_series(mu, terms):
    # pi^2 * sum (n+1) z^n / (n+2)!
    z = -1j * _PI * mu
    out = np.zeros_like(z)
    fact = 2.0  # (n+2)! running value, starts at 2! for n=0
    zp = np.ones_like(z)
    for n in range(terms):
        if n > 0:
            fact *= n + 2
            zp = zp * z
        out = out + (n + 1) / fact * zp
    return _PI * _PI * out


def _ramp_transform(mu, radius, terms):
    """integral_0^pi x e^{-i mu x} dx; series inside |mu| < radius.

    The closed form subtracts two O(pi) terms, so a full-precision series is
    used on a fixed inner window regardless of the configured switch radius.
    """
    out = np.empty_like(mu)
    near = np.abs(mu) < radius
    mid = (~near) & (np.abs(mu) < _RAMP_SERIES_CUTOFF)
    far = (~near) & (~mid)
    mf = mu[far]
    unit_far = one_minus_exp(-1j * _PI * mf) / (1j * mf)
    out[far] = (unit_far - _PI * np.exp(-1j * _PI * mf)) / (1j * mf)
    out[mid] = _ramp_series(mu[mid], _RAMP_SERIES_TERMS)
    out[near] = _ramp_series(mu[near], terms)
    return out


def fourier_transform(
    spec: PotentialSpec,
    lam,
    radius: float = DEFAULT_SINGULARITY_RADIUS,
    terms: int = DEFAULT_SERIES_TERMS,
):
    """integral_0^pi e^{-i lam x} v(x) dx, entire in lam."""
    arr, scalar = _as_lambda_array(lam)
    ms, amps = exp_coefficients(spec)
    out = np.zeros_like(arr)
    for m, a in zip(ms, amps):
        out = out + a * _unit_transform(arr - 2.0 * m, radius, terms)
    return out[0] if scalar else out


def fourier_transform_star(
    spec: PotentialSpec,
    lam,
    radius: float = DEFAULT_SINGULARITY_RADIUS,
    terms: int = DEFAULT_SERIES_TERMS,
):
    """Star-conjugate f*(lam) = conj(f(conj(lam))) of the Fourier transform."""
    arr, scalar = _as_lambda_array(lam)
    out = np.conj(fourier_transform(spec, np.conj(arr), radius, terms))
    return out[0] if scalar else out


@lru_cache(maxsize=256)
def _autocorr_tables(spec: PotentialSpec):
    """Per-shift coefficient tables for the autocorrelation transform.

    With v = sum_m a_m e^{2imx}, the one-sided autocorrelation
    g(x) = integral_x^pi v(t-x) v(t) dt collapses onto the primitives as

        AC(lam) = sum_j CE[j] * U(lam + 2j) + CF[j] * X(lam + 2j),

    and the O(K^2) pair interactions are folded into CE/CF once per spec.
    """
    ms, amps = exp_coefficients(spec)
    index = {int(m): a for m, a in zip(ms, amps)}
    ce: dict[int, complex] = {}
    cf: dict[int, complex] = {}
    for m, am in index.items():
        b = am * index.get(-m, 0.0)
        if b != 0.0:
            ce[m] = ce.get(m, 0.0) + _PI * b
            cf[m] = cf.get(m, 0.0) - b
        for n, an in index.items():
            if m + n == 0:
                continue
            c = am * an / (2j * (m + n))
            ce[m] = ce.get(m, 0.0) + c
            ce[-n] = ce.get(-n, 0.0) - c
    shifts = sorted(set(ce) | set(cf))
    return (
        np.asarray(shifts, dtype=int),
        np.asarray([ce.get(j, 0.0) for j in shifts], dtype=complex),
        np.asarray([cf.get(j, 0.0) for j in shifts], dtype=complex),
    )


def autocorr_transform(
    spec: PotentialSpec,
    lam,
    radius: float = DEFAULT_SINGULARITY_RADIUS,
    terms: int = DEFAULT_SERIES_TERMS,
):
    """Transform of the one-sided autocorrelation of the potential,
    integral_0^pi e^{-i lam x} g(x) dx with g(x) = integral_x^pi v(t-x)v(t) dt."""
    arr, scalar = _as_lambda_array(lam)
    shifts, ce, cf = _autocorr_tables(spec)
    out = np.zeros_like(arr)
    for j, a, b in zip(shifts, ce, cf):
        mu = arr + 2.0 * j
        if a != 0.0:
            out = out + a * _unit_transform(mu, radius, terms)
        if b != 0.0:
            out = out + b * _ramp_transform(mu, radius, terms)
    return out[0] if scalar else out


def autocorr_transform_star(
    spec: PotentialSpec,
    lam,
    radius: float = DEFAULT_SINGULARITY_RADIUS,
    terms: int = DEFAULT_SERIES_TERMS,
):
    arr, scalar = _as_lambda_array(lam)
    out = np.conj(autocorr_transform(spec, np.conj(arr), radius, terms))
    return out[0] if scalar else out


def char_unperturbed(lam):
    """Characteristic function of the unperturbed operator: 2(1 - cos lam pi).

    Evaluated as (1 - e^{i lam pi}) + (1 - e^{-i lam pi}) so the double zeros
    on the even-integer lattice are formed without cancellation.
    """
    arr, scalar = _as_lambda_array(lam)
    out = one_minus_exp(1j * _PI * arr) + one_minus_exp(-1j * _PI * arr)
    return out[0] if scalar else out


def _edge_factor(spec, lam, radius, terms):
    """R(lam) = (1 - e^{-i lam pi}) { AC(lam)(1 - e^{i lam pi}) - F(lam) F*(lam) }."""
    ft = fourier_transform(spec, lam, radius, terms)
    fts = np.conj(fourier_transform(spec, np.conj(lam), radius, terms))
    ac = autocorr_transform(spec, lam, radius, terms)
    return one_minus_exp(-1j * _PI * lam) * (
        ac * one_minus_exp(1j * _PI * lam) - ft * fts
    )


def _odd_ratio_direct(spec, lam, radius, terms):
    """(R(lam) - R(-lam)) / (2i lam), valid away from lam = 0."""
    r_plus = _edge_factor(spec, lam, radius, terms)
    r_minus = _edge_factor(spec, -lam, radius, terms)
    return (r_plus - r_minus) / (2j * lam)


class CharContext:
    """Evaluation context: operator plus the singularity-handling knobs.

    singularity_radius is the distance to the even-integer lattice (and to
    the origin) below which closed forms are replaced by truncated series;
    series_terms is the truncation length. The origin series coefficients
    are extracted once per context from a 32-point circle of radius 0.5 via
    FFT (the odd-ratio factor is entire and even, so only even powers carry).
    """

    _CIRCLE_POINTS = 32
    _CIRCLE_RADIUS = 0.5

    def __init__(
        self,
        operator: OperatorSpec,
        singularity_radius: float = DEFAULT_SINGULARITY_RADIUS,
        series_terms: int = DEFAULT_SERIES_TERMS,
    ):
        if not 0.0 < singularity_radius <= 0.25:
            raise ValueError("singularity_radius must lie in (0, 0.25]")
        if series_terms < 4:
            raise ValueError("series_terms must be at least 4")
        self.operator = operator
        self.singularity_radius = float(singularity_radius)
        self.series_terms = int(series_terms)
        self._origin_coeffs: np.ndarray | None = None

    def origin_coeffs(self) -> np.ndarray:
        """Even Taylor coefficients of the odd-ratio factor at the origin,
        as a polynomial in lam**2 (ascending, series_terms entries)."""
        if self._origin_coeffs is None:
            m = self._CIRCLE_POINTS
            rho = self._CIRCLE_RADIUS
            theta = 2.0 * _PI * np.arange(m) / m
            ring = rho * np.exp(1j * theta)
            vals = _odd_ratio_direct(
                self.operator.potential, ring, self.singularity_radius, self.series_terms
            )
            coeffs = np.fft.fft(vals) / m
            orders = np.arange(0, 2 * self.series_terms, 2)
            self._origin_coeffs = coeffs[orders] / rho ** orders
        return self._origin_coeffs


def char_perturbed(ctx: CharContext, lam):
    """Characteristic function of the perturbed operator.

    Equals the unperturbed function plus coupling times the odd-ratio factor;
    inside the origin switch radius the factor is evaluated from its cached
    even Taylor series, which in particular fixes the finite value at lam = 0.
    """
    arr, scalar = _as_lambda_array(lam)
    spec = ctx.operator.potential
    radius = ctx.singularity_radius
    terms = ctx.series_terms
    out = char_unperturbed(arr)
    near = np.abs(arr) < radius
    far = ~near
    if np.any(far):
        out[far] = out[far] + ctx.operator.alpha * _odd_ratio_direct(
            spec, arr[far], radius, terms
        )
    if np.any(near):
        poly = ctx.origin_coeffs()
        u = arr[near] ** 2
        out[near] = out[near] + ctx.operator.alpha * np.polynomial.polynomial.polyval(
            u, poly
        )
    return out[0] if scalar else out


def secular_function(alpha: float, norms: Mapping[int, float], z: float) -> float:
    """1 + alpha * sum_k ||v_k||^2 / (4k^2 - z) over levels with positive norm.

    Raises PoleError when z hits one of the active poles exactly.
    """
    total = 0.0
    for k, nrm in norms.items():
        if nrm <= 0.0:
            continue
        pole = 4.0 * k * k
        if z == pole:
            raise PoleError(f"secular function evaluated at its pole z={pole}")
        total += nrm / (pole - z)
    return 1.0 + alpha * total
