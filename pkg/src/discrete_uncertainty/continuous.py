"""Continuous reference values: variances on the real line and on the circle.

Two Fourier conventions meet here and are kept apart by name:

* line quantities use ``f_hat(xi) = int f(t) exp(-2*pi*i*xi*t) dt``, for which
  the Heisenberg bound is ``v_f * v_f_hat >= 1 / (16 pi^2)``;
* circle quantities use ``2*pi``-periodic functions with Fourier coefficients
  ``c_k = (1/2pi) int_0^{2pi} g(t) exp(-i*k*t) dt``, i.e. the transform without
  the ``2*pi`` in the exponent, for which the bound reads ``> 1/4``.

``COEFF_TO_LINE`` converts a coefficient-index variance of a periodized
dilate back to ``xi`` units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from .errors import ComputationError
from .periodization import LocalizedFunction

__all__ = [
    "HEISENBERG_BOUND",
    "CIRCLE_BOUND",
    "COEFF_TO_LINE",
    "ContinuousMoments",
    "CircleMoments",
    "line_integral",
    "continuous_variance",
    "continuous_product",
    "periodized_dilate",
    "circle_moments",
]

HEISENBERG_BOUND = 1.0 / (16 * math.pi**2)
CIRCLE_BOUND = 0.25
# variance in angular frequency -> variance in xi = omega / (2 pi)
COEFF_TO_LINE = 1.0 / (4 * math.pi**2)

QUAD_RTOL = 1e-12
MAX_HALVINGS = 30
# discarded mass beyond the window, relative to the integral
_WINDOW_TOL = 1e-16


@dataclass(frozen=True)
class ContinuousMoments:
    mean: float
    variance: float
    norm_sq: float


@dataclass(frozen=True)
class CircleMoments:
    tau: complex
    angular_variance: float
    coeff_variance: float
    coeff_mean: float
    samples: int = 0


def _romberg(g: Callable[[NDArray[np.float64]], NDArray[np.float64]], lo: float, hi: float) -> float:
    """Romberg integration of ``g`` on ``[lo, hi]`` by repeated interval halving."""
    h = hi - lo
    ends = g(np.array([lo, hi]))
    trap = 0.5 * h * float(ends[0] + ends[1])
    prev_row = [trap]
    prev_best = trap
    for level in range(1, MAX_HALVINGS + 1):
        h *= 0.5
        mids = lo + h * (2 * np.arange(2 ** (level - 1)) + 1)
        trap = 0.5 * prev_row[0] + h * float(np.sum(g(mids)))
        row = [trap]
        for k in range(1, min(level, 8) + 1):
            row.append(row[k - 1] + (row[k - 1] - prev_row[k - 1]) / (4**k - 1))
        best = row[-1]
        if level >= 4 and abs(best - prev_best) <= QUAD_RTOL * abs(best):
            return best
        if level >= 4 and best == 0.0 and prev_best == 0.0:
            return 0.0
        prev_row, prev_best = row, best
    raise ComputationError(f"quadrature failed: no convergence after {MAX_HALVINGS} halvings")


def line_integral(
    g: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    center: float = 0.0,
    scale: float = 1.0,
) -> float:
    """``int_R g(t) dt`` for integrands decaying at least like ``1/t^2``.

    Substitutes ``t = center + scale * sinh(u)``, which turns algebraic decay
    into exponential decay, and integrates each half line separately so that
    a kink at ``center`` sits on an endpoint.  The window ``|u| <= U`` grows
    until the integrand at the edge is negligible.
    """

    def mapped(u):
        return g(center + scale * np.sinh(u)) * scale * np.cosh(u)

    total = 0.0
    for sign in (1.0, -1.0):

        def half(u, sign=sign):
            return mapped(sign * u)

        upper = 4.0
        while True:
            body = _romberg(half, 0.0, upper)
            edge = abs(float(half(np.array([upper]))[0]))
            # the mapped tail decays at least like exp(-u), so edge bounds the rest
            if edge <= _WINDOW_TOL * max(abs(body), 1e-300) or upper >= 64:
                break
            upper += 4.0
        total += body
    return total


def _side(f: LocalizedFunction, side: str) -> Callable:
    if side in ("time", "t"):
        return f.f
    if side in ("frequency", "freq", "f"):
        return f.f_hat
    raise ValueError(f"side must be 'time' or 'frequency', got {side!r}")


def continuous_variance(f: LocalizedFunction, side: str = "time", scale: float = 1.0) -> ContinuousMoments:
    """Mean and variance of ``|g|^2 / ||g||^2`` on the real line, ``g`` the chosen side."""
    g = _side(f, side)

    def density(t):
        v = np.abs(np.asarray(g(t))) ** 2
        if not np.all(np.isfinite(v)):
            raise ComputationError("function returned non-finite values")
        return v

    norm_sq = line_integral(density, 0.0, scale)
    if not norm_sq > 0:
        raise ComputationError("function has zero norm")
    mean = line_integral(lambda t: t * density(t), 0.0, scale) / norm_sq
    second = line_integral(lambda t: (t - mean) ** 2 * density(t), mean, scale) / norm_sq
    return ContinuousMoments(mean=mean, variance=second, norm_sq=norm_sq)


def continuous_product(f: LocalizedFunction) -> float:
    return continuous_variance(f, "time").variance * continuous_variance(f, "frequency").variance


def periodized_dilate(f: LocalizedFunction, a: float) -> Callable[[NDArray[np.float64]], NDArray]:
    """``t -> sqrt(a) * sum_k f(a * (t + 2 pi k))``, a ``2 pi``-periodic function."""
    if not a > 0:
        raise ValueError(f"dilation a must be positive, got {a}")
    root = math.sqrt(a)
    period = 2 * math.pi * a

    if f.periodic_sum is not None:
        return lambda t: root * np.asarray(f.periodic_sum(a * np.asarray(t, dtype=float), period))

    def fa(t):
        t = np.asarray(t, dtype=float)
        # reduce into [-pi, pi) so shells move outward monotonically
        x = a * (np.mod(t + math.pi, 2 * math.pi) - math.pi)
        total = np.asarray(f.f(x), dtype=complex)
        scale = float(np.max(np.abs(total))) or 1.0
        for k in range(1, 100_000):
            shell = np.asarray(f.f(x + k * period)) + np.asarray(f.f(x - k * period))
            total = total + shell
            if k >= 2 and float(np.max(np.abs(shell))) <= 1e-18 * scale:
                return root * total
        raise ComputationError("insufficient decay for periodization on the circle")

    return fa


def _coefficients(fa, samples: int):
    t = 2 * np.pi * np.arange(samples) / samples
    vals = np.asarray(fa(t), dtype=complex)
    coeffs = np.fft.fft(vals) / samples
    k = np.fft.fftfreq(samples, d=1.0 / samples)
    return t, vals, coeffs, k


def circle_moments(f: LocalizedFunction, a: float, n_coeffs: int = 2048) -> CircleMoments:
    """Circle-side spreads of the periodized dilate ``f_a``.

    ``tau`` is the first circular moment of ``|f_a|^2``, the angular variance is
    ``(1 - |tau|^2) / |tau|^2`` and the coefficient variance is the variance of
    ``|c_k|^2`` over integer ``k``.  Sampling resolution doubles until the
    coefficient variance is stable to ``1e-10`` relative; energy outside
    ``|k| <= n_coeffs`` must stay below ``1e-12`` of the total.
    """
    if n_coeffs < 1:
        raise ValueError(f"n_coeffs must be positive, got {n_coeffs}")
    fa = periodized_dilate(f, a)
    samples = 1 << max(10, int(math.ceil(math.log2(2 * n_coeffs + 2))))
    prev = None
    for _ in range(12):
        t, vals, coeffs, k = _coefficients(fa, samples)
        w = np.abs(vals) ** 2
        total = w.sum()
        if not total > 0:
            raise ComputationError("periodized function vanishes")
        tau = complex(np.dot(w, np.exp(1j * t)) / total)
        energy = np.abs(coeffs) ** 2
        e_total = energy.sum()
        outside = energy[np.abs(k) > n_coeffs].sum()
        if outside > 1e-12 * e_total:
            raise ComputationError(f"insufficient n_coeffs: {outside / e_total:.3g} of energy beyond |k| > {n_coeffs}")
        p = energy / e_total
        kmean = float(np.dot(p, k))
        kvar = float(np.dot(p, (k - kmean) ** 2))
        if prev is not None and abs(kvar - prev) <= 1e-10 * abs(kvar):
            mod2 = abs(tau) ** 2
            if mod2 == 0:
                raise ComputationError("angular spread undefined: zero first circular moment")
            return CircleMoments(
                tau=tau,
                angular_variance=max((1 - mod2) / mod2, 0.0),
                coeff_variance=kvar,
                coeff_mean=kmean,
                samples=samples,
            )
        prev = kvar
        samples *= 2
    raise ComputationError("coefficient variance did not stabilise")
