"""Admissible signals: periodize a localized function and sample it on the grid.

For ``f`` on the real line the admissible signal is

    x_f(j) = N**(-1/4) * sum_{l in sqrt(N) Z} f(j + l),   j on the centered grid,

and Poisson summation gives ``dft(x_f) == x_{f_hat}``.  Fourier transforms
follow ``f_hat(xi) = int f(t) exp(-2*pi*i*xi*t) dt``.

All callables in a :class:`LocalizedFunction` must accept and return numpy
arrays, and must be safe to call from several threads at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import minimize_scalar

from .errors import ComputationError
from .signal import GridSpec, Signal, dft

__all__ = [
    "COMPONENTS",
    "LocalizedFunction",
    "GaussianParams",
    "gaussian",
    "hermite1",
    "lorentzian",
    "sup_weighted",
    "localization_epsilon",
    "periodize_sample",
    "discrete_gaussian",
    "poisson_duality_residual",
]

ArrayFn = Callable[[NDArray[np.float64]], NDArray]

COMPONENTS = ("f", "f_prime", "f_hat", "f_hat_prime")

MAX_PERIODS = 64
DEFAULT_TAIL_TOL = 1e-14

# geometric search grid for sup_{|t| >= R} t^2 |g(t)|
_GRID_RATIO = 1.01
_GRID_OCTAVES = 11
# relative growth over the last octave that counts as divergence
_GROWTH_TOL = 1e-3


@dataclass(frozen=True)
class LocalizedFunction:
    """A function on the real line together with its transform and derivatives.

    ``envelope(component, radius)`` may return the exact value of
    ``sup_{|t| >= radius} t^2 |component(t)|``; when absent the supremum is
    found numerically.  ``periodic_sum(t, period)`` may return the exact lattice
    sum ``sum_k f(t + k*period)``; when absent the sum is truncated using the
    decay envelope.
    """

    f: ArrayFn
    f_hat: ArrayFn
    f_prime: ArrayFn
    f_hat_prime: ArrayFn
    description: str = ""
    envelope: Callable[[str, float], float] | None = field(default=None, compare=False)
    periodic_sum: Callable[[NDArray[np.float64], float], NDArray] | None = field(default=None, compare=False)
    dual_periodic_sum: Callable[[NDArray[np.float64], float], NDArray] | None = field(
        default=None, compare=False, repr=False
    )

    def component(self, name: str) -> ArrayFn:
        if name not in COMPONENTS:
            raise ValueError(f"unknown component {name!r}; expected one of {COMPONENTS}")
        return getattr(self, name)

    def dual(self) -> LocalizedFunction:
        """The same function seen from the frequency side.

        The transform of ``f_hat`` is ``f(-t)``, so the roles of the two sides
        swap with a reflection.
        """
        f, fp = self.f, self.f_prime
        env = self.envelope
        swap = {"f": "f_hat", "f_prime": "f_hat_prime", "f_hat": "f", "f_hat_prime": "f_prime"}
        return LocalizedFunction(
            f=self.f_hat,
            f_hat=lambda t: f(-t),
            f_prime=self.f_hat_prime,
            f_hat_prime=lambda t: -fp(-t),
            description=f"dual of {self.description}" if self.description else "dual",
            envelope=None if env is None else (lambda comp, r: env(swap[comp], r)),
            periodic_sum=self.dual_periodic_sum,
            dual_periodic_sum=self.periodic_sum,
        )


@dataclass(frozen=True)
class GaussianParams:
    """Width ``c``, center ``a`` and modulation ``b`` of
    ``exp(2*pi*i*b*(t - a)) * exp(-pi*(t - a)**2 / c)``."""

    c: float = 1.0
    center_a: float = 0.0
    modulation_b: float = 0.0

    def __post_init__(self) -> None:
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ValueError(f"Gaussian width c must be positive and finite, got {self.c}")
        if not (math.isfinite(self.center_a) and math.isfinite(self.modulation_b)):
            raise ValueError("center and modulation must be finite")


def _power_gauss_sup(amp: float, power: int, beta: float, radius: float) -> float:
    # sup_{|t| >= radius} amp * |t|**power * exp(-beta t^2); peak at t^2 = power / (2 beta)
    t = max(radius, math.sqrt(power / (2 * beta)))
    return amp * t**power * math.exp(-beta * t * t)


def gaussian(params: GaussianParams | float = 1.0) -> LocalizedFunction:
    """The Gaussian ``phi_{a,b}`` of width ``c`` with all four callables in closed form."""
    if not isinstance(params, GaussianParams):
        params = GaussianParams(c=float(params))
    c, a, b = params.c, params.center_a, params.modulation_b
    sc = math.sqrt(c)

    def f(t):
        s = np.asarray(t, dtype=float) - a
        return np.exp(2j * np.pi * b * s - np.pi * s * s / c)

    def f_prime(t):
        s = np.asarray(t, dtype=float) - a
        return (2j * np.pi * b - 2 * np.pi * s / c) * f(t)

    def f_hat(xi):
        xi = np.asarray(xi, dtype=float)
        d = xi - b
        return sc * np.exp(-2j * np.pi * a * xi - np.pi * c * d * d)

    def f_hat_prime(xi):
        xi = np.asarray(xi, dtype=float)
        return (-2j * np.pi * a - 2 * np.pi * c * (xi - b)) * f_hat(xi)

    envelope = None
    if a == 0 and b == 0:
        beta_t, beta_f = math.pi / c, math.pi * c
        envelope_table = {
            "f": (1.0, 2, beta_t),
            "f_prime": (2 * math.pi / c, 3, beta_t),
            "f_hat": (sc, 2, beta_f),
            "f_hat_prime": (2 * math.pi * c * sc, 3, beta_f),
        }

        def envelope(comp: str, radius: float) -> float:
            amp, power, beta = envelope_table[comp]
            return _power_gauss_sup(amp, power, beta, radius)

    label = f"gaussian(c={c:g}, a={a:g}, b={b:g})"
    return LocalizedFunction(f, f_hat, f_prime, f_hat_prime, label, envelope=envelope)


def hermite1() -> LocalizedFunction:
    """``t * exp(-pi t^2)``, whose transform is ``-i * xi * exp(-pi xi^2)``."""

    def f(t):
        t = np.asarray(t, dtype=float)
        return (t * np.exp(-np.pi * t * t)).astype(complex)

    def f_prime(t):
        t = np.asarray(t, dtype=float)
        return ((1 - 2 * np.pi * t * t) * np.exp(-np.pi * t * t)).astype(complex)

    return LocalizedFunction(
        f=f,
        f_hat=lambda xi: -1j * f(xi),
        f_prime=f_prime,
        f_hat_prime=lambda xi: -1j * f_prime(xi),
        description="hermite1",
    )


def lorentzian(width: float = 1.0) -> LocalizedFunction:
    """``1 / (1 + (t/s)^2)``; transform ``s*pi*exp(-2*pi*s*|xi|)``.

    Decays only quadratically, so ``t^2 |f(t)|`` tends to ``s^2`` and the
    localization constant never drops below it.  Lattice sums on either side
    are evaluated in closed form.
    """
    s = float(width)
    if not s > 0:
        raise ValueError(f"width must be positive, got {width}")

    def f(t):
        u = np.asarray(t, dtype=float) / s
        return (1.0 / (1.0 + u * u)).astype(complex)

    def f_prime(t):
        u = np.asarray(t, dtype=float) / s
        return (-2 * u / (s * (1 + u * u) ** 2)).astype(complex)

    def f_hat(xi):
        xi = np.asarray(xi, dtype=float)
        return (s * np.pi * np.exp(-2 * np.pi * s * np.abs(xi))).astype(complex)

    def f_hat_prime(xi):
        xi = np.asarray(xi, dtype=float)
        return (-2 * np.pi * s * np.sign(xi) * s * np.pi * np.exp(-2 * np.pi * s * np.abs(xi))).astype(complex)

    def periodic_sum(t, period):
        # sum_k s^2 / (s^2 + (t + kP)^2) = (pi s / P) sinh(q) / (cosh(q) - cos(2 pi t / P)), q = 2 pi s / P
        t = np.asarray(t, dtype=float)
        q = 2 * np.pi * s / period
        # sinh(q) / (cosh(q) - cos(x)) without overflow for large q
        e = np.exp(-q)
        num = 1 - e * e
        den = 1 + e * e - 2 * e * np.cos(2 * np.pi * t / period)
        return (np.pi * s / period * num / den).astype(complex)

    def dual_periodic_sum(xi, period):
        # geometric series of the two-sided exponential
        xi = np.asarray(xi, dtype=float)
        r = np.mod(xi, period)
        k = 2 * np.pi * s
        q = np.exp(-k * period)
        val = (np.exp(-k * r) + np.exp(-k * (period - r))) / (1 - q)
        return (s * np.pi * val).astype(complex)

    return LocalizedFunction(
        f,
        f_hat,
        f_prime,
        f_hat_prime,
        f"lorentzian(s={s:g})",
        periodic_sum=periodic_sum,
        dual_periodic_sum=dual_periodic_sum,
    )


def _weighted(g: ArrayFn, t: NDArray[np.float64]) -> NDArray[np.float64]:
    vals = np.abs(np.asarray(g(t)))
    if not np.all(np.isfinite(vals)):
        raise ComputationError("function returned non-finite values")
    return t * t * vals


def sup_weighted(g: ArrayFn, radius: float) -> float:
    """Numerical ``sup_{|t| >= radius} t^2 |g(t)|``.

    Scans a geometric grid over ``[radius, radius * 2**11]`` on both half
    lines and refines the best candidate with a bounded scalar search.
    """
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    steps = int(math.ceil(_GRID_OCTAVES * math.log(2) / math.log(_GRID_RATIO)))
    ts = radius * _GRID_RATIO ** np.arange(steps + 1)
    best = 0.0
    per_octave = int(round(math.log(2) / math.log(_GRID_RATIO)))
    for sign in (1.0, -1.0):
        vals = _weighted(g, sign * ts)
        k = int(np.argmax(vals))
        top = vals[-1]
        if k == len(vals) - 1 and top > 0:
            prev = vals[-1 - per_octave]
            if top > prev * (1 + _GROWTH_TOL):
                raise ComputationError("not localized: t^2 |f(t)| keeps growing")
        cand = float(vals[k])
        if 0 < k < len(vals) - 1:
            lo, hi = ts[k - 1], ts[k + 1]
            res = minimize_scalar(
                lambda t: -float(_weighted(g, np.array([sign * t]))[0]),
                bounds=(lo, hi),
                method="bounded",
                options={"xatol": 1e-12 * hi},
            )
            cand = max(cand, -float(res.fun))
        best = max(best, cand)
    return best


def _component_sup(f: LocalizedFunction, comp: str, radius: float) -> float:
    if f.envelope is not None:
        return float(f.envelope(comp, radius))
    return sup_weighted(f.component(comp), radius)


def localization_epsilon(f: LocalizedFunction, grid: GridSpec) -> float:
    """Smallest ``eps`` with ``|g(t)| <= eps / t^2`` for ``|t| >= sqrt(N)/2``,
    taken jointly over ``f``, ``f'``, ``f_hat`` and ``f_hat'``."""
    radius = grid.period / 2
    return max(_component_sup(f, comp, radius) for comp in COMPONENTS)


def _tail_bound(f: LocalizedFunction, grid: GridSpec, periods: int) -> float:
    """Bound on ``N**(-1/4) * sum_{|l| > L} |f(j + l sqrt(N))|`` over the grid."""
    n = grid.n
    radius = (periods + 0.5) * grid.period
    eps = _component_sup(f, "f", radius)
    # sum_{l > L} (l - 1/2)^-2 <= 1 / (L - 1/2) for L >= 1; equals pi^2 / 2 for L = 0
    series = math.pi**2 / 2 if periods == 0 else 1.0 / (periods - 0.5)
    return n**-0.25 * 2 * eps * series / n


def lattice_periods(f: LocalizedFunction, grid: GridSpec, tail_tol: float = DEFAULT_TAIL_TOL) -> int:
    """Smallest number of periods ``L`` whose truncation error is below ``tail_tol``."""
    if not tail_tol > 0:
        raise ValueError(f"tail_tol must be positive, got {tail_tol}")
    for periods in range(MAX_PERIODS + 1):
        if _tail_bound(f, grid, periods) < tail_tol:
            return periods
    raise ComputationError(f"insufficient decay: lattice tail above {tail_tol:g} after {MAX_PERIODS} periods")


def periodize_sample(
    f: LocalizedFunction,
    grid: GridSpec,
    tail_tol: float = DEFAULT_TAIL_TOL,
    periods: int | None = None,
) -> Signal:
    """Sample the ``sqrt(N)``-periodization of ``f`` on the grid, scaled by ``N**(-1/4)``.

    ``periods`` forces the truncation ``|l| <= periods``; by default it is the
    smallest value meeting ``tail_tol``.
    """
    js = grid.points
    scale = grid.n**-0.25
    if f.periodic_sum is not None and periods is None:
        vals = np.asarray(f.periodic_sum(js, grid.period))
    else:
        if periods is None:
            periods = lattice_periods(f, grid, tail_tol)
        ls = np.arange(-periods, periods + 1)
        # smallest terms first
        ls = ls[np.argsort(-np.abs(ls), kind="stable")]
        terms = np.asarray(f.f(js[None, :] + grid.period * ls[:, None]))
        vals = terms.sum(axis=0)
    vals = scale * vals
    if not np.all(np.isfinite(vals)):
        raise ComputationError("function returned non-finite values")
    return Signal(grid, vals)


def discrete_gaussian(
    params: GaussianParams | float,
    grid: GridSpec,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> Signal:
    """Admissible signal generated by the Gaussian ``phi_{a,b}`` of width ``c``."""
    return periodize_sample(gaussian(params), grid, tail_tol)


def poisson_duality_residual(
    f: LocalizedFunction,
    grid: GridSpec,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> float:
    """``max |dft(x_f) - x_{f_hat}|``; near zero when ``f`` is well localized."""
    lhs = dft(periodize_sample(f, grid, tail_tol))
    rhs = periodize_sample(f.dual(), grid, tail_tol)
    return float(np.max(np.abs(lhs.values - rhs.values)))


def with_description(f: LocalizedFunction, description: str) -> LocalizedFunction:
    return replace(f, description=description)
