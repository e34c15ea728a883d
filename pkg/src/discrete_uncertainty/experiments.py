"""Uncertainty products, the discrete/continuous sandwich check, sweeps,
circle asymptotics and a projected-gradient window optimizer."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import NDArray

from .continuous import COEFF_TO_LINE, HEISENBERG_BOUND, circle_moments, continuous_variance
from .errors import ComputationError
from .periodization import (
    DEFAULT_TAIL_TOL,
    GaussianParams,
    LocalizedFunction,
    discrete_gaussian,
    gaussian,
    localization_epsilon,
    periodize_sample,
)
from .signal import GridSpec, Signal, circular_distance, dft, idft, make_grid
from .spread import circular_variance

__all__ = [
    "TheoremReport",
    "CircleRow",
    "OptimizerTrace",
    "uncertainty_product",
    "uncertainty_summary",
    "verify_main_theorem",
    "gaussian_widths",
    "sweep",
    "circle_asymptotics",
    "objective_and_gradient",
    "optimize_window",
    "gaussian_match",
    "write_csv",
]

# Relative slack for the sandwich comparison.  Both products are computed in
# double precision and the quadrature stops at 1e-12 relative, so bounds
# narrower than this cannot be resolved.
SANDWICH_RTOL = 1e-11


def uncertainty_product(x: Signal) -> float:
    """``v_x * v_xhat`` for the circular variance."""
    return circular_variance(x).variance * circular_variance(dft(x)).variance


def uncertainty_summary(x: Signal) -> dict:
    t = circular_variance(x)
    f = circular_variance(dft(x))
    return {
        "v_time": t.variance,
        "mean_time": t.mean,
        "v_freq": f.variance,
        "mean_freq": f.mean,
        "product": t.variance * f.variance,
    }


@dataclass
class TheoremReport:
    n: int
    function_label: str
    epsilon: float
    continuous_product: float
    discrete_product: float
    sandwich_low: float
    sandwich_high: float
    lower_bound: float
    sandwich_pass: bool
    bound_pass: bool
    vacuous: bool = False
    c: float | None = None
    error: str | None = None

    def to_json(self) -> dict:
        return asdict(self)


def _nan_report(n: int, label: str, c: float | None, message: str) -> TheoremReport:
    nan = float("nan")
    return TheoremReport(n, label, nan, nan, nan, nan, nan, nan, False, False, False, c, message)


def verify_main_theorem(
    f: LocalizedFunction,
    grid: GridSpec,
    tail_tol: float = DEFAULT_TAIL_TOL,
    rtol: float = SANDWICH_RTOL,
    c: float | None = None,
) -> TheoremReport:
    """Compare the discrete product of ``x_f`` against the continuous product of ``f``.

    Checks ``sqrt(v_f v_fhat)(1 - sqrt(eps)) <= sqrt(v_x v_xhat) <= sqrt(v_f v_fhat)(1 + sqrt(eps))``
    and ``v_x v_xhat >= (1 - sqrt(eps))^2 / (16 pi^2)``.  With ``sqrt(eps) >= 1``
    the bound says nothing; the report is flagged ``vacuous`` and both checks
    are reported as failed.
    """
    eps = localization_epsilon(f, grid)
    root_eps = math.sqrt(eps)
    vacuous = root_eps >= 1
    cont = continuous_variance(f, "time").variance * continuous_variance(f, "frequency").variance
    error = None
    try:
        disc = uncertainty_product(periodize_sample(f, grid, tail_tol))
    except ComputationError as exc:
        if not vacuous:
            raise
        disc, error = float("nan"), str(exc)
    root_cont = math.sqrt(cont)
    low = (root_cont * (1 - root_eps)) ** 2
    high = (root_cont * (1 + root_eps)) ** 2
    lower_bound = (1 - root_eps) ** 2 * HEISENBERG_BOUND
    if vacuous or math.isnan(disc):
        sandwich_pass = bound_pass = False
    else:
        root_disc = math.sqrt(disc)
        sandwich_pass = (
            root_cont * (1 - root_eps) * (1 - rtol) <= root_disc <= root_cont * (1 + root_eps) * (1 + rtol)
        )
        bound_pass = disc >= lower_bound * (1 - rtol)
    return TheoremReport(
        n=grid.n,
        function_label=f.description,
        epsilon=eps,
        continuous_product=cont,
        discrete_product=disc,
        sandwich_low=low,
        sandwich_high=high,
        lower_bound=lower_bound,
        sandwich_pass=sandwich_pass,
        bound_pass=bound_pass,
        vacuous=vacuous,
        c=c,
        error=error,
    )


def gaussian_widths(c_min: float, c_max: float, steps: int) -> list[float]:
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    if not 0 < c_min <= c_max:
        raise ValueError(f"need 0 < c_min <= c_max, got {c_min}, {c_max}")
    if steps == 1:
        return [float(c_min)]
    return [float(c) for c in np.linspace(c_min, c_max, steps)]


def _sweep_row(n: int, c: float, tail_tol: float) -> TheoremReport:
    label = f"gaussian(c={c:.17g})"
    try:
        f = gaussian(GaussianParams(c=c))
        return verify_main_theorem(f, make_grid(n), tail_tol, c=c)
    except ValueError as exc:
        return _nan_report(n, label, c, str(exc))


def sweep(
    c_min: float,
    c_max: float,
    steps: int,
    n_list: Iterable[int],
    tail_tol: float = DEFAULT_TAIL_TOL,
    max_workers: int | None = 1,
) -> list[TheoremReport]:
    """Main-theorem reports for centered Gaussians over widths x grid sizes.

    Rows come back ordered by ``n`` then ``c`` regardless of ``max_workers``;
    a failing row carries its error message instead of stopping the sweep.
    """
    widths = gaussian_widths(c_min, c_max, steps)
    jobs = [(n, c) for n in sorted(n_list) for c in widths]
    if max_workers == 1 or len(jobs) <= 1:
        return [_sweep_row(n, c, tail_tol) for n, c in jobs]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(lambda job: _sweep_row(job[0], job[1], tail_tol), jobs))


@dataclass
class CircleRow:
    """One dilation ``a`` of the circle experiment.

    ``time_variance_scaled = a^2 * angular variance`` tends to ``v_f`` and
    ``freq_variance_scaled = coeff variance / a^2`` (in ``xi`` units) tends to
    ``v_fhat``.  ``circle_product`` is the raw angular x coefficient product
    (bounded below by 1/4); ``product`` is the same in line units and tends
    to ``v_f * v_fhat``.
    """

    a: float
    time_variance_scaled: float
    freq_variance_scaled: float
    circle_product: float
    product: float
    tau_abs: float


def circle_asymptotics(f: LocalizedFunction, a_list: Sequence[float], n_coeffs: int = 2048) -> list[CircleRow]:
    rows = []
    for a in a_list:
        m = circle_moments(f, a, n_coeffs)
        circle = m.angular_variance * m.coeff_variance
        rows.append(
            CircleRow(
                a=float(a),
                time_variance_scaled=a * a * m.angular_variance,
                freq_variance_scaled=m.coeff_variance * COEFF_TO_LINE / (a * a),
                circle_product=circle,
                product=circle * COEFF_TO_LINE,
                tau_abs=abs(m.tau),
            )
        )
    return rows


@dataclass
class OptimizerTrace:
    iterations: int
    final_product: float
    history: list[tuple[int, float]] = field(default_factory=list)
    seed: int = 0
    initial_product: float = float("nan")


def _unit(v: NDArray[np.float64]) -> NDArray[np.float64]:
    return v / np.linalg.norm(v)


def objective_and_gradient(grid: GridSpec, x: NDArray[np.float64]) -> tuple[float, NDArray[np.float64]]:
    """``v_x * v_xhat`` for a real vector and its gradient.

    Each variance is a minimum over centers, so its gradient is taken at the
    reported mean (the smallest minimizer, hence the first minimizing piece).
    """
    sig = Signal(grid, x)
    energy = float(np.dot(x, x))
    pts = grid.points

    rep = circular_variance(sig)
    d2 = circular_distance(grid, pts, rep.mean) ** 2
    v = rep.variance
    grad_v = 2 * x * (d2 - v) / energy

    xhat = dft(sig)
    rep_hat = circular_variance(xhat)
    d2_hat = circular_distance(grid, pts, rep_hat.mean) ** 2
    v_hat = rep_hat.variance
    back = idft(Signal(grid, (d2_hat - v_hat) * xhat.values)).values
    grad_v_hat = 2 * back.real / energy

    return v * v_hat, v_hat * grad_v + v * grad_v_hat


def optimize_window(
    grid: GridSpec,
    seed: int = 0,
    max_iters: int = 2000,
    step: float = 0.5,
    start: Signal | NDArray[np.float64] | None = None,
    max_halvings: int = 40,
) -> tuple[Signal, OptimizerTrace]:
    """Projected gradient descent of ``v_x * v_xhat`` over real unit vectors.

    Each iteration moves along the tangent component of the gradient with
    step ``step``, renormalizes, and halves the step until the product
    decreases (at most ``max_halvings`` times; otherwise the iterate stays).
    The recorded products are therefore non-increasing.
    """
    if max_iters < 1:
        raise ValueError(f"max_iters must be >= 1, got {max_iters}")
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}")
    if start is None:
        rng = np.random.default_rng(seed)
        x = _unit(rng.standard_normal(grid.n))
    else:
        vals = start.values if isinstance(start, Signal) else np.asarray(start)
        if np.max(np.abs(np.imag(vals))) > 1e-12 * np.max(np.abs(vals)):
            raise ValueError("optimizer start must be a real signal")
        x = _unit(np.real(vals).astype(float))

    value, grad = objective_and_gradient(grid, x)
    trace = OptimizerTrace(iterations=0, final_product=value, seed=seed, initial_product=value)
    for it in range(1, max_iters + 1):
        tangent = grad - np.dot(grad, x) * x
        h = step
        for _ in range(max_halvings + 1):
            cand = _unit(x - h * tangent)
            cand_value, cand_grad = objective_and_gradient(grid, cand)
            if cand_value < value:
                x, value, grad = cand, cand_value, cand_grad
                break
            h *= 0.5
        trace.history.append((it, value))
    trace.iterations = max_iters
    trace.final_product = value
    return Signal(grid, x), trace


def gaussian_match(x: Signal, c: float = 1.0) -> float:
    """Best ``|correlation|`` between ``x`` and the discrete Gaussian of width ``c``.

    The maximum runs over circular shifts and over the half-band modulation
    ``(-1)^m`` (which moves the spectrum by ``sqrt(N)/2``); absolute values
    absorb the sign.
    """
    g = _unit(np.real(discrete_gaussian(c, x.grid).values))
    y = x.values / np.linalg.norm(x.values)
    alt = (-1.0) ** x.grid.indices
    best = 0.0
    for cand in (y, y * alt):
        # circular cross-correlation for every shift at once
        corr = np.fft.ifft(np.fft.fft(cand) * np.conj(np.fft.fft(g)))
        best = max(best, float(np.max(np.abs(corr))))
    return best


def _fmt(value) -> str:
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_csv(rows: Sequence, path: str | Path | None = None, columns: Sequence[str] | None = None) -> str:
    """Render dataclass rows as CSV with 17 significant digits; write to ``path`` if given."""
    if columns is None:
        if not rows:
            raise ValueError("columns are required for an empty table")
        columns = [f.name for f in fields(rows[0])]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        data = asdict(row) if not isinstance(row, dict) else row
        writer.writerow([_fmt(data[col]) for col in columns])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text
