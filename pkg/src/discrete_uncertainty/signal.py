"""Centered grid, signal container, circular metric and the unitary DFT.

A signal of even length ``N`` lives on the points ``m / sqrt(N)`` for
``m = -N/2 + 1, ..., N/2``.  The grid is treated as a circle of period
``sqrt(N)``, and the DFT uses the kernel ``exp(-2*pi*i*j*k)`` which, with
``j = m/sqrt(N)`` and ``k = p/sqrt(N)``, is the standard ``exp(-2*pi*i*m*p/N)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.typing import ArrayLike, NDArray

__all__ = [
    "GridSpec",
    "GridPoint",
    "Signal",
    "make_grid",
    "circular_distance",
    "dft",
    "idft",
    "dft_reference",
    "idft_reference",
    "signal_to_json",
    "signal_from_json",
    "load_signal",
    "save_signal",
]


@dataclass(frozen=True)
class GridSpec:
    """Geometry of the centered grid for signals of length ``n``."""

    n: int

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise ValueError(f"grid length must be an integer, got {self.n!r}")
        if self.n < 2:
            raise ValueError(f"grid length must be >= 2, got {self.n}")
        if self.n % 2:
            raise ValueError(f"odd length unsupported (n={self.n})")
        object.__setattr__(self, "n", int(self.n))

    @property
    def period(self) -> float:
        return math.sqrt(self.n)

    @property
    def spacing(self) -> float:
        return self.period / self.n

    @property
    def offset(self) -> int:
        """Index shift: ``m = i - offset`` for array position ``i``."""
        return self.n // 2 - 1

    @property
    def indices(self) -> NDArray[np.int64]:
        """Integer labels ``m`` in storage order."""
        return np.arange(self.n, dtype=np.int64) - self.offset

    @property
    def points(self) -> NDArray[np.float64]:
        """Grid coordinates ``j = m / sqrt(n)`` in storage order."""
        # written so that m = n/2 lands exactly on period / 2
        return self.indices / (self.n // 2) * (self.period / 2)

    def point(self, i: int) -> GridPoint:
        m = i - self.offset
        return GridPoint(m=m, j=float(self.points[i]))

    def position(self, m: int) -> int:
        """Storage position of the grid point with label ``m``."""
        if not -self.n // 2 + 1 <= m <= self.n // 2:
            raise ValueError(f"label {m} outside [{-self.n // 2 + 1}, {self.n // 2}]")
        return m + self.offset

    def wrap(self, t: ArrayLike) -> NDArray[np.float64] | float:
        """Reduce coordinates into the half-open interval ``(-period/2, period/2]``."""
        p = self.period
        # + 0.0 turns -0.0 into 0.0
        r = p / 2 - np.mod(p / 2 - np.asarray(t, dtype=float), p) + 0.0
        return float(r) if np.ndim(r) == 0 else r


@dataclass(frozen=True)
class GridPoint:
    m: int
    j: float


def make_grid(n: int) -> GridSpec:
    """Build the grid for signals of length ``n`` (even, at least 2)."""
    return GridSpec(n)


class Signal:
    """Complex samples on a :class:`GridSpec`, stored in order of increasing ``m``.

    Signals are treated as values: the sample array is copied on construction
    and made read-only.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: GridSpec, values: ArrayLike):
        arr = np.array(values, dtype=np.complex128)
        if arr.ndim != 1 or arr.shape[0] != grid.n:
            raise ValueError(f"expected {grid.n} samples, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("signal values must be finite")
        arr.flags.writeable = False
        self.grid = grid
        self.values = arr

    @classmethod
    def from_function(cls, grid: GridSpec, func) -> Signal:
        return cls(grid, func(grid.points))

    @classmethod
    def delta(cls, grid: GridSpec, m: int = 0) -> Signal:
        v = np.zeros(grid.n, dtype=complex)
        v[grid.position(m)] = 1.0
        return cls(grid, v)

    @classmethod
    def uniform(cls, grid: GridSpec) -> Signal:
        return cls(grid, np.full(grid.n, 1.0 / math.sqrt(grid.n)))

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def energy(self) -> float:
        return float(np.vdot(self.values, self.values).real)

    @property
    def norm(self) -> float:
        return math.sqrt(self.energy)

    def normalized(self) -> Signal:
        nrm = self.norm
        if nrm == 0:
            raise ValueError("cannot normalize the zero signal")
        return Signal(self.grid, self.values / nrm)

    def shifted(self, steps: int = 1) -> Signal:
        """Circular shift by ``steps`` grid spacings (towards larger ``j``)."""
        return Signal(self.grid, np.roll(self.values, steps))

    def modulated(self, b: float) -> Signal:
        """Pointwise product with ``exp(2*pi*i*j*b)``."""
        return Signal(self.grid, self.values * np.exp(2j * np.pi * self.grid.points * b))

    def __len__(self) -> int:
        return self.grid.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Signal):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.values, other.values)

    def __repr__(self) -> str:
        return f"Signal(n={self.n}, norm={self.norm:.6g})"


def circular_distance(grid: GridSpec, j: ArrayLike, a: ArrayLike) -> NDArray[np.float64] | float:
    """Distance between ``j`` and ``a`` on the circle of circumference ``sqrt(N)``.

    Broadcasts over array arguments.  The result lies in ``[0, sqrt(N)/2]``.
    """
    p = grid.period
    diff = np.asarray(j, dtype=float) - np.asarray(a, dtype=float)
    r = np.abs(np.mod(diff + p / 2, p) - p / 2)
    r = np.minimum(r, p / 2)
    return float(r) if np.ndim(r) == 0 else r


def _direct_sum(grid: GridSpec, values: NDArray[np.complex128], sign: int) -> NDArray[np.complex128]:
    m = grid.indices
    out = np.empty(grid.n, dtype=complex)
    # row blocks keep the kernel at most 256 x N
    for start in range(0, grid.n, 256):
        rows = m[start : start + 256]
        # m*p is reduced mod n in exact integer arithmetic before the exponential
        phase = np.mod(np.outer(rows, m), grid.n) / grid.n
        out[start : start + 256] = np.exp(sign * 2j * np.pi * phase) @ values
    return out / math.sqrt(grid.n)


def dft_reference(x: Signal) -> Signal:
    """Direct ``O(N^2)`` evaluation of the centered unitary DFT on the labels ``m``."""
    return Signal(x.grid, _direct_sum(x.grid, x.values, -1))


def idft_reference(x_hat: Signal) -> Signal:
    return Signal(x_hat.grid, _direct_sum(x_hat.grid, x_hat.values, +1))


def dft(x: Signal) -> Signal:
    """Unitary DFT on the centered grid, via FFT.

    Rolling the centered storage so that ``m = 0`` sits at position 0 gives
    the usual FFT layout; the output is rolled back the same way.
    """
    s = x.grid.offset
    y = np.fft.fft(np.roll(x.values, -s), norm="ortho")
    return Signal(x.grid, np.roll(y, s))


def idft(x_hat: Signal) -> Signal:
    s = x_hat.grid.offset
    y = np.fft.ifft(np.roll(x_hat.values, -s), norm="ortho")
    return Signal(x_hat.grid, np.roll(y, s))


def signal_to_json(x: Signal) -> dict:
    return {"n": x.n, "values": [[float(v.real), float(v.imag)] for v in x.values]}


def signal_from_json(obj: dict) -> Signal:
    """Parse the ``{"n": N, "values": [[re, im], ...]}`` interchange format."""
    if not isinstance(obj, dict) or "n" not in obj or "values" not in obj:
        raise ValueError('signal JSON must be an object with keys "n" and "values"')
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError(f'"n" must be an integer, got {n!r}')
    grid = make_grid(n)
    vals = obj["values"]
    if not isinstance(vals, list) or len(vals) != n:
        raise ValueError(f'"values" must be a list of {n} [re, im] pairs')
    out = np.empty(n, dtype=complex)
    for i, pair in enumerate(vals):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in pair)
        ):
            raise ValueError(f"values[{i}] is not a [re, im] pair of numbers")
        out[i] = complex(pair[0], pair[1])
    return Signal(grid, out)


def save_signal(x: Signal, path: str | Path) -> None:
    Path(path).write_text(json.dumps(signal_to_json(x)) + "\n")


def load_signal(path: str | Path) -> Signal:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read signal file {path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed signal JSON in {path}: {exc.msg} (line {exc.lineno})") from None
    return signal_from_json(obj)
