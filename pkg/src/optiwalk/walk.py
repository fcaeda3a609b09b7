"""Dense-lattice simulator for d-dimensional walks with a 2d-dimensional coin.

The state is a complex array of shape ``(2R_1+1, ..., 2R_d+1, 2d)``; lattice
coordinate ``x`` in dimension ``n`` lives at index ``x + R_n``. Coin index
``c = 2(n-1) + p`` moves the walker along dimension ``n``: forward for
``p = 0`` (h), backward for ``p = 1`` (v).
"""
from __future__ import annotations

import math
from collections.abc import Iterator
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .optics import CoinSpec

NORM_TOL = 1e-9


class WindowOverflowError(RuntimeError):
    """Amplitude would leave the simulation window."""


class StepBudgetError(WindowOverflowError):
    """The configured window cannot hold the requested number of steps."""


@dataclass
class WalkState:
    d: int
    radius: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        self.radius = tuple(int(r) for r in self.radius)
        if self.d < 1 or len(self.radius) != self.d or min(self.radius) < 0:
            raise ValueError(f"need {self.d} nonnegative radii, got {self.radius}")
        expected = self.shape + (2 * self.d,)
        if self.amplitudes.shape != expected:
            raise ValueError(f"amplitude array has shape {self.amplitudes.shape}, expected {expected}")

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(2 * r + 1 for r in self.radius)

    @property
    def window(self) -> list[tuple[int, int]]:
        return [(-r, r) for r in self.radius]

    @classmethod
    def zeros(cls, d: int, radius) -> "WalkState":
        if isinstance(radius, int):
            radius = (radius,) * d
        shape = tuple(2 * int(r) + 1 for r in radius) + (2 * d,)
        return cls(d, tuple(radius), np.zeros(shape, dtype=np.complex128))

    @classmethod
    def from_entries(cls, d: int, radius, entries) -> "WalkState":
        """Build a state from ``(coords, coin_index, amplitude)`` triples."""
        state = cls.zeros(d, radius)
        for coords, c, amp in entries:
            state.amplitudes[state.index(coords) + (int(c),)] += amp
        return state

    def index(self, coords) -> tuple[int, ...]:
        coords = tuple(int(x) for x in coords)
        if len(coords) != self.d:
            raise ValueError(f"expected {self.d} coordinates, got {coords}")
        for x, r in zip(coords, self.radius):
            if abs(x) > r:
                raise WindowOverflowError(f"coordinate {coords} outside window {self.window}")
        return tuple(x + r for x, r in zip(coords, self.radius))

    def amplitude(self, coords, c: int) -> complex:
        return complex(self.amplitudes[self.index(coords) + (c,)])

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def copy(self) -> "WalkState":
        return WalkState(self.d, self.radius, self.amplitudes.copy())

    def nonzero(self) -> Iterator[tuple[tuple[int, ...], int, complex]]:
        """Yield ``(coords, coin_index, amplitude)`` for every nonzero amplitude."""
        offset = np.array(self.radius + (0,))
        for idx in np.argwhere(self.amplitudes != 0):
            pos = tuple(int(v) for v in idx - offset)
            yield pos[:-1], pos[-1], complex(self.amplitudes[tuple(idx)])


def _coin_matrix(state: WalkState, coin) -> np.ndarray:
    m = coin.matrix if isinstance(coin, CoinSpec) else np.asarray(coin, dtype=np.complex128)
    if m.shape != (2 * state.d, 2 * state.d):
        raise ValueError(f"coin of shape {m.shape} does not fit a walk with d={state.d}")
    return m


def apply_coin(state: WalkState, coin) -> WalkState:
    m = _coin_matrix(state, coin)
    return WalkState(state.d, state.radius, state.amplitudes @ m.T)


def apply_shift(state: WalkState) -> WalkState:
    out = np.zeros_like(state.amplitudes)
    for c in range(2 * state.d):
        axis, pol = divmod(c, 2)
        src = np.moveaxis(state.amplitudes[..., c], axis, 0)
        dst = np.moveaxis(out[..., c], axis, 0)
        edge, sl_src, sl_dst = (-1, slice(None, -1), slice(1, None)) if pol == 0 else (0, slice(1, None), slice(None, -1))
        if np.any(src[edge]):
            raise WindowOverflowError(
                f"coin state {c} would move past the edge of dimension {axis + 1} "
                f"(window {state.window[axis]})"
            )
        dst[sl_dst] = src[sl_src]
    return WalkState(state.d, state.radius, out)


def step(state: WalkState, coin, backend=None) -> WalkState:
    """One walk step: coin toss at every site, then the conditional shift."""
    m = np.ascontiguousarray(_coin_matrix(state, coin))
    kernel = backend or kernels.coin_shift
    n = 2 * state.d
    psi = np.ascontiguousarray(state.amplitudes).reshape(-1, n)
    out = np.zeros_like(psi)
    if kernel(psi, m, np.asarray(state.shape, dtype=np.intp), out):
        raise WindowOverflowError(f"amplitude would leave the window {state.window}")
    return WalkState(state.d, state.radius, out.reshape(state.amplitudes.shape))


@dataclass
class WalkConfig:
    """Walk parameters.

    ``initial`` holds ``(coords, coin_index, amplitude)`` triples and defaults
    to the walker at the origin in coin state 0 (h polarization, beam 1).
    ``radius`` of ``None`` sizes the window to exactly fit ``steps``.
    """

    d: int
    steps: int
    coin: CoinSpec
    initial: list = field(default_factory=list)
    radius: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"d must be positive, got {self.d}")
        if self.steps < 0:
            raise ValueError(f"steps must be nonnegative, got {self.steps}")
        if self.coin.d != self.d:
            raise ValueError(f"coin is for d={self.coin.d}, walk has d={self.d}")
        if not self.initial:
            self.initial = [((0,) * self.d, 0, 1.0)]
        total = sum(abs(complex(a)) ** 2 for _, _, a in self.initial)
        if abs(total - 1) > NORM_TOL:
            raise ValueError(f"initial amplitudes have norm {total}, expected 1")
        for coords, c, _ in self.initial:
            if len(coords) != self.d or not 0 <= int(c) < 2 * self.d:
                raise ValueError(f"bad initial entry {coords}, coin {c}")

    def required_radius(self) -> tuple[int, ...]:
        return tuple(
            max(abs(int(coords[n])) for coords, _, _ in self.initial) + self.steps
            for n in range(self.d)
        )

    def window_radius(self) -> tuple[int, ...]:
        need = self.required_radius()
        if self.radius is None:
            return need
        radius = tuple(int(r) for r in self.radius)
        if len(radius) != self.d:
            raise ValueError(f"need {self.d} window radii, got {radius}")
        short = [n + 1 for n in range(self.d) if radius[n] < need[n]]
        if short:
            raise StepBudgetError(
                f"window radius {radius} cannot hold {self.steps} steps from the initial "
                f"state (needs {need}; short in dimension(s) {short})"
            )
        return radius

    def initial_state(self) -> WalkState:
        return WalkState.from_entries(self.d, self.window_radius(), self.initial)


def iter_evolve(config: WalkConfig) -> Iterator[WalkState]:
    """Yield the initial state and the state after each step."""
    state = config.initial_state()
    yield state
    for _ in range(config.steps):
        state = step(state, config.coin)
        yield state


def evolve(config: WalkConfig) -> WalkState:
    state = config.initial_state()
    for _ in range(config.steps):
        state = step(state, config.coin)
    return state


# --------------------------------------------------------------------------
# Measurement
# --------------------------------------------------------------------------


def site_probabilities(state: WalkState) -> np.ndarray:
    """Dense array of per-site probabilities over the window."""
    return np.sum(np.abs(state.amplitudes) ** 2, axis=-1)


def probability_distribution(state: WalkState) -> dict[tuple[int, ...], float]:
    """Map occupied lattice sites to their probability."""
    p = site_probabilities(state)
    offset = np.array(state.radius)
    return {tuple(int(v) for v in idx - offset): float(p[tuple(idx)]) for idx in np.argwhere(p > 0)}


def _marginal_array(state: WalkState, dim: int) -> np.ndarray:
    if not 1 <= dim <= state.d:
        raise ValueError(f"dimension {dim} outside 1..{state.d}")
    p = site_probabilities(state)
    others = tuple(n for n in range(state.d) if n != dim - 1)
    return p.sum(axis=others) if others else p


def marginal(state: WalkState, dim: int) -> dict[int, float]:
    """Distribution of coordinate ``dim`` (1-based), summed over everything else."""
    m = _marginal_array(state, dim)
    r = state.radius[dim - 1]
    return {x - r: float(v) for x, v in enumerate(m) if v > 0}


def spread(state: WalkState, dim: int) -> tuple[float, float]:
    m = _marginal_array(state, dim)
    r = state.radius[dim - 1]
    xs = np.arange(-r, r + 1)
    total = m.sum()
    mean = float(np.dot(xs, m) / total)
    var = float(np.dot((xs - mean) ** 2, m) / total)
    return mean, math.sqrt(max(var, 0.0))


def symmetric_hadamard_initial() -> list:
    """Origin with coin (h + i v)/sqrt(2); gives a symmetric Hadamard walk on a line."""
    return [((0,), 0, 1 / math.sqrt(2)), ((0,), 1, 1j / math.sqrt(2))]

