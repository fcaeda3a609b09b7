"""Bipartite entanglement between walker coordinates and the coin.

The measures here (Schmidt rank and von Neumann entropy in bits) are this
package's choice for quantifying non-separability of the walker's degrees of
freedom. For classical light they describe mode non-separability only and say
nothing about nonlocality.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .walk import WalkState

DENSITY_TOL = 1e-10
RANK_TOL = 1e-10

COIN = "coin"


@dataclass(frozen=True)
class Partition:
    """Selected subsystems: ``"coin"`` and/or 1-based lattice dimensions."""

    selector: frozenset

    def __init__(self, selector):
        if isinstance(selector, (str, int)):
            selector = [selector]
        object.__setattr__(self, "selector", frozenset(selector))
        if not self.selector:
            raise ValueError("partition selector is empty")
        for s in self.selector:
            if s != COIN and not (isinstance(s, int) and s >= 1):
                raise ValueError(f"bad subsystem {s!r}; use 'coin' or a dimension index >= 1")

    @classmethod
    def parse(cls, label: str) -> "Partition":
        """Parse labels such as ``coin``, ``x2`` or ``coin+x1``."""
        parts = []
        for tok in label.replace(",", "+").split("+"):
            tok = tok.strip().lower()
            if tok == COIN:
                parts.append(COIN)
            elif tok.startswith("x") and tok[1:].isdigit():
                parts.append(int(tok[1:]))
            elif tok.isdigit():
                parts.append(int(tok))
            else:
                raise ValueError(f"unknown partition label {tok!r} in {label!r}")
        return cls(parts)

    @property
    def label(self) -> str:
        dims = sorted(s for s in self.selector if s != COIN)
        names = [f"x{n}" for n in dims] + ([COIN] if COIN in self.selector else [])
        return "+".join(names)

    def axes(self, d: int) -> tuple[list[int], list[int]]:
        """Selected and complementary tensor axes for a state of dimension ``d``."""
        for s in self.selector:
            if s != COIN and s > d:
                raise ValueError(f"partition refers to dimension {s}, state has d={d}")
        sel = sorted(s - 1 for s in self.selector if s != COIN)
        if COIN in self.selector:
            sel.append(d)
        rest = [a for a in range(d + 1) if a not in sel]
        if not rest:
            raise ValueError(f"partition {self.label!r} selects every subsystem")
        return sel, rest


def _bipartite(state: WalkState, part: Partition) -> np.ndarray:
    sel, rest = part.axes(state.d)
    psi = np.transpose(state.amplitudes, sel + rest)
    n_sel = math.prod(state.amplitudes.shape[a] for a in sel)
    return psi.reshape(n_sel, -1)


def reduced_density(state: WalkState, part: Partition) -> np.ndarray:
    """Reduced density matrix of the selected subsystems."""
    m = _bipartite(state, part)
    rho = m @ m.conj().T
    check_density(rho)
    return rho


def check_density(rho: np.ndarray, tol: float = DENSITY_TOL) -> None:
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got {rho.shape}")
    herm = np.abs(rho - rho.conj().T).max()
    if herm >= tol:
        raise ValueError(f"density matrix not Hermitian (deviation {herm:.3e})")
    tr = np.trace(rho).real
    if abs(tr - 1) >= tol:
        raise ValueError(f"density matrix trace is {tr}, expected 1")
    low = np.linalg.eigvalsh(rho).min()
    if low < -tol:
        raise ValueError(f"density matrix has negative eigenvalue {low:.3e}")


def _entropy_bits(weights: np.ndarray) -> float:
    w = np.clip(weights, 0.0, None)
    w = w[w > 0]
    return float(max(0.0, -np.sum(w * np.log2(w))))


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Entropy in bits, with eigenvalues slightly below zero clamped to zero."""
    check_density(rho)
    return _entropy_bits(np.linalg.eigvalsh(rho))


def schmidt_coefficients(state: WalkState, part: Partition) -> np.ndarray:
    return np.linalg.svd(_bipartite(state, part), compute_uv=False)


def schmidt_rank(state: WalkState, part: Partition, tol: float = RANK_TOL) -> int:
    return int(np.sum(schmidt_coefficients(state, part) > tol))


def is_product(state: WalkState, part: Partition, tol: float = RANK_TOL) -> bool:
    return schmidt_rank(state, part, tol) == 1


def entanglement_entropy(state: WalkState, part: Partition) -> float:
    """Entropy of either side of a pure bipartition, from the Schmidt spectrum."""
    s = schmidt_coefficients(state, part)
    return _entropy_bits(s**2 / np.sum(s**2))


@dataclass(frozen=True)
class ProfileRow:
    partition: str
    schmidt_rank: int
    entropy_bits: float


@dataclass(frozen=True)
class Profile:
    rows: tuple[ProfileRow, ...]

    @property
    def multidegree_entangled(self) -> bool:
        return sum(r.schmidt_rank > 1 for r in self.rows) >= 2

    def to_csv(self) -> str:
        lines = ["partition,schmidt_rank,entropy_bits"]
        lines += [f"{r.partition}|rest,{r.schmidt_rank},{r.entropy_bits!r}" for r in self.rows]
        lines.append(f"# multidegree_entangled={'true' if self.multidegree_entangled else 'false'}")
        return "\n".join(lines) + "\n"


def multidegree_profile(state: WalkState, tol: float = RANK_TOL, partitions=None) -> Profile:
    """Schmidt rank and entropy for coin-vs-rest and each dimension-vs-rest."""
    if partitions is None:
        partitions = [Partition(COIN)] + [Partition(n) for n in range(1, state.d + 1)]
    rows = []
    for part in partitions:
        s = schmidt_coefficients(state, part)
        rows.append(
            ProfileRow(part.label, int(np.sum(s > tol)), _entropy_bits(s**2 / np.sum(s**2)))
        )
    return Profile(tuple(rows))
