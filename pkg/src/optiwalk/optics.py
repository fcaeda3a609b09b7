"""Lowering of 2d-dimensional coins to beam-splitter arrays and polarization optics.

A compiled circuit is an ordered element list; the first element acts first on
the light, so the circuit matrix is ``E_k @ ... @ E_2 @ E_1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .unitary_core import (
    DEFAULT_TOL,
    HADAMARD,
    DecompositionError,
    WavePlateAngles,
    cs_decompose,
    require_unitary,
    su2_synthesize,
)

COIN_NAMES = ("grover", "hadamard-product", "dft")


@dataclass(frozen=True)
class CoinSpec:
    d: int
    matrix: np.ndarray
    label: str = "custom"

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"d must be positive, got {self.d}")
        m = require_unitary(self.matrix, DEFAULT_TOL, f"coin {self.label!r}")
        if m.shape != (2 * self.d, 2 * self.d):
            raise ValueError(f"coin for d={self.d} must be {2 * self.d}x{2 * self.d}, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, matrix, label: str = "custom") -> "CoinSpec":
        m = np.asarray(matrix)
        if m.ndim != 2 or m.shape[0] % 2:
            raise ValueError(f"coin matrix must be square with even dimension, got {m.shape}")
        return cls(m.shape[0] // 2, m, label)


def builtin_coin(name: str, d: int) -> CoinSpec:
    """Return one of the named coins on ``2d`` dimensions."""
    n = 2 * d
    if name == "grover":
        m = np.full((n, n), 1.0 / d, dtype=np.complex128) - np.eye(n)
    elif name == "hadamard-product":
        m = np.kron(np.eye(d), HADAMARD)
    elif name == "dft":
        k = np.arange(n)
        m = np.exp(2j * np.pi * np.outer(k, k) / n) / math.sqrt(n)
    else:
        raise ValueError(f"unknown coin {name!r}; expected one of {', '.join(COIN_NAMES)}")
    return CoinSpec(d, m, name)


# --------------------------------------------------------------------------
# Elements
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PolarizationUnitary:
    beam: int
    matrix: np.ndarray

    def waveplates(self) -> WavePlateAngles:
        return su2_synthesize(self.matrix)

    def beams(self) -> tuple[int, ...]:
        return (self.beam,)


@dataclass(frozen=True)
class BeamSplitterArray:
    beam_a: int
    beam_b: int
    theta1: float
    theta2: float

    @property
    def theta3(self) -> float:
        """First physical beam-splitter angle."""
        return (self.theta1 + self.theta2) / 2

    @property
    def theta4(self) -> float:
        return (self.theta1 - self.theta2) / 2

    def beams(self) -> tuple[int, ...]:
        return (self.beam_a, self.beam_b)


@dataclass(frozen=True)
class GlobalPhase:
    phi: float

    def beams(self) -> tuple[int, ...]:
        return ()


OpticalElement = Union[PolarizationUnitary, BeamSplitterArray, GlobalPhase]


@dataclass(frozen=True)
class Census:
    beam_splitter_arrays: int
    polarization_unitaries: int
    global_phases: int

    def __str__(self) -> str:
        return (
            f"{self.beam_splitter_arrays} beam-splitter array{'s' * (self.beam_splitter_arrays != 1)}, "
            f"{self.polarization_unitaries} polarization unitar{'ies' if self.polarization_unitaries != 1 else 'y'}, "
            f"{self.global_phases} global phase{'s' * (self.global_phases != 1)}"
        )


@dataclass(frozen=True)
class OpticalCircuit:
    d: int
    elements: tuple[OpticalElement, ...] = ()

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"d must be positive, got {self.d}")
        object.__setattr__(self, "elements", tuple(self.elements))
        for el in self.elements:
            _check_element(el, self.d)

    def matrix(self) -> np.ndarray:
        return circuit_to_matrix(self)

    def census(self) -> Census:
        return element_census(self)


def _check_element(el: OpticalElement, d: int) -> None:
    for b in el.beams():
        if not 1 <= b <= d:
            raise ValueError(f"beam index {b} outside 1..{d} in {el!r}")
    if isinstance(el, BeamSplitterArray) and el.beam_a == el.beam_b:
        raise ValueError(f"beam-splitter array needs two distinct beams, got {el.beam_a} twice")
    if isinstance(el, PolarizationUnitary):
        m = require_unitary(el.matrix, DEFAULT_TOL, f"polarization transform on beam {el.beam}")
        if m.shape != (2, 2):
            raise ValueError(f"polarization transform must be 2x2, got {m.shape}")
    elif not isinstance(el, (BeamSplitterArray, GlobalPhase)):
        raise TypeError(f"not an optical element: {el!r}")


def _apply(el: OpticalElement, m: np.ndarray) -> None:
    """Left-multiply ``m`` in place by the embedded element matrix."""
    if isinstance(el, PolarizationUnitary):
        i = 2 * (el.beam - 1)
        m[i:i + 2] = el.matrix @ m[i:i + 2]
    elif isinstance(el, BeamSplitterArray):
        a, b = 2 * (el.beam_a - 1), 2 * (el.beam_b - 1)
        for pol, th in ((0, el.theta1), (1, el.theta2)):
            c, s = math.cos(th), math.sin(th)
            ra, rb = m[a + pol].copy(), m[b + pol].copy()
            m[a + pol] = c * ra - s * rb
            m[b + pol] = s * ra + c * rb
    else:
        m *= np.exp(1j * el.phi)


def circuit_to_matrix(circuit: OpticalCircuit) -> np.ndarray:
    m = np.eye(2 * circuit.d, dtype=np.complex128)
    for el in circuit.elements:
        _apply(el, m)
    return m


def element_census(circuit: OpticalCircuit) -> Census:
    kinds = [type(el) for el in circuit.elements]
    return Census(
        beam_splitter_arrays=kinds.count(BeamSplitterArray),
        polarization_unitaries=kinds.count(PolarizationUnitary),
        global_phases=kinds.count(GlobalPhase),
    )


# --------------------------------------------------------------------------
# Compilation
# --------------------------------------------------------------------------


def _shift_beams(el: OpticalElement, offset: int) -> OpticalElement:
    if isinstance(el, PolarizationUnitary):
        return PolarizationUnitary(el.beam + offset, el.matrix)
    if isinstance(el, BeamSplitterArray):
        return BeamSplitterArray(el.beam_a + offset, el.beam_b + offset, el.theta1, el.theta2)
    return el


def _lower(u: np.ndarray, d: int, tol: float) -> list[OpticalElement]:
    if d == 1:
        return [PolarizationUnitary(1, u)]
    f = cs_decompose(u, tol)
    right = _lower(f.right_bottom, d - 1, tol)
    left = _lower(f.left_bottom.conj().T, d - 1, tol)
    return (
        [PolarizationUnitary(1, f.right_top)]
        + [_shift_beams(el, 1) for el in right]
        + [BeamSplitterArray(1, 2, f.theta1, f.theta2)]
        + [_shift_beams(el, 1) for el in left]
        + [PolarizationUnitary(1, f.left_top.conj().T)]
    )


def compile_coin(coin, tol: float = DEFAULT_TOL, merge: bool = True) -> OpticalCircuit:
    """Lower a coin to an optical circuit by recursive cosine-sine steps.

    The outer step always separates beam 1 from beams 2..d; each sub-problem
    is compiled on a fresh beam range and shifted back. The coin's overall
    phase ``angle(det U) / 2d`` is factored out first and emitted as a single
    trailing ``GlobalPhase``, so for d=1 the leaf is in SU(2).
    """
    if not isinstance(coin, CoinSpec):
        coin = CoinSpec.from_matrix(coin)
    u = require_unitary(coin.matrix, tol, f"coin {coin.label!r}")
    phase = float(np.angle(np.linalg.det(u))) / (2 * coin.d)
    elements = _lower(u * np.exp(-1j * phase), coin.d, tol)
    circuit = OpticalCircuit(coin.d, tuple(elements) + (GlobalPhase(phase),))
    if merge:
        circuit = merge_pass(circuit)
    err = np.abs(circuit_to_matrix(circuit) - u).max()
    if err > max(tol, 1e-8):
        raise DecompositionError(f"compiled circuit deviates from coin by {err:.3e}")
    return circuit


def merge_pass(circuit: OpticalCircuit) -> OpticalCircuit:
    """Fuse consecutive polarization transforms on the same beam.

    A leaf stays open for fusion until a beam-splitter array touches its beam.
    Global phases commute with everything and are summed into one trailing
    element.
    """
    out: list[OpticalElement | None] = []
    open_leaf: dict[int, int] = {}
    phase = 0.0
    n_phases = 0
    for el in circuit.elements:
        if isinstance(el, GlobalPhase):
            phase += el.phi
            n_phases += 1
        elif isinstance(el, PolarizationUnitary):
            k = open_leaf.get(el.beam)
            if k is None:
                open_leaf[el.beam] = len(out)
                out.append(el)
            else:
                prev = out[k]
                out[k] = PolarizationUnitary(el.beam, el.matrix @ prev.matrix)
        else:
            for b in el.beams():
                open_leaf.pop(b, None)
            out.append(el)
    if n_phases:
        out.append(GlobalPhase(math.remainder(phase, 2 * math.pi) if n_phases > 1 else phase))
    return OpticalCircuit(circuit.d, tuple(out))
