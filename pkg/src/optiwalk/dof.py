"""Physical carriers for lattice dimensions and feasibility diagnostics."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum


class DoFKind(str, Enum):
    OAM = "OAM"
    TIME_BIN = "TimeBin"
    POSITION = "Position"
    FREQUENCY = "Frequency"


@dataclass(frozen=True)
class DoFDescriptor:
    """What one lattice dimension is physically.

    Parameters by kind: TimeBin ``t0``, ``delta_t``, ``tau`` (seconds);
    OAM ``l0``; Position and Frequency ``origin``.
    """

    kind: DoFKind
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "kind", DoFKind(self.kind))
        p = dict(self.parameters)
        if self.kind is DoFKind.TIME_BIN:
            p.setdefault("t0", 0.0)
            for key in ("delta_t", "tau"):
                if key not in p:
                    raise ValueError(f"TimeBin descriptor needs {key!r}")
                if not p[key] > 0:
                    raise ValueError(f"TimeBin {key} must be positive, got {p[key]}")
        elif self.kind is DoFKind.OAM:
            p.setdefault("l0", 0)
        else:
            p.setdefault("origin", 0)
        object.__setattr__(self, "parameters", p)

    @classmethod
    def time_bin(cls, delta_t: float, tau: float, t0: float = 0.0) -> "DoFDescriptor":
        return cls(DoFKind.TIME_BIN, {"t0": t0, "delta_t": delta_t, "tau": tau})

    @classmethod
    def oam(cls, l0: int = 0) -> "DoFDescriptor":
        return cls(DoFKind.OAM, {"l0": l0})

    @classmethod
    def position(cls, origin: int = 0) -> "DoFDescriptor":
        return cls(DoFKind.POSITION, {"origin": origin})

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "parameters": dict(self.parameters)}

    @classmethod
    def from_dict(cls, data: dict) -> "DoFDescriptor":
        return cls(data["kind"], data.get("parameters", {}))


def _require_time_bin(desc: DoFDescriptor) -> dict:
    if desc.kind is not DoFKind.TIME_BIN:
        raise ValueError(f"expected a TimeBin descriptor, got {desc.kind.value}")
    return desc.parameters


def bin_center(desc: DoFDescriptor, x: int) -> float:
    p = _require_time_bin(desc)
    return p["t0"] + x * p["delta_t"]


def time_bin_overlap(desc: DoFDescriptor, x1: int, x2: int) -> float:
    """Overlap of unit-norm Gaussian pulses centred on bins ``x1`` and ``x2``."""
    p = _require_time_bin(desc)
    sep = bin_center(desc, x1) - bin_center(desc, x2)
    return math.exp(-sep**2 / (4 * p["tau"] ** 2))


@dataclass(frozen=True)
class OverlapEntry:
    dim: int
    worst_overlap: float
    passed: bool


@dataclass(frozen=True)
class OrthogonalityReport:
    entries: tuple[OverlapEntry, ...]
    threshold: float

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)


def orthogonality_report(descriptors, window, threshold: float = 1e-3) -> OrthogonalityReport:
    """Worst nearest-neighbour pulse overlap for each time-bin dimension.

    ``window`` gives the per-dimension radius (or ``(lo, hi)`` bounds). OAM and
    position modes are exactly orthogonal and are not listed.
    """
    entries = []
    for n, (desc, w) in enumerate(zip(descriptors, window), start=1):
        if desc.kind is not DoFKind.TIME_BIN:
            continue
        lo, hi = (-w, w) if isinstance(w, int) else w
        # uniform spacing: every adjacent pair has the same overlap
        worst = time_bin_overlap(desc, lo, lo + 1) if hi > lo else 0.0
        entries.append(OverlapEntry(n, worst, worst < threshold))
    return OrthogonalityReport(tuple(entries), threshold)


@dataclass(frozen=True)
class FeasibilityLimits:
    max_oam_states: int = 100
    max_time_steps: int = 50
    max_position_steps: int = 10


@dataclass(frozen=True)
class FeasibilityWarning:
    dim: int
    kind: DoFKind
    required: int
    limit: int

    @property
    def message(self) -> str:
        unit = "OAM states" if self.kind is DoFKind.OAM else "steps"
        return (
            f"dimension {self.dim} ({self.kind.value}) needs {self.required} {unit}, "
            f"beyond the demonstrated {self.limit}"
        )

    def __str__(self) -> str:
        return self.message


def feasibility_check(config, descriptors, limits: FeasibilityLimits | None = None) -> list[FeasibilityWarning]:
    """Advisory warnings for dimensions beyond demonstrated experimental reach.

    An OAM dimension needs ``2*(|x0| + steps) + 1`` distinguishable modes; time
    bins and positions are compared by step count. Frequency has no limit.
    """
    limits = limits or FeasibilityLimits()
    descriptors = list(descriptors)
    if len(descriptors) != config.d:
        raise ValueError(f"{len(descriptors)} descriptors for a walk with d={config.d}")
    warnings = []
    radius = config.required_radius()
    for n, desc in enumerate(descriptors, start=1):
        if desc.kind is DoFKind.OAM:
            required, limit = 2 * radius[n - 1] + 1, limits.max_oam_states
        elif desc.kind is DoFKind.TIME_BIN:
            required, limit = config.steps, limits.max_time_steps
        elif desc.kind is DoFKind.POSITION:
            required, limit = config.steps, limits.max_position_steps
        else:
            continue
        if required > limit:
            warnings.append(FeasibilityWarning(n, desc.kind, required, limit))
    return warnings
