"""JSON and CSV document formats.

Floats are written with Python's shortest round-trip representation, so every
value reads back bit-for-bit.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .dof import DoFDescriptor
from .optics import (
    BeamSplitterArray,
    CoinSpec,
    GlobalPhase,
    OpticalCircuit,
    PolarizationUnitary,
    builtin_coin,
)
from .walk import WalkConfig, WalkState, site_probabilities

CIRCUIT_VERSION = 1
CONVENTION = "first-listed-acts-first"


class FormatError(ValueError):
    """A document does not match the expected schema."""


def dumps(doc) -> str:
    return json.dumps(doc, indent=1) + "\n"


def write_json(doc, path) -> None:
    Path(path).write_text(dumps(doc))


def read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


# -- matrices ---------------------------------------------------------------


def matrix_to_doc(m) -> dict:
    m = np.asarray(m, dtype=np.complex128)
    return {"dim": m.shape[0], "re": m.real.tolist(), "im": m.imag.tolist()}


def matrix_from_doc(doc) -> np.ndarray:
    try:
        n = int(doc["dim"])
        re = np.asarray(doc["re"], dtype=float)
        im = np.asarray(doc["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed matrix document: {exc}") from exc
    if n < 1 or re.shape != (n, n) or im.shape != (n, n):
        raise FormatError(f"matrix document declares dim {n} but has shapes {re.shape}, {im.shape}")
    m = re + 1j * im
    if not np.all(np.isfinite(m)):
        raise FormatError("matrix document has non-finite entries")
    return m


# -- circuits ---------------------------------------------------------------


def _element_to_doc(el) -> dict:
    if isinstance(el, PolarizationUnitary):
        wp = el.waveplates()
        return {
            "kind": "polarization_unitary",
            "beam": el.beam,
            "matrix": matrix_to_doc(el.matrix),
            "waveplates": {
                "qwp1": wp.qwp1_angle,
                "hwp": wp.hwp_angle,
                "qwp2": wp.qwp2_angle,
                "phase": wp.global_phase,
            },
        }
    if isinstance(el, BeamSplitterArray):
        return {
            "kind": "beam_splitter_array",
            "beams": [el.beam_a, el.beam_b],
            "theta1": el.theta1,
            "theta2": el.theta2,
            "theta3": el.theta3,
            "theta4": el.theta4,
        }
    return {"kind": "global_phase", "phi": el.phi}


def _element_from_doc(doc):
    kind = doc.get("kind")
    if kind == "polarization_unitary":
        return PolarizationUnitary(int(doc["beam"]), matrix_from_doc(doc["matrix"]))
    if kind == "beam_splitter_array":
        a, b = doc["beams"]
        return BeamSplitterArray(int(a), int(b), float(doc["theta1"]), float(doc["theta2"]))
    if kind == "global_phase":
        return GlobalPhase(float(doc["phi"]))
    raise FormatError(f"unknown element kind {kind!r}")


def circuit_to_doc(circuit: OpticalCircuit) -> dict:
    return {
        "version": CIRCUIT_VERSION,
        "d": circuit.d,
        "convention": CONVENTION,
        "elements": [_element_to_doc(el) for el in circuit.elements],
    }


def circuit_from_doc(doc) -> OpticalCircuit:
    if doc.get("convention") != CONVENTION:
        raise FormatError(f"unsupported element order convention {doc.get('convention')!r}")
    if doc.get("version") != CIRCUIT_VERSION:
        raise FormatError(f"unsupported circuit version {doc.get('version')!r}")
    try:
        elements = [_element_from_doc(e) for e in doc["elements"]]
        return OpticalCircuit(int(doc["d"]), tuple(elements))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed circuit document: {exc}") from exc


# -- walk states ------------------------------------------------------------


def state_to_doc(state: WalkState) -> dict:
    return {
        "d": state.d,
        "window": [list(w) for w in state.window],
        "entries": [
            [list(coords), c, amp.real, amp.imag] for coords, c, amp in state.nonzero()
        ],
    }


def state_from_doc(doc) -> WalkState:
    try:
        d = int(doc["d"])
        window = [(int(lo), int(hi)) for lo, hi in doc["window"]]
        if any(lo != -hi for lo, hi in window):
            raise FormatError(f"window must be symmetric, got {window}")
        entries = [(coords, int(c), complex(re, im)) for coords, c, re, im in doc["entries"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed state document: {exc}") from exc
    return WalkState.from_entries(d, [hi for _, hi in window], entries)


def distribution_csv(state: WalkState) -> str:
    """One row per occupied site: coordinates then probability."""
    p = site_probabilities(state)
    offset = np.array(state.radius)
    header = ",".join([f"x{n}" for n in range(1, state.d + 1)] + ["probability"])
    rows = [header]
    for idx in np.argwhere(p > 0):
        coords = [str(int(v)) for v in idx - offset]
        rows.append(",".join(coords + [repr(float(p[tuple(idx)]))]))
    return "\n".join(rows) + "\n"


# -- simulation configuration ----------------------------------------------


def coin_from_doc(doc, d: int, base_dir: Path | None = None) -> CoinSpec:
    if isinstance(doc, str):
        doc = {"builtin": doc}
    if "builtin" in doc:
        return builtin_coin(doc["builtin"], d)
    if "file" in doc:
        path = Path(doc["file"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return CoinSpec(d, matrix_from_doc(read_json(path)), doc.get("label", path.stem))
    if "matrix" in doc:
        return CoinSpec(d, matrix_from_doc(doc["matrix"]), doc.get("label", "custom"))
    raise FormatError(f"coin must name a builtin, a file, or an inline matrix: {doc!r}")


def _amplitude(v) -> complex:
    if isinstance(v, (list, tuple)):
        re, im = v
        return complex(float(re), float(im))
    return complex(v)


def config_from_doc(doc, base_dir: Path | None = None) -> tuple[WalkConfig, list[DoFDescriptor]]:
    """Parse ``{d, steps, coin, initial?, window?, dims?}``."""
    try:
        d = int(doc["d"])
        steps = int(doc["steps"])
        coin = coin_from_doc(doc.get("coin", "grover"), d, base_dir)
        initial = [
            (tuple(int(x) for x in e["coords"]), int(e.get("coin", 0)), _amplitude(e.get("amplitude", 1.0)))
            for e in doc.get("initial", [])
        ]
        window = doc.get("window", "auto")
        if window == "auto":
            radius = None
        elif isinstance(window, int):
            radius = (window,) * d
        else:
            radius = tuple(int(r) for r in window)
        dims = [DoFDescriptor.from_dict(x) for x in doc.get("dims", [])]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"bad simulation config: {exc}") from exc
    if dims and len(dims) != d:
        raise FormatError(f"config has {len(dims)} dims entries for d={d}")
    try:
        config = WalkConfig(d, steps, coin, initial, radius)
    except ValueError as exc:
        raise FormatError(f"bad simulation config: {exc}") from exc
    return config, dims
