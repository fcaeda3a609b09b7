"""Dense complex linear algebra for coin synthesis.

Jones-matrix conventions
------------------------
All wave-plate formulas below derive from two constants:

* a retarder of retardance ``delta`` with its fast axis horizontal is
  ``diag(exp(+i delta/2), exp(-i delta/2))`` for the quarter-wave plate, and the
  half-wave plate is fixed to ``diag(1, -1)`` (sigma_z), i.e. the symmetric
  phase split multiplied by ``-i``;
* a plate whose fast axis sits at angle ``theta`` from horizontal is
  ``R(-theta) @ J @ R(theta)`` with ``R(theta) = [[cos, sin], [-sin, cos]]``.

With these, ``hwp(0) == sigma_z`` and ``hwp(pi/8) == H`` exactly, and
``qwp(x) @ qwp(x) == 1j * hwp(x)``.

Coin basis ordering is ``2*(n-1) + p`` for beam ``n`` (1-based) and
polarization ``p`` (h=0, v=1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-10

# retardance in radians
QUARTER_WAVE = math.pi / 2

# singular values below this are treated as exactly zero when completing bases
_ZERO_SV = 1e-14
# cosines closer than this are treated as a degenerate pair
_DEGENERATE = 1e-12


class NotUnitaryError(ValueError):
    """Raised when an operation requires a unitary matrix and did not get one."""


class DecompositionError(ArithmeticError):
    """Raised when a factorization cannot reproduce its input."""


def as_matrix(m, *, square: bool = True) -> np.ndarray:
    """Validate and convert to a complex128 array."""
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] < 1:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``max|M^H M - I| < tol``."""
    m = as_matrix(m)
    err = np.abs(m.conj().T @ m - np.eye(m.shape[0])).max()
    return bool(err < tol)


def require_unitary(m, tol: float = DEFAULT_TOL, what: str = "matrix") -> np.ndarray:
    m = as_matrix(m)
    if not is_unitary(m, tol):
        err = np.abs(m.conj().T @ m - np.eye(m.shape[0])).max()
        raise NotUnitaryError(f"{what} is not unitary (max|M^H M - I| = {err:.3e}, tol {tol:g})")
    return m


def _rot(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]], dtype=np.complex128)


def _plate(jones: np.ndarray, angle: float) -> np.ndarray:
    return _rot(-angle) @ jones @ _rot(angle)


def hwp(angle: float) -> np.ndarray:
    """Half-wave plate with its fast axis at ``angle`` from horizontal."""
    c, s = math.cos(2 * angle), math.sin(2 * angle)
    return np.array([[c, s], [s, -c]], dtype=np.complex128)


def qwp(angle: float) -> np.ndarray:
    """Quarter-wave plate with its fast axis at ``angle`` from horizontal."""
    half = QUARTER_WAVE / 2
    j = np.diag([np.exp(1j * half), np.exp(-1j * half)])
    return _plate(j, angle)


def bs(theta: float) -> np.ndarray:
    """Beam splitter with transmittivity cos^2(theta)."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


SIGMA_Z = np.diag([1.0, -1.0]).astype(np.complex128)
HADAMARD = hwp(math.pi / 8)


def embed_u4(theta1: float, theta2: float, total_dim: int = 4) -> np.ndarray:
    """Two-beam polarization-sensitive mixer on beams 1 and 2, identity elsewhere.

    ``cos(theta1)`` couples h1 with h2 and ``cos(theta2)`` couples v1 with v2.
    """
    if total_dim < 4 or total_dim % 2:
        raise ValueError(f"total_dim must be even and >= 4, got {total_dim}")
    m = np.eye(total_dim, dtype=np.complex128)
    for pol, th in ((0, theta1), (1, theta2)):
        c, s = math.cos(th), math.sin(th)
        a, b = pol, 2 + pol
        m[a, a] = c
        m[a, b] = -s
        m[b, a] = s
        m[b, b] = c
    return m


def gadget_u4(theta1: float, theta2: float) -> np.ndarray:
    """Build the 4x4 mixer from two beam splitters and two sigma_z plates on beam 2."""
    theta3 = (theta1 + theta2) / 2
    theta4 = (theta1 - theta2) / 2
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    eye2 = np.eye(2)
    return np.kron(bs(theta3), eye2) @ flip @ np.kron(bs(theta4), eye2) @ flip


# --------------------------------------------------------------------------
# SU(2) synthesis with QWP-HWP-QWP
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class WavePlateAngles:
    """QWP(alpha) then HWP(beta) then QWP(gamma), times ``exp(i*global_phase)``.

    ``qwp1_angle`` is the plate the light meets first.
    """

    qwp1_angle: float
    hwp_angle: float
    qwp2_angle: float
    global_phase: float

    def matrix(self) -> np.ndarray:
        return (
            np.exp(1j * self.global_phase)
            * qwp(self.qwp2_angle)
            @ hwp(self.hwp_angle)
            @ qwp(self.qwp1_angle)
        )


def su2_synthesize(u, tol: float = DEFAULT_TOL) -> WavePlateAngles:
    """Find wave-plate angles reproducing an arbitrary 2x2 unitary.

    Uses the identity ``Q(g) H'(b) Q(a) = -exp(-i g Y) exp(i z X) exp(i a Y)``
    with ``z = g + a - 2b``, where ``Q`` and ``H' = 1j*hwp`` are the SU(2)
    plate matrices and X, Y are Pauli matrices. A YXY Euler split of the
    target then gives the angles in closed form.
    """
    u = require_unitary(u, tol, "target polarization transform")
    if u.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got {u.shape}")
    phi0 = np.angle(np.linalg.det(u)) / 2
    w = -u * np.exp(-1j * phi0)  # SU(2), to be split as exp(i a Y) exp(i b X) exp(i c Y)
    # w = w0 + i (wx X + wy Y + wz Z)
    w0 = (w[0, 0] + w[1, 1]) / 2
    wx = (w[0, 1] + w[1, 0]) / 2j
    wy = (w[0, 1] - w[1, 0]) / 2
    wz = (w[0, 0] - w[1, 1]) / 2j
    # w0 + i wy = cos b e^{i(a+c)},  wx + i wz = sin b e^{i(a-c)}
    p = w0.real + 1j * wy.real
    q = wx.real + 1j * wz.real
    b = math.atan2(abs(q), abs(p))
    a_plus_c = float(np.angle(p)) if abs(p) > _ZERO_SV else 0.0
    a_minus_c = float(np.angle(q)) if abs(q) > _ZERO_SV else 0.0
    a = (a_plus_c + a_minus_c) / 2
    c = (a_plus_c - a_minus_c) / 2
    gamma, zeta, alpha = -a, b, c
    beta = (gamma + alpha - zeta) / 2
    # plates = -1j * Q H' Q = -1j * u * exp(-1j*phi0)
    return WavePlateAngles(
        qwp1_angle=alpha,
        hwp_angle=beta,
        qwp2_angle=gamma,
        global_phase=float(phi0 + math.pi / 2),
    )


# --------------------------------------------------------------------------
# Cosine-sine decomposition, 2 | (2d-2) split
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CSFactors:
    """``U = diag(L1^H, L2^H) @ embed_u4(theta1, theta2) @ diag(R1, R2)``."""

    left_top: np.ndarray
    left_bottom: np.ndarray
    right_top: np.ndarray
    right_bottom: np.ndarray
    theta1: float
    theta2: float

    @property
    def dim(self) -> int:
        return 2 + self.left_bottom.shape[0]

    @property
    def middle(self) -> np.ndarray:
        return embed_u4(self.theta1, self.theta2, self.dim)

    def reconstruct(self) -> np.ndarray:
        left = _block_diag(self.left_top.conj().T, self.left_bottom.conj().T)
        right = _block_diag(self.right_top, self.right_bottom)
        return left @ self.middle @ right


def _block_diag(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n, m = a.shape[0], b.shape[0]
    out = np.zeros((n + m, n + m), dtype=np.complex128)
    out[:n, :n] = a
    out[n:, n:] = b
    return out


def _fix_phase(v: np.ndarray) -> complex:
    """Phase factor making the first significant entry of ``v`` real positive."""
    k = int(np.argmax(np.abs(v) > 1e-8 * np.abs(v).max()))
    return np.conj(v[k]) / abs(v[k])


def _complete_columns(cols: list[np.ndarray], n: int) -> np.ndarray:
    """Orthonormalize ``cols`` in order and extend with standard basis vectors."""
    basis: list[np.ndarray] = []
    candidates = list(cols) + [np.eye(n, dtype=np.complex128)[:, k] for k in range(n)]
    for v in candidates:
        w = v.astype(np.complex128, copy=True)
        for _ in range(2):  # re-orthogonalize once for stability
            for b in basis:
                w -= b * np.vdot(b, w)
        norm = np.linalg.norm(w)
        if norm > 1e-6:
            basis.append(w / norm)
        if len(basis) == n:
            break
    return np.column_stack(basis)


def cs_decompose(u, tol: float = DEFAULT_TOL) -> CSFactors:
    """Split beam 1 from beams 2..d with one cosine-sine step.

    Angles are ordered ``theta1 >= theta2``, both in ``[0, pi/2]``.
    """
    u = require_unitary(u, tol, "coin")
    n = u.shape[0]
    if n % 2 or n < 4:
        raise ValueError(f"dimension must be even and >= 4, got {n}")
    m = n - 2
    u11, u12 = u[:2, :2], u[:2, 2:]
    u21 = u[2:, :2]

    a, cos, bh = np.linalg.svd(u11)
    # ascending cosines -> theta1 >= theta2
    order = np.argsort(cos, kind="stable")
    a, cos, bh = a[:, order], cos[order], bh[order, :]
    cos = np.clip(cos, 0.0, 1.0)

    if abs(cos[0] - cos[1]) < _DEGENERATE and cos[0] > _ZERO_SV:
        # any right basis works: take R1 = I (upper-triangular, nonnegative diagonal)
        wa, _, wbh = np.linalg.svd(u11)
        a = wa @ wbh
        bh = np.eye(2, dtype=np.complex128)
        c = float(np.mean(cos))
        cos = np.array([c, c])
    else:
        for j in range(2):
            ph = _fix_phase(bh[j])
            bh[j] *= ph
            a[:, j] *= np.conj(ph)
            if cos[j] <= _ZERO_SV:
                # a_j is free when the cosine vanishes
                a[:, j] *= _fix_phase(a[:, j])

    b = bh.conj().T
    x = u21 @ b  # columns orthogonal, norms are the sines
    sin = np.linalg.norm(x, axis=0)
    thetas = np.arctan2(sin, cos)

    by_sin = sorted(range(2), key=lambda j: -sin[j])
    cols = [x[:, j] / sin[j] for j in by_sin if sin[j] > _ZERO_SV]
    # keep column j at position j: build from the trusted directions first
    l2h = _complete_columns(cols, m)
    l2h = _reorder_columns(l2h, [j for j in by_sin if sin[j] > _ZERO_SV], m)

    left_top = a.conj().T
    left_bottom = l2h.conj().T
    # R2 from the exact middle factor: V = diag(A^H, L2) U = middle @ diag(B^H, R2)
    middle = embed_u4(thetas[0], thetas[1], n)
    v_right = np.vstack([a.conj().T @ u12, left_bottom @ u[2:, 2:]])
    right_bottom = middle[:, 2:].conj().T @ v_right

    factors = CSFactors(
        left_top=left_top,
        left_bottom=left_bottom,
        right_top=bh,
        right_bottom=right_bottom,
        theta1=float(thetas[0]),
        theta2=float(thetas[1]),
    )
    err = np.abs(factors.reconstruct() - u).max()
    if err > max(tol, 1e-9):
        raise DecompositionError(
            f"cosine-sine reconstruction error {err:.3e} exceeds tolerance; "
            f"cosines={cos.tolist()}, sines={sin.tolist()}"
        )
    return factors


def _reorder_columns(q: np.ndarray, placed: list[int], m: int) -> np.ndarray:
    """Move the first ``len(placed)`` columns of ``q`` to the indices in ``placed``."""
    out = np.empty_like(q)
    rest = [k for k in range(m) if k not in placed]
    for src, dst in enumerate(placed):
        out[:, dst] = q[:, src]
    for src, dst in enumerate(rest, start=len(placed)):
        out[:, dst] = q[:, src]
    return out


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR factorization of a complex Gaussian matrix.

    Columns are rephased so that R has a positive real diagonal; without
    that step the distribution is not Haar.
    """
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))
