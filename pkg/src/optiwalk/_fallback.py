"""Pure numpy implementation of the fused walk step."""
from __future__ import annotations

import numpy as np


def coin_shift(psi: np.ndarray, coin: np.ndarray, shape, out: np.ndarray) -> int:
    """Same contract as the compiled ``coin_shift``."""
    shape = tuple(int(s) for s in shape)
    d = len(shape)
    tossed = (psi @ coin.T).reshape(shape + (2 * d,))
    dest = out.reshape(shape + (2 * d,))
    for c in range(2 * d):
        axis, pol = divmod(c, 2)
        src = np.moveaxis(tossed[..., c], axis, 0)
        dst = np.moveaxis(dest[..., c], axis, 0)
        if pol == 0:
            if np.any(src[-1]):
                return 1
            dst[1:] = src[:-1]
        else:
            if np.any(src[0]):
                return 1
            dst[:-1] = src[1:]
    return 0
