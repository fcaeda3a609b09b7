"""Select the compiled step kernel when available.

Set ``OPTIWALK_PURE_PYTHON=1`` to force the numpy fallback.
"""
from __future__ import annotations

import os

from . import _fallback

python_coin_shift = _fallback.coin_shift
compiled_coin_shift = None

if os.environ.get("OPTIWALK_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._ext.stepkernel import coin_shift as compiled_coin_shift
    except ImportError:  # extension not built
        compiled_coin_shift = None

coin_shift = compiled_coin_shift or python_coin_shift
BACKEND = "cython" if compiled_coin_shift is not None else "python"
