"""Kernel backend selection.

The compiled extension is used when it imports; setting ``BTDSLAB_PURE=1``
forces the pure-Python fallback.
"""

from __future__ import annotations

import os

from btdslab import _kernels_py

if os.environ.get("BTDSLAB_PURE", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from btdslab import _kernels_c as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND

closure = _impl.closure
is_open = _impl.is_open
enumerate_opens = _impl.enumerate_opens
image = _impl.image
preimage = _impl.preimage
continuity_witness = _impl.continuity_witness
monotone_ok = _impl.monotone_ok
irredundant_covers = _impl.irredundant_covers
oracle_search = _impl.oracle_search


def available_backends() -> dict[str, object]:
    out: dict[str, object] = {"python": _kernels_py}
    try:
        from btdslab import _kernels_c

        out["cython"] = _kernels_c
    except ImportError:
        pass
    return out
