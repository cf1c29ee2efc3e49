"""Kernel backend selection.

The distance-sum and LCS inner loops exist twice: as a compiled Cython
extension and as pure NumPy/Python code. The compiled module is preferred
when importable; set ``SCISUMM_BACKEND=python`` (or ``=compiled``) to force a
choice at import time.
"""

from __future__ import annotations

import os

from . import pykernels

try:
    from . import _kernels  # type: ignore[attr-defined]
except ImportError:
    _kernels = None


def available_backends() -> dict:
    """Importable kernel implementations, keyed by backend name."""
    backends = {"python": pykernels}
    if _kernels is not None:
        backends["compiled"] = _kernels
    return backends


_forced = os.environ.get("SCISUMM_BACKEND", "").strip().lower()
if _forced and _forced not in ("compiled", "python"):
    raise ImportError(
        f"unknown SCISUMM_BACKEND value {_forced!r}; use 'compiled' or 'python'"
    )
if _forced == "compiled" and _kernels is None:
    raise ImportError("SCISUMM_BACKEND=compiled but the extension is not built")

active = pykernels if (_forced == "python" or _kernels is None) else _kernels

BACKEND = "python" if active is pykernels else "compiled"


def rwmd_directional_sums(dist, a_ids, a_counts, a_offsets, b_ids, b_offsets):
    return active.rwmd_directional_sums(
        dist, a_ids, a_counts, a_offsets, b_ids, b_offsets
    )


def lcs_length(a_ids, b_ids):
    return active.lcs_length(a_ids, b_ids)
