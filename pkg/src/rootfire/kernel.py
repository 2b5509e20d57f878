"""Kernel selection: compiled extension when present, pure Python otherwise.

Set ``ROOTFIRE_PURE=1`` to force the pure backend (used by the parity
tests and the benchmark).  The compiled kernel works on int64, so the
wrapper falls back to pure Python whenever inputs could leave the safe
range; results are identical either way.
"""

from __future__ import annotations

import os

from . import _purekernel

if os.environ.get("ROOTFIRE_PURE"):
    _impl = _purekernel
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _purekernel

BACKEND: str = _impl.BACKEND

# int64 stays exact as long as every intermediate |pairing| fits; the
# coroot rows are tiny, so a generous coordinate bound is enough.
_SAFE_COORD = 1 << 40


def splitmix64_next(state: int) -> tuple[int, int]:
    return _impl.splitmix64_next(state)


def pairings(coroots, coords):
    return _impl.pairings(coroots, coords)


def stabilize(coords, root_weights, coroots, lo, hi, budget, seed=None):
    impl = _impl
    if impl is not _purekernel and (
        any(abs(x) >= _SAFE_COORD for x in coords)
        or any(abs(b) >= _SAFE_COORD for b in lo)
        or any(abs(b) >= _SAFE_COORD for b in hi)
    ):
        impl = _purekernel
    return impl.stabilize(coords, root_weights, coroots, lo, hi, budget, seed)
