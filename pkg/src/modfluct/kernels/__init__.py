"""Hot numeric kernels with selectable backend.

The environment variable MODFLUCT_KERNELS picks the implementation:

* ``numba`` -- @njit-compiled loops (the default when numba imports),
* ``numpy`` -- pure numpy/Python fallback with identical semantics,
* ``auto``  -- numba if available, else numpy.

``modfluct bench`` times the two backends against each other.
"""

from __future__ import annotations

import itertools
import os
from math import factorial

_choice = os.environ.get("MODFLUCT_KERNELS", "auto").strip().lower()
if _choice not in {"auto", "numba", "numpy"}:
    raise RuntimeError(f"MODFLUCT_KERNELS must be auto|numba|numpy, got {_choice!r}")

if _choice == "numpy":
    from . import backend_numpy as _backend

    BACKEND = "numpy"
else:
    try:
        from . import backend_numba as _backend

        BACKEND = "numba"
    except ImportError:
        if _choice == "numba":
            raise
        from . import backend_numpy as _backend

        BACKEND = "numpy"

inversion_count = _backend.inversion_count
pattern_profile = _backend.pattern_profile
edge_count = _backend.edge_count
path2_hom = _backend.path2_hom
triangle_count = _backend.triangle_count
rsk_row_lengths = _backend.rsk_row_lengths

PROFILE_KS = (2, 3, 4)


def pattern_index(tau: tuple[int, ...]) -> int:
    """Lehmer (lexicographic) rank of a pattern; the index used by pattern_profile."""
    k = len(tau)
    idx = 0
    for i in range(k):
        smaller_after = sum(1 for j in range(i + 1, k) if tau[j] < tau[i])
        idx += smaller_after * factorial(k - 1 - i)
    return idx


def patterns_by_index(k: int) -> list[tuple[int, ...]]:
    """All size-k permutations ordered consistently with pattern_profile's indexing."""
    return sorted(itertools.permutations(range(1, k + 1)), key=pattern_index)


def load_backend(name: str):
    """Import a backend module by name (used by the benchmark)."""
    if name == "numpy":
        from . import backend_numpy

        return backend_numpy
    if name == "numba":
        from . import backend_numba

        return backend_numba
    raise ValueError(f"unknown backend {name!r}")
