"""Backend dispatch for the hot Monte Carlo kernels.

The jitted backend is the default; set ``FRACHARDY_BACKEND=numpy`` in the
environment (or call :func:`set_backend`) to run the pure-numpy fallback.
Both backends implement the same per-sample arithmetic, so estimates
agree up to summation order.
"""

from __future__ import annotations

import os
import warnings

from . import numpy_impl

_BACKENDS = {"numpy": numpy_impl}
_active: str | None = None


def _load_numba():
    if "numba" in _BACKENDS:
        return True
    try:
        from . import numba_impl
    except ImportError as exc:  # pragma: no cover - depends on environment
        warnings.warn(f"numba backend unavailable ({exc}); using numpy fallback")
        return False
    _BACKENDS["numba"] = numba_impl
    return True


def set_backend(name: str) -> None:
    global _active
    if name not in ("numpy", "numba"):
        raise ValueError(f"unknown backend {name!r}; choose 'numpy' or 'numba'")
    if name == "numba" and not _load_numba():
        raise RuntimeError("numba backend requested but numba is not importable")
    _active = name


def backend_name() -> str:
    global _active
    if _active is None:
        requested = os.environ.get("FRACHARDY_BACKEND", "").strip().lower()
        if requested:
            set_backend(requested)
        else:
            _active = "numba" if _load_numba() else "numpy"
    return _active


def get_backend():
    return _BACKENDS[backend_name()]


def warmup() -> None:
    """Trigger jit compilation of every kernel on tiny inputs."""
    import numpy as np

    mod = get_backend()
    lo = np.zeros(1)
    hi = np.ones(1)
    u_data = np.array([[2.0, 0.4, 0.5]])
    b_data = np.array([[1.0, 0.5]])
    ones = np.ones((2, 1)) * 0.3
    vs = np.full(2, 0.3)
    mod.seminorm_batch(0, u_data, -1, b_data, lo, hi, 2.0, 0.5, 0.1, 2.0, 2.0, 1e-8,
                       ones, ones, vs, ones, vs, -1, b_data)
    mod.weighted_batch(0, u_data, -1, b_data, 0, b_data, lo, hi, 2.0, 1.0, 0, ones)
    mod.weighted_batch(0, u_data, -1, b_data, 0, b_data, lo, hi, 2.0, 1.0, 1, ones)
    mod.weighted_batch(0, u_data, -1, b_data, 0, b_data, lo, hi, 2.0, 1.0, 2, ones)
    x = np.array([0.5])
    mod.annulus_batch(0, b_data, x, 0.5, 2.0, 0.01, 2.0, 2.0, ones, vs)
    mod.expedient_batch(0, b_data, x, 0.5, 2.0, 0.1, 2.0, 2.0, 1e-8, ones, vs, ones, vs)
