"""Hot kernels with a compiled backend and a numpy/scipy fallback.

The compiled module is optional. Set ``QUASISTAR_PURE_PYTHON=1`` to force the
fallback even when the extension is built.
"""
from __future__ import annotations

import os

import numpy as np
from scipy import sparse


def _as_c128(t):
    return np.ascontiguousarray(t, dtype=np.complex128)


def triple_product_residual_py(p1, p2, q1, q2) -> float:
    p1, p2, q1, q2 = map(_as_c128, (p1, p2, q1, q2))
    ni, nj, nm1 = p1.shape
    _, nk, nl = p2.shape
    nm2 = q1.shape[2]
    if p2.shape[0] != nm1 or q1.shape[:2] != (nj, nk) or q2.shape != (ni, nm2, nl):
        raise ValueError("incompatible tensor shapes")
    if min(ni, nj, nk, nl) == 0:
        return 0.0
    p2_flat = p2.reshape(nm1, nk * nl)
    q1_sp = sparse.csr_matrix(q1.reshape(nj * nk, nm2))
    p1_sp = sparse.csr_matrix(p1.reshape(ni * nj, nm1))
    best = 0.0
    for i in range(ni):
        lhs = p1_sp[i * nj:(i + 1) * nj] @ p2_flat          # (j, k*l)
        rhs = q1_sp @ q2[i]                                  # (j*k, l)
        diff = np.asarray(lhs).reshape(nj * nk, nl) - np.asarray(rhs)
        if diff.size:
            best = max(best, float(np.abs(diff).max()))
    return best


try:
    from ._kernels_cy import triple_product_residual as _compiled_triple
except ImportError:  # extension not built
    _compiled_triple = None


def triple_product_residual_compiled(p1, p2, q1, q2) -> float:
    if _compiled_triple is None:
        raise RuntimeError("compiled kernels are not available")
    return float(_compiled_triple(*map(_as_c128, (p1, p2, q1, q2))))


if _compiled_triple is not None and os.environ.get("QUASISTAR_PURE_PYTHON", "") in ("", "0"):
    BACKEND = "cython"
    triple_product_residual = triple_product_residual_compiled
else:
    BACKEND = "python"
    triple_product_residual = triple_product_residual_py

HAVE_COMPILED = _compiled_triple is not None
