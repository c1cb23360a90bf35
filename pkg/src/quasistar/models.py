"""Builders for concrete models and dyadic truncation families."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import AlgebraStructure
from .errors import QuasiStarError
from .quasi import QuasiPair, boundedness_norm


def build_finite_group_algebra(table, name="group") -> QuasiPair:
    """C[G] from a multiplication table ``table[g][h] = index of g h``.

    Involution delta_g -> delta_{g^-1} extended antilinearly, unit delta_e,
    and the normalized counting inner product <delta_g, delta_h> = [g = h] / |G|.
    """
    table = np.asarray(table, dtype=int)
    n = table.shape[0]
    if n < 1 or table.shape != (n, n):
        raise QuasiStarError("group table must be a nonempty square array")
    if any(sorted(row) != list(range(n)) for row in table.tolist()):
        raise QuasiStarError("group table rows must be permutations")
    identity = [g for g in range(n) if np.array_equal(table[g], np.arange(n))]
    if len(identity) != 1:
        raise QuasiStarError("group table has no unique identity")
    e = identity[0]
    inverse = [int(np.flatnonzero(table[g] == e)[0]) for g in range(n)]

    c = np.zeros((n, n, n))
    for g in range(n):
        c[g, np.arange(n), table[g]] = 1.0
    s = np.zeros((n, n))
    s[inverse, np.arange(n)] = 1.0
    unit = np.zeros(n)
    unit[e] = 1.0
    alg = AlgebraStructure(c, s, unit)
    return QuasiPair(alg, np.eye(n), np.eye(n) / n, name=name)


def cyclic_table(n):
    i = np.arange(n)
    return (i[:, None] + i[None, :]) % n


def build_group_algebra(n: int) -> QuasiPair:
    """C[Z_n] with basis delta_0, ..., delta_{n-1}."""
    if n < 1:
        raise QuasiStarError("group order must be at least 1")
    return build_finite_group_algebra(cyclic_table(n), name=f"C[Z_{n}]")


def build_product_group_algebra(m: int, n: int) -> QuasiPair:
    """C[Z_m x Z_n]; the pair (a, b) has basis index a * n + b."""
    if m < 1 or n < 1:
        raise QuasiStarError("group orders must be at least 1")
    a = np.arange(m * n) // n
    b = np.arange(m * n) % n
    table = ((a[:, None] + a[None, :]) % m) * n + (b[:, None] + b[None, :]) % n
    return build_finite_group_algebra(table, name=f"C[Z_{m} x Z_{n}]")


def build_symmetric_group_algebra(k: int) -> QuasiPair:
    """C[S_k], permutations in lexicographic order, (g h)(t) = g(h(t))."""
    if k < 1:
        raise QuasiStarError("k must be at least 1")
    perms = list(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(g[h[t]] for t in range(k))] for h in perms] for g in perms]
    return build_finite_group_algebra(table, name=f"C[S_{k}]")


def build_matrix_algebra(k: int) -> QuasiPair:
    """M_k(C) with <A, B> = tr(B^H A) / k; E_ij has basis index i * k + j."""
    if k < 1:
        raise QuasiStarError("k must be at least 1")
    d = k * k
    c = np.zeros((d, d, d))
    s = np.zeros((d, d))
    for i, j in itertools.product(range(k), repeat=2):
        s[j * k + i, i * k + j] = 1.0
        for l in range(k):
            c[i * k + j, j * k + l, i * k + l] = 1.0
    unit = np.eye(k).reshape(d)
    return QuasiPair(AlgebraStructure(c, s, unit), np.eye(d), np.eye(d) / k, name=f"M_{k}")


def build_function_model(m: int, weights=None, length: float = 1.0) -> QuasiPair:
    """Grid functions on an interval of the given length with a weighted l2 product.

    Pointwise product, complex conjugation, constant one as unit, and
    ``<f, g> = sum_k w_k f_k conj(g_k)``.  Without explicit weights the grid is
    uniform (w_k = length / m).
    """
    if m < 1:
        raise QuasiStarError("grid size must be at least 1")
    if weights is None:
        w = np.full(m, length / m)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != (m,):
            raise QuasiStarError(f"expected {m} weights, got shape {w.shape}")
        if np.any(w <= 0):
            raise QuasiStarError("quadrature weights must be strictly positive")
        if abs(w.sum() - length) > 1e-12 * max(1.0, length):
            raise QuasiStarError(f"weights sum to {w.sum()!r}, expected the interval length {length!r}")
    c = np.zeros((m, m, m))
    c[np.arange(m), np.arange(m), np.arange(m)] = 1.0
    alg = AlgebraStructure(c, np.eye(m), np.ones(m))
    return QuasiPair(alg, np.eye(m), np.diag(w), name=f"grid[{m}]")


BUILDERS: dict[str, Callable[..., QuasiPair]] = {
    "cyclic_group": build_group_algebra,
    "product_group": build_product_group_algebra,
    "symmetric_group": build_symmetric_group_algebra,
    "matrix_algebra": build_matrix_algebra,
    "function_model": build_function_model,
}


def build(name: str, params) -> QuasiPair:
    try:
        builder = BUILDERS[name]
    except KeyError:
        raise QuasiStarError(f"unknown builder {name!r}; known: {sorted(BUILDERS)}") from None
    return builder(*[int(p) for p in params])


# -- truncation families ----------------------------------------------------------


@dataclass(frozen=True)
class TruncationFamily:
    """Function models on nested dyadic grids of [0, length] with a probe per level."""

    levels: tuple[int, ...]
    probe: Callable[[int, np.ndarray], np.ndarray]
    length: float = 1.0
    probe_name: str = "probe"

    def grid_size(self, level: int) -> int:
        return 2**level

    def pair(self, level: int) -> QuasiPair:
        return build_function_model(self.grid_size(level), length=self.length)

    def midpoints(self, level: int):
        m = self.grid_size(level)
        return (np.arange(m) + 0.5) * self.length / m

    def probe_vector(self, level: int):
        return np.asarray(self.probe(level, self.midpoints(level)), dtype=np.complex128)

    def inclusion(self, level: int, finer: int):
        """Coordinate injection of level-N step functions into level M >= N."""
        if finer < level:
            raise QuasiStarError("inclusion goes from a coarser to a finer level")
        rep = 2 ** (finer - level)
        return np.kron(np.eye(self.grid_size(level)), np.ones((rep, 1)))


def constant_probe(level, t):
    return np.ones_like(t)


def spike_probe(level, t, exponent=0.25):
    """2^(exponent*N) on the first cell and 1 elsewhere, rescaled to unit L2 norm."""
    f = np.ones_like(t)
    f[0] = 2.0 ** (exponent * level)
    h = 2.0 * t[0]  # cell width
    return f / np.sqrt(h * np.sum(np.abs(f) ** 2))


def smooth_probe(level, t):
    """Samples of 1 + t(1 - t); sup norm 1.25 on [0, 1]."""
    return 1.0 + t * (1.0 - t)


PROBES = {"constant": constant_probe, "spike": spike_probe, "smooth": smooth_probe}


def dyadic_family(probe="spike", max_level=10, length=1.0) -> TruncationFamily:
    if isinstance(probe, str):
        try:
            fn = PROBES[probe]
        except KeyError:
            raise QuasiStarError(f"unknown probe {probe!r}; known: {sorted(PROBES)}") from None
        name = probe
    else:
        fn, name = probe, getattr(probe, "__name__", "probe")
    return TruncationFamily(tuple(range(max_level + 1)), fn, length=length, probe_name=name)


DENSE_SCAN_LIMIT = 64


def multiplication_norm(f, weights):
    """||L_f|| on a weighted grid through the diagonal structure.

    In orthonormal coordinates L_f is W^(1/2) diag(f) W^(-1/2) = diag(f), so
    the norm is the largest |f_k|; no dense model is needed.
    """
    f = np.asarray(f, dtype=np.complex128)
    if np.any(np.asarray(weights) <= 0):
        raise QuasiStarError("quadrature weights must be strictly positive")
    return float(np.abs(f).max())


def truncation_scan(family: TruncationFamily, dense_limit: int = DENSE_SCAN_LIMIT) -> list[dict]:
    """Per-level L2 norm and multiplication-operator norm of the family's probe.

    Levels with at most ``dense_limit`` grid points build the full model and
    use the generic operator norm; ``cross_check`` then holds its distance to
    the diagonal formula.  Finer levels use the diagonal formula only.
    """
    rows = []
    for level in family.levels:
        m = family.grid_size(level)
        w = np.full(m, family.length / m)
        f = family.probe_vector(level)
        row = {
            "level": level,
            "grid_size": m,
            "l2_norm": float(np.sqrt(np.sum(w * np.abs(f) ** 2))),
        }
        diag = multiplication_norm(f, w)
        if m <= dense_limit:
            pair = family.pair(level)
            generic = boundedness_norm(f, pair)
            row.update(operator_norm=generic, method="dense", cross_check=abs(generic - diag))
        else:
            row.update(operator_norm=diag, method="diagonal", cross_check=None)
        rows.append(row)
    return rows
