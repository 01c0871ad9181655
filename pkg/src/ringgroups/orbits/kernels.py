"""Orbit labelling kernels: a numba BFS and a pure-numpy min-label propagation.

Set RINGGROUPS_NO_NUMBA=1 to force the numpy path.  Both return the closure of
the start rows under the generators (sorted codes) and, per code, the least
code of its orbit.
"""
from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised through backend selection
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


def default_backend() -> str:
    if os.environ.get("RINGGROUPS_NO_NUMBA", "") not in ("", "0") or not HAVE_NUMBA:
        return "numpy"
    return "numba"


def _bfs_py(start, gens, add, mul, q, n, zero):
    total = q**n
    label = np.full(total, -1, dtype=np.int64)
    queue = np.empty(total, dtype=np.int64)
    d = np.empty(n, dtype=np.int64)
    for s in start:
        if label[s] >= 0:
            continue
        head, tail = 0, 1
        queue[0] = s
        label[s] = s
        least = s
        while head < tail:
            c = queue[head]
            head += 1
            x = c
            for k in range(n - 1, -1, -1):
                d[k] = x % q
                x //= q
            for g in range(gens.shape[0]):
                code = 0
                for j in range(n):
                    acc = zero
                    for i in range(n):
                        acc = add[acc, mul[d[i], gens[g, i, j]]]
                    code = code * q + acc
                if label[code] < 0:
                    label[code] = s
                    queue[tail] = code
                    tail += 1
                    if code < least:
                        least = code
        for t in range(tail):
            label[queue[t]] = least
    return label


if HAVE_NUMBA:
    _bfs_numba = njit(cache=True)(_bfs_py)


def labels_numba(start, gens, add, mul, q, n, zero):
    label = _bfs_numba(np.asarray(start, dtype=np.int64), gens, add, mul, q, n, zero)
    codes = np.flatnonzero(label >= 0)
    return codes, label[codes]


def _images(fr_digits, codes, gens, add, mul, q, n, zero):
    """Codes of every row times every generator: array (G, N)."""
    D = fr_digits(codes)
    out = np.empty((gens.shape[0], len(codes)), dtype=np.int64)
    for g in range(gens.shape[0]):
        code = np.zeros(len(codes), dtype=np.int64)
        for j in range(n):
            acc = np.full(len(codes), zero, dtype=np.int64)
            for i in range(n):
                acc = add[acc, mul[D[:, i], gens[g, i, j]]]
            code = code * q + acc
        out[g] = code
    return out


def labels_numpy(start, gens, add, mul, q, n, zero):
    def digits(codes):
        out = np.empty((len(codes), n), dtype=np.int64)
        c = codes.copy()
        for k in range(n - 1, -1, -1):
            out[:, k] = c % q
            c //= q
        return out

    codes = np.unique(np.asarray(start, dtype=np.int64))
    frontier = codes
    while len(frontier):
        img = np.unique(_images(digits, frontier, gens, add, mul, q, n, zero))
        frontier = np.setdiff1d(img, codes, assume_unique=True)
        codes = np.union1d(codes, frontier)
    if gens.shape[0] == 0:
        return codes, codes.copy()
    pos = np.searchsorted(codes, _images(digits, codes, gens, add, mul, q, n, zero))
    label = codes.copy()
    while True:
        new = label
        for g in range(pos.shape[0]):
            new = np.minimum(new, new[pos[g]])
        # pointer jumping: adopt the label of one's label
        new = np.minimum(new, new[np.searchsorted(codes, new)])
        # generator sets are closed under inverses, but push labels backwards too
        for g in range(pos.shape[0]):
            np.minimum.at(new, pos[g], new)
        if np.array_equal(new, label):
            break
        label = new
    return codes, label


def orbit_labels(start, gens, add, mul, q, n, zero, backend: str | None = None):
    backend = backend or default_backend()
    gens = np.asarray(gens, dtype=np.int64).reshape(-1, n, n)
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba is not installed")
        return labels_numba(start, gens, add, mul, q, n, zero)
    if backend == "numpy":
        return labels_numpy(start, gens, add, mul, q, n, zero)
    raise ValueError(f"unknown backend {backend!r}")
