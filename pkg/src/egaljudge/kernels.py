"""Hot numeric kernels: batched Hamming distances over packed judgment words.

Judgments are packed into uint64 words (first issue = most significant of the
m low bits), so a Hamming distance is a popcount of an XOR and a whole domain
is a 1-d uint64 array.  The kernels below are the only place the package
loops over large candidate sets; everything else orchestrates.

Two interchangeable backends are provided:

* a numba ``@njit`` path (default), and
* a pure-numpy path, selected by setting the environment variable
  ``EGAL_NUMBA=0`` before import (also used automatically when numba is
  not importable).

``BACKEND`` reports which one is active.  ``benchmarks/bench_kernels.py``
compares the two.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("EGAL_NUMBA", "1").strip().lower()
USE_NUMBA = _FLAG not in {"0", "false", "no", "off"}
if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a hard dep, but stay usable
        USE_NUMBA = False

BACKEND = "numba" if USE_NUMBA else "numpy"

# 16-bit popcount table shared by both backends (64 KiB).
_POP16 = np.unpackbits(
    np.arange(65536, dtype=np.uint16).view(np.uint8).reshape(-1, 2), axis=1
).sum(axis=1).astype(np.uint8)

_M16 = np.uint64(0xFFFF)
_S16 = np.uint64(16)
_S32 = np.uint64(32)
_S48 = np.uint64(48)


def popcounts(words: np.ndarray) -> np.ndarray:
    """Per-element popcount of a uint64 array, as int64."""
    w = np.asarray(words, dtype=np.uint64)
    r = _POP16[w & _M16].astype(np.int64)
    r += _POP16[(w >> _S16) & _M16]
    r += _POP16[(w >> _S32) & _M16]
    r += _POP16[(w >> _S48) & _M16]
    return r


def words_to_bits(words: np.ndarray, m: int) -> np.ndarray:
    """Unpack words into an (k, m) uint8 bit matrix, first issue leftmost."""
    w = np.asarray(words, dtype=np.uint64)
    shifts = np.arange(m - 1, -1, -1, dtype=np.uint64)
    return ((w[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.uint8)


def bits_to_words(bits: np.ndarray) -> np.ndarray:
    """Pack an (k, m) 0/1 matrix into uint64 words (inverse of words_to_bits)."""
    b = np.asarray(bits, dtype=np.uint64)
    m = b.shape[1]
    shifts = np.arange(m - 1, -1, -1, dtype=np.uint64)
    return (b << shifts[None, :]).sum(axis=1, dtype=np.uint64)


# ---------------------------------------------------------------------------
# pure-numpy backend
# ---------------------------------------------------------------------------

def _distance_matrix_numpy(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    x = a[:, None] ^ b[None, :]
    r = _POP16[x & _M16].astype(np.int64)
    r += _POP16[(x >> _S16) & _M16]
    r += _POP16[(x >> _S32) & _M16]
    r += _POP16[(x >> _S48) & _M16]
    return r


def _extremes_numpy(cand: np.ndarray, prof: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # One pass per profile row keeps memory at O(|cand|) even for hypercubes.
    mx = popcounts(cand ^ prof[0])
    mn = mx.copy()
    for j in range(1, prof.shape[0]):
        d = popcounts(cand ^ prof[j])
        np.maximum(mx, d, out=mx)
        np.minimum(mn, d, out=mn)
    return mx, mn


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

if USE_NUMBA:

    @njit(cache=True)
    def _distance_matrix_numba(a, b, table):  # pragma: no cover - jitted
        ka = a.shape[0]
        kb = b.shape[0]
        out = np.empty((ka, kb), dtype=np.int64)
        m16 = np.uint64(0xFFFF)
        s16 = np.uint64(16)
        s32 = np.uint64(32)
        s48 = np.uint64(48)
        for i in range(ka):
            w = a[i]
            for j in range(kb):
                x = w ^ b[j]
                d = np.int64(table[x & m16])
                d += table[(x >> s16) & m16]
                d += table[(x >> s32) & m16]
                d += table[(x >> s48) & m16]
                out[i, j] = d
        return out

    @njit(cache=True)
    def _extremes_numba(cand, prof, table):  # pragma: no cover - jitted
        k = cand.shape[0]
        n = prof.shape[0]
        mx = np.empty(k, dtype=np.int64)
        mn = np.empty(k, dtype=np.int64)
        m16 = np.uint64(0xFFFF)
        s16 = np.uint64(16)
        s32 = np.uint64(32)
        s48 = np.uint64(48)
        for i in range(k):
            w = cand[i]
            hi = np.int64(-1)
            lo = np.int64(1 << 30)
            for j in range(n):
                x = w ^ prof[j]
                d = np.int64(table[x & m16])
                d += table[(x >> s16) & m16]
                d += table[(x >> s32) & m16]
                d += table[(x >> s48) & m16]
                if d > hi:
                    hi = d
                if d < lo:
                    lo = d
            mx[i] = hi
            mn[i] = lo
        return mx, mn


def _as_words(a: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.uint64)


def distance_matrix(a_words: np.ndarray, b_words: np.ndarray) -> np.ndarray:
    """Hamming distance between every pair of packed judgments, (ka, kb) int64."""
    a = _as_words(a_words)
    b = _as_words(b_words)
    if USE_NUMBA:
        return _distance_matrix_numba(a, b, _POP16)
    return _distance_matrix_numpy(a, b)


def extremes_against(cand_words: np.ndarray, prof_words: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-candidate (max, min) Hamming distance to the profile rows.

    Scales to hypercube-sized candidate arrays without materializing the
    full distance matrix.
    """
    cand = _as_words(cand_words)
    prof = _as_words(prof_words)
    if prof.shape[0] == 0:
        raise ValueError("profile must be nonempty")
    if USE_NUMBA:
        return _extremes_numba(cand, prof, _POP16)
    return _extremes_numpy(cand, prof)


def warmup() -> None:
    """Trigger JIT compilation on tiny inputs (no-op on the numpy backend)."""
    w = np.array([0, 3], dtype=np.uint64)
    distance_matrix(w, w)
    extremes_against(w, w)
