"""Compiled fast path for run_program on plain tapes.

This transcribes the reference control-stack machine into a numba kernel
operating on flat int64 arrays.  It exists purely for speed: semantics
are defined by the reference executor, and the two are held equal by
property tests (identical tape contents and peak depth on both paths).
Packed backends and tracing always use the reference machine.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .graph import DirectedGraph
from .tape import CatalyticTape

try:
    from numba import njit

    _HAVE_NUMBA = True
except Exception:  # pragma: no cover - exercised only without numba
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore[misc]
        def wrap(fn):
            return fn

        return wrap


def available() -> bool:
    return _HAVE_NUMBA


@lru_cache(maxsize=1024)
def residue_buckets(g: DirectedGraph, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Edges grouped by (source residue, target residue), flattened.

    Bucket (i,j) occupies slice off[i*k+j]:off[i*k+j+1] of the slot
    arrays, in lexicographic edge order; sweeps read them forward or
    backward.  Arrays hold register slots (u//k, v//k), not vertices.
    """
    counts = [0] * (k * k)
    for u, v in g.edges:
        counts[(u % k) * k + (v % k)] += 1
    off = np.zeros(k * k + 1, dtype=np.int64)
    off[1:] = np.cumsum(counts)
    us = np.zeros(len(g.edges), dtype=np.int64)
    vs = np.zeros(len(g.edges), dtype=np.int64)
    fill = off[:-1].copy()
    for u, v in g.edges:
        b = (u % k) * k + (v % k)
        us[fill[b]] = u // k
        vs[fill[b]] = v // k
        fill[b] += 1
    return us, vs, off


@njit(cache=True, nogil=True)
def _sweep(values, regs, q, in_b, out_b, i, j, k, inv, us, vs, off):
    idx = i * k + j
    s = off[idx]
    e = off[idx + 1]
    ib = in_b * regs
    ob = out_b * regs
    if inv:
        for p in range(e - 1, s - 1, -1):
            pos = ob + vs[p]
            values[pos] = (values[pos] - values[ib + us[p]]) % q
    else:
        for p in range(s, e):
            pos = ob + vs[p]
            values[pos] = (values[pos] + values[ib + us[p]]) % q


@njit(cache=True, nogil=True)
def _run(values, regs, q, length, i0, j0, k, root_inv, us, vs, off):
    blocks = values.shape[0] // regs
    if length == 1:
        _sweep(values, regs, q, 0, 1, i0, j0, k, root_inv == 1, us, vs, off)
        return 0
    st_stage = np.zeros(64, np.int64)
    st_mid = np.zeros(64, np.int64)
    st_inv = np.zeros(64, np.int64)
    st_stage[0] = 1
    st_mid[0] = k - 1 if root_inv == 1 else 0
    st_inv[0] = root_inv
    top = 1
    peak = 1
    cur_len, cur_i, cur_j = length, i0, j0
    cur_in, cur_out, cur_scr = 0, 1, blocks - 1
    while top > 0:
        stage = st_stage[top - 1]
        mid = st_mid[top - 1]
        if stage == 2:
            clen = cur_len // 2
            ci, cj = mid, cur_j
            cin, cout = cur_scr, cur_out
            cinv = st_inv[top - 1]
        else:
            clen = (cur_len + 1) // 2
            ci, cj = cur_i, mid
            cin, cout = cur_in, cur_scr
            cinv = 1 if stage == 3 else 0
        if clen > 1:
            st_stage[top] = 1
            st_mid[top] = k - 1 if cinv == 1 else 0
            st_inv[top] = cinv
            top += 1
            if top > peak:
                peak = top
            cur_len, cur_i, cur_j = clen, ci, cj
            cur_in, cur_out, cur_scr = cin, cout, cur_scr - 1
            continue
        _sweep(values, regs, q, cin, cout, ci, cj, k, cinv == 1, us, vs, off)
        while top > 0:
            stage = st_stage[top - 1]
            if stage < 3:
                st_stage[top - 1] = stage + 1
                break
            nm = st_mid[top - 1] + (-1 if st_inv[top - 1] == 1 else 1)
            if 0 <= nm < k:
                st_mid[top - 1] = nm
                st_stage[top - 1] = 1
                break
            top -= 1
            if top > 0:
                cur_len, cur_i, cur_j = length, i0, j0
                cur_in, cur_out, cur_scr = 0, 1, blocks - 1
                for d in range(top - 1):
                    if st_stage[d] == 2:
                        cur_len = cur_len // 2
                        cur_i = st_mid[d]
                        cur_in = cur_scr
                    else:
                        cur_len = (cur_len + 1) // 2
                        cur_j = st_mid[d]
                        cur_out = cur_scr
                    cur_scr -= 1
    return peak


def run_fast(
    tape: CatalyticTape,
    g: DirectedGraph,
    length: int,
    i: int,
    j: int,
    k: int,
    inverse: bool,
) -> int:
    """Run the kernel in place on the tape; returns peak frame depth."""
    if not _HAVE_NUMBA:
        raise RuntimeError("compiled kernel requested but numba is unavailable")
    us, vs, off = residue_buckets(g, k)
    values = np.array(tape.values, dtype=np.int64)
    peak = _run(
        values,
        tape.regs_per_block,
        tape.q,
        length,
        i,
        j,
        k,
        1 if inverse else 0,
        us,
        vs,
        off,
    )
    tape.values[:] = values.tolist()
    return int(peak)
