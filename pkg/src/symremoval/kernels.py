"""Homomorphism search kernels.

Both hypergraphs are integer-encoded before they reach this module (see
``hypergraph._build_plan``). A :class:`SearchPlan` describes a search over
the non-isolated vertices of the template in a fixed order; position ``d`` of
an assignment may take values in ``[lo[d], hi[d])``. Template edges are
grouped by the depth at which their last coordinate is assigned, so each
edge is tested exactly once, as soon as it is fully determined.

Two interchangeable backends exist:

* ``numba``: an iterative depth-first backtracking loop compiled with
  ``@njit``. Candidates at a depth with a completed edge are drawn from a
  CSR adjacency index of the target (the edge's other coordinates fix a
  key; only vertices that close an edge with that key are tried).
* ``numpy``: breadth-first frontier expansion over chunks of partial
  assignments, filtering with vectorized edge-membership lookups.

Both visit assignments in lexicographic order and count a node each time a
partial assignment passes all checks at its depth, so counts, witnesses and
budget verdicts of ``count``/``enumerate`` agree between backends.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ._accel import HAVE_NUMBA, njit
from .errors import BudgetExceeded

DENSE_LIMIT = 1 << 26
PIVOT_KEY_LIMIT = 1 << 24
CHUNK = 1 << 16

BACKEND = "numba" if HAVE_NUMBA else "numpy"

MODE_COUNT, MODE_FIRST, MODE_ALL = 0, 1, 2


class SearchPlan(NamedTuple):
    p: int
    k: int
    n: int
    lo: np.ndarray
    hi: np.ndarray
    chk_ptr: np.ndarray
    chk_pos: np.ndarray
    chk_j: np.ndarray
    dense: bool
    table: np.ndarray
    codes: np.ndarray
    use_pivot: bool
    cand_ptr: np.ndarray
    cand_vals: np.ndarray
    nkeys: int


class TargetIndex(NamedTuple):
    """Edge-membership and adjacency index of a target hypergraph."""

    n: int
    k: int
    dense: bool
    table: np.ndarray
    codes: np.ndarray
    use_pivot: bool
    cand_ptr: np.ndarray
    cand_vals: np.ndarray
    nkeys: int


def edge_codes(edges: np.ndarray, n: int) -> np.ndarray:
    """Mixed-radix code of each row of an ``(m, k)`` vertex-index array."""
    codes = np.zeros(edges.shape[0], dtype=np.int64)
    for c in range(edges.shape[1]):
        codes = codes * n + edges[:, c]
    return codes


def build_target_index(edges: np.ndarray, n: int, k: int) -> TargetIndex:
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, k)
    codes = np.unique(edge_codes(edges, n))
    size = n**k
    dense = size <= DENSE_LIMIT
    if dense:
        table = np.zeros(max(size, 1), dtype=np.uint8)
        table[codes] = 1
    else:
        table = np.zeros(1, dtype=np.uint8)
    nkeys = n ** (k - 1)
    use_pivot = nkeys <= PIVOT_KEY_LIMIT
    if use_pivot:
        ptr_parts, val_parts = [], []
        offset = 0
        for j in range(k):
            others = np.delete(edges, j, axis=1)
            keys = edge_codes(others, n)
            vals = edges[:, j]
            order = np.lexsort((vals, keys))
            keys, vals = keys[order], vals[order]
            counts = np.bincount(keys, minlength=nkeys)
            ptr = np.zeros(nkeys + 1, dtype=np.int64)
            np.cumsum(counts, out=ptr[1:])
            ptr_parts.append(ptr + offset)
            val_parts.append(vals)
            offset += len(vals)
        cand_ptr = np.concatenate(ptr_parts)
        cand_vals = np.concatenate(val_parts) if val_parts else np.zeros(0, np.int64)
    else:
        cand_ptr = np.zeros(1, dtype=np.int64)
        cand_vals = np.zeros(0, dtype=np.int64)
    return TargetIndex(n, k, dense, table, codes, use_pivot, cand_ptr, cand_vals, nkeys)


@njit(cache=True)
def _setup_depth(d, k, n, lo, hi, chk_ptr, chk_pos, chk_j, assign, use_pivot,
                 cand_ptr, nkeys, cur, end, listed):
    if use_pivot and chk_ptr[d] < chk_ptr[d + 1]:
        e = chk_ptr[d]
        j = chk_j[e]
        key = 0
        for c in range(k):
            if c != j:
                key = key * n + assign[chk_pos[e, c]]
        base = j * (nkeys + 1) + key
        cur[d] = cand_ptr[base]
        end[d] = cand_ptr[base + 1]
        listed[d] = True
    else:
        cur[d] = lo[d]
        end[d] = hi[d]
        listed[d] = False


@njit(cache=True)
def _dfs(p, k, n, lo, hi, chk_ptr, chk_pos, chk_j, dense, table, codes,
         use_pivot, cand_ptr, cand_vals, nkeys, budget, mode, out):
    assign = np.zeros(p, dtype=np.int64)
    cur = np.zeros(p, dtype=np.int64)
    end = np.zeros(p, dtype=np.int64)
    listed = np.zeros(p, dtype=np.bool_)
    ncodes = codes.shape[0]
    count = 0
    nodes = 0
    d = 0
    _setup_depth(0, k, n, lo, hi, chk_ptr, chk_pos, chk_j, assign, use_pivot,
                 cand_ptr, nkeys, cur, end, listed)
    while True:
        if cur[d] < end[d]:
            i = cur[d]
            cur[d] += 1
            if listed[d]:
                v = cand_vals[i]
                if v < lo[d] or v >= hi[d]:
                    continue
            else:
                v = i
            assign[d] = v
            ok = True
            for e in range(chk_ptr[d], chk_ptr[d + 1]):
                code = 0
                for c in range(k):
                    code = code * n + assign[chk_pos[e, c]]
                if dense:
                    if table[code] == 0:
                        ok = False
                        break
                else:
                    at = np.searchsorted(codes, code)
                    if at >= ncodes or codes[at] != code:
                        ok = False
                        break
            if not ok:
                continue
            nodes += 1
            if nodes > budget:
                return count, nodes, 1
            if d == p - 1:
                if mode == 2:
                    out[count, :] = assign
                count += 1
                if mode == 1:
                    out[0, :] = assign
                    return count, nodes, 0
            else:
                d += 1
                _setup_depth(d, k, n, lo, hi, chk_ptr, chk_pos, chk_j, assign,
                             use_pivot, cand_ptr, nkeys, cur, end, listed)
        else:
            if d == 0:
                break
            d -= 1
    return count, nodes, 0


def _run_numba(plan: SearchPlan, budget: int, mode: int, out: np.ndarray):
    return _dfs(plan.p, plan.k, plan.n, plan.lo, plan.hi, plan.chk_ptr,
                plan.chk_pos, plan.chk_j, plan.dense, plan.table, plan.codes,
                plan.use_pivot, plan.cand_ptr, plan.cand_vals, plan.nkeys,
                budget, mode, out)


def _member(plan: SearchPlan, codes: np.ndarray) -> np.ndarray:
    if plan.dense:
        return plan.table[codes].astype(bool)
    at = np.searchsorted(plan.codes, codes)
    at = np.minimum(at, max(len(plan.codes) - 1, 0))
    if len(plan.codes) == 0:
        return np.zeros(len(codes), dtype=bool)
    return plan.codes[at] == codes


def _expand(plan: SearchPlan, rows: np.ndarray, d: int) -> np.ndarray:
    cand = np.arange(plan.lo[d], plan.hi[d], dtype=np.int64)
    new = np.empty((rows.shape[0] * len(cand), d + 1), dtype=np.int64)
    new[:, :d] = np.repeat(rows, len(cand), axis=0)
    new[:, d] = np.tile(cand, rows.shape[0])
    keep = np.ones(new.shape[0], dtype=bool)
    for e in range(plan.chk_ptr[d], plan.chk_ptr[d + 1]):
        code = np.zeros(new.shape[0], dtype=np.int64)
        for c in range(plan.k):
            code = code * plan.n + new[:, plan.chk_pos[e, c]]
        keep &= _member(plan, code)
    return new[keep]


def _run_numpy(plan: SearchPlan, budget: int, mode: int):
    count = 0
    nodes = 0
    found = []
    stack = [(np.zeros((1, 0), dtype=np.int64), 0)]
    while stack:
        rows, d = stack.pop()
        width = max(int(plan.hi[d] - plan.lo[d]), 1)
        step = max(1, CHUNK // width)
        if rows.shape[0] > step:
            for s in reversed(range(0, rows.shape[0], step)):
                stack.append((rows[s:s + step], d))
            continue
        new = _expand(plan, rows, d)
        nodes += new.shape[0]
        if nodes > budget:
            return count, nodes, 1, found
        if d == plan.p - 1:
            if new.shape[0] == 0:
                continue
            if mode == MODE_FIRST:
                return 1, nodes, 0, [new[:1]]
            count += new.shape[0]
            if mode == MODE_ALL:
                found.append(new)
        elif new.shape[0]:
            stack.append((new, d + 1))
    return count, nodes, 0, found


def _backend(backend):
    backend = backend or BACKEND
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is unavailable")
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


def _exceeded(nodes, budget):
    return BudgetExceeded(
        f"search budget of {budget} nodes exceeded (visited {nodes})",
        nodes=nodes, budget=budget)


def count(plan: SearchPlan, budget: int, backend: str | None = None) -> tuple[int, int]:
    """Number of complete assignments and nodes visited."""
    if plan.p == 0:
        return 1, 0
    if _backend(backend) == "numba":
        c, nodes, status = _run_numba(plan, budget, MODE_COUNT,
                                      np.zeros((1, plan.p), dtype=np.int64))
    else:
        c, nodes, status, _ = _run_numpy(plan, budget, MODE_COUNT)
    if status:
        raise _exceeded(nodes, budget)
    return int(c), int(nodes)


def first(plan: SearchPlan, budget: int, backend: str | None = None) -> np.ndarray | None:
    """Lexicographically first complete assignment, or None."""
    if plan.p == 0:
        return np.zeros(0, dtype=np.int64)
    if _backend(backend) == "numba":
        out = np.zeros((1, plan.p), dtype=np.int64)
        c, nodes, status = _run_numba(plan, budget, MODE_FIRST, out)
        rows = out[:c]
    else:
        c, nodes, status, found = _run_numpy(plan, budget, MODE_FIRST)
        rows = found[0] if found else np.zeros((0, plan.p), dtype=np.int64)
    if status:
        raise _exceeded(nodes, budget)
    return rows[0].copy() if len(rows) else None


def enumerate_all(plan: SearchPlan, budget: int, backend: str | None = None) -> np.ndarray:
    """All complete assignments as a ``(count, p)`` array in lexicographic order."""
    if plan.p == 0:
        return np.zeros((1, 0), dtype=np.int64)
    if _backend(backend) == "numba":
        c, _ = count(plan, budget, "numba")
        out = np.zeros((c, plan.p), dtype=np.int64)
        _run_numba(plan, budget, MODE_ALL, out)
        return out
    c, nodes, status, found = _run_numpy(plan, budget, MODE_ALL)
    if status:
        raise _exceeded(nodes, budget)
    if not found:
        return np.zeros((0, plan.p), dtype=np.int64)
    return np.concatenate(found)
