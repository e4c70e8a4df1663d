"""Directed and t-partite k-uniform hypergraphs and homomorphism counting.

Vertex labels are ints, strings or (nested) tuples of those. Homomorphisms
are arbitrary maps, never required to be injective; densities are exact
:class:`fractions.Fraction` values.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Hashable, Iterable, Mapping

import numpy as np

from . import kernels
from .errors import (BadEdgeType, InputError, PartMismatch, RepeatedCoordinate,
                     UniverseMismatch, UnknownVertex)

DEFAULT_BUDGET = 10**8

Label = Hashable


def label_key(x):
    """Total order on labels: ints, then strings, then tuples (recursively)."""
    if isinstance(x, (int, np.integer)):
        return (0, int(x))
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, tuple):
        return (2, tuple(label_key(y) for y in x))
    raise InputError(f"unsupported vertex label {x!r} (use int, str or tuple)")


def sort_labels(items: Iterable) -> list:
    return sorted(items, key=label_key)


class _Hypergraph:
    kind = ""

    @property
    def edges(self) -> frozenset:
        return self._edges

    def __len__(self):
        return len(self._edges)

    def __contains__(self, edge):
        return edge in self._edges

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def sorted_edges(self) -> list:
        return sort_labels(self._edges)

    def subtract(self, removal: Iterable) -> "_Hypergraph":
        """Copy of this hypergraph with the tuples of ``removal`` deleted.

        Tuples must lie in the edge universe but need not be edges.
        """
        removal = set(removal)
        for x in removal:
            self.check_in_universe(x)
        return self._with_edges(self._edges - removal)


class DirectedHypergraph(_Hypergraph):
    """Finite vertex set plus a set of k-tuples of pairwise distinct vertices."""

    kind = "directed"

    def __init__(self, vertices: Iterable[Label], k: int, edges: Iterable = ()):
        if not isinstance(k, int) or k < 1:
            raise InputError(f"arity k must be a positive integer, got {k!r}")
        self.k = k
        self._vset = frozenset(vertices)
        self.vertices = tuple(sort_labels(self._vset))
        checked = set()
        for e in edges:
            e = tuple(e)
            self._check_tuple(e, UnknownVertex)
            checked.add(e)
        self._edges = frozenset(checked)

    def _check_tuple(self, e, missing_error):
        if len(e) != self.k:
            raise UniverseMismatch(f"tuple {e!r} has length {len(e)}, expected k={self.k}")
        if len(set(e)) != len(e):
            raise RepeatedCoordinate(f"edge {e!r} repeats a coordinate")
        for v in e:
            if v not in self._vset:
                raise missing_error(f"coordinate {v!r} of {e!r} is not a vertex")

    def check_in_universe(self, x):
        if not isinstance(x, tuple):
            raise UniverseMismatch(f"{x!r} is not a tuple")
        if len(x) != self.k:
            raise UniverseMismatch(f"tuple {x!r} has length {len(x)}, expected k={self.k}")
        for v in x:
            if v not in self._vset:
                raise UniverseMismatch(f"coordinate {v!r} of {x!r} is not a vertex")

    def _with_edges(self, edges):
        g = object.__new__(DirectedHypergraph)
        g.k, g._vset, g.vertices = self.k, self._vset, self.vertices
        g._edges = frozenset(edges)
        return g

    def _key(self):
        return (self._vset, self.k, self._edges)

    def __repr__(self):
        return f"DirectedHypergraph(|V|={len(self.vertices)}, k={self.k}, |E|={len(self._edges)})"

    @property
    def universe_size(self) -> int:
        return len(self.vertices) ** self.k

    def total_maps_from(self, template: "DirectedHypergraph") -> int:
        return len(self.vertices) ** len(template.vertices)

    @functools.cached_property
    def _index(self):
        return {v: i for i, v in enumerate(self.vertices)}

    @functools.cached_property
    def _target(self) -> kernels.TargetIndex:
        idx = self._index
        arr = np.array([[idx[v] for v in e] for e in self._edges], dtype=np.int64).reshape(-1, self.k)
        return kernels.build_target_index(arr, len(self.vertices), self.k)

    def _decode_edge(self, gidx: Iterable[int]):
        return tuple(self.vertices[i] for i in gidx)


class PartiteHypergraph(_Hypergraph):
    """t-partite k-uniform hypergraph.

    Parts are indexed ``0..t-1`` and act as separate namespaces: the same
    label may occur in several parts. An edge is a pair ``(type, tuple)``
    where ``type`` is a strictly increasing k-tuple of part indices and
    ``tuple[j]`` lies in part ``type[j]``.
    """

    kind = "partite"

    def __init__(self, parts: Iterable[Iterable[Label]], k: int, edges: Iterable = ()):
        self._part_sets = tuple(frozenset(p) for p in parts)
        self.parts = tuple(tuple(sort_labels(p)) for p in self._part_sets)
        if not isinstance(k, int) or k < 1 or k > len(self.parts):
            raise InputError(f"arity k must satisfy 1 <= k <= t={len(self.parts)}, got {k!r}")
        self.k = k
        checked = set()
        for item in edges:
            etype, tup = item
            etype, tup = tuple(etype), tuple(tup)
            self._check_type(etype, BadEdgeType)
            self._check_coords(etype, tup, PartMismatch)
            checked.add((etype, tup))
        self._edges = frozenset(checked)

    @property
    def t(self) -> int:
        return len(self.parts)

    def _check_type(self, etype, error):
        if len(etype) != self.k:
            raise error(f"edge type {etype!r} has length {len(etype)}, expected k={self.k}")
        for a in etype:
            if not isinstance(a, (int, np.integer)) or not 0 <= a < self.t:
                raise error(f"edge type {etype!r} has index {a!r} outside 0..{self.t - 1}")
        if any(etype[i] >= etype[i + 1] for i in range(len(etype) - 1)):
            raise error(f"edge type {etype!r} is not strictly increasing")

    def _check_coords(self, etype, tup, error):
        if len(tup) != self.k:
            raise error(f"tuple {tup!r} has length {len(tup)}, expected k={self.k}")
        for a, v in zip(etype, tup):
            if v not in self._part_sets[a]:
                raise error(f"coordinate {v!r} of {tup!r} is not in part {a}")

    def check_in_universe(self, x):
        try:
            etype, tup = x
        except (TypeError, ValueError):
            raise UniverseMismatch(f"{x!r} is not a (type, tuple) pair") from None
        self._check_type(tuple(etype), UniverseMismatch)
        self._check_coords(tuple(etype), tuple(tup), UniverseMismatch)

    def _with_edges(self, edges):
        g = object.__new__(PartiteHypergraph)
        g._part_sets, g.parts, g.k = self._part_sets, self.parts, self.k
        g._edges = frozenset(edges)
        return g

    def _key(self):
        return (self._part_sets, self.k, self._edges)

    def __repr__(self):
        sizes = [len(p) for p in self.parts]
        return f"PartiteHypergraph(parts={sizes}, k={self.k}, |E|={len(self._edges)})"

    @property
    def num_vertices(self) -> int:
        return sum(len(p) for p in self.parts)

    def edge_types(self) -> list[tuple[int, ...]]:
        return list(combinations(range(self.t), self.k))

    @property
    def universe_size(self) -> int:
        """Number of typed tuples: sum over types of the product of part sizes."""
        return sum(math.prod(len(self.parts[a]) for a in ty) for ty in self.edge_types())

    def total_maps_from(self, template: "PartiteHypergraph") -> int:
        return math.prod(len(w) ** len(v) for v, w in zip(template.parts, self.parts))

    @functools.cached_property
    def _offsets(self) -> list[int]:
        off = [0]
        for p in self.parts:
            off.append(off[-1] + len(p))
        return off

    @functools.cached_property
    def _index(self):
        idx = {}
        for i, p in enumerate(self.parts):
            for j, v in enumerate(p):
                idx[(i, v)] = self._offsets[i] + j
        return idx

    @functools.cached_property
    def _flat_labels(self):
        return [(i, v) for i, p in enumerate(self.parts) for v in p]

    @functools.cached_property
    def _target(self) -> kernels.TargetIndex:
        idx = self._index
        arr = np.array([[idx[(a, v)] for a, v in zip(ty, tup)] for ty, tup in self._edges],
                       dtype=np.int64).reshape(-1, self.k)
        return kernels.build_target_index(arr, self.num_vertices, self.k)

    def _decode_edge(self, gidx: Iterable[int]):
        pairs = [self._flat_labels[i] for i in gidx]
        return (tuple(a for a, _ in pairs), tuple(v for _, v in pairs))

    def flatten(self) -> DirectedHypergraph:
        """Plain encoding on the disjoint union of parts; vertices become ``(part, label)``."""
        return DirectedHypergraph(
            self._flat_labels, self.k,
            [tuple(zip(ty, tup)) for ty, tup in self._edges])


def new_directed(vertices, k, edges) -> DirectedHypergraph:
    return DirectedHypergraph(vertices, k, edges)


def new_partite(parts, k, edges) -> PartiteHypergraph:
    return PartiteHypergraph(parts, k, edges)


def subtract(graph, removal):
    return graph.subtract(removal)


@dataclass(frozen=True)
class HomCount:
    count: int
    total_maps: int

    @property
    def density(self) -> Fraction:
        if self.total_maps == 0:
            return Fraction(0)
        return Fraction(self.count, self.total_maps)


@dataclass(frozen=True)
class Homomorphism:
    """A vertex map ``F -> G``.

    For partite graphs ``mapping`` is keyed by ``(part, label)`` pairs; use
    :meth:`part_maps` for the tuple of per-part maps.
    """

    mapping: Mapping
    partite: bool = False

    def __call__(self, v):
        return self.mapping[v]

    def part_maps(self, t: int) -> tuple[dict, ...]:
        maps = tuple({} for _ in range(t))
        for (i, v), (_, w) in self.mapping.items():
            maps[i][v] = w
        return maps

    def image_edge(self, edge):
        if self.partite:
            etype, tup = edge
            return (etype, tuple(self.mapping[(a, v)][1] for a, v in zip(etype, tup)))
        return tuple(self.mapping[v] for v in edge)

    def is_valid(self, template, target) -> bool:
        return all(self.image_edge(e) in target.edges for e in template.edges)


class _Plan:
    """Integer search plan for one (template, target) pair."""

    def __init__(self, template, target):
        if template.kind != target.kind:
            raise UniverseMismatch(f"cannot map a {template.kind} hypergraph into a {target.kind} one")
        if template.k != target.k:
            raise UniverseMismatch(f"arity mismatch: template k={template.k}, target k={target.k}")
        self.template, self.target = template, target
        if template.kind == "partite":
            if template.t != target.t:
                raise UniverseMismatch(f"part count mismatch: {template.t} vs {target.t}")
            fverts = template._flat_labels
            off = target._offsets
            ranges = [(off[i], off[i + 1]) for i, _ in fverts]
            fedges = [tuple(zip(ty, tup)) for ty, tup in template.sorted_edges()]
        else:
            fverts = list(template.vertices)
            n = len(target.vertices)
            ranges = [(0, n)] * len(fverts)
            fedges = template.sorted_edges()
        self.fverts = fverts
        self.ranges = ranges
        fidx = {v: i for i, v in enumerate(fverts)}
        self.fedges = [tuple(fidx[v] for v in e) for e in fedges]

        degree = [0] * len(fverts)
        for e in self.fedges:
            for v in e:
                degree[v] += 1
        self.order = sorted((v for v in range(len(fverts)) if degree[v]),
                            key=lambda v: (-degree[v], v))
        self.isolated = [v for v in range(len(fverts)) if not degree[v]]
        self.multiplier = math.prod(ranges[v][1] - ranges[v][0] for v in self.isolated)

        pos = {v: d for d, v in enumerate(self.order)}
        p = len(self.order)
        checks = []
        for e in self.fedges:
            ps = [pos[v] for v in e]
            d = max(ps)
            checks.append((d, ps, ps.index(d)))
        checks.sort(key=lambda c: c[0])
        chk_ptr = np.zeros(p + 1, dtype=np.int64)
        for d, _, _ in checks:
            chk_ptr[d + 1] += 1
        np.cumsum(chk_ptr, out=chk_ptr)
        k = template.k
        chk_pos = np.array([c[1] for c in checks], dtype=np.int64).reshape(-1, k)
        chk_j = np.array([c[2] for c in checks], dtype=np.int64)
        ti = target._target
        self.plan = kernels.SearchPlan(
            p=p, k=k, n=ti.n,
            lo=np.array([ranges[v][0] for v in self.order], dtype=np.int64),
            hi=np.array([ranges[v][1] for v in self.order], dtype=np.int64),
            chk_ptr=chk_ptr, chk_pos=chk_pos, chk_j=chk_j,
            dense=ti.dense, table=ti.table, codes=ti.codes, use_pivot=ti.use_pivot,
            cand_ptr=ti.cand_ptr, cand_vals=ti.cand_vals, nkeys=ti.nkeys)

    def full_assignment(self, row) -> list[int]:
        """Target indices for every template vertex; isolated ones take their first candidate."""
        full = [0] * len(self.fverts)
        for d, v in enumerate(self.order):
            full[v] = int(row[d])
        for v in self.isolated:
            full[v] = self.ranges[v][0]
        return full

    def to_homomorphism(self, row) -> Homomorphism:
        full = self.full_assignment(row)
        tg = self.target
        if tg.kind == "partite":
            mapping = {fv: tg._flat_labels[g] for fv, g in zip(self.fverts, full)}
            return Homomorphism(mapping, partite=True)
        return Homomorphism({fv: tg.vertices[g] for fv, g in zip(self.fverts, full)})


def _budget(budget):
    return DEFAULT_BUDGET if budget is None else int(budget)


def count_homomorphisms(template, target, budget: int | None = None, backend: str | None = None) -> HomCount:
    """Count all maps sending every template edge onto a target edge."""
    plan = _Plan(template, target)
    total = target.total_maps_from(template)
    if plan.multiplier == 0:
        return HomCount(0, total)
    c, _ = kernels.count(plan.plan, _budget(budget), backend)
    return HomCount(c * plan.multiplier, total)


def find_homomorphism(template, target, budget: int | None = None, backend: str | None = None):
    """The lexicographically first homomorphism (in search order), or None."""
    plan = _Plan(template, target)
    if plan.multiplier == 0:
        return None
    row = kernels.first(plan.plan, _budget(budget), backend)
    if row is None:
        return None
    return plan.to_homomorphism(row)


def is_free(template, target, budget: int | None = None, backend: str | None = None) -> bool:
    """True iff there is no homomorphism template -> target (early exit)."""
    return find_homomorphism(template, target, budget, backend) is None


def edge_images(template, target, budget: int | None = None, backend: str | None = None) -> list[frozenset]:
    """Deduplicated edge-image sets ``{f(e)}`` over all homomorphisms ``f``.

    Sorted by the sorted edge list of each set, so the output is canonical.
    """
    plan = _Plan(template, target)
    if plan.multiplier == 0 or not plan.fedges:
        return []
    rows = kernels.enumerate_all(plan.plan, _budget(budget), backend)
    if rows.shape[0] == 0:
        return []
    pos = {v: d for d, v in enumerate(plan.order)}
    n = plan.plan.n
    img = np.stack([kernels.edge_codes(rows[:, [pos[v] for v in e]], n) for e in plan.fedges], axis=1)
    img = np.unique(np.sort(img, axis=1), axis=0)
    decode = {}
    k = template.k
    out = set()
    for row in img:
        edges = []
        for code in row.tolist():
            if code not in decode:
                digits = []
                c = code
                for _ in range(k):
                    digits.append(c % n)
                    c //= n
                decode[code] = target._decode_edge(reversed(digits))
            edges.append(decode[code])
        out.add(frozenset(edges))
    return sorted(out, key=lambda s: sort_labels_key(s))


def sort_labels_key(edge_set):
    return tuple(label_key(e) for e in sort_labels(edge_set))
