"""Removal sets: copy enumeration, exact and greedy hitting sets, symmetrization."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import BudgetExceeded, CapExceeded, InputError, NotAutomorphism
from .groups import GroupAction, is_invariant, orbits_touching
from .hypergraph import edge_images, is_free, label_key, sort_labels


@dataclass(frozen=True)
class RemovalCertificate:
    removal_set: frozenset
    strategy: str
    universe_size: int
    freeness_checked: bool = False
    invariant_under: str | None = None

    @property
    def removed_count(self) -> int:
        return len(self.removal_set)

    @property
    def achieved_epsilon(self) -> Fraction:
        return Fraction(self.removed_count, self.universe_size) if self.universe_size else Fraction(0)

    def recheck(self, template, graph, budget=None) -> bool:
        return verify_removal(template, graph, self.removal_set, budget)

    def to_dict(self) -> dict:
        eps = self.achieved_epsilon
        return {
            "strategy": self.strategy,
            "removal_set": [_jsonable(e) for e in sort_labels(self.removal_set)],
            "removed_count": self.removed_count,
            "universe_size": self.universe_size,
            "achieved_epsilon": f"{eps.numerator}/{eps.denominator}",
            "freeness_checked": self.freeness_checked,
            "invariant_under": self.invariant_under,
        }


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


def _require_edges(template):
    if not template.edges:
        raise InputError("template has no edges: every map is a homomorphism and removal is meaningless")


def enumerate_copies(template, graph, budget=None, backend=None) -> list[frozenset]:
    """Deduplicated edge-image sets of all homomorphisms template -> graph."""
    _require_edges(template)
    return edge_images(template, graph, budget, backend)


def verify_removal(template, graph, removal: Iterable, budget=None) -> bool:
    return is_free(template, graph.subtract(removal), budget)


def _index_copies(copies):
    edges = sort_labels(set().union(*copies)) if copies else []
    pos = {e: i for i, e in enumerate(edges)}
    masks = []
    for c in copies:
        m = 0
        for e in c:
            m |= 1 << pos[e]
        masks.append(m)
    return edges, masks


def greedy_hitting_set(copies: list[frozenset]) -> list:
    """Repeatedly take the edge hitting most unhit copies (ties: least edge)."""
    alive = [c for c in copies]
    chosen = []
    while alive:
        cover = Counter(e for c in alive for e in c)
        best = max(cover.values())
        e = min((x for x, v in cover.items() if v == best), key=label_key)
        chosen.append(e)
        alive = [c for c in alive if e not in c]
    return chosen


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def _packing_bound(uncovered, forbidden):
    """Size of a greedy family of pairwise disjoint copies (allowed edges only).

    Returns None when some copy has no allowed edge left (infeasible node).
    """
    allowed = sorted((c & ~forbidden for c in uncovered), key=int.bit_count)
    if allowed and allowed[0] == 0:
        return None
    used = 0
    size = 0
    for c in allowed:
        if c & used == 0:
            used |= c
            size += 1
    return size


def min_hitting_set(copies: list[frozenset], node_budget: int | None = None) -> list:
    """Minimum-cardinality hitting set by branch and bound.

    Branches on the unhit copy with fewest allowed edges, trying its edges in
    sorted order (edges tried earlier are forbidden in later siblings). The
    greedy solution seeds the incumbent; it is replaced only by strictly
    smaller sets, so the result is deterministic.
    """
    if not copies:
        return []
    edges, masks = _index_copies(copies)
    best = greedy_hitting_set(copies)
    pos = {e: i for i, e in enumerate(edges)}
    best_mask = 0
    for e in best:
        best_mask |= 1 << pos[e]
    state = {"mask": best_mask, "size": len(best), "nodes": 0}

    def search(chosen, size, forbidden, uncovered):
        state["nodes"] += 1
        if node_budget is not None and state["nodes"] > node_budget:
            raise BudgetExceeded(f"hitting-set search exceeded {node_budget} nodes",
                                 nodes=state["nodes"], budget=node_budget)
        if not uncovered:
            if size < state["size"]:
                state["mask"], state["size"] = chosen, size
            return
        lb = _packing_bound(uncovered, forbidden)
        if lb is None or size + lb >= state["size"]:
            return
        pick = min(uncovered, key=lambda c: (c & ~forbidden).bit_count())
        for bit in _bits(pick & ~forbidden):
            search(chosen | bit, size + 1, forbidden, [c for c in uncovered if not c & bit])
            forbidden |= bit

    search(0, 0, 0, masks)
    return [edges[i] for i in range(len(edges)) if state["mask"] >> i & 1]


def min_removal_exact(template, graph, cap: int | None = None, budget=None,
                      node_budget: int | None = None) -> RemovalCertificate:
    copies = enumerate_copies(template, graph, budget)
    if cap is not None and len(copies) > cap:
        raise CapExceeded(f"{len(copies)} copies exceed the cap of {cap}")
    chosen = frozenset(min_hitting_set(copies, node_budget))
    ok = verify_removal(template, graph, chosen, budget)
    return RemovalCertificate(chosen, "exact", graph.universe_size, freeness_checked=ok)


def greedy_removal(template, graph, budget=None) -> RemovalCertificate:
    copies = enumerate_copies(template, graph, budget)
    chosen = frozenset(greedy_hitting_set(copies))
    ok = verify_removal(template, graph, chosen, budget)
    return RemovalCertificate(chosen, "greedy", graph.universe_size, freeness_checked=ok)


def find_removal(template, graph, strategy: str = "exact", budget=None) -> RemovalCertificate:
    if strategy == "exact":
        return min_removal_exact(template, graph, budget=budget)
    if strategy == "greedy":
        return greedy_removal(template, graph, budget)
    raise InputError(f"unknown strategy {strategy!r} (expected exact or greedy)")


def check_automorphisms(graph, action: GroupAction):
    """Raise NotAutomorphism unless every generator maps edges(G) onto edges(G)."""
    edges = graph.edges
    for i, g in enumerate(action.generators):
        for e in sort_labels(edges):
            action.check(e)
            if action.apply(g, e) not in edges:
                raise NotAutomorphism(i, e)


def symmetrize(graph, m: int, removal: Iterable, action: GroupAction) -> frozenset:
    """Union of the orbits O meeting ``removal`` with ``|O| <= m * |O ∩ removal|``."""
    if not isinstance(m, int) or m < 1:
        raise InputError(f"template edge count m must be a positive integer, got {m!r}")
    removal = set(removal)
    for x in removal:
        graph.check_in_universe(x)
    check_automorphisms(graph, action)
    out = set()
    for orbit in orbits_touching(action, removal):
        if orbit.size <= m * orbit.hits:
            out |= orbit.members
    return frozenset(out)


@dataclass(frozen=True)
class SymmetrizationReport:
    raw: RemovalCertificate
    symmetrized: RemovalCertificate
    factor: int
    invariant: bool
    automorphisms_preserved: bool

    @property
    def size_bound_holds(self) -> bool:
        return self.symmetrized.removed_count <= self.factor * self.raw.removed_count

    def to_dict(self) -> dict:
        return {
            "raw": self.raw.to_dict(),
            "symmetrized": self.symmetrized.to_dict(),
            "size_bound": f"{self.symmetrized.removed_count} ≤ {self.factor}·{self.raw.removed_count}",
            "size_bound_holds": self.size_bound_holds,
            "invariant": self.invariant,
            "automorphisms_preserved": self.automorphisms_preserved,
        }


def symmetrize_removal(template, graph, raw: RemovalCertificate, action: GroupAction,
                       budget=None) -> SymmetrizationReport:
    """Symmetrize a removal certificate and re-verify everything it claims."""
    _require_edges(template)
    m = len(template.edges)
    sym = symmetrize(graph, m, raw.removal_set, action)
    free = verify_removal(template, graph, sym, budget)
    rest = graph.subtract(sym)
    preserved = all(action.apply(g, e) in rest.edges for g in action.generators for e in rest.edges)
    cert = RemovalCertificate(sym, raw.strategy, graph.universe_size, freeness_checked=free,
                              invariant_under=action.name or "action")
    return SymmetrizationReport(raw, cert, m, is_invariant(action, sym), preserved)


__all__ = [
    "RemovalCertificate", "SymmetrizationReport", "check_automorphisms", "enumerate_copies",
    "find_removal", "greedy_hitting_set", "greedy_removal", "min_hitting_set",
    "min_removal_exact", "symmetrize", "symmetrize_removal", "verify_removal",
]
