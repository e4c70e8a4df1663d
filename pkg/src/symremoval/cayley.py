"""Cayley graphs Cy(T, S), the triangle / ab=c correspondence and Green-type shrinking."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import DiagonalPair, IdentityInConnectionSet
from .groups import FiniteGroup, GroupAction, translation_permutations
from .hypergraph import DirectedHypergraph, count_homomorphisms
from .removal import RemovalCertificate, SymmetrizationReport, find_removal, symmetrize_removal

TRIANGLE = DirectedHypergraph({1, 2, 3}, 2, [(1, 2), (1, 3), (2, 3)])


@dataclass(frozen=True)
class CayleyGraph:
    group: FiniteGroup
    connection_set: frozenset
    graph: DirectedHypergraph


def _check_set(group: FiniteGroup, subset: Iterable) -> frozenset:
    subset = frozenset(subset)
    for s in subset:
        group.index(s)
    return subset


def cayley_graph(group: FiniteGroup, subset: Iterable) -> CayleyGraph:
    """Pairs ``(a, b)`` with ``a * b^-1`` in the connection set."""
    subset = _check_set(group, subset)
    if group.identity in subset:
        raise IdentityInConnectionSet(f"identity {group.identity!r} is in the connection set")
    edges = []
    for b in group.elements:
        for s in subset:
            edges.append((group.multiply(s, b), b))
    return CayleyGraph(group, subset, DirectedHypergraph(group.elements, 2, edges))


def count_schur_solutions(group: FiniteGroup, subset: Iterable) -> int:
    """Number of pairs ``(a, b)`` in S x S with ``a * b`` in S."""
    subset = _check_set(group, subset)
    return sum(1 for a in subset for b in subset if group.multiply(a, b) in subset)


class TriangleIdentity(NamedTuple):
    hom_count: int
    solution_count: int
    holds: bool


def verify_triangle_identity(group: FiniteGroup, subset: Iterable, budget=None) -> TriangleIdentity:
    cy = cayley_graph(group, subset)
    homs = count_homomorphisms(TRIANGLE, cy.graph, budget).count
    sols = count_schur_solutions(group, cy.connection_set)
    return TriangleIdentity(homs, sols, homs == group.order * sols)


def translation_action(group: FiniteGroup) -> GroupAction:
    """Diagonal right translations ``(a, b) -> (ag, bg)`` by a generating set."""
    perms = translation_permutations(group, group.generators())
    return GroupAction(tuple(perms), 2, name="right-translation")


def edge_orbit_label(group: FiniteGroup, edge) -> object:
    a, b = edge
    if a == b:
        raise DiagonalPair(f"{edge!r} lies on the diagonal")
    return group.multiply(a, group.invert(b))


@dataclass(frozen=True)
class GreenResult:
    shrink_set: frozenset
    remaining_solutions: int
    report: SymmetrizationReport

    @property
    def raw(self) -> RemovalCertificate:
        return self.report.raw

    @property
    def certificate(self) -> RemovalCertificate:
        return self.report.symmetrized


def green_pipeline(group: FiniteGroup, subset: Iterable, strategy: str = "exact", budget=None) -> GreenResult:
    """Shrink S so that ab=c has no solution, via symmetric triangle removal."""
    cy = cayley_graph(group, subset)
    raw = find_removal(TRIANGLE, cy.graph, strategy, budget)
    report = symmetrize_removal(TRIANGLE, cy.graph, raw, translation_action(group), budget)
    labels = {edge_orbit_label(group, e) for e in report.symmetrized.removal_set}
    shrink = frozenset(labels) & cy.connection_set
    remaining = count_schur_solutions(group, cy.connection_set - shrink)
    return GreenResult(shrink, remaining, report)
