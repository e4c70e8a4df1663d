"""Cayley hypergraphs H_{k,t}(A, {S_i}, C) over cyclic products, and the
arithmetic-progression family.

Parts are indexed ``0..t-1``; every part is a copy of the group A. An edge of
type ``C_i`` is a tuple ``r`` in ``A^{C_i}`` with ``psi_i(r)`` in ``S_i``, where
``psi_i(r) = sum_j c_j r_j`` for integer coefficients ``c_j``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import BadEdgeType, BudgetExceeded, InputError, KernelMismatch, NotAbelian
from .groups import FiniteGroup, GroupAction, PartitePermutation, Permutation
from .hypergraph import DEFAULT_BUDGET, PartiteHypergraph, count_homomorphisms
from .removal import RemovalCertificate, SymmetrizationReport, find_removal, symmetrize_removal

CLOSURE_CAP = 10**6


@dataclass(frozen=True)
class PsiSpec:
    """Linear form ``r -> sum_j coeffs[j] * r_j`` on the coordinates of ``edge_type``."""

    edge_type: tuple[int, ...]
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "edge_type", tuple(int(a) for a in self.edge_type))
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.edge_type) != len(self.coeffs):
            raise InputError(f"psi for type {self.edge_type} needs {len(self.edge_type)} coefficients")

    def __call__(self, group: FiniteGroup, r: Sequence):
        comps = group.components()
        total = sum(c * comps[group.index(x)] for c, x in zip(self.coeffs, r))
        return group.elements[int(group.encode_components(total))]

    def values(self, group: FiniteGroup) -> np.ndarray:
        """Element index of ``psi(r)`` for every ``r`` in ``A^k``, in lexicographic order of ``r``."""
        n, k = group.order, len(self.coeffs)
        comps = group.components()
        grid = np.indices((n,) * k).reshape(k, -1)
        total = np.zeros((grid.shape[1], comps.shape[1]), dtype=np.int64)
        for c, col in zip(self.coeffs, grid):
            total += c * comps[col]
        return group.encode_components(total)


@dataclass(frozen=True)
class SubgroupSpec:
    """Subgroup H of A^t given by generators (t-tuples of elements of A)."""

    generators: tuple

    def closure(self, group: FiniteGroup, t: int, cap: int = CLOSURE_CAP) -> frozenset:
        """Every element of H as a t-tuple of element indices."""
        gens = []
        for h in self.generators:
            h = tuple(h)
            if len(h) != t:
                raise InputError(f"subgroup generator {h!r} must have {t} coordinates")
            gens.append(tuple(group.index(x) for x in h))
        mult = group.mult_table
        zero = (group.index(group.identity),) * t
        seen = {zero}
        frontier = [zero]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = tuple(int(mult[a, b]) for a, b in zip(x, g))
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
                        if len(seen) > cap:
                            raise BudgetExceeded(f"subgroup closure exceeds {cap} elements",
                                                 nodes=len(seen), budget=cap)
            frontier = nxt
        return frozenset(seen)


@dataclass(frozen=True)
class CayleyHypergraphInstance:
    group: FiniteGroup
    t: int
    k: int
    psi_specs: tuple[PsiSpec, ...]
    sets: tuple[frozenset, ...]
    subgroup: SubgroupSpec
    graph: PartiteHypergraph

    def psi_for_type(self, edge_type) -> PsiSpec:
        for psi in self.psi_specs:
            if psi.edge_type == tuple(edge_type):
                return psi
        raise BadEdgeType(f"no psi map for edge type {edge_type!r}")

    def level_of(self, edge) -> tuple[int, object]:
        """``(i, psi_i(r))`` for an edge ``(C_i, r)``."""
        etype, tup = edge
        for i, psi in enumerate(self.psi_specs):
            if psi.edge_type == tuple(etype):
                return i, psi(self.group, tup)
        raise BadEdgeType(f"no psi map for edge type {etype!r}")

    def action(self) -> GroupAction:
        """H acting on part i by translation with h_i."""
        return h_translation_action(self.group, self.t, self.k, self.subgroup)


def h_translation_action(group: FiniteGroup, t: int, k: int, subgroup: SubgroupSpec) -> GroupAction:
    gens = []
    for h in subgroup.generators or [(group.identity,) * t]:
        gens.append(PartitePermutation(
            Permutation({v: group.multiply(h[i], v) for v in group.elements}) for i in range(t)))
    return GroupAction(tuple(gens), k, name="H-translation")


def _require_cyclic(group: FiniteGroup):
    if group.kind != "cyclic-product":
        if not group.is_abelian():
            raise NotAbelian("Cayley hypergraphs need an Abelian group")
        raise InputError("give the Abelian group in cyclic-product form")


def build_instance(group: FiniteGroup, t: int, k: int, psi_specs: Iterable[PsiSpec],
                   sets: Iterable[Iterable], subgroup: SubgroupSpec,
                   budget: int | None = None, closure_cap: int = CLOSURE_CAP) -> CayleyHypergraphInstance:
    """Realize the union of the level sets psi_i^{-1}(S_i), after certifying
    that ker psi_i equals the projection of H to C_i."""
    _require_cyclic(group)
    psi_specs = tuple(psi_specs)
    sets = tuple(frozenset(s) for s in sets)
    if len(sets) != len(psi_specs):
        raise InputError(f"{len(psi_specs)} psi maps but {len(sets)} level sets")
    if not 1 <= k <= t:
        raise InputError(f"need 1 <= k <= t, got k={k}, t={t}")
    for s in sets:
        for x in s:
            group.index(x)
    types = [psi.edge_type for psi in psi_specs]
    if len(set(types)) != len(types):
        raise BadEdgeType("psi maps must have pairwise distinct edge types")
    n = group.order
    budget = DEFAULT_BUDGET if budget is None else budget
    if n**k > budget:
        raise BudgetExceeded(f"|A|^k = {n**k} tuples per type exceed the budget {budget}",
                             nodes=n**k, budget=budget)
    skeleton = PartiteHypergraph([group.elements] * t, k)
    for ty in types:
        skeleton._check_type(ty, BadEdgeType)

    members = subgroup.closure(group, t, closure_cap)
    for psi in psi_specs:
        for h in subgroup.generators:
            value = psi(group, [h[a] for a in psi.edge_type])
            if value != group.identity:
                raise KernelMismatch(f"psi on type {psi.edge_type} sends generator {h!r} to {value!r}")
        vals = psi.values(group)
        if len(np.unique(vals)) != n:
            raise KernelMismatch(f"psi on type {psi.edge_type} is not surjective")
        proj = {tuple(h[a] for a in psi.edge_type) for h in members}
        if len(proj) != n ** (k - 1):
            raise KernelMismatch(
                f"projection of H to type {psi.edge_type} has {len(proj)} elements, expected {n ** (k - 1)}")

    edges = []
    for psi, s in zip(psi_specs, sets):
        mask = np.zeros(n, dtype=bool)
        for x in s:
            mask[group.index(x)] = True
        hit = np.flatnonzero(mask[psi.values(group)])
        if len(hit) == 0:
            continue
        digits = np.array(np.unravel_index(hit, (n,) * k)).T
        els = group.elements
        edges.extend((psi.edge_type, tuple(els[i] for i in row)) for row in digits.tolist())
    graph = PartiteHypergraph([group.elements] * t, k, edges)
    return CayleyHypergraphInstance(group, t, k, psi_specs, sets, subgroup, graph)


def ap_types(t: int) -> list[tuple[int, ...]]:
    return [tuple(j for j in range(t) if j != i) for i in range(t)]


def ap_psi_specs(t: int) -> list[PsiSpec]:
    """psi_i(r) = sum over j != i of (j - i) r_j."""
    return [PsiSpec(ty, tuple(j - i for j in ty)) for i, ty in enumerate(ap_types(t))]


def ap_subgroup(group: FiniteGroup, t: int) -> SubgroupSpec:
    """Generators of {a in A^t : sum a_i = 0, sum i*a_i = 0}.

    Coordinates 2..t-1 are free; for a unit e placed at coordinate q the two
    constraints force a_1 = -q*e and a_0 = (q-1)*e.
    """
    zero = group.identity
    gens = []
    for q in range(2, t):
        for e in group.generators():
            h = [zero] * t
            h[q] = e
            h[1] = group.scale(-q, e)
            h[0] = group.scale(q - 1, e)
            gens.append(tuple(h))
    return SubgroupSpec(tuple(gens))


def ap_instance(group: FiniteGroup, t: int, sets: Sequence[Iterable], budget: int | None = None) -> CayleyHypergraphInstance:
    if t < 3:
        raise InputError(f"the progression family needs t >= 3, got {t}")
    sets = list(sets)
    if len(sets) != t:
        raise InputError(f"expected {t} sets, got {len(sets)}")
    _require_cyclic(group)
    return build_instance(group, t, t - 1, ap_psi_specs(t), sets, ap_subgroup(group, t), budget)


def complete_partite_template(t: int) -> PartiteHypergraph:
    """t single-vertex parts; for each i one edge on every part except i."""
    if t < 3:
        raise InputError(f"template needs t >= 3, got {t}")
    return PartiteHypergraph([[i] for i in range(t)], t - 1, [(ty, ty) for ty in ap_types(t)])


def _membership(group: FiniteGroup, subset) -> np.ndarray:
    mask = np.zeros(group.order, dtype=bool)
    for x in subset:
        mask[group.index(x)] = True
    return mask


def count_diagonal_aps(group: FiniteGroup, t: int, sets: Sequence[Iterable]) -> int:
    """Number of pairs (x, d) in A^2 with x + i*d in S_i for i = 0..t-1."""
    _require_cyclic(group)
    sets = list(sets)
    if len(sets) != t:
        raise InputError(f"expected {t} sets, got {len(sets)}")
    comps = group.components()
    x = comps[:, None, :]
    d = comps[None, :, :]
    alive = np.ones((group.order, group.order), dtype=bool)
    for i, s in enumerate(sets):
        alive &= _membership(group, s)[group.encode_components(x + i * d)]
    return int(alive.sum())


class APReport(NamedTuple):
    ap_count: int
    hom_count: int
    multiplicity: int
    consistent: bool


def verify_ap_correspondence(group: FiniteGroup, t: int, sets: Sequence[Iterable], budget=None) -> APReport:
    inst = ap_instance(group, t, sets, budget)
    homs = count_homomorphisms(complete_partite_template(t), inst.graph, budget).count
    aps = count_diagonal_aps(group, t, sets)
    mult = group.order ** (t - 2)
    return APReport(aps, homs, mult, homs == mult * aps)


def shrink_sets_from(instance: CayleyHypergraphInstance, removal: Iterable) -> tuple[frozenset, ...]:
    """Map each removed edge of type C_i to its level ``psi_i(r)``, intersected with S_i."""
    labels = [set() for _ in instance.psi_specs]
    for edge in removal:
        i, x = instance.level_of(edge)
        labels[i].add(x)
    return tuple(frozenset(l) & s for l, s in zip(labels, instance.sets))


@dataclass(frozen=True)
class DiagonalResult:
    instance: CayleyHypergraphInstance
    shrink_sets: tuple[frozenset, ...]
    remaining_aps: int
    report: SymmetrizationReport

    @property
    def raw(self) -> RemovalCertificate:
        return self.report.raw

    @property
    def certificate(self) -> RemovalCertificate:
        return self.report.symmetrized

    @property
    def shrunk_sets(self) -> tuple[frozenset, ...]:
        return tuple(s - r for s, r in zip(self.instance.sets, self.shrink_sets))

    def reconstructs(self) -> bool:
        """Instance built from the shrunk sets equals the instance minus S'."""
        inst = self.instance
        rebuilt = ap_instance(inst.group, inst.t, self.shrunk_sets)
        return rebuilt.graph == inst.graph.subtract(self.certificate.removal_set)


def diagonal_pipeline(group: FiniteGroup, t: int, sets: Sequence[Iterable], strategy: str = "greedy",
                      budget=None) -> DiagonalResult:
    """Shrink each S_i so no diagonal t-term progression survives."""
    inst = ap_instance(group, t, sets, budget)
    template = complete_partite_template(t)
    raw = find_removal(template, inst.graph, strategy, budget)
    report = symmetrize_removal(template, inst.graph, raw, inst.action(), budget)
    shrink = shrink_sets_from(inst, report.symmetrized.removal_set)
    remaining = count_diagonal_aps(group, t, [s - r for s, r in zip(inst.sets, shrink)])
    return DiagonalResult(inst, shrink, remaining, report)
