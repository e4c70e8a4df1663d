"""Permutations, finite groups and group actions on tuple universes.

Orbits are always computed by breadth-first closure under the generators;
the group itself is never enumerated for orbit purposes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import (BadModulus, InputError, NoIdentity, NoInverse, NotAssociative,
                     NotClosed, UniverseMismatch, UnknownElement)
from .hypergraph import label_key, sort_labels


class Permutation:
    """A bijection of a finite vertex set, stored as a total mapping."""

    __slots__ = ("_map", "domain")

    def __init__(self, mapping: Mapping, domain: Iterable | None = None):
        mapping = dict(mapping)
        dom = frozenset(mapping) if domain is None else frozenset(domain)
        for v in dom:
            mapping.setdefault(v, v)
        if set(mapping) != dom:
            extra = sort_labels(set(mapping) - dom)
            raise UniverseMismatch(f"permutation moves points outside its domain: {extra!r}")
        if set(mapping.values()) != dom:
            raise InputError("mapping is not a bijection of its domain")
        self._map = mapping
        self.domain = dom

    @classmethod
    def identity(cls, domain: Iterable) -> "Permutation":
        return cls({}, domain)

    def __call__(self, v):
        return self._map[v]

    def items(self):
        return self._map.items()

    def is_identity(self) -> bool:
        return all(k == v for k, v in self._map.items())

    def __eq__(self, other):
        return isinstance(other, Permutation) and self._map == other._map

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def __repr__(self):
        moved = {k: v for k, v in self._map.items() if k != v}
        return f"Permutation({moved!r})"


class PartitePermutation(tuple):
    """Tuple of per-part permutations ``(pi_0, ..., pi_{t-1})``."""

    def __new__(cls, perms: Iterable[Permutation]):
        perms = tuple(perms)
        for p in perms:
            if not isinstance(p, Permutation):
                raise InputError("PartitePermutation needs Permutation entries")
        return super().__new__(cls, perms)


@dataclass(frozen=True)
class GroupAction:
    """Coordinatewise action of a generated group on k-tuples.

    For partite actions the universe elements are ``(type, tuple)`` pairs
    and coordinate ``j`` is moved by the permutation of part ``type[j]``.
    """

    generators: tuple
    k: int
    name: str | None = None
    partite: bool = field(init=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise InputError("a group action needs at least one generator")
        partite = isinstance(gens[0], PartitePermutation)
        if any(isinstance(g, PartitePermutation) != partite for g in gens):
            raise InputError("cannot mix plain and partite generators")
        if partite:
            domains = [tuple(p.domain for p in g) for g in gens]
        else:
            domains = [g.domain for g in gens]
        if any(d != domains[0] for d in domains):
            raise UniverseMismatch("generators act on different vertex universes")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "partite", partite)

    @property
    def domain(self):
        g = self.generators[0]
        return tuple(p.domain for p in g) if self.partite else g.domain

    def check(self, x):
        if self.partite:
            try:
                etype, tup = x
            except (TypeError, ValueError):
                raise UniverseMismatch(f"{x!r} is not a (type, tuple) pair") from None
            dom = self.domain
            if len(etype) != self.k or len(tup) != self.k:
                raise UniverseMismatch(f"{x!r} does not have arity {self.k}")
            for a, v in zip(etype, tup):
                if not (isinstance(a, (int, np.integer)) and 0 <= a < len(dom)) or v not in dom[a]:
                    raise UniverseMismatch(f"coordinate {v!r} of {x!r} is outside part {a!r}")
        else:
            if not isinstance(x, tuple) or len(x) != self.k:
                raise UniverseMismatch(f"{x!r} is not a {self.k}-tuple")
            dom = self.domain
            for v in x:
                if v not in dom:
                    raise UniverseMismatch(f"coordinate {v!r} of {x!r} is outside the action's universe")

    def apply(self, g, x):
        if self.partite:
            etype, tup = x
            return (etype, tuple(g[a](v) for a, v in zip(etype, tup)))
        return tuple(g(v) for v in x)


@dataclass(frozen=True)
class Orbit:
    members: frozenset
    hits: int

    @property
    def size(self) -> int:
        return len(self.members)


def orbit_of_tuple(action: GroupAction, x) -> frozenset:
    """Smallest generator-closed set containing ``x`` (BFS, sorted frontier)."""
    action.check(x)
    return _closure(action, x)


def _closure(action: GroupAction, x) -> frozenset:
    seen = {x}
    frontier = [x]
    while frontier:
        nxt = set()
        for y in frontier:
            for g in action.generators:
                z = action.apply(g, y)
                if z not in seen:
                    seen.add(z)
                    nxt.add(z)
        frontier = sort_labels(nxt)
    return frozenset(seen)


def orbits_touching(action: GroupAction, tuples: Iterable) -> list[Orbit]:
    """Orbits meeting ``tuples``, each annotated with ``|O ∩ tuples|``.

    Returned in order of their least member.
    """
    tuples = set(tuples)
    for x in tuples:
        action.check(x)
    remaining = set(tuples)
    orbits = []
    for x in sort_labels(tuples):
        if x not in remaining:
            continue
        members = _closure(action, x)
        remaining -= members
        orbits.append(Orbit(members, len(members & tuples)))
    return orbits


def is_invariant(action: GroupAction, tuples: Iterable) -> bool:
    """True iff every generator maps the set onto itself."""
    tuples = set(tuples)
    for x in tuples:
        action.check(x)
    return all(action.apply(g, x) in tuples for g in action.generators for x in tuples)


class FiniteGroup:
    """A finite group, either a product of cyclic groups or a Cayley table.

    Cyclic products with one factor use plain int elements; with several
    factors, elements are tuples of residues. Use :func:`cyclic_product_group`
    and :func:`table_group` rather than calling this directly.
    """

    def __init__(self, elements: Sequence, mult: np.ndarray, identity, kind: str,
                 moduli: tuple[int, ...] | None = None):
        self.elements = tuple(elements)
        self._index = {x: i for i, x in enumerate(self.elements)}
        self._mult = mult
        self._inv = np.empty(len(self.elements), dtype=np.int64)
        e = self._index[identity]
        for i in range(len(self.elements)):
            self._inv[i] = int(np.flatnonzero(mult[i] == e)[0])
        self.identity = identity
        self.kind = kind
        self.moduli = moduli

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        if self.kind == "cyclic-product":
            return f"FiniteGroup(cyclic-product {list(self.moduli)})"
        return f"FiniteGroup(table, order {self.order})"

    def index(self, x) -> int:
        try:
            return self._index[x]
        except (KeyError, TypeError):
            raise UnknownElement(f"{x!r} is not an element of {self!r}") from None

    def __contains__(self, x):
        try:
            return x in self._index
        except TypeError:
            return False

    def multiply(self, a, b):
        return self.elements[self._mult[self.index(a), self.index(b)]]

    def invert(self, a):
        return self.elements[self._inv[self.index(a)]]

    @property
    def mult_table(self) -> np.ndarray:
        """Index-level multiplication table (read-only view)."""
        view = self._mult.view()
        view.flags.writeable = False
        return view

    @property
    def inverse_table(self) -> np.ndarray:
        view = self._inv.view()
        view.flags.writeable = False
        return view

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self._mult, self._mult.T))

    def generators(self) -> list:
        """Canonical generating set: unit vectors of nontrivial cyclic factors,
        or every non-identity element of a table group."""
        if self.kind == "cyclic-product":
            gens = []
            for f, n in enumerate(self.moduli):
                if n > 1:
                    unit = tuple(1 if i == f else 0 for i in range(len(self.moduli)))
                    gens.append(unit[0] if len(self.moduli) == 1 else unit)
            return gens or [self.identity]
        return [x for x in self.elements if x != self.identity] or [self.identity]

    def components(self) -> np.ndarray:
        """Residue components of every element, shape ``(order, factors)``."""
        if self.kind != "cyclic-product":
            raise InputError("components are only defined for cyclic products")
        return np.array(list(product(*(range(n) for n in self.moduli))), dtype=np.int64).reshape(
            self.order, len(self.moduli))

    def encode_components(self, comps: np.ndarray) -> np.ndarray:
        """Element indices of residue rows (reduced modulo each factor)."""
        comps = np.asarray(comps, dtype=np.int64) % np.array(self.moduli, dtype=np.int64)
        idx = np.zeros(comps.shape[:-1], dtype=np.int64)
        for f, n in enumerate(self.moduli):
            idx = idx * n + comps[..., f]
        return idx

    def scale(self, c: int, a):
        """``c * a`` by repeated addition in an Abelian cyclic product."""
        comps = self.components()[self.index(a)]
        return self.elements[int(self.encode_components(c * comps))]

    def check_associative(self):
        m = self._mult
        left = m[m, :]          # (a*b)*c indexed [a, b, c]
        right = m[:, m]         # a*(b*c) indexed [a, b, c]
        bad = np.argwhere(left != right)
        if len(bad):
            a, b, c = (self.elements[i] for i in bad[0])
            raise NotAssociative(f"({a!r}*{b!r})*{c!r} != {a!r}*({b!r}*{c!r})")


def cyclic_product_group(moduli: Sequence[int]) -> FiniteGroup:
    """Z_{n_1} x ... x Z_{n_m} under componentwise addition."""
    moduli = tuple(int(n) for n in moduli)
    if not moduli:
        raise BadModulus("at least one modulus is required")
    for n in moduli:
        if n < 1:
            raise BadModulus(f"modulus must be a positive integer, got {n}")
    comps = np.array(list(product(*(range(n) for n in moduli))), dtype=np.int64).reshape(-1, len(moduli))
    order = comps.shape[0]
    mods = np.array(moduli, dtype=np.int64)
    summed = (comps[:, None, :] + comps[None, :, :]) % mods
    mult = np.zeros((order, order), dtype=np.int64)
    for f, n in enumerate(moduli):
        mult = mult * n + summed[..., f]
    if len(moduli) == 1:
        elements = [int(c[0]) for c in comps]
        identity = 0
    else:
        elements = [tuple(int(x) for x in c) for c in comps]
        identity = tuple(0 for _ in moduli)
    return FiniteGroup(elements, mult, identity, "cyclic-product", moduli)


def table_group(elements: Sequence, table: Sequence[Sequence], verify_assoc: bool = False) -> FiniteGroup:
    """Group from a Cayley table with ``table[i][j] = elements[i] * elements[j]``."""
    elements = list(elements)
    index = {}
    for i, x in enumerate(elements):
        label_key(x)
        if x in index:
            raise InputError(f"duplicate element {x!r}")
        index[x] = i
    n = len(elements)
    if n == 0:
        raise NoIdentity("empty element list")
    if len(table) != n or any(len(row) != n for row in table):
        raise NotClosed(f"table must be {n}x{n}")
    mult = np.zeros((n, n), dtype=np.int64)
    for i, row in enumerate(table):
        for j, x in enumerate(row):
            if x not in index:
                raise NotClosed(f"{elements[i]!r}*{elements[j]!r} = {x!r} is not an element")
            mult[i, j] = index[x]
    ar = np.arange(n)
    ids = [e for e in range(n) if np.array_equal(mult[e], ar) and np.array_equal(mult[:, e], ar)]
    if not ids:
        raise NoIdentity("no two-sided identity element")
    e = ids[0]
    for i in range(n):
        if not (np.any((mult[i] == e) & (mult[:, i] == e))):
            raise NoInverse(f"{elements[i]!r} has no two-sided inverse")
    full = np.arange(n)
    for i in range(n):
        if not (np.array_equal(np.sort(mult[i]), full) and np.array_equal(np.sort(mult[:, i]), full)):
            raise NoInverse(f"row/column of {elements[i]!r} is not a permutation (cancellation fails)")
    group = FiniteGroup(elements, mult, elements[e], "table")
    if verify_assoc:
        group.check_associative()
    return group


def symmetric_group_table(letters: int = 3):
    """Elements and Cayley table of the symmetric group on ``letters`` points.

    Elements are the permutations' one-line notations as strings, e.g. ``"021"``;
    composition is ``(p*q)(i) = p(q(i))``.
    """
    from itertools import permutations

    perms = list(permutations(range(letters)))
    names = ["".join(map(str, p)) for p in perms]
    lookup = {p: s for p, s in zip(perms, names)}
    table = [[lookup[tuple(p[q[i]] for i in range(letters))] for q in perms] for p in perms]
    return names, table


def translation_permutations(group: FiniteGroup, elements: Iterable) -> list[Permutation]:
    """Right translations ``v -> v*g`` of the group's underlying set."""
    out = []
    for g in elements:
        out.append(Permutation({v: group.multiply(v, g) for v in group.elements}))
    return out


__all__ = [
    "FiniteGroup", "GroupAction", "Orbit", "PartitePermutation", "Permutation",
    "cyclic_product_group", "is_invariant", "orbit_of_tuple", "orbits_touching",
    "symmetric_group_table", "table_group", "translation_permutations",
]
