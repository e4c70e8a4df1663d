"""Structured (JSON) text formats for hypergraphs, groups, actions, instances."""
from __future__ import annotations

import json
from pathlib import Path

from .cayley_hyper import (CayleyHypergraphInstance, PsiSpec, SubgroupSpec, ap_instance,
                           build_instance)
from .errors import InputError
from .groups import (FiniteGroup, GroupAction, PartitePermutation, Permutation,
                     cyclic_product_group, table_group)
from .hypergraph import DirectedHypergraph, PartiteHypergraph, sort_labels


class ParseError(InputError):
    pass


def tuplify(x):
    """JSON lists become tuples, recursively, so they can serve as labels."""
    if isinstance(x, list):
        return tuple(tuplify(y) for y in x)
    return x


def listify(x):
    if isinstance(x, (tuple, list)):
        return [listify(y) for y in x]
    return x


def read_json(path) -> object:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def _field(obj, name, where):
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object, got {type(obj).__name__}")
    if name not in obj:
        raise ParseError(f"{where}: missing field {name!r}")
    return obj[name]


def load_hypergraph(obj, where="hypergraph"):
    kind = _field(obj, "kind", where)
    k = _field(obj, "k", where)
    if not isinstance(k, int):
        raise ParseError(f"{where}.k: expected an integer, got {k!r}")
    raw_edges = obj.get("edges", [])
    if kind == "directed":
        vertices = [tuplify(v) for v in _field(obj, "vertices", where)]
        edges = []
        for i, e in enumerate(raw_edges):
            if not isinstance(e, list):
                raise ParseError(f"{where}.edges[{i}]: expected a list, got {e!r}")
            edges.append(tuplify(e))
        return DirectedHypergraph(vertices, k, edges)
    if kind == "partite":
        parts = [[tuplify(v) for v in p] for p in _field(obj, "parts", where)]
        edges = []
        for i, e in enumerate(raw_edges):
            etype = _field(e, "type", f"{where}.edges[{i}]")
            tup = _field(e, "tuple", f"{where}.edges[{i}]")
            edges.append((tuple(etype), tuplify(tup)))
        return PartiteHypergraph(parts, k, edges)
    raise ParseError(f"{where}.kind: expected 'directed' or 'partite', got {kind!r}")


def dump_hypergraph(g) -> dict:
    if isinstance(g, PartiteHypergraph):
        return {
            "kind": "partite", "k": g.k,
            "parts": [listify(list(p)) for p in g.parts],
            "edges": [{"type": list(ty), "tuple": listify(tup)} for ty, tup in g.sorted_edges()],
        }
    return {
        "kind": "directed", "k": g.k,
        "vertices": listify(list(g.vertices)),
        "edges": [listify(e) for e in g.sorted_edges()],
    }


def load_group(obj, where="group", verify_assoc=False) -> FiniteGroup:
    kind = _field(obj, "type", where)
    if kind == "cyclic-product":
        return cyclic_product_group(_field(obj, "moduli", where))
    if kind == "table":
        elements = [tuplify(x) for x in _field(obj, "elements", where)]
        table = [[tuplify(x) for x in row] for row in _field(obj, "table", where)]
        return table_group(elements, table, verify_assoc=verify_assoc or bool(obj.get("verify_assoc")))
    raise ParseError(f"{where}.type: expected 'cyclic-product' or 'table', got {kind!r}")


def dump_group(group: FiniteGroup) -> dict:
    if group.kind == "cyclic-product":
        return {"type": "cyclic-product", "moduli": list(group.moduli)}
    els = list(group.elements)
    return {"type": "table", "elements": listify(els),
            "table": [listify([group.multiply(a, b) for b in els]) for a in els]}


def _perm(pairs, domain, where):
    if isinstance(pairs, dict):
        raise ParseError(f"{where}: give a generator as a list of [source, target] pairs")
    mapping = {}
    for i, pair in enumerate(pairs):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError(f"{where}[{i}]: expected a [source, target] pair, got {pair!r}")
        mapping[tuplify(pair[0])] = tuplify(pair[1])
    try:
        return Permutation(mapping, domain)
    except InputError as exc:
        raise ParseError(f"{where}: {exc}") from None


def load_action(obj, graph, where="action") -> GroupAction:
    """Generators as lists of ``[source, target]`` pairs; unlisted points are fixed.

    For partite graphs each generator is a list with one pair list per part.
    """
    gens = _field(obj, "generators", where)
    if not gens:
        raise ParseError(f"{where}.generators: at least one generator is required")
    out = []
    for i, g in enumerate(gens):
        w = f"{where}.generators[{i}]"
        if isinstance(graph, PartiteHypergraph):
            if len(g) != graph.t:
                raise ParseError(f"{w}: expected {graph.t} per-part maps")
            out.append(PartitePermutation(_perm(p, graph.parts[a], f"{w}[{a}]") for a, p in enumerate(g)))
        else:
            out.append(_perm(g, graph.vertices, w))
    return GroupAction(tuple(out), graph.k, name=obj.get("name", "action"))


def dump_action(action: GroupAction) -> dict:
    gens = []
    for g in action.generators:
        if action.partite:
            gens.append([_sorted_pairs(p) for p in g])
        else:
            gens.append(_sorted_pairs(g))
    return {"name": action.name, "generators": gens}


def _sorted_pairs(p: Permutation):
    moved = [a for a, b in p.items() if a != b]
    return [listify([a, p(a)]) for a in sort_labels(moved)]


def load_sets(obj, where="sets"):
    if isinstance(obj, dict):
        obj = _field(obj, "sets", where)
    if not isinstance(obj, list) or any(not isinstance(s, list) for s in obj):
        raise ParseError(f"{where}: expected a list of element lists")
    return [[tuplify(x) for x in s] for s in obj]


def load_instance(obj, where="instance") -> CayleyHypergraphInstance:
    group = load_group(_field(obj, "group", where), f"{where}.group")
    sets = load_sets(_field(obj, "sets", where), f"{where}.sets")
    if obj.get("family") == "ap":
        return ap_instance(group, _field(obj, "t", where), sets)
    if "family" in obj:
        raise ParseError(f"{where}.family: unknown family {obj['family']!r}")
    t = _field(obj, "t", where)
    k = _field(obj, "k", where)
    psi = [PsiSpec(tuple(_field(p, "type", f"{where}.psi[{i}]")), tuple(_field(p, "coeffs", f"{where}.psi[{i}]")))
           for i, p in enumerate(_field(obj, "psi", where))]
    gens = tuple(tuplify(h) for h in _field(obj, "subgroup_generators", where))
    return build_instance(group, t, k, psi, sets, SubgroupSpec(gens))


def dump_instance(inst: CayleyHypergraphInstance) -> dict:
    return {
        "group": dump_group(inst.group),
        "t": inst.t,
        "k": inst.k,
        "psi": [{"type": list(p.edge_type), "coeffs": list(p.coeffs)} for p in inst.psi_specs],
        "sets": [listify(sort_labels(s)) for s in inst.sets],
        "subgroup_generators": [listify(list(h)) for h in inst.subgroup.generators],
    }
