"""Command-line front end.

Exit codes: 0 success, 1 a counting identity failed (never expected on
valid input), 2 input error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .cayley import count_schur_solutions, green_pipeline, verify_triangle_identity
from .cayley_hyper import (count_diagonal_aps, diagonal_pipeline, verify_ap_correspondence)
from .errors import BudgetExceeded, CapExceeded, InputError
from .formats import (ParseError, dump_hypergraph, dump_instance, dumps, listify, load_action,
                      load_group, load_hypergraph, load_instance, load_sets, read_json, tuplify)
from .groups import cyclic_product_group
from .hypergraph import DEFAULT_BUDGET, count_homomorphisms, sort_labels
from .removal import find_removal, symmetrize_removal

EXIT_OK, EXIT_FALSIFIED, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


class RunReport:
    def __init__(self, argv):
        self.command = list(argv)
        self.inputs = {}
        self.result = {}
        self.lines = []
        self.ok = True
        self._t0 = time.perf_counter()

    def digest(self, name, path):
        data = Path(path).read_bytes()
        self.inputs[name] = {"path": str(path), "sha256": hashlib.sha256(data).hexdigest()}

    def line(self, text):
        self.lines.append(text)

    def render(self, fmt: str) -> str:
        ms = (time.perf_counter() - self._t0) * 1000
        duration = f"{ms:.1f} ms"
        if fmt == "structured":
            return dumps({"command": self.command, "inputs": self.inputs, "result": self.result,
                          "duration": duration})
        return "\n".join(self.lines + [f"duration: {duration}"])


def _parse_list(text: str, what: str) -> list:
    text = text.strip()
    if text.startswith("["):
        try:
            return [tuplify(x) for x in json.loads(text)]
        except json.JSONDecodeError as exc:
            raise ParseError(f"{what}: {exc.msg} at column {exc.colno}") from None
    if not text:
        return []
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        try:
            out.append(int(tok))
        except ValueError:
            out.append(tok)
    return out


def _render_set(s) -> str:
    return "{" + ", ".join(str(listify(x)) for x in sort_labels(s)) + "}"


def _load_graph_arg(report, name, path):
    report.digest(name, path)
    return load_hypergraph(read_json(path), name)


def cmd_count(args, report):
    template = _load_graph_arg(report, "template", args.template)
    graph = _load_graph_arg(report, "graph", args.graph)
    hc = count_homomorphisms(template, graph, args.budget)
    report.result = {"count": hc.count, "total_maps": hc.total_maps, "density": frac(hc.density)}
    report.line(f"homomorphisms: {hc.count}")
    report.line(f"total maps: {hc.total_maps}")
    report.line(f"density: {frac(hc.density)}")


def cmd_remove(args, report):
    template = _load_graph_arg(report, "template", args.template)
    graph = _load_graph_arg(report, "graph", args.graph)
    action = None
    if args.action:
        report.digest("action", args.action)
        action = load_action(read_json(args.action), graph)
    raw = find_removal(template, graph, args.strategy, args.budget)
    report.result = {"certificate": raw.to_dict()}
    report.line(f"strategy: {raw.strategy}")
    report.line(f"removed: {raw.removed_count} of universe {raw.universe_size}"
                f" (epsilon {frac(raw.achieved_epsilon)})")
    report.line(f"removal set: {_render_set(raw.removal_set)}")
    report.line(f"freeness checked: {raw.freeness_checked}")
    if not raw.freeness_checked:
        report.ok = False
    if action is not None:
        sym = symmetrize_removal(template, graph, raw, action, args.budget)
        report.result["symmetrized"] = sym.to_dict()
        cert = sym.symmetrized
        report.line(f"symmetrized: {cert.removed_count} edges (epsilon {frac(cert.achieved_epsilon)})")
        report.line(f"symmetrized set: {_render_set(cert.removal_set)}")
        mark = "✓" if sym.size_bound_holds else "✗"
        report.line(f"size factor: {cert.removed_count} ≤ {sym.factor}·{raw.removed_count} {mark}")
        report.line(f"invariant: {sym.invariant}")
        report.line(f"freeness recheck: {cert.freeness_checked}")
        report.line(f"generators preserve remainder: {sym.automorphisms_preserved}")
        if not (sym.size_bound_holds and sym.invariant and cert.freeness_checked
                and sym.automorphisms_preserved):
            report.ok = False


def _group_arg(report, spec, verify_assoc):
    path = Path(spec)
    if path.exists():
        report.digest("group", path)
        obj = read_json(path)
    else:
        try:
            obj = json.loads(spec)
        except json.JSONDecodeError:
            raise ParseError(f"--group: {spec!r} is neither a file nor inline JSON") from None
    return load_group(obj, "group", verify_assoc)


def cmd_cayley(args, report):
    group = _group_arg(report, args.group, args.verify_assoc)
    subset = _parse_list(args.set, "--set")
    report.result["group_order"] = group.order
    report.result["set"] = listify(sort_labels(subset))
    if args.action == "verify":
        res = verify_triangle_identity(group, subset, args.budget)
        mark = "✓" if res.holds else "✗"
        report.result.update(hom_count=res.hom_count, solution_count=res.solution_count,
                             order_times_solutions=group.order * res.solution_count, holds=res.holds)
        report.line(f"{res.hom_count} = {group.order}·{res.solution_count} {mark}")
        report.ok = res.holds
    else:
        res = green_pipeline(group, subset, args.strategy, args.budget)
        before = count_schur_solutions(group, subset)
        report.result.update(
            solutions_before=before, shrink_set=listify(sort_labels(res.shrink_set)),
            remaining_solutions=res.remaining_solutions,
            raw_certificate=res.raw.to_dict(), symmetrized=res.report.to_dict())
        report.line(f"solutions before: {before}")
        report.line(f"shrink set S'': {_render_set(res.shrink_set)}")
        report.line(f"remaining solutions: {res.remaining_solutions}")
        report.line(f"raw removal: {res.raw.removed_count} edges; symmetrized: "
                    f"{res.certificate.removed_count} ≤ 3·{res.raw.removed_count}")
        report.ok = res.remaining_solutions == 0 and res.report.size_bound_holds


def cmd_ap(args, report):
    moduli = [int(x) for x in _parse_list(args.moduli, "--moduli")]
    group = cyclic_product_group(moduli)
    report.digest("sets", args.sets)
    obj = read_json(args.sets)
    sets = load_sets(obj)
    t = args.t
    if t is None:
        t = obj.get("t", len(sets)) if isinstance(obj, dict) else len(sets)
    n_tuples = group.order ** t
    if n_tuples > args.budget:
        raise BudgetExceeded(f"|A|^t = {n_tuples} exceeds the budget {args.budget}", nodes=n_tuples,
                             budget=args.budget)
    report.result.update(moduli=moduli, t=t)
    if args.action == "verify":
        rep = verify_ap_correspondence(group, t, sets, args.budget)
        mark = "✓" if rep.consistent else "✗"
        report.result.update(rep._asdict())
        report.line(f"ap_count: {rep.ap_count}")
        report.line(f"hom_count: {rep.hom_count}")
        report.line(f"multiplicity: {rep.multiplicity}")
        report.line(f"{rep.hom_count} = {rep.multiplicity}·{rep.ap_count} {mark}")
        report.ok = rep.consistent
    else:
        res = diagonal_pipeline(group, t, sets, args.strategy, args.budget)
        before = count_diagonal_aps(group, t, sets)
        fractions = [frac(Fraction(len(s), group.order)) for s in res.shrink_sets]
        report.result.update(
            aps_before=before,
            shrink_sets=[listify(sort_labels(s)) for s in res.shrink_sets],
            shrink_fractions=fractions,
            remaining_aps=res.remaining_aps,
            raw_certificate=res.raw.to_dict(), symmetrized=res.report.to_dict())
        report.line(f"progressions before: {before}")
        for i, (s, f) in enumerate(zip(res.shrink_sets, fractions)):
            report.line(f"S''_{i}: {_render_set(s)} (fraction {f})")
        report.line(f"remaining progressions: {res.remaining_aps}")
        report.ok = res.remaining_aps == 0 and res.report.size_bound_holds


def cmd_build(args, report):
    report.digest("instance", args.instance)
    inst = load_instance(read_json(args.instance))
    report.result = {"instance": dump_instance(inst), "hypergraph": dump_hypergraph(inst.graph)}
    report.line(dumps(dump_hypergraph(inst.graph)))


def cmd_check(args, report):
    """Randomized falsification harness for the counting identities."""
    rng = random.Random(args.seed)
    failures = 0
    for _ in range(args.trials):
        n = rng.randint(2, 9)
        group = cyclic_product_group([n])
        subset = [x for x in range(1, n) if rng.random() < 0.5]
        tri = verify_triangle_identity(group, subset, args.budget)
        n3 = rng.randint(2, 5)
        a3 = cyclic_product_group([n3])
        sets = [[x for x in range(n3) if rng.random() < 0.6] for _ in range(3)]
        ap = verify_ap_correspondence(a3, 3, sets, args.budget)
        green = green_pipeline(group, subset, "greedy", args.budget)
        ok = (tri.holds and ap.consistent and green.remaining_solutions == 0
              and green.report.size_bound_holds and green.report.invariant)
        if not ok:
            failures += 1
            report.line(f"FAILED: Z_{n} S={subset}; Z_{n3} sets={sets}")
    report.result = {"seed": args.seed, "trials": args.trials, "failures": failures}
    report.line(f"trials: {args.trials}, failures: {failures}")
    report.ok = failures == 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS,
                        help=f"search node cap (default {DEFAULT_BUDGET})")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=["text", "structured"], default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="symremoval", parents=[common],
                                     description="Symmetry-preserving hypergraph removal at desk scale.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="count homomorphisms template -> graph")
    p.add_argument("--template", required=True)
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("remove", parents=[common], help="find (and symmetrize) a removal set")
    p.add_argument("--template", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--strategy", choices=["exact", "greedy"], default="exact")
    p.add_argument("--action", help="file with automorphism generators")
    p.set_defaults(func=cmd_remove)

    p = sub.add_parser("cayley", parents=[common], help="Cayley graph triangle identity / shrinking")
    p.add_argument("action", choices=["verify", "shrink"])
    p.add_argument("--group", required=True, help="group file (or inline JSON)")
    p.add_argument("--set", required=True, help="connection set, e.g. 1,2 or JSON list")
    p.add_argument("--strategy", choices=["exact", "greedy"], default="exact")
    p.add_argument("--verify-assoc", action="store_true")
    p.set_defaults(func=cmd_cayley)

    p = sub.add_parser("ap", parents=[common], help="diagonal progression correspondence / shrinking")
    p.add_argument("action", choices=["verify", "shrink"])
    p.add_argument("--moduli", required=True, help="cyclic factors, e.g. 5 or 2,3")
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--sets", required=True, help="file with a list of t element lists")
    p.add_argument("--strategy", choices=["exact", "greedy"], default="greedy")
    p.set_defaults(func=cmd_ap)

    p = sub.add_parser("build", parents=[common], help="realize a Cayley hypergraph instance file")
    p.add_argument("--instance", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("check", parents=[common], help="randomized identity checks (uses --seed)")
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.budget = getattr(args, "budget", DEFAULT_BUDGET)
    args.seed = getattr(args, "seed", 0)
    args.format = getattr(args, "format", "text")
    report = RunReport(["symremoval", *argv])
    try:
        args.func(args, report)
    except (BudgetExceeded, CapExceeded) as exc:
        nodes = getattr(exc, "nodes", None)
        print(f"error: {exc}" + (f" [partial nodes: {nodes}]" if nodes else ""), file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(report.render(args.format))
    return EXIT_OK if report.ok else EXIT_FALSIFIED


if __name__ == "__main__":
    sys.exit(main())
