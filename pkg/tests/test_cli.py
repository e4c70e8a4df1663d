import json

import pytest

from symremoval.cli import main
from symremoval.formats import (dump_group, dump_hypergraph, dump_instance, load_group,
                                load_hypergraph, load_instance)
from symremoval.cayley import cayley_graph
from symremoval.cayley_hyper import ap_instance
from symremoval.groups import cyclic_product_group, symmetric_group_table, table_group
from symremoval.hypergraph import new_partite


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


TRI = {"kind": "directed", "k": 2, "vertices": [1, 2, 3], "edges": [[1, 2], [1, 3], [2, 3]]}
TRI_G = {"kind": "directed", "k": 2, "vertices": ["a", "b", "c"],
         "edges": [["a", "b"], ["a", "c"], ["b", "c"]]}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def structured(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "structured")
    assert code == 0, err
    return json.loads(out)


def z6_files(tmp_path):
    g = cayley_graph(cyclic_product_group([6]), {1, 2, 3}).graph
    graph = write(tmp_path, "g.json", dump_hypergraph(g))
    action = write(tmp_path, "act.json", {"name": "Z6", "generators": [[[v, (v + 1) % 6] for v in range(6)]]})
    return write(tmp_path, "tri.json", TRI), graph, action


def test_count_triangle(tmp_path, capsys):
    res = structured(capsys, "count", "--template", write(tmp_path, "f.json", TRI),
                     "--graph", write(tmp_path, "g.json", TRI_G))
    assert res["result"] == {"count": 1, "total_maps": 27, "density": "1/27"}


def test_count_edgeless(tmp_path, capsys):
    g = dict(TRI_G, edges=[])
    res = structured(capsys, "count", "--template", write(tmp_path, "f.json", TRI),
                     "--graph", write(tmp_path, "g.json", g))
    assert res["result"]["count"] == 0


def test_malformed_edge(tmp_path, capsys):
    bad = dict(TRI_G, edges=[["a", "a"]])
    code, _, err = run(capsys, "count", "--template", write(tmp_path, "f.json", TRI),
                       "--graph", write(tmp_path, "g.json", bad))
    assert code == 2 and "('a', 'a')" in err


def test_json_syntax_error(tmp_path, capsys):
    code, _, err = run(capsys, "count", "--template", write(tmp_path, "f.json", "{\n  \"kind\": }"),
                       "--graph", write(tmp_path, "g.json", TRI_G))
    assert code == 2 and "line 2" in err


def test_budget_exit_code(tmp_path, capsys):
    full = {"kind": "directed", "k": 2, "vertices": list(range(6)),
            "edges": [[a, b] for a in range(6) for b in range(6) if a != b]}
    code, _, err = run(capsys, "count", "--template", write(tmp_path, "f.json", TRI),
                       "--graph", write(tmp_path, "g.json", full), "--budget", "10")
    assert code == 3 and "partial nodes" in err


def test_remove_free_input(tmp_path, capsys):
    free = cayley_graph(cyclic_product_group([5]), {1}).graph
    res = structured(capsys, "remove", "--template", write(tmp_path, "f.json", TRI),
                     "--graph", write(tmp_path, "g.json", dump_hypergraph(free)))
    cert = res["result"]["certificate"]
    assert cert["removal_set"] == [] and cert["achieved_epsilon"] == "0/1"


def test_remove_with_action(tmp_path, capsys):
    tri, graph, action = z6_files(tmp_path)
    res = structured(capsys, "remove", "--template", tri, "--graph", graph, "--action", action)
    sym = res["result"]["symmetrized"]
    assert sym["size_bound"] == "6 ≤ 3·6"
    assert sym["symmetrized"]["removal_set"] == [[0, 5], [1, 0], [2, 1], [3, 2], [4, 3], [5, 4]]
    assert sym["invariant"] and sym["automorphisms_preserved"]
    assert sym["symmetrized"]["freeness_checked"]
    code, out, _ = run(capsys, "remove", "--template", tri, "--graph", graph, "--action", action)
    assert code == 0 and "6 ≤ 3·6 ✓" in out


def test_remove_greedy_vs_exact(tmp_path, capsys):
    tri, graph, _ = z6_files(tmp_path)
    exact = structured(capsys, "remove", "--template", tri, "--graph", graph, "--strategy", "exact")
    greedy = structured(capsys, "remove", "--template", tri, "--graph", graph, "--strategy", "greedy")
    assert greedy["result"]["certificate"]["removed_count"] >= exact["result"]["certificate"]["removed_count"]


def test_remove_not_automorphism(tmp_path, capsys):
    tri, graph, _ = z6_files(tmp_path)
    bad = write(tmp_path, "bad.json", {"generators": [[[0, 1], [1, 0]]]})
    code, _, err = run(capsys, "remove", "--template", tri, "--graph", graph, "--action", bad)
    assert code == 2 and "generator #0" in err


def test_cayley_verify(tmp_path, capsys):
    z5 = write(tmp_path, "z5.json", {"type": "cyclic-product", "moduli": [5]})
    code, out, _ = run(capsys, "cayley", "verify", "--group", z5, "--set", "1,2")
    assert code == 0 and out.splitlines()[0] == "5 = 5·1 ✓"
    code, out, _ = run(capsys, "cayley", "verify", "--group", z5, "--set", "")
    assert code == 0 and out.splitlines()[0] == "0 = 5·0 ✓"
    code, _, err = run(capsys, "cayley", "verify", "--group", z5, "--set", "0,1")
    assert code == 2 and "identity" in err


def test_cayley_shrink(tmp_path, capsys):
    z6 = write(tmp_path, "z6.json", {"type": "cyclic-product", "moduli": [6]})
    res = structured(capsys, "cayley", "shrink", "--group", z6, "--set", "[1,2,3]")
    assert res["result"]["shrink_set"] == [1] and res["result"]["remaining_solutions"] == 0


def test_cayley_table_group(tmp_path, capsys):
    names, table = symmetric_group_table(3)
    s3 = write(tmp_path, "s3.json", {"type": "table", "elements": names, "table": table})
    res = structured(capsys, "cayley", "verify", "--group", s3, "--set", '["102", "120"]', "--verify-assoc")
    assert res["result"]["holds"]


def test_ap_verify(tmp_path, capsys):
    sets = write(tmp_path, "s.json", [[0, 1]] * 3)
    code, out, _ = run(capsys, "ap", "verify", "--moduli", "5", "--t", "3", "--sets", sets)
    assert code == 0 and "10 = 5·2 ✓" in out
    full = write(tmp_path, "full.json", {"sets": [list(range(5))] * 3})
    res = structured(capsys, "ap", "verify", "--moduli", "5", "--sets", full)
    assert res["result"]["ap_count"] == 25 and res["result"]["consistent"]


def test_ap_shrink(tmp_path, capsys):
    free = write(tmp_path, "s.json", [[1], [2], [4]])
    res = structured(capsys, "ap", "shrink", "--moduli", "5", "--t", "3", "--sets", free)
    assert res["result"]["shrink_sets"] == [[], [], []] and res["result"]["remaining_aps"] == 0
    two = write(tmp_path, "two.json", [[0, 1]] * 3)
    res = structured(capsys, "ap", "shrink", "--moduli", "5", "--t", "3", "--sets", two)
    assert res["result"]["remaining_aps"] == 0
    assert all(f.endswith("/5") or f == "0/1" for f in res["result"]["shrink_fractions"])


def test_ap_budget(tmp_path, capsys):
    sets = write(tmp_path, "s.json", [[0]] * 4)
    code, _, err = run(capsys, "ap", "verify", "--moduli", "9", "--t", "4", "--sets", sets, "--budget", "100")
    assert code == 3 and "6561" in err


def test_build_and_instance_roundtrip(tmp_path, capsys):
    inst = ap_instance(cyclic_product_group([5]), 3, [[0, 1]] * 3)
    path = write(tmp_path, "inst.json", dump_instance(inst))
    res = structured(capsys, "build", "--instance", path)
    assert load_hypergraph(res["result"]["hypergraph"]) == inst.graph
    fam = write(tmp_path, "fam.json", {"family": "ap", "t": 3, "group": {"type": "cyclic-product", "moduli": [5]},
                                        "sets": [[0, 1]] * 3})
    assert load_instance(json.loads(open(fam).read())).graph == inst.graph


def test_determinism(tmp_path, capsys):
    tri, graph, action = z6_files(tmp_path)
    argv = ["remove", "--template", tri, "--graph", graph, "--action", action]
    a = structured(capsys, *argv)
    b = structured(capsys, *argv)
    a.pop("duration"), b.pop("duration")
    assert json.dumps(a) == json.dumps(b)


def test_check_harness(capsys):
    code, out, _ = run(capsys, "check", "--trials", "5", "--seed", "3")
    assert code == 0 and "failures: 0" in out


@pytest.mark.parametrize("obj", [
    TRI, TRI_G,
    dump_hypergraph(new_partite([[0, 1], ["x"], [(1, 2)]], 2, [((0, 2), (1, (1, 2))), ((0, 1), (0, "x"))])),
])
def test_hypergraph_roundtrip(obj):
    g = load_hypergraph(obj)
    assert load_hypergraph(json.loads(json.dumps(dump_hypergraph(g)))) == g


def test_group_roundtrip():
    for g in [cyclic_product_group([2, 3]), table_group(*symmetric_group_table(3))]:
        again = load_group(json.loads(json.dumps(dump_group(g))))
        assert again.elements == g.elements
        assert all(again.multiply(a, b) == g.multiply(a, b) for a in g for b in g)
