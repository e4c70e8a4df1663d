import os
import random
import subprocess
import sys

import numpy as np
import pytest

from oracles import brute_hom_count
from symremoval import BudgetExceeded, kernels
from symremoval.hypergraph import DirectedHypergraph, _Plan, count_homomorphisms, new_directed


def random_graph(rnd, n, k, p):
    from itertools import permutations
    return new_directed(range(n), k, [e for e in permutations(range(n), k) if rnd.random() < p])


@pytest.fixture
def pairs():
    rnd = random.Random(7)
    out = []
    for _ in range(25):
        k = rnd.choice([2, 3])
        f = random_graph(rnd, rnd.randint(k, 4), k, 0.4)
        g = random_graph(rnd, rnd.randint(k, 6), k, 0.5)
        out.append((f, g))
    return out


@pytest.mark.skipif(kernels.BACKEND != "numba", reason="numba unavailable")
def test_backends_agree(pairs):
    for f, g in pairs:
        plan = _Plan(f, g).plan
        c_nb = kernels.count(plan, 10**7, "numba")
        c_np = kernels.count(plan, 10**7, "numpy")
        assert c_nb == c_np
        first_nb = kernels.first(plan, 10**7, "numba")
        first_np = kernels.first(plan, 10**7, "numpy")
        assert (first_nb is None) == (first_np is None)
        if first_nb is not None:
            assert first_nb.tolist() == first_np.tolist()
        np.testing.assert_array_equal(kernels.enumerate_all(plan, 10**7, "numba"),
                                      kernels.enumerate_all(plan, 10**7, "numpy"))


def test_enumeration_is_lexicographic(pairs, backend):
    for f, g in pairs:
        rows = kernels.enumerate_all(_Plan(f, g).plan, 10**7, backend)
        as_lists = rows.tolist()
        assert as_lists == sorted(as_lists)


def test_sparse_membership_and_no_pivot(monkeypatch, pairs, backend):
    monkeypatch.setattr(kernels, "DENSE_LIMIT", 0)
    monkeypatch.setattr(kernels, "PIVOT_KEY_LIMIT", 0)
    for f, g in pairs:
        g = DirectedHypergraph(g.vertices, g.k, g.edges)  # fresh cached index
        assert not g._target.dense and not g._target.use_pivot
        assert count_homomorphisms(f, g, backend=backend).count == brute_hom_count(
            f.vertices, f.edges, g.vertices, g.edges)


def test_budget_verdict_identical_across_backends():
    g = new_directed(range(6), 2, [(a, b) for a in range(6) for b in range(6) if a != b])
    f = new_directed({1, 2, 3}, 2, [(1, 2), (1, 3), (2, 3)])
    plan = _Plan(f, g).plan
    _, nodes = kernels.count(plan, 10**6, "numpy")
    for backend in ["numpy"] + (["numba"] if kernels.BACKEND == "numba" else []):
        assert kernels.count(plan, nodes, backend)[1] == nodes
        with pytest.raises(BudgetExceeded):
            kernels.count(plan, nodes - 1, backend)


def test_env_flag_selects_numpy():
    env = dict(os.environ, SYMREMOVAL_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from symremoval import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
