import itertools
from collections import Counter
from math import factorial

import pytest

from biquant.graphs import (
    AdmissibleGraph,
    edge_budget,
    enumerate_graphs,
    format_graphs,
    parse_graphs,
    validate,
)

I1, I2 = ("i", 1), ("i", 2)
D1, D2 = ("d", 1), ("d", 2)
U1, U2 = ("u", 1), ("u", 2)


def wedge_graph():
    """One interior vertex, two lower targets, one upper source."""
    return AdmissibleGraph(
        1, 2, 1,
        ((I1, D1), (I1, D2), (U1, I1)),
        ((0, 1),),
        ((2,),),
    )


def cowedge_graph():
    return AdmissibleGraph(
        1, 1, 2,
        ((I1, D1), (U1, I1), (U2, I1)),
        ((0,),),
        ((1, 2),),
    )


def test_edge_budget_values():
    assert edge_budget(2, 1, 0) == 0
    assert edge_budget(1, 2, 0) == 0
    assert edge_budget(2, 1, 1) == 3
    assert edge_budget(1, 2, 1) == 3
    assert edge_budget(2, 1, 2) == 6
    assert edge_budget(2, 2, 1) == 4


def test_validate_ok():
    ok, errs = validate(wedge_graph())
    assert ok and not errs
    assert wedge_graph().budget() == 3


def test_validate_bad_direction():
    g = AdmissibleGraph(1, 1, 1, (((("d", 1)), I1),), ((),), ((0,),))
    ok, errs = validate(g)
    assert not ok
    assert any("starts at a lower vertex" in e for e in errs)

    g = AdmissibleGraph(1, 1, 1, ((I1, ("u", 1)),), ((0,),), ((),))
    ok, errs = validate(g)
    assert not ok
    assert any("ends at an upper vertex" in e for e in errs)


def test_validate_boundary_to_boundary():
    g = AdmissibleGraph(1, 1, 1, ((U1, D1),), ((),), ((),))
    ok, errs = validate(g)
    assert not ok
    assert any("joins two boundary vertices" in e for e in errs)


def test_validate_loop_and_repeat():
    g = AdmissibleGraph(1, 1, 1, ((I1, I1),), ((0,),), ((0,),))
    ok, errs = validate(g)
    assert not ok
    assert any("loop" in e for e in errs)

    g = AdmissibleGraph(1, 2, 1, ((I1, D1), (I1, D1)), ((0, 1),), ((),))
    ok, errs = validate(g)
    assert not ok
    assert any("repeats an external edge" in e for e in errs)


def test_validate_label_permutation():
    g = AdmissibleGraph(1, 2, 1, ((I1, D1), (I1, D2), (U1, I1)), ((0, 0),), ((2,),))
    ok, errs = validate(g)
    assert not ok
    assert any("star labels" in e for e in errs)


def test_repeated_inner_edges_allowed():
    g = AdmissibleGraph(
        0 + 2, 1, 1,
        ((I1, I2), (I1, I2), (I1, D1), (U1, I2)),
        ((0, 1, 2), ()),
        ((), (0, 1, 3)),
    )
    ok, errs = validate(g)
    assert ok, errs
    assert g.budget() == 2 * 2 + 2


def test_canonical_key_quotients_identical_inner_copies():
    edges = ((I1, I2), (I1, I2), (I1, D1), (U1, I2))
    a = AdmissibleGraph(2, 1, 1, edges, ((0, 1, 2), ()), ((), (0, 1, 3)))
    b = AdmissibleGraph(2, 1, 1, edges, ((1, 0, 2), ()), ((), (1, 0, 3)))
    assert a.canonical_key() == b.canonical_key()
    c = AdmissibleGraph(2, 1, 1, edges, ((0, 2, 1), ()), ((), (0, 1, 3)))
    assert c.canonical_key() != a.canonical_key()


def test_canonical_key_stable_under_edge_reordering():
    g = wedge_graph()
    perm = (2, 0, 1)
    edges = tuple(g.edges[p] for p in perm)
    inv = {p: k for k, p in enumerate(perm)}
    star = tuple(tuple(inv[j] for j in seq) for seq in g.star)
    end = tuple(tuple(inv[j] for j in seq) for seq in g.end)
    h = AdmissibleGraph(g.s, g.m, g.n, edges, star, end)
    assert h.canonical_key() == g.canonical_key()


def test_enumerate_point_graphs():
    gs = enumerate_graphs(2, 1, 0, 0)
    assert len(gs) == 1
    assert gs[0].edges == ()
    assert enumerate_graphs(1, 1, 0, 0) == []  # 3s+m+n < 3
    assert enumerate_graphs(2, 1, 0, 1) == []  # no legal edge without interior vertices


def test_enumerate_wedge_bidegree():
    gs = enumerate_graphs(2, 1, 1, 3)
    assert len(gs) == 2
    keys = {g.canonical_key() for g in gs}
    assert wedge_graph().canonical_key() in keys
    flipped = AdmissibleGraph(
        1, 2, 1, wedge_graph().edges, ((1, 0),), ((2,),)
    )
    assert flipped.canonical_key() in keys
    for g in gs:
        ok, errs = validate(g)
        assert ok, errs


def test_enumerate_cowedge_bidegree():
    gs = enumerate_graphs(1, 2, 1, 3)
    assert len(gs) == 2
    assert cowedge_graph().canonical_key() in {g.canonical_key() for g in gs}


def brute_count(m, n, s, budget):
    """Independent count: choose external subset and inner multiplicities, then
    count per-vertex distinct star/end token sequences."""
    ext = []
    for k in range(1, s + 1):
        ext += [(("i", k), ("d", j)) for j in range(1, m + 1)]
        ext += [(("u", j), ("i", k)) for j in range(1, n + 1)]
    inner = [
        (("i", a), ("i", b))
        for a in range(1, s + 1)
        for b in range(1, s + 1)
        if a != b
    ]
    if budget < 0 or 3 * s + m + n < 3:
        return 0
    total = 0
    for n_in in range(budget // 2 + 1):
        n_ex = budget - 2 * n_in
        if n_ex > len(ext):
            continue
        for ext_sub in itertools.combinations(ext, n_ex):
            for mults in itertools.product(range(n_in + 1), repeat=len(inner)):
                if sum(mults) != n_in:
                    continue
                edges = list(ext_sub)
                for e, mlt in zip(inner, mults):
                    edges += [e] * mlt
                ways = 1
                for k in range(1, s + 1):
                    outs = Counter(e for e in edges if e[0] == ("i", k))
                    ins = Counter(e for e in edges if e[1] == ("i", k))
                    for grp in (outs, ins):
                        ways *= factorial(sum(grp.values()))
                        for c in grp.values():
                            ways //= factorial(c)
                total += ways
    return total


@pytest.mark.parametrize(
    "m,n,s,budget",
    [(2, 1, 0, 0), (2, 1, 1, 3), (1, 2, 1, 3), (2, 1, 1, 2), (2, 1, 2, 4), (2, 1, 2, 6), (1, 2, 2, 6), (2, 2, 1, 4)],
)
def test_enumerate_matches_brute_count(m, n, s, budget):
    gs = enumerate_graphs(m, n, s, budget)
    assert len(gs) == brute_count(m, n, s, budget)
    keys = [g.canonical_key() for g in gs]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)
    for g in gs[:50]:
        ok, errs = validate(g)
        assert ok, errs
        assert g.budget() == budget


def test_enumerate_default_budget_is_top():
    assert {g.canonical_key() for g in enumerate_graphs(2, 1, 1)} == {
        g.canonical_key() for g in enumerate_graphs(2, 1, 1, 3)
    }


def test_text_round_trip():
    for g in (wedge_graph(), cowedge_graph()):
        assert AdmissibleGraph.from_text(g.to_text()) == g
    gs = enumerate_graphs(2, 1, 2, 6)[:20]
    parsed = parse_graphs(format_graphs(gs))
    assert [p.canonical_key() for p in parsed] == [g.canonical_key() for g in gs]


def test_from_text_defaults_labels_to_file_order():
    text = "1 2 1\ni1 d1\ni1 d2\nu1 i1\n"
    g = AdmissibleGraph.from_text(text)
    assert g.star == ((0, 1),)
    assert g.end == ((2,),)
    assert g == wedge_graph()


def test_from_text_explicit_labels():
    text = "1 2 1\ni1 d1\ni1 d2\nu1 i1\nstar i1: e2 e1\nend i1: e3\n"
    g = AdmissibleGraph.from_text(text)
    assert g.star == ((1, 0),)


def test_from_text_rejects_garbage():
    with pytest.raises(ValueError):
        AdmissibleGraph.from_text("")
    with pytest.raises(ValueError):
        AdmissibleGraph.from_text("1 2\ni1 d1\n")
    with pytest.raises(ValueError):
        AdmissibleGraph.from_text("1 2 1\ni1 q3\n")
    with pytest.raises(ValueError):
        AdmissibleGraph.from_text("1 2 1\ni1 d1\nstar i1: e9\n")
