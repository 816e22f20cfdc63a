import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxgeom.dyadic import (
    Node,
    boundary_paths,
    build_tree,
    children_of,
    common_root,
    dump_family,
    dump_tree,
    full_tree,
    is_ancestor,
    leaves_of,
    load_family,
    load_tree,
    normalize_root,
    parent_of,
    splitting_number,
    tree_from_nodes,
)
from maxgeom.figs import analytic_split

from conftest import grow_random_tree


nodes_st = st.integers(0, 8).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(0, (1 << n) - 1)).map(lambda t: Node(*t))
)


def test_children_examples():
    assert children_of(Node(2, 1)) == (Node(3, 2), Node(3, 3))
    assert children_of(Node(0, 0)) == (Node(1, 0), Node(1, 1))


@given(nodes_st)
def test_parent_child_roundtrip(u):
    for c in children_of(u):
        assert parent_of(c) == u
        assert is_ancestor(u, c)


def test_build_tree_examples():
    t = build_tree({Node(2, 0), Node(2, 3)})
    assert t.root == Node(0, 0)
    assert t.nodes == {Node(0, 0), Node(1, 0), Node(1, 1), Node(2, 0), Node(2, 3)}

    single = build_tree({Node(3, 5)})
    assert single.root == Node(3, 5)
    assert single.nodes == {Node(3, 5)}


def test_build_tree_empty():
    with pytest.raises(ValueError, match="empty family"):
        build_tree(set())


def test_build_tree_idempotent(rng):
    for _ in range(25):
        fam = {Node(s, rng.randrange(1 << s)) for s in
               (rng.randint(0, 6) for _ in range(rng.randint(1, 8)))}
        t = build_tree(fam)
        assert build_tree(t.nodes).nodes == t.nodes
        assert build_tree(t.nodes).root == t.root


def test_root_is_minimal(rng):
    for _ in range(40):
        fam = {Node(6, rng.randrange(64)) for _ in range(rng.randint(1, 6))}
        t = build_tree(fam)
        assert len(t.children_in(t.root)) == 2 or len(t.nodes) == 1


def test_leaves_full_tree():
    t2 = full_tree(2)
    assert leaves_of(t2) == {Node(2, k) for k in range(4)}


def test_leaves_single_path():
    path_tree = tree_from_nodes([Node(0, 0), Node(1, 1), Node(2, 2)], Node(0, 0))
    assert leaves_of(path_tree) == {Node(2, 2)}


def test_leaves_generate_back(rng):
    # a tree is generated by its leaves
    for _ in range(30):
        t = grow_random_tree(rng, max_depth=6)
        regenerated = build_tree(leaves_of(t))
        if t.root == regenerated.root:  # random trees may carry a unary prefix
            assert regenerated.nodes == t.nodes
        else:
            assert regenerated.nodes <= t.nodes


def test_minimal_leaves_of_family_match_tree(rng):
    for _ in range(30):
        fam = {Node(6, rng.randrange(64)) for _ in range(rng.randint(2, 10))}
        fam |= {Node(3, rng.randrange(8))}
        minimal = {u for u in fam if not any(v != u and is_ancestor(u, v) for v in fam)}
        t = build_tree(fam)
        assert leaves_of(t) == minimal


def test_boundary_paths_full_tree():
    t2 = full_tree(2)
    paths = boundary_paths(t2)
    assert len(paths) == 4
    assert all(len(p) == 3 for p in paths)


def test_boundary_paths_single_node():
    t = tree_from_nodes([Node(4, 7)])
    assert boundary_paths(t) == {(Node(4, 7),)}


def test_boundary_count_equals_leaf_count(rng):
    for _ in range(40):
        t = grow_random_tree(rng, max_depth=6)
        assert len(boundary_paths(t)) == len(leaves_of(t))


def test_splitting_number_full_tree():
    tn = full_tree(4)
    for p in boundary_paths(tn):
        assert splitting_number(p, tn) == 4


def test_splitting_number_bare_path():
    t = tree_from_nodes([Node(0, 0), Node(1, 0), Node(2, 1)], Node(0, 0))
    (p,) = boundary_paths(t)
    assert splitting_number(p, t) == 0


def test_splitting_number_oracle(rng):
    # direct set-comprehension count over the definition
    for _ in range(30):
        t = grow_random_tree(rng, max_depth=6)
        for p in boundary_paths(t):
            pset = set(p)
            direct = sum(
                1 for u in t.nodes
                if u not in pset and any(u in children_of(v) for v in pset)
            )
            s = splitting_number(p, t)
            assert s == direct
            assert 0 <= s <= len(p) - 1


def test_splitting_number_rejects_foreign_path():
    t = full_tree(2)
    with pytest.raises(ValueError):
        splitting_number((Node(3, 0),), t)


def test_splitting_number_saturates_iff_all_siblings_present(rng):
    for _ in range(30):
        t = grow_random_tree(rng, max_depth=5)
        for p in boundary_paths(t):
            saturated = splitting_number(p, t) == len(p) - 1
            every_sibling = all(len(t.children_in(v)) == 2 for v in p[:-1])
            assert saturated == every_sibling


def test_normalize_root_relabels():
    t2 = full_tree(2)
    moved = normalize_root(t2, Node(3, 5))
    assert moved.root == Node(3, 5)
    assert len(moved.nodes) == len(t2.nodes)
    assert {u.scale - 3 for u in moved.nodes} == {u.scale for u in t2.nodes}


def test_normalize_root_identity():
    t = full_tree(3)
    assert normalize_root(t, t.root).nodes == t.nodes


def test_normalize_root_preserves_structure(rng):
    for _ in range(20):
        t = grow_random_tree(rng, max_depth=5)
        new_root = Node(2, rng.randrange(4))
        moved = normalize_root(t, new_root)
        assert len(moved.nodes) == len(t.nodes)
        assert len(leaves_of(moved)) == len(leaves_of(t))
        stats = lambda tr: sorted(
            (len(p), splitting_number(p, tr)) for p in boundary_paths(tr)
        )
        assert stats(moved) == stats(t)
        assert analytic_split(moved) == analytic_split(t)


def test_common_root_pairs():
    assert common_root([Node(2, 0), Node(2, 3)]) == Node(0, 0)
    assert common_root([Node(3, 4), Node(3, 5)]) == Node(2, 2)
    assert common_root([Node(5, 17)]) == Node(5, 17)


def test_serialization_roundtrip(rng):
    t = grow_random_tree(rng, max_depth=5)
    assert load_tree(dump_tree(t)) == t
    fam = frozenset({Node(3, 1), Node(5, 17)})
    assert load_family(dump_family(fam)) == fam


def test_tree_validation_rejects_gaps():
    with pytest.raises(ValueError):
        tree_from_nodes([Node(0, 0), Node(2, 0)], Node(0, 0))
