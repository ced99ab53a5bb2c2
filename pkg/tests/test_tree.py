import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from greedytree.tree import (
    Tree,
    TreeError,
    canonical_form,
    complete_binary_tree,
    contract_degree2,
    enumerate_trees,
    five_crab,
    parse_tree,
    path_tree,
    qk_tree,
    random_tree,
    serialize_tree,
    split_at_edge,
    star,
    subdivide_all,
    subdivide_edge,
)

from oracles import prufer_trees


def test_parse_basic_with_comments_and_blank_lines():
    t = parse_tree("# a star\nr a\n\nr b  # trailing\nr c\n")
    assert len(t) == 4
    assert t.degree("r") == 3
    assert sorted(t.neighbors("r")) == ["a", "b", "c"]


def test_parse_single_node():
    t = parse_tree("solo\n")
    assert t.nodes == ("solo",) and not t.edges


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("a b\nb c\nc a\n", "cycle"),
        ("a b\nc d\n", "disconnected"),
        ("a a\n", "self-loop"),
        ("a b\nb a\n", "duplicate"),
        ("a b c\n", "expected"),
        ("# nothing\n", "empty"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(TreeError, match=fragment):
        parse_tree(text)


def test_parse_error_reports_line():
    with pytest.raises(TreeError) as info:
        parse_tree("a b\nb c\nc a\n")
    assert info.value.line == 3


def test_serialize_round_trip():
    t = five_crab([0, 1, 0, 2, 1], spacer=1)
    again = parse_tree(serialize_tree(t))
    assert again == t
    assert serialize_tree(again) == serialize_tree(t)


def test_named_families():
    assert len(path_tree(7)) == 7 and path_tree(7).max_degree() == 2
    assert star(6).degree("r") == 6
    assert len(complete_binary_tree(4)) == 31
    q = qk_tree(3)
    assert q.degree("b0") == 1
    assert sum(1 for v in q.nodes if q.degree(v) == 3) == 4


def test_subdivide_and_contract_are_inverse_up_to_isomorphism():
    t = complete_binary_tree(3)
    s = subdivide_all(t)
    assert len(s) == 2 * len(t) - 1
    assert all(s.degree(v) == 2 for v in s.nodes if v not in t)
    assert canonical_form(contract_degree2(s, keep=[v for v in t.nodes if t.degree(v) == 2])) == canonical_form(t)


def test_subdivide_edge_rejects_missing_edge():
    with pytest.raises(TreeError):
        subdivide_edge(path_tree(3), "p0", "p2")


@given(st.integers(2, 18), st.integers(0, 10**6))
def test_canonical_form_ignores_labels(n, seed):
    rng = random.Random(seed)
    t = random_tree(n, rng)
    perm = list(t.nodes)
    rng.shuffle(perm)
    rename = dict(zip(t.nodes, (f"z{i}" for i in range(n))))
    relabelled = Tree([rename[v] for v in perm], [(rename[u], rename[v]) for u, v in t.edges])
    assert canonical_form(relabelled) == canonical_form(t)


def test_canonical_form_separates_path_and_star():
    assert canonical_form(path_tree(4)) != canonical_form(star(3))


@pytest.mark.parametrize("n", range(1, 8))
def test_enumeration_matches_prufer_oracle(n):
    got = [canonical_form(t) for t in enumerate_trees(n)]
    assert len(got) == len(set(got))
    assert set(got) == set(prufer_trees(n))


@pytest.mark.parametrize("n, max_degree", [(6, 3), (7, 3), (7, 4)])
def test_enumeration_with_degree_cap_matches_oracle(n, max_degree):
    got = {canonical_form(t) for t in enumerate_trees(n, max_degree)}
    assert got == set(prufer_trees(n, max_degree))


def test_enumeration_order_is_deterministic():
    a = [serialize_tree(t) for t in enumerate_trees(9, 4)]
    b = [serialize_tree(t) for t in enumerate_trees(9, 4)]
    assert a == b


def test_enumeration_size_guard():
    with pytest.raises(ValueError):
        list(enumerate_trees(0))


@given(st.integers(1, 30), st.integers(2, 5), st.integers(0, 10**6))
def test_random_tree_respects_degree_cap(n, cap, seed):
    t = random_tree(n, random.Random(seed), max_degree=cap)
    assert len(t) == n and len(t.edges) == n - 1
    assert t.max_degree() <= cap


def test_contract_examples():
    p = parse_tree("a b\nb c\nc d\n")
    c = contract_degree2(p)
    assert set(c.nodes) == {"a", "d"} and c.has_edge("a", "d")
    legs = parse_tree("r m1\nm1 x\nr m2\nm2 y\nr m3\nm3 z\n")
    assert canonical_form(contract_degree2(legs)) == canonical_form(star(3))
    q1 = subdivide_all(qk_tree(1))
    assert canonical_form(contract_degree2(q1)) == canonical_form(qk_tree(1))


@given(st.integers(1, 20), st.integers(0, 10**6))
def test_contract_is_idempotent(n, seed):
    t = random_tree(n, random.Random(seed))
    once = contract_degree2(t)
    assert contract_degree2(once) == once


def test_split_at_edge():
    t = parse_tree("a b\nb c\n")
    left, right = split_at_edge(t, "b", "c")
    assert (set(left.nodes), left.root) == ({"a", "b", "c"}, "c")
    assert (set(right.nodes), right.root) == ({"b", "c"}, "b")
    s = star(3)
    a, b = split_at_edge(s, "r", "x1")
    assert set(a.nodes) & set(b.nodes) == {"r", "x1"}
    assert set(a.nodes) | set(b.nodes) == set(s.nodes)
    with pytest.raises(TreeError):
        split_at_edge(s, "x1", "x2")


def test_enumeration_spec_counts():
    assert len(list(enumerate_trees(3, 3))) == 1
    assert len(list(enumerate_trees(4))) == 2
    assert len(list(enumerate_trees(7, 6))) == 11
