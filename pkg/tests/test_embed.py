import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from greedytree.decide import decide
from greedytree.embed import (
    MAX_DEPTH,
    Drawing,
    EmbedError,
    _margins,
    build_gadget,
    embed,
    embed_rooted,
    opening_cone,
    parse_drawing,
    verify,
    write_drawing,
)
from greedytree.tree import (
    HUB_EXAMPLES,
    RootedSubtree,
    Tree,
    five_crab,
    hub_tree,
    path_tree,
    qk_edges,
    qk_tree,
    random_tree,
    star,
)
from greedytree.wheel import Verdict


def radial_star(m: int, step_deg: float) -> Drawing:
    coords = {"r": (0.0, 0.0)}
    for i in range(1, m + 1):
        a = math.radians(step_deg * (i - 1))
        coords[f"x{i}"] = (math.cos(a), math.sin(a))
    return Drawing(star(m), coords)


def naive_greedy(d: Drawing) -> bool:
    """Every node has a neighbour strictly closer to every other node."""
    t = d.tree
    for s in t.nodes:
        for target in t.nodes:
            if s == target:
                continue
            here = math.dist(d.coords[s], d.coords[target])
            if not any(math.dist(d.coords[u], d.coords[target]) < here for u in t.neighbors(s)):
                return False
    return True


# -- verifier -----------------------------------------------------------------


def test_collinear_path_has_unit_slack():
    t = path_tree(6)
    d = Drawing(t, {f"p{i}": (float(i), 0.0) for i in range(6)})
    rep = verify(d)
    assert rep.ok
    assert rep.worst_margin == pytest.approx(1.0)


def test_k13_at_120_degrees_is_greedy():
    rep = verify(radial_star(3, 120))
    assert rep.ok
    assert rep.worst_margin == pytest.approx(math.sqrt(3) - 1)


def test_k16_at_60_degrees_is_not_greedy():
    rep = verify(radial_star(6, 60))
    assert not rep.greedy_pairwise and not rep.greedy_bisector
    assert rep.violations


def test_coincident_nodes_fail():
    d = Drawing(path_tree(3), {"p0": (0.0, 0.0), "p1": (1.0, 0.0), "p2": (1.0, 0.0)})
    rep = verify(d)
    assert not rep.ok
    assert ("coincident", "p1", "p2") in rep.violations


def test_single_node_is_greedy():
    assert verify(Drawing(Tree.single("a"), {"a": (3.0, 4.0)})).ok


def test_drawing_needs_every_node():
    with pytest.raises(ValueError):
        Drawing(path_tree(3), {"p0": (0.0, 0.0)})


@given(
    st.floats(1e-3, 1e3),
    st.floats(-math.pi, math.pi),
    st.floats(-1e3, 1e3),
    st.floats(-1e3, 1e3),
    st.sampled_from([3, 4, 5, 6]),
    st.sampled_from([60.0, 72.0, 90.0, 120.0]),
)
def test_similarity_invariance(scale, angle, dx, dy, m, step):
    d = radial_star(m, step)
    a, b = verify(d), verify(d.transformed(scale, angle, (dx, dy)))
    assert (a.greedy_pairwise, a.greedy_bisector) == (b.greedy_pairwise, b.greedy_bisector)


def test_similarity_invariance_on_embedded_drawing():
    d = embed(five_crab([0] * 5))
    for k in range(5):
        rng = random.Random(k)
        moved = d.transformed(10 ** rng.uniform(-3, 3), rng.uniform(-3, 3), (rng.uniform(-9, 9), rng.uniform(-9, 9)))
        assert verify(moved).ok


@pytest.mark.parametrize("seed", range(8))
def test_verify_matches_naive_oracle(seed):
    rng = random.Random(seed)
    for _ in range(60):
        n = rng.randint(2, 9)
        t = random_tree(n, rng)
        d = Drawing(t, {v: (rng.uniform(-1, 1), rng.uniform(-1, 1)) for v in t.nodes})
        rep = verify(d)
        if abs(rep.worst_margin) > 1e-6:  # keep clear of the tolerance band
            assert rep.greedy_pairwise == naive_greedy(d)
        assert rep.greedy_pairwise == rep.greedy_bisector


# -- drawing files --------------------------------------------------------------


def test_round_trip_is_bit_exact():
    rng = random.Random(3)
    t = random_tree(12, rng)
    d = Drawing(t, {v: (rng.uniform(-1e6, 1e6) * 10 ** rng.randint(-300, 300), rng.random()) for v in t.nodes})
    text = write_drawing(d)
    again = parse_drawing(text, t)
    assert again.coords == d.coords
    assert write_drawing(again) == text


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("p0 0 0\np1 1\n", "expected"),
        ("p0 0 0\np0 1 1\n", "twice"),
        ("p0 0 0\nzz 1 1\n", "unknown"),
        ("p0 0 nan\n", "finite"),
        ("p0 0 zero\n", "bad coordinate"),
        ("p0 0 0\n", "misses"),
    ],
)
def test_parse_drawing_errors(text, fragment):
    with pytest.raises(ValueError, match=fragment):
        parse_drawing(text, path_tree(2))


# -- embedder --------------------------------------------------------------------


def test_path10_embeds():
    d = embed(path_tree(10))
    assert d is not None and verify(d).ok


def test_k15_is_regular_pentagon_star():
    d = embed(star(5))
    assert d is not None and verify(d).ok
    c = d.coords
    angles = sorted(math.degrees(math.atan2(c[f"x{i}"][1] - c["r"][1], c[f"x{i}"][0] - c["r"][0])) % 360
                    for i in range(1, 6))
    gaps = np.diff(angles + [angles[0] + 360])
    assert np.allclose(gaps, 72.0)


def test_embed_rejects_non_yes():
    with pytest.raises(ValueError):
        embed(star(6))


def test_embed_rejects_bad_shrink():
    with pytest.raises(ValueError):
        embed(path_tree(3), shrink=0.5)


@pytest.mark.parametrize("k", range(4))
def test_qk_opening_angle_is_realised(k):
    sub = RootedSubtree(qk_tree(k), "b0", "b1")
    d, planned = embed_rooted(sub)
    assert verify(d).ok
    cone = opening_cone(d, sub)
    assert abs(cone - (90 + 30 / 2**k)) <= 2.0
    assert cone >= planned - 1e-6


def test_q2_standalone_reaches_target_cone():
    sub = RootedSubtree(qk_tree(2), "b0", "b1")
    d, _ = embed_rooted(sub)
    assert verify(d).ok
    assert opening_cone(d, sub) >= 90 + 30 / 4 - 1


def test_depth_cap_is_reported():
    t = qk_tree(MAX_DEPTH + 2)
    with pytest.raises(EmbedError, match="depth"):
        build_gadget(t, "b0", "b1", _margins(0.1, 1e-2))


@pytest.mark.parametrize(
    "tree",
    [
        star(3),
        star(4),
        Tree(["b0"], qk_edges(3) + [("b0", "z1"), ("z1", "z2")]),
        five_crab([0] * 5),
        five_crab([0, 0, 1, 1, 2]),
        hub_tree(["leaf", "q0", "q0", "path2", "leaf"]),
    ],
    ids=["K13", "K14", "Q3-path", "crab00000", "crab00112", "deg5-hub"],
)
def test_embed_soundness_named(tree):
    d = embed(tree)
    assert d is not None
    rep = verify(d)
    assert rep.ok and rep.worst_margin > 0


@pytest.mark.slow
def test_embed_mixed_hub():
    t = hub_tree(HUB_EXAMPLES["b"])
    d = embed(t, decide(t))
    assert d is not None and verify(d).ok


@pytest.mark.parametrize("seed", range(6))
def test_embed_soundness_random(seed):
    rng = random.Random(seed)
    done = 0
    while done < 5:
        t = random_tree(rng.randint(2, 14), rng, max_degree=4)
        if decide(t).verdict is not Verdict.YES:
            continue
        d = embed(t)
        assert d is not None, t
        rep = verify(d)
        assert rep.ok and rep.worst_margin > 0
        done += 1
