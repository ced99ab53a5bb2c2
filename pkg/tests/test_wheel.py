import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from greedytree.wheel import (
    SimplexPoint,
    Verdict,
    WheelAssignment,
    WheelInstance,
    _p1_point,
    cyclic_orderings,
    decide_membership,
    evaluate_omega,
    find_assignment,
    in_simplex,
    lp_relaxation_feasible,
    numeric_search,
    polygon_from_assignment,
    sufficient_1x180,
    verify_assignment,
)

F = Fraction
HUB_PHIS = {
    "a": [180, 105, 105, 105, 60],
    "b": [180, 120, 105, "93.75", 60],
    "c": [180, 120, 120, 120, 30],
}


def random_phi(rng: random.Random) -> Fraction:
    kind = rng.randrange(3)
    if kind == 0:
        return F(180)
    if kind == 1:
        return F(rng.randint(1, 60 * 16), 16)
    return F(rng.randint(90 * 16 + 1, 120 * 16), 16)


def pentagon() -> WheelAssignment:
    return WheelAssignment(tuple(range(5)), [54.0] * 5, [54.0] * 5)


# -- instances ----------------------------------------------------------------


def test_instance_sorted_and_validated():
    inst = WheelInstance([60, 180, 105])
    assert inst.phis == (180, 105, 60)
    with pytest.raises(ValueError):
        WheelInstance([75, 180, 180])
    with pytest.raises(ValueError):
        WheelInstance([180, 180])
    assert WheelInstance([180, 180, 180, 60, "60.0625"], check_range=False).n == 5


def test_cyclic_orderings_counts():
    assert [len(cyclic_orderings(n)) for n in (3, 4, 5)] == [1, 3, 12]
    assert cyclic_orderings(5) == sorted(cyclic_orderings(5))


# -- omega ----------------------------------------------------------------------


def test_omega_examples():
    assert evaluate_omega([40, 50, 60], [40, 50, 60]) == 0
    assert evaluate_omega([30, 30, 30], [90, 90, 90]) == pytest.approx(-0.875, abs=1e-15)


@given(st.lists(st.floats(0, 180), min_size=3, max_size=5), st.lists(st.floats(0, 180), min_size=5, max_size=5))
def test_omega_antisymmetry(beta, gamma):
    gamma = gamma[: len(beta)]
    assert evaluate_omega(beta, gamma) == -evaluate_omega(gamma, beta)


def test_omega_of_simplex_point():
    p = SimplexPoint((30, 30, 30), (90, 90, 90), (0, 1, 2))
    assert evaluate_omega(p) == pytest.approx(-0.875)


# -- 1x180 sufficient condition --------------------------------------------------------


def test_one_180_condition_examples():
    lhs, p1 = _p1_point(F(120), F(105), F("93.75"), F(60))
    assert lhs == 90  # 4590 - 4500
    assert in_simplex(p1, (180, 120, 105, F("93.75"), 60))
    assert evaluate_omega(p1) < 0
    assert sufficient_1x180([120, 105, "93.75", 60])
    assert not sufficient_1x180([105, 105, 105, 60])  # 4470 <= 4500
    lhs, _ = _p1_point(F(120), F(120), F(120), F(60))
    assert lhs == 480  # condition (i) holds; the overall answer rests on the sign of omega


def test_one_180_condition_precondition():
    with pytest.raises(ValueError):
        sufficient_1x180([180, 105, 105, 60])


# -- LP relaxation ------------------------------------------------------------------


def test_relaxation_examples():
    per, overall = lp_relaxation_feasible(WheelInstance(HUB_PHIS["a"]))
    assert not overall and len(per) == 12
    assert lp_relaxation_feasible(WheelInstance(HUB_PHIS["b"]))[1]
    assert lp_relaxation_feasible(WheelInstance([100, 100, 100]))[1]


# -- verification -------------------------------------------------------------------


def test_regular_pentagon_passes():
    a = pentagon()
    assert a.alpha == [72.0] * 5 and a.psi == [108.0] * 5
    rep = verify_assignment([110] * 5, a)
    assert rep.ok, rep.failures
    assert rep.eps == pytest.approx(2.0)
    assert abs(rep.omega) <= 1e-15


def test_perturbed_pentagon_fails_on_wheel_residual():
    a = pentagon()
    a.beta[0] += 1.0
    a.gamma[0] -= 1.0  # keep the triangle sums, break only the wheel condition
    rep = verify_assignment([110] * 5, a)
    assert not rep.ok
    assert any("wheel residual" in f for f in rep.failures)


def test_verify_reports_bad_ordering():
    a = WheelAssignment((0, 1, 1, 3, 4), [54.0] * 5, [54.0] * 5)
    assert verify_assignment([110] * 5, a).failures == ["ordering mismatch"]


def test_polygon_reconstruction_is_regular_for_pentagon():
    hub, pts = polygon_from_assignment(pentagon())
    radii = [float(math.hypot(*p)) for p in pts]
    assert max(radii) - min(radii) < 1e-12
    assert math.hypot(*(pts[-1] - pts[0])) < 1e-12


# -- decisions ------------------------------------------------------------------------


@pytest.mark.parametrize(
    "phis, verdict",
    [
        ([180, 180, 180, 180, 10], Verdict.YES),
        ([180, 180, 180, 60, 60], Verdict.NO),
        ([180, 180, 180, 60, "60.0625"], Verdict.YES),
        ([180, 180, 120, 100, 20], Verdict.NO),
        ([180, 180, 120, 100, "20.0625"], Verdict.YES),
        ([100, 100, 100], Verdict.YES),
        ([110] * 5, Verdict.YES),
        ([60, 60, 60], Verdict.NO),
        (HUB_PHIS["a"], Verdict.NO),
        (HUB_PHIS["b"], Verdict.YES),
        (HUB_PHIS["c"], Verdict.UNCERTAIN),
    ],
)
def test_decide_membership(phis, verdict):
    d = decide_membership(WheelInstance(phis, check_range=False))
    assert d.verdict is verdict
    if verdict is Verdict.YES:
        assert d.assignment is not None
        rep = verify_assignment(d.instance, d.assignment)
        assert rep.ok, rep.failures


def test_no_certificates_name_their_reason():
    assert decide_membership(WheelInstance(HUB_PHIS["a"])).proof == "LP infeasible for all orderings"
    assert "angle sum" in decide_membership(WheelInstance([60, 60, 60])).proof
    unsure = decide_membership(WheelInstance(HUB_PHIS["c"]))
    assert unsure.attempts and unsure.assignment is None


def test_mixed_hub_certificate_tolerances():
    d = decide_membership(WheelInstance(HUB_PHIS["b"]))
    rep = verify_assignment(d.instance, d.assignment)
    assert abs(rep.omega) <= 1e-9
    assert rep.eps >= 1e-6
    assert rep.closure <= 1e-7


def test_pentagon_found_by_numeric_search():
    a = numeric_search(WheelInstance([110] * 5), (0, 1, 2, 3, 4))
    assert a is not None
    assert verify_assignment([110] * 5, a).ok


def test_find_assignment_accepts_off_range_angles():
    a = find_assignment([180, 180, 180, 60, F("60.0625")])
    assert a is not None


@given(st.integers(0, 10**6), st.integers(3, 5))
def test_permutation_invariance(seed, n):
    rng = random.Random(seed)
    phis = [random_phi(rng) for _ in range(n)]
    shuffled = phis[:]
    rng.shuffle(shuffled)
    a = decide_membership(WheelInstance(phis))
    b = decide_membership(WheelInstance(shuffled))
    assert a.verdict is b.verdict


@pytest.mark.parametrize("seed", range(4))
def test_random_yes_certificates_verify(seed):
    rng = random.Random(seed)
    for _ in range(40):
        inst = WheelInstance([random_phi(rng) for _ in range(rng.randint(3, 5))])
        d = decide_membership(inst)
        assert d.verdict is not Verdict.UNCERTAIN or inst.n == 5
        if d.verdict is Verdict.YES:
            rep = verify_assignment(inst, d.assignment)
            assert rep.ok, (inst, rep.failures)
        if d.verdict is Verdict.NO and sum(inst.phis) > (inst.n - 2) * 180:
            # a No above the angle sum comes only from a closed-form rule or an empty relaxation
            assert inst.n == 5
