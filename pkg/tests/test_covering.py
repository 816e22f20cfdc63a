from fractions import Fraction as Q

import pytest

from maxgeom.covering import (
    austin_cover,
    check_dilation_bound,
    check_geometric_estimate,
    check_translation_bound,
    dilate_interval,
)
from maxgeom.slabs import interval_union_length, widen5

from conftest import random_intervals, random_slab, random_subslab


def merged_components(intervals):
    out = []
    for lo, hi in sorted(intervals):
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def covers(cover_ivs, target_ivs):
    comps = merged_components(cover_ivs)
    for lo, hi in target_ivs:
        if not any(a <= lo and hi <= b for a, b in comps):
            return False
    return True


def test_austin_example():
    # the longest interval is taken first and everything it touches is dropped,
    # so [0, 1] (overlapping on [0.9, 1]) cannot be selected as well
    fam = [(Q(0), Q(1)), (Q(1, 2), Q(3, 2)), (Q(9, 10), Q(29, 10))]
    sel = austin_cover(fam)
    assert sel == [2]
    assert covers([dilate_interval(fam[i], 3) for i in sel], fam)
    assert covers([dilate_interval(fam[2], 3)], [(Q(0), Q(29, 10))])


def test_austin_single():
    assert austin_cover([(Q(2), Q(5))]) == [0]


def test_austin_properties(rng):
    for _ in range(300):
        fam = random_intervals(rng)
        sel = austin_cover(fam)
        for a in range(len(sel)):
            for b in range(a + 1, len(sel)):
                lo1, hi1 = fam[sel[a]]
                lo2, hi2 = fam[sel[b]]
                assert hi1 < lo2 or hi2 < lo1  # strictly disjoint by construction
        assert covers([dilate_interval(fam[i], 3) for i in sel], fam)


def test_dilation_identity():
    rep = check_dilation_bound([(Q(0), Q(1)), (Q(2), Q(3))], 1)
    assert rep.union_len == rep.dilated_len == 2


def test_dilation_single_interval():
    rep = check_dilation_bound([(Q(0), Q(1))], 2)
    assert rep.union_len == 1 and rep.dilated_len == 2
    assert rep.lower_const * rep.dilated_len == rep.union_len  # equality at B_tau


def test_dilation_random(rng):
    for _ in range(200):
        fam = random_intervals(rng)
        tau = Q(rng.randint(1, 32), 8)
        check_dilation_bound(fam, tau)  # raises on violation


def test_translation_zero_shifts():
    fam = [(Q(0), Q(1)), (Q(3), Q(5))]
    rep = check_translation_bound(fam, [0, 0], 1)
    assert rep.achieved_ratio == 1


def test_translation_single_interval():
    rep = check_translation_bound([(Q(0), Q(1))], [Q(1, 2)], 1)
    assert rep.translated_len == 1
    assert rep.required_ratio == Q(1, 18)


def test_translation_requires_small_shifts():
    with pytest.raises(ValueError):
        check_translation_bound([(Q(0), Q(1))], [Q(2)], 1)


def test_translation_random(rng):
    for _ in range(200):
        fam = random_intervals(rng)
        mu = Q(rng.randint(1, 16), 4)
        shifts = [Q(rng.randint(-999, 999), 1000) * mu * (hi - lo) for lo, hi in fam]
        check_translation_bound(fam, shifts, mu)


def test_geometric_estimate_identity():
    u = [random_slab(__import__("random").Random(5)) for _ in range(4)]
    rep = check_geometric_estimate(u, u, 1, "I")
    assert rep.achieved_ratio == 1 >= rep.required_ratio


def test_geometric_estimate_single_pair_variant_ii():
    import random

    u = random_slab(random.Random(9))
    s = random_subslab(random.Random(10), widen5(u), Q(1, 10))
    rep = check_geometric_estimate([u], [s], Q(1, 10), "II")
    assert rep.achieved_ratio >= rep.required_ratio == Q(1, 540)


def test_geometric_estimate_membership_error():
    import random

    u = random_slab(random.Random(2))
    with pytest.raises(ValueError, match="selection 0"):
        check_geometric_estimate([u], [widen5(u)], Q(1, 2), "I")


def test_geometric_estimates_random(rng):
    for variant in ("I", "II"):
        for _ in range(60):
            hosts = [random_slab(rng) for _ in range(rng.randint(1, 6))]
            tau = Q(rng.randint(1, 16), 16)
            sels = [
                random_subslab(rng, h if variant == "I" else widen5(h), tau)
                for h in hosts
            ]
            rep = check_geometric_estimate(hosts, sels, tau, variant)
            assert rep.achieved_ratio >= rep.required_ratio
