"""Interval covering selections and the measure estimates built on them.

Everything here is exact: interval endpoints are rationals and every measure
comparison is decided without rounding.  The ``check_*`` functions assert
theorem-backed inequalities; a raised :class:`EstimateViolation` therefore
indicates an implementation bug, never new mathematics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .slabs import (
    Slab,
    interval_union_length,
    member_S_family,
    union_measure,
    widen5,
)

Q = Fraction


class EstimateViolation(AssertionError):
    """An exact inequality that must hold was found violated."""


def _as_intervals(family) -> list:
    out = []
    for lo, hi in family:
        lo, hi = Q(lo), Q(hi)
        if lo > hi:
            raise ValueError(f"interval with lo > hi: ({lo}, {hi})")
        out.append((lo, hi))
    if not out:
        raise ValueError("empty interval family")
    return out


def dilate_interval(iv, tau) -> tuple:
    """Interval with the same center and ``tau`` times the length."""
    lo, hi = Q(iv[0]), Q(iv[1])
    c = (lo + hi) / 2
    r = (hi - lo) / 2 * Q(tau)
    return (c - r, c + r)


def austin_cover(family) -> list[int]:
    """Greedy disjoint subfamily whose 3-dilations cover the whole union.

    Repeatedly takes the longest remaining interval (ties: smaller left
    endpoint, then input order) and discards everything it touches.  Returns
    the selected indices in selection order.
    """
    ivs = _as_intervals(family)
    order = sorted(range(len(ivs)), key=lambda i: (-(ivs[i][1] - ivs[i][0]), ivs[i][0], i))
    chosen: list[int] = []
    for i in order:
        lo, hi = ivs[i]
        if all(ivs[j][1] < lo or hi < ivs[j][0] for j in chosen):
            chosen.append(i)
    return chosen


@dataclass(frozen=True)
class DilationReport:
    union_len: Fraction
    dilated_len: Fraction
    lower_const: Fraction
    upper_const: Fraction


def check_dilation_bound(family, tau) -> DilationReport:
    """Verify that dilating every interval by ``tau`` changes the union measure
    by at most the factor sup/inf of {tau, 1/tau}."""
    tau = Q(tau)
    if tau <= 0:
        raise ValueError("tau must be positive")
    ivs = _as_intervals(family)
    plain = interval_union_length(ivs)
    dilated = interval_union_length([dilate_interval(iv, tau) for iv in ivs])
    b_tau = min(tau, 1 / tau)
    c_tau = max(tau, 1 / tau)
    if plain == 0 and dilated == 0:
        return DilationReport(plain, dilated, b_tau, c_tau)
    if not (b_tau * dilated <= plain <= c_tau * dilated):
        raise EstimateViolation(
            f"dilation bound failed: |U|={plain}, |U_tau|={dilated}, tau={tau}")
    return DilationReport(plain, dilated, b_tau, c_tau)


@dataclass(frozen=True)
class TranslationReport:
    union_len: Fraction
    translated_len: Fraction
    achieved_ratio: Fraction
    required_ratio: Fraction


def check_translation_bound(family, shifts, mu) -> TranslationReport:
    """Verify the translated union keeps at least a 1/(9(1+mu)) share of the measure.

    Requires ``|t_a| < mu * |I_a|`` for every interval (degenerate intervals are
    rejected since no shift satisfies a strict bound against zero length).
    """
    mu = Q(mu)
    if mu <= 0:
        raise ValueError("mu must be positive")
    ivs = _as_intervals(family)
    ts = [Q(t) for t in shifts]
    if len(ts) != len(ivs):
        raise ValueError("one shift per interval required")
    for (lo, hi), t in zip(ivs, ts):
        if not abs(t) < mu * (hi - lo):
            raise ValueError(f"shift {t} too large for interval ({lo}, {hi})")
    plain = interval_union_length(ivs)
    moved = interval_union_length([(lo + t, hi + t) for (lo, hi), t in zip(ivs, ts)])
    required = 1 / (9 * (1 + mu))
    if moved < required * plain:
        raise EstimateViolation(
            f"translation bound failed: |U|={plain}, |U_t|={moved}, mu={mu}")
    return TranslationReport(plain, moved, moved / plain if plain else Q(1), required)


@dataclass(frozen=True)
class GeometricEstimateReport:
    variant: str
    selected_measure: Fraction
    family_measure: Fraction
    achieved_ratio: Fraction
    required_ratio: Fraction


def check_geometric_estimate(
    u_list: Sequence[Slab], s_list: Sequence[Slab], tau, variant: str
) -> GeometricEstimateReport:
    """Verify |union of selections| >= c(tau) |union of hosts| exactly.

    Variant ``"I"`` selects inside each host (ratio tau/3); variant ``"II"``
    selects inside the 5x widened host (ratio tau/54).  Membership of every
    selection is checked first and reported by index on failure.
    """
    tau = Q(tau)
    if not 0 < tau <= 1:
        raise ValueError("tau must lie in (0, 1]")
    if len(u_list) != len(s_list) or not u_list:
        raise ValueError("need equally many hosts and selections, at least one")
    if variant not in ("I", "II"):
        raise ValueError("variant must be 'I' or 'II'")
    for idx, (u, s) in enumerate(zip(u_list, s_list)):
        host = u if variant == "I" else widen5(u)
        if not member_S_family(s, host, tau):
            raise ValueError(f"selection {idx} is not an admissible sub-slab of its host")
    selected = union_measure(list(s_list))
    hosts = union_measure(list(u_list))
    required = tau / 3 if variant == "I" else tau / 54
    if selected < required * hosts:
        raise EstimateViolation(
            f"geometric estimate {variant} failed: |S|={selected}, |U|={hosts}, tau={tau}")
    return GeometricEstimateReport(variant, selected, hosts, selected / hosts, required)
