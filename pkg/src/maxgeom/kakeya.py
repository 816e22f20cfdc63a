"""Randomized Kakeya-type sets, witness parallelograms, and level certificates.

The random set construction places ``2**h`` vertically stacked copies of
randomly chosen leaf cells of a fig tree (the near set ``A1``) together with
their along-orientation shifts (the far set ``A2``).  Witness slabs certify
superlevel membership pointwise: each sampled point is handed one concrete
dilate of a basis element through it whose average over the relevant mass set
is computed exactly.

The witness-parallelogram construction works in coordinates normalized so the
host cell is the unit square.  Around a generator ``v`` inside the host it
sweeps translated double dilates of ``v`` that are guaranteed to contain a
half-scale copy of ``v`` inside the anchor cell; such a dilate has mass
average at least 1/16 against the anchor.  The swept region is returned as a
single slab that always satisfies the quarter-area membership in the 5x
widened host (padding beyond the swept range is honest: those points still
receive a legitimate witness, whose exact average is reported as computed).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .covering import GeometricEstimateReport, check_geometric_estimate
from .dyadic import Node
from .figs import FigWitness
from .slabs import (
    Slab,
    contains_slab,
    realize_node,
    scale_translate,
    shifted_copy,
    translate,
    union_measure,
    widen5,
)

Q = Fraction


def _clamp(x, lo, hi):
    return max(lo, min(hi, x))


# ----------------------------- random samples ------------------------------

@dataclass(frozen=True)
class KakeyaSample:
    """One realization of the random tube set attached to a fig tree."""

    fig: FigWitness
    leaf_choices: tuple
    translations: tuple
    A1_slabs: tuple
    A2_slabs: tuple
    seed: int


def sample_random_set(fig: FigWitness, seed: int) -> KakeyaSample:
    """Draw ``2**height`` independent uniform leaves and build both tube sets.

    Tube ``k`` is the leaf cell raised by ``(k-1)/2**height`` root-cell widths,
    so a fig rooted anywhere produces the exact affine image of the
    root-at-unit-cell construction.
    """
    leaves = sorted(fig.leaves())
    count = 1 << fig.height
    rng = random.Random(seed)
    choices = tuple(leaves[rng.randrange(len(leaves))] for _ in range(count))
    spacing = Q(1, 1 << fig.root.scale)
    translations = tuple((Q(0), Q(k - 1, count) * spacing) for k in range(1, count + 1))
    a1 = []
    a2 = []
    for leaf, t in zip(choices, translations):
        cell = realize_node(leaf)
        a1.append(translate(cell, t))
        a2.append(translate(shifted_copy(cell), t))
    return KakeyaSample(fig, choices, translations, tuple(a1), tuple(a2), seed)


def bateman_witness(sample: KakeyaSample, k: int) -> Slab:
    """Double dilate of tube ``k`` spanning both its near and far copies."""
    r = sample.A1_slabs[k]
    return Slab(r.x_lo, r.x_lo + 2 * r.length, r.base_y - r.width / 2, r.slope, 2 * r.width)


@dataclass(frozen=True)
class RatioStats:
    """Distribution summary of |A2| / |A1| over independent samples."""

    scale: int
    height: int
    trials: int
    ratios: tuple
    mean: float
    q10: float
    q50: float
    q90: float


def ratio_statistics(fig: FigWitness, trials: int, seed: int) -> RatioStats:
    """Exact per-trial measures of both tube unions; one derived seed per trial."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ratios = []
    for t in range(trials):
        sample = sample_random_set(fig, seed * 1_000_003 + t)
        a1 = union_measure(sample.A1_slabs)
        a2 = union_measure(sample.A2_slabs)
        ratios.append(float(a2 / a1))
    arr = np.array(ratios)
    return RatioStats(
        fig.scale,
        fig.height,
        trials,
        tuple(ratios),
        float(arr.mean()),
        float(np.quantile(arr, 0.1)),
        float(np.quantile(arr, 0.5)),
        float(np.quantile(arr, 0.9)),
    )


# ------------------------- witness parallelograms --------------------------

@dataclass(frozen=True)
class WitnessFamily:
    """Point-to-witness map for one (host, generator) pair.

    Witnesses are double dilates of the generator.  A witness is *anchored*
    when it contains a half-scale copy of the generator inside the anchor
    cell (the host for right-band points, the shifted host for left-band
    points), which pins its mass average at 1/16 or more.  Points beyond the
    anchored range still receive a containing witness, just without the
    guarantee.
    """

    host: Slab
    generator: Slab
    region: Slab
    c_hat: Fraction
    sigma_hat: Fraction
    w_hat: Fraction
    z_lo: Fraction
    z_hi: Fraction

    def _to_norm(self, point, offset):
        u = self.host
        x = Q(point[0]) - Q(offset[0])
        y = Q(point[1]) - Q(offset[1])
        xp = (x - u.x_lo) / u.length
        yp = (y - u.lower_at(x)) / u.width
        return xp, yp

    def _from_norm(self, x_lo, x_hi, lower_at_lo, width, offset) -> Slab:
        u = self.host
        ox, oy = Q(offset[0]), Q(offset[1])
        X_lo = u.x_lo + u.length * x_lo
        X_hi = u.x_lo + u.length * x_hi
        slope = u.slope + (u.width / u.length) * self.sigma_hat
        base = u.lower_at(X_lo) + u.width * lower_at_lo
        return Slab(X_lo + ox, X_hi + ox, base + oy, slope, u.width * width)

    def _witness_from_offset(self, e: Fraction, anchor: int, offset) -> Slab:
        # normalized witness: x' in [0, 2], lower = e + c/2 + sigma*(x' - anchor)
        lower0 = e + self.c_hat / 2 + self.sigma_hat * (0 - anchor)
        return self._from_norm(Q(0), Q(2), lower0, 2 * self.w_hat, offset)

    def witness_for(self, point, offset=(0, 0)) -> Slab:
        """A containing double dilate for a sampled point, anchored when possible.

        Left-band points (normalized x <= 1) are aimed at the shifted host;
        right-band points at the host itself.  The slab is parameterized by
        its net vertical offset, snapped to a coarse lattice so that repeated
        queries share witnesses (and their cached averages).
        """
        xp, yp = self._to_norm(point, offset)
        anchor = 0 if xp > 1 else 1
        w = self.w_hat
        base = self.c_hat / 2 + self.sigma_hat * (xp - anchor)
        lo_contain = yp - 2 * w - base
        hi_contain = yp - base
        lo_anchor = self.z_lo - 3 * w / 2
        hi_anchor = self.z_hi
        center = yp - w - base
        lo = max(lo_contain, lo_anchor)
        hi = min(hi_contain, hi_anchor)
        if lo <= hi:
            e = _clamp(center, lo, hi)
        else:
            e = center  # out of anchored reach; witness still contains the point
            lo, hi = lo_contain, hi_contain
        step = w / 2
        snapped = self.z_lo + round((e - self.z_lo) / step) * step
        if lo <= snapped <= hi:
            e = snapped
        return self._witness_from_offset(e, anchor, offset)


def witness_parallelogram(u: Slab, v: Slab) -> tuple:
    """Region of certified-high maximal values for the generator ``v`` inside ``u``.

    Returns ``(s, family)`` where ``s`` has the same x-extent as ``u``, lies in
    the 5x widened host with at least a quarter of its area, and
    ``shifted_copy(s)`` lies in the widened shifted host likewise.  The family
    hands out per-point witness slabs (double dilates of ``v``).
    """
    if not contains_slab(u, v):
        raise ValueError("generator must be contained in the host")
    if v.length != u.length:
        raise ValueError("generator must span the host's full x-extent")
    if 2 * v.area > u.area:
        raise ValueError("generator must have at most half the host's area")

    l, wu = u.length, u.width
    c_hat = (v.lower_at(u.x_lo) - u.base_y) / wu
    sigma_hat = l * (v.slope - u.slope) / wu
    w_hat = v.width / wu

    bot2 = (c_hat + min(Q(0), sigma_hat)) / 2
    top2 = (c_hat + max(Q(0), sigma_hat) + w_hat) / 2
    z_lo, z_hi = -bot2, 1 - top2

    w_cov = (z_hi - z_lo) + 7 * w_hat / 2
    w_s = max(w_cov, Q(5, 4))
    ell0 = c_hat / 2 - bot2 - 3 * w_hat / 2 - (w_s - w_cov) / 2

    # fit the region inside both widened bands (host and shifted host)
    smin, smax = min(Q(0), sigma_hat), max(Q(0), sigma_hat)
    lo_bound = max(Q(-2) - smin, Q(-2) - sigma_hat - smin)
    hi_bound = min(Q(3) - smax - w_s, Q(3) - sigma_hat - smax - w_s)
    if lo_bound > hi_bound:
        raise AssertionError("region cannot fit the widened bands")
    ell0 = _clamp(ell0, lo_bound, hi_bound)

    slope_s = u.slope + (wu / l) * sigma_hat
    base_s = u.base_y + wu * ell0
    s = Slab(u.x_lo, u.x_hi, base_s, slope_s, wu * w_s)
    fam = WitnessFamily(u, v, s, c_hat, sigma_hat, w_hat, z_lo, z_hi)
    return s, fam


# ------------------------------ far assembly -------------------------------

@dataclass(frozen=True)
class B2Assembly:
    slabs: tuple
    families: tuple
    report: GeometricEstimateReport


def assemble_B2(sample: KakeyaSample, assignment: Mapping) -> B2Assembly:
    """Shifted witness regions for every tube, certified against the far set.

    ``assignment`` maps each chosen leaf to a basis element strictly inside
    its cell.  The returned report certifies |B2| >= (1/4)/54 |A2| via the
    widened geometric estimate.
    """
    slabs = []
    fams = []
    for leaf, t in zip(sample.leaf_choices, sample.translations):
        if leaf not in assignment:
            raise ValueError(f"assignment missing chosen leaf {leaf}")
        s, fam = witness_parallelogram(realize_node(leaf), assignment[leaf])
        slabs.append(translate(shifted_copy(s), t))
        fams.append(fam)
    report = check_geometric_estimate(list(sample.A2_slabs), slabs, Q(1, 4), "II")
    return B2Assembly(tuple(slabs), tuple(fams), report)


# --------------------------- superlevel sampling ---------------------------

def _grid_points(s: Slab, g: int):
    for i in range(g):
        x = s.x_lo + s.length * Q(2 * i + 1, 2 * g)
        lo = s.lower_at(x)
        for j in range(g):
            yield x, lo + s.width * Q(2 * j + 1, 2 * g)


def verify_superlevel(
    sample: KakeyaSample,
    region: Sequence[Slab],
    witnesses: Sequence,
    eta,
    samples_per_slab: int = 10,
) -> float:
    """Fraction of grid points whose witness has exact near-set average above ``eta``.

    ``witnesses`` holds one entry per region slab: either a fixed slab or a
    callable mapping a point to its witness slab.  Averages are exact
    rationals; each distinct witness is integrated once.
    """
    eta = Q(eta)
    if not 0 <= eta < 1:
        raise ValueError("eta must lie in [0, 1)")
    if len(witnesses) != len(region):
        raise ValueError("one witness entry per region slab required")
    mass = list(sample.A1_slabs)
    cache: dict = {}

    def avg(w: Slab) -> Fraction:
        got = cache.get(w)
        if got is None:
            got = union_measure(mass, clip=w) / w.area
            cache[w] = got
        return got

    total = 0
    passed = 0
    for slab, wit in zip(region, witnesses):
        for pt in _grid_points(slab, samples_per_slab):
            total += 1
            w = wit(pt) if callable(wit) else wit
            if w.contains_point(*pt) and avg(w) > eta:
                passed += 1
    return passed / total if total else 1.0


# ------------------------------ certificates -------------------------------

@dataclass(frozen=True)
class KakeyaCertificate:
    """A verified (eta, epsilon) level for the near set of one sample."""

    eta: Fraction
    epsilon: Fraction
    superlevel_area: Fraction
    A1_area: Fraction
    verified_fraction: float


def kakeya_level_and_bound(A1_area, superlevel_area, eta, p) -> tuple:
    """Level ratio and the implied operator-norm lower bound eta * eps^(-1/p)."""
    A1_area, superlevel_area, eta = Q(A1_area), Q(superlevel_area), Q(eta)
    if A1_area <= 0 or superlevel_area <= 0:
        raise ValueError("areas must be positive")
    if not 0 < eta < 1:
        raise ValueError("eta must lie in (0, 1)")
    if not p > 1:
        raise ValueError("p must exceed 1")
    eps = A1_area / superlevel_area
    bound = float(eta) * float(eps) ** (-1.0 / p)
    return eps, bound


def certify_bateman(sample: KakeyaSample, samples_per_slab: int = 10) -> KakeyaCertificate:
    """Level (1/4, |A1|/|A2|): the far set sits inside the 1/4 superlevel set."""
    a1 = union_measure(sample.A1_slabs)
    a2 = union_measure(sample.A2_slabs)
    wits = [bateman_witness(sample, k) for k in range(len(sample.A2_slabs))]
    frac = verify_superlevel(sample, sample.A2_slabs, wits, Q(1, 4), samples_per_slab)
    return KakeyaCertificate(Q(1, 4), a1 / a2, a2, a1, frac)


def certify_assembled(
    sample: KakeyaSample, assembly: B2Assembly, samples_per_slab: int = 6
) -> KakeyaCertificate:
    """Level (1/16, |A1|/|B2|) through the assembled witness regions."""
    a1 = union_measure(sample.A1_slabs)
    b2 = union_measure(assembly.slabs)
    wits = [
        (lambda pt, fam=fam, t=t: fam.witness_for(pt, offset=t))
        for fam, t in zip(assembly.families, sample.translations)
    ]
    frac = verify_superlevel(sample, assembly.slabs, wits, Q(1, 16), samples_per_slab)
    return KakeyaCertificate(Q(1, 16), a1 / b2, b2, a1, frac)


# ------------------------- maximal function probing ------------------------

def eval_maximal_lower(
    x,
    generator: Slab,
    region: Sequence[Slab],
    dilations=(Q(1, 2), 1, 2, 4),
    positions: int = 5,
    extra_slabs: Sequence[Slab] = (),
) -> Fraction:
    """Certified lower bound for the maximal average of a region's indicator at ``x``.

    Scans dilates of the generator positioned so the query point sits on a
    grid of relative positions, plus any explicitly supplied slabs; returns
    the best exact average found (never an upper bound).
    """
    px, py = Q(x[0]), Q(x[1])
    region = list(region)
    best = Q(0)
    if not region:
        return best
    candidates = []
    for h in dilations:
        g0 = scale_translate(generator, h)
        for i in range(positions):
            ax = g0.x_lo + g0.length * Q(2 * i + 1, 2 * positions)
            for j in range(positions):
                ay = g0.lower_at(ax) + g0.width * Q(2 * j + 1, 2 * positions)
                candidates.append(translate(g0, (px - ax, py - ay)))
    candidates.extend(w for w in extra_slabs if w.contains_point(px, py))
    for w in candidates:
        val = union_measure(region, clip=w) / w.area
        if val > best:
            best = val
    return best
