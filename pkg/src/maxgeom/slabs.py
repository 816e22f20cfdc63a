"""Exact geometry of vertical-sided parallelograms (slabs) over the rationals.

A slab is the region between two parallel lines over an x-interval:
cross-section at ``x`` is ``[base_y + slope*(x - x_lo), ... + width]``.  All
coordinates are :class:`fractions.Fraction`, and every measure returned here
is exact.  Union measure uses an x-sweep over the event points where boundary
lines cross; between events the union's cross-section length is affine in x,
so a midpoint evaluation integrates each piece exactly.  Large families of
slabs sharing one x-extent (the shape produced by the random tube
constructions) are routed through an integer-vectorized sweep; the answer is
identical, only faster.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .dyadic import Node, validate_node

_FAST_MIN_SLABS = 12
_INT64_GUARD = 1 << 62

Q = Fraction


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Slab:
    """Parallelogram with vertical left/right sides, exact rational data."""

    x_lo: Fraction
    x_hi: Fraction
    base_y: Fraction
    slope: Fraction
    width: Fraction

    def __post_init__(self):
        for f in ("x_lo", "x_hi", "base_y", "slope", "width"):
            object.__setattr__(self, f, _frac(getattr(self, f)))
        if not self.x_lo < self.x_hi:
            raise ValueError("need x_lo < x_hi")
        if not self.width > 0:
            raise ValueError("need width > 0")

    @property
    def length(self) -> Fraction:
        return self.x_hi - self.x_lo

    @property
    def area(self) -> Fraction:
        return self.length * self.width

    @property
    def intercept(self) -> Fraction:
        """c in the lower-line equation y = c + slope * x."""
        return self.base_y - self.slope * self.x_lo

    def lower_at(self, x: Fraction) -> Fraction:
        return self.base_y + self.slope * (x - self.x_lo)

    def upper_at(self, x: Fraction) -> Fraction:
        return self.lower_at(x) + self.width

    def contains_point(self, x, y) -> bool:
        x, y = _frac(x), _frac(y)
        return self.x_lo <= x <= self.x_hi and self.lower_at(x) <= y <= self.upper_at(x)

    def corners(self) -> tuple:
        """Vertices in drawing order: low-left, up-left, up-right, low-right."""
        return (
            (self.x_lo, self.base_y),
            (self.x_lo, self.base_y + self.width),
            (self.x_hi, self.upper_at(self.x_hi)),
            (self.x_hi, self.lower_at(self.x_hi)),
        )


def dump_slab(s: Slab) -> str:
    """Single-line text form: 'x_lo x_hi base_y slope width' with p/q rationals."""
    return f"{s.x_lo} {s.x_hi} {s.base_y} {s.slope} {s.width}"


def load_slab(text: str) -> Slab:
    parts = text.split()
    if len(parts) != 5:
        raise ValueError(f"expected five fields, got {len(parts)}")
    return Slab(*(Fraction(p) for p in parts))


def contains_slab(outer: Slab, inner: Slab) -> bool:
    """Exact containment test (cross-sections are affine, so endpoints suffice)."""
    if not (outer.x_lo <= inner.x_lo and inner.x_hi <= outer.x_hi):
        return False
    for x in (inner.x_lo, inner.x_hi):
        if inner.lower_at(x) < outer.lower_at(x) or inner.upper_at(x) > outer.upper_at(x):
            return False
    return True


def realize_node(u: Node) -> Slab:
    """Geometric cell of a dyadic node: slope k/2^n, width 2^-n over x in [0, 1]."""
    validate_node(u)
    den = 1 << u.scale
    return Slab(Q(0), Q(1), Q(0), Q(u.index, den), Q(1, den))


def scale_translate(s: Slab, h, t=(0, 0)) -> Slab:
    """Homothety by ``h`` about the origin followed by translation by ``t``."""
    h = _frac(h)
    if h <= 0:
        raise ValueError("dilation factor must be positive")
    tx, ty = _frac(t[0]), _frac(t[1])
    return Slab(h * s.x_lo + tx, h * s.x_hi + tx, h * s.base_y + ty, s.slope, h * s.width)


def translate(s: Slab, t) -> Slab:
    return scale_translate(s, 1, t)


def shifted_copy(s: Slab) -> Slab:
    """The slab moved one own-length to the right along its orientation."""
    l = s.length
    return translate(s, (l, s.slope * l))


def widen5(s: Slab) -> Slab:
    """Same x-extent, slope and center line, but five times wider."""
    return Slab(s.x_lo, s.x_hi, s.base_y - 2 * s.width, s.slope, 5 * s.width)


def member_S_family(s: Slab, u: Slab, tau) -> bool:
    """Whether ``s`` lies in ``u`` with equal length and at least ``tau`` of its area."""
    tau = _frac(tau)
    if tau <= 0:
        raise ValueError("tau must be positive")
    return s.length == u.length and contains_slab(u, s) and s.area >= tau * u.area


# --------------------------- 1-D interval unions ---------------------------

def interval_union_length(intervals: Iterable[tuple]) -> Fraction:
    """Exact measure of a union of closed intervals given as (lo, hi) pairs."""
    ivs = sorted((lo, hi) for lo, hi in intervals if hi > lo)
    total = Q(0)
    cur_lo = cur_hi = None
    for lo, hi in ivs:
        if cur_hi is None or lo > cur_hi:
            if cur_hi is not None:
                total += cur_hi - cur_lo
            cur_lo, cur_hi = lo, hi
        elif hi > cur_hi:
            cur_hi = hi
    if cur_hi is not None:
        total += cur_hi - cur_lo
    return total


# --------------------------- union measure sweep ---------------------------

def union_measure(slabs: Sequence[Slab], clip: Slab | None = None) -> Fraction:
    """Exact Lebesgue measure of a union of slabs, optionally clipped to ``clip``."""
    slab_list = list(dict.fromkeys(slabs))
    if not slab_list:
        raise ValueError("empty slab list")
    x0 = min(s.x_lo for s in slab_list)
    x1 = max(s.x_hi for s in slab_list)
    if clip is not None:
        x0 = max(x0, clip.x_lo)
        x1 = min(x1, clip.x_hi)
    if x0 >= x1:
        return Q(0)
    if _fast_eligible(slab_list, clip):
        res = _union_fast(slab_list, clip, x0, x1)
        if res is not None:
            return res
    return _union_frac(slab_list, clip, x0, x1)


def intersection_measure(a: Slab, b: Slab) -> Fraction:
    return union_measure([a], clip=b)


def _lines_of(slabs: Sequence[Slab], clip: Slab | None):
    lines = []
    for s in slabs:
        c = s.intercept
        lines.append((s.slope, c))
        lines.append((s.slope, c + s.width))
    if clip is not None:
        c = clip.intercept
        lines.append((clip.slope, c))
        lines.append((clip.slope, c + clip.width))
    return sorted(set(lines))


def _union_frac(slabs, clip, x0, x1) -> Fraction:
    events = {x0, x1}
    for s in slabs:
        for e in (s.x_lo, s.x_hi):
            if x0 < e < x1:
                events.add(e)
    lines = _lines_of(slabs, clip)
    for i in range(len(lines)):
        s1, c1 = lines[i]
        for j in range(i + 1, len(lines)):
            s2, c2 = lines[j]
            if s1 == s2:
                continue
            x = (c2 - c1) / (s1 - s2)
            if x0 < x < x1:
                events.add(x)
    evs = sorted(events)
    total = Q(0)
    for e0, e1 in zip(evs, evs[1:]):
        xm = (e0 + e1) / 2
        ivs = []
        for s in slabs:
            if s.x_lo <= e0 and s.x_hi >= e1:
                lo = s.lower_at(xm)
                ivs.append((lo, lo + s.width))
        if clip is not None:
            clo = clip.lower_at(xm)
            chi = clo + clip.width
            ivs = [(max(lo, clo), min(hi, chi)) for lo, hi in ivs]
        total += interval_union_length(ivs) * (e1 - e0)
    return total


def _pow2_den(x: Fraction) -> bool:
    d = x.denominator
    return d & (d - 1) == 0


def _fast_eligible(slabs, clip) -> bool:
    if len(slabs) < _FAST_MIN_SLABS:
        return False
    xl, xh = slabs[0].x_lo, slabs[0].x_hi
    if any(s.x_lo != xl or s.x_hi != xh for s in slabs):
        return False
    vals = [xl, xh]
    for s in list(slabs) + ([clip] if clip is not None else []):
        vals += [s.slope, s.intercept, s.width, s.x_lo, s.x_hi]
    return all(_pow2_den(v) for v in vals)


def _union_fast(slabs, clip, x0, x1) -> Fraction | None:
    """Integer-vectorized sweep for same-x-extent dyadic families; None on overflow risk."""
    ds = 1
    dc = 1
    for s in list(slabs) + ([clip] if clip is not None else []):
        ds = max(ds, s.slope.denominator)
        dc = max(dc, s.intercept.denominator, s.width.denominator)
    S_int = [int(s.slope * ds) for s in slabs]
    C_int = [int(s.intercept * dc) for s in slabs]
    W_int = [int(s.width * dc) for s in slabs]
    line_set = {(sl, ic) for sl, ic in zip(S_int, C_int)}
    line_set |= {(sl, ic + w) for sl, ic, w in zip(S_int, C_int, W_int)}
    if clip is not None:
        cs, cc, cw = int(clip.slope * ds), int(clip.intercept * dc), int(clip.width * dc)
        line_set |= {(cs, cc), (cs, cc + cw)}
    lines = sorted(line_set)
    max_c = max(abs(c) for _, c in lines)
    max_s = max(abs(s) for s, _ in lines)
    n0, d0 = x0.numerator, x0.denominator
    n1, d1 = x1.numerator, x1.denominator
    if 2 * max_c * ds * max(d0, d1) >= _INT64_GUARD:
        return None
    if 2 * max_s * dc * max(abs(n0), abs(n1), 1) >= _INT64_GUARD:
        return None

    LS = np.array([l[0] for l in lines], dtype=np.int64)
    LC = np.array([l[1] for l in lines], dtype=np.int64)
    ii, jj = np.triu_indices(len(lines), k=1)
    dnum = (LC[jj] - LC[ii]) * ds
    dden = (LS[ii] - LS[jj]) * dc
    keep = dden != 0
    dnum, dden = dnum[keep], dden[keep]
    neg = dden < 0
    dnum[neg] = -dnum[neg]
    dden[neg] = -dden[neg]
    g = np.gcd(np.abs(dnum), dden)
    g[g == 0] = 1
    dnum //= g
    dden //= g
    # in-range filter, exact: x0 < num/den < x1
    keep = (dnum * d0 > n0 * dden) & (dnum * d1 < n1 * dden)
    pairs = np.unique(np.stack([dnum[keep], dden[keep]], axis=1), axis=0)
    S = np.array(S_int, dtype=np.int64)
    C = np.array(C_int, dtype=np.int64)
    W = np.array(W_int, dtype=np.int64)

    # exact ascending order: float keys are monotone, ties resolved exactly
    keyf = pairs[:, 0] / pairs[:, 1]
    order = np.argsort(keyf, kind="stable")
    pairs = pairs[order]
    keyf = keyf[order]
    evs = [x0]
    i = 0
    while i < len(pairs):
        j = i
        while j + 1 < len(pairs) and keyf[j + 1] == keyf[i]:
            j += 1
        group = [Q(int(pairs[t, 0]), int(pairs[t, 1])) for t in range(i, j + 1)]
        evs.extend(sorted(set(group)))
        i = j + 1
    evs.append(x1)

    # per-segment midpoints and exact widths
    nm, dm, dxn, dxd = [], [], [], []
    for e0, e1 in zip(evs, evs[1:]):
        mid = (e0 + e1) / 2
        dx = e1 - e0
        nm.append(mid.numerator)
        dm.append(mid.denominator)
        dxn.append(dx.numerator)
        dxd.append(dx.denominator)
    nm_max = max(abs(v) for v in nm)
    dm_max = max(dm)
    boundC = (int(np.abs(C).max(initial=0)) + int(W.max(initial=0))) * ds * dm_max
    boundS = int(np.abs(S).max(initial=0)) * nm_max * dc
    if boundC + boundS >= _INT64_GUARD:
        return None

    nm_a = np.array(nm, dtype=np.int64)
    dm_a = np.array(dm, dtype=np.int64)
    if clip is not None:
        Sc, Cc, Wc = cs, cc, cw

    total = Q(0)
    chunk = 512
    for a in range(0, len(nm_a), chunk):
        b = min(a + chunk, len(nm_a))
        mul_c = (ds * dm_a[a:b])[:, None]
        mul_s = (dc * nm_a[a:b])[:, None]
        L = C[None, :] * mul_c + S[None, :] * mul_s
        R = L + W[None, :] * mul_c
        if clip is not None:
            CLo = Cc * mul_c + Sc * mul_s
            CHi = CLo + Wc * mul_c
            L = np.maximum(L, CLo)
            R = np.minimum(R, CHi)
            R = np.maximum(R, L)
        order = np.argsort(L, axis=1, kind="stable")
        Ls = np.take_along_axis(L, order, axis=1)
        Rs = np.take_along_axis(R, order, axis=1)
        M = np.maximum.accumulate(Rs, axis=1)
        gaps = np.clip(Ls[:, 1:] - M[:, :-1], 0, None).sum(axis=1)
        cover = M[:, -1] - Ls[:, 0] - gaps
        for t in range(b - a):
            u = int(cover[t])
            if u:
                k = a + t
                total += Q(u * dxn[k], dc * ds * dm[k] * dxd[k])
    return total
