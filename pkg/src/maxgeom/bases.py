"""Example families of rectangle shapes and their dyadic discretizations.

A rectangle shape is reduced to (eccentricity, orientation) and rounded onto
the dyadic grid: scale is the least ``n`` with ``2**n >= 1/e`` and the index is
the orientation's position among the ``2**n`` equal sectors of ``[0, pi/4)``.
Generators include the axis-parallel family, power-law coupled families, the
``(1/n, sin(n) pi/4)`` family, and directional families driven by a set of
orientations (finite sets, or the middle-thirds Cantor set handled exactly).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import mpmath

from .dyadic import Node, build_tree, is_ancestor
from .figs import analytic_split
from .slabs import Slab, realize_node

Q = Fraction

QUARTER_PI = math.pi / 4
_BOUNDARY_EPS = 1e-9

CANTOR = "cantor"


@dataclass(frozen=True)
class RectSpec:
    """Shape data of a rectangle: eccentricity in (0, 1], orientation in [0, pi/4)."""

    eccentricity: object
    orientation: float

    def __post_init__(self):
        e = self.eccentricity
        if not 0 < e <= 1:
            raise ValueError(f"eccentricity {e} outside (0, 1]")
        if not 0 <= self.orientation < QUARTER_PI:
            raise ValueError(f"orientation {self.orientation} outside [0, pi/4)")


def _scale_for_eccentricity(e) -> int:
    """Least n with 2**n >= 1/e (exact for Fractions)."""
    if isinstance(e, Fraction):
        inv = 1 / e
        ceil_inv = -((-inv.numerator) // inv.denominator)
        return max(0, (ceil_inv - 1).bit_length())
    n = max(0, math.ceil(math.log2(1 / e)))
    while (1 << n) * e < 1:
        n += 1
    while n > 0 and (1 << (n - 1)) * e >= 1:
        n -= 1
    return n


def node_from_ratio(e, ratio) -> Node:
    """Dyadic node for eccentricity ``e`` and orientation given as a share of pi/4."""
    if not 0 <= ratio < 1:
        raise ValueError(f"orientation ratio {ratio} outside [0, 1)")
    n = _scale_for_eccentricity(e)
    if isinstance(ratio, Fraction):
        k = int(ratio * (1 << n))
    else:
        k = int(math.floor(ratio * (1 << n)))
    return Node(n, min(max(k, 0), (1 << n) - 1))


def rect_to_node(r: RectSpec) -> Node:
    return node_from_ratio(r.eccentricity, r.orientation / QUARTER_PI)


def _sine_ratio(n: int, bits: int) -> tuple:
    """(ratio, index) for sin(n) against a 2**bits grid, or None for negative sine.

    Double precision decides the cell; when the value sits within 1e-9 of a
    cell boundary the index is recomputed with 50-digit arithmetic.
    """
    s = math.sin(n)
    scaled = s * (1 << bits)
    if abs(s) < _BOUNDARY_EPS or abs(scaled - round(scaled)) < _BOUNDARY_EPS:
        with mpmath.workdps(50):
            exact = mpmath.sin(n)
            if exact < 0:
                return None
            k = int(mpmath.floor(exact * (1 << bits)))
            return float(exact), k
    if s < 0:
        return None
    return s, int(math.floor(scaled))


# ----------------------------- Cantor directions ----------------------------

@lru_cache(maxsize=None)
def meets_cantor(lo: Fraction, hi: Fraction) -> bool:
    """Whether the half-open interval [lo, hi) intersects the middle-thirds set."""
    if hi <= 0 or lo >= 1:
        return False
    if lo <= 0 or hi >= 1:
        return True  # the set accumulates at both endpoints
    return meets_cantor(3 * lo, 3 * hi) or meets_cantor(3 * lo - 2, 3 * hi - 2)


# ------------------------------- basis specs --------------------------------

@dataclass(frozen=True)
class BasisSpec:
    """Recipe for one generated family, with the generation caps.

    ``kind`` is one of ``strong``, ``power``, ``sine``, ``directional``,
    ``rarefied``.  Power families use exponents ``a``, ``b``; directional
    kinds take ``omega`` as a tuple of orientation ratios in [0, 1) or the
    marker ``"cantor"``.  ``depth_cap`` discards nodes deeper than the cap;
    ``count_cap`` stops the generator enumeration.
    """

    kind: str
    depth_cap: int
    count_cap: int = 256
    a: object = 1
    b: object = 1
    omega: object = field(default=())

    def __post_init__(self):
        if self.kind not in ("strong", "power", "sine", "directional", "rarefied"):
            raise ValueError(f"unknown basis kind {self.kind!r}")
        if self.depth_cap < 0 or self.count_cap < 1:
            raise ValueError("caps must be positive")


def _power_node(n: int, a, b) -> Node:
    if isinstance(a, int) and isinstance(b, int):
        ea_inv = n**a
        scale = (ea_inv - 1).bit_length()
        k = (1 << scale) // n**b
        return Node(scale, min(k, (1 << scale) - 1))
    return node_from_ratio(1.0 / float(n) ** float(a), 1.0 / float(n) ** float(b))


def _directional_cells(omega, scale: int) -> set:
    if omega == CANTOR:
        return {
            k for k in range(1 << scale)
            if meets_cantor(Q(k, 1 << scale), Q(k + 1, 1 << scale))
        }
    return {int(Q(r) * (1 << scale)) for r in omega}


def generate_basis(spec: BasisSpec) -> frozenset:
    """Deterministic node family for the spec, respecting both caps."""
    out: set = set()
    if spec.kind == "strong":
        out = {Node(m, 0) for m in range(spec.depth_cap + 1)}
    elif spec.kind == "power":
        for n in range(1, spec.count_cap + 1):
            u = _power_node(n, spec.a, spec.b)
            if u.scale <= spec.depth_cap:
                out.add(u)
    elif spec.kind == "sine":
        for n in range(1, spec.count_cap + 1):
            scale = _scale_for_eccentricity(Q(1, n))
            if scale > spec.depth_cap:
                continue
            got = _sine_ratio(n, scale)
            if got is None:
                continue
            out.add(Node(scale, min(got[1], (1 << scale) - 1)))
    elif spec.kind in ("directional", "rarefied"):
        scales = range(spec.depth_cap + 1) if spec.kind == "directional" else [spec.depth_cap]
        for m in scales:
            out |= {Node(m, k) for k in _directional_cells(spec.omega, m)}
    return frozenset(out)


# ------------------------------ claim checking ------------------------------

def sine_claim_check(H: int, n_max: int) -> dict:
    """Smallest witness n per orientation cell at resolution ``H``.

    A witness for cell ``k`` is an integer ``n <= n_max`` with nonnegative
    ``sin(n)`` falling in ``[k/2^H, (k+1)/2^H)`` and ``1/n <= 2^-H``.  Cells
    without a witness map to ``None``.
    """
    if H < 1:
        raise ValueError("H must be >= 1")
    table: dict = {k: None for k in range(1 << H)}
    missing = 1 << H
    for n in range(1 << H, n_max + 1):
        got = _sine_ratio(n, H)
        if got is None:
            continue
        k = got[1]
        if table[k] is None:
            table[k] = n
            missing -= 1
            if not missing:
                break
    return table


# ------------------------------ growth profiles -----------------------------

def split_growth_profile(spec: BasisSpec, depths: Iterable[int]) -> list:
    """(depth, analytic split, saturated flag) for the family at each depth cap."""
    depths = list(depths)
    if depths != sorted(depths):
        raise ValueError("depths must be increasing")
    rows = []
    for d in depths:
        family = generate_basis(replace(spec, depth_cap=d))
        if not family:
            rows.append((d, 0, False))
            continue
        lam, sat = analytic_split(build_tree(family), cap=None)
        rows.append((d, lam, sat))
    return rows


# ------------------------------ assignments ---------------------------------

def leaf_assignment(family: Iterable[Node], leaves: Iterable[Node]) -> Mapping:
    """Realized generator strictly inside each leaf cell (shallowest, then lowest).

    Raises when some leaf has no strictly deeper generator in the family;
    widen the generation caps in that case.
    """
    fam = sorted(set(family))
    out = {}
    for leaf in set(leaves):
        best = None
        for g in fam:
            if g.scale > leaf.scale and is_ancestor(leaf, g):
                if best is None or (g.scale, g.index) < best:
                    best = (g.scale, g.index)
        if best is None:
            raise ValueError(f"no generator strictly inside leaf {leaf}")
        out[leaf] = realize_node(Node(*best))
    return out


def bottom_half_assignment(leaves: Iterable[Node]) -> Mapping:
    """The lower half of each leaf cell as its generator (a convenient fat choice)."""
    out = {}
    for leaf in set(leaves):
        cell = realize_node(leaf)
        out[leaf] = Slab(cell.x_lo, cell.x_hi, cell.base_y, cell.slope, cell.width / 2)
    return out
