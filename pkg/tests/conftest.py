"""Shared generators and brute-force oracles for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest

from maxgeom.dyadic import DyadicTree, Node, children_of, tree_from_nodes
from maxgeom.figs import check_fig_definition
from maxgeom.slabs import Slab

Q = Fraction


# ------------------------------- random trees ------------------------------

def grow_random_tree(rng: random.Random, max_depth=6, p_both=0.32, p_one=0.38,
                     root: Node | None = None) -> DyadicTree:
    if root is None:
        scale = rng.randint(0, 2)
        root = Node(scale, rng.randrange(1 << scale))
    nodes = {root}
    frontier = [root]
    while frontier:
        u = frontier.pop()
        if u.scale - root.scale >= max_depth:
            continue
        roll = rng.random()
        kids = children_of(u)
        if roll < p_both:
            take = kids
        elif roll < p_both + p_one:
            take = (kids[rng.randrange(2)],)
        else:
            take = ()
        for c in take:
            nodes.add(c)
            frontier.append(c)
    return tree_from_nodes(frozenset(nodes), root)


def count_subtrees(tree: DyadicTree) -> int:
    memo = {}

    def f(u: Node) -> int:
        if u in memo:
            return memo[u]
        kids = tree.children_in(u)
        total = 1 + sum(f(c) for c in kids)
        if len(kids) == 2:
            total += f(kids[0]) * f(kids[1])
        memo[u] = total
        return total

    return sum(f(u) for u in tree.nodes)


def random_tree_bounded(rng: random.Random, max_depth=6, max_enum=2500) -> DyadicTree:
    """Random tree whose full subtree enumeration stays affordable."""
    while True:
        t = grow_random_tree(rng, max_depth=max_depth)
        if count_subtrees(t) <= max_enum:
            return t


def enumerate_subtrees(tree: DyadicTree, u: Node, memo=None) -> list:
    """Every stop/extend/split subtree rooted at ``u``, as frozensets."""
    if memo is None:
        memo = {}
    if u in memo:
        return memo[u]
    out = [frozenset({u})]
    kids = tree.children_in(u)
    subs = [enumerate_subtrees(tree, c, memo) for c in kids]
    for sub in subs:
        out.extend(frozenset({u}) | s for s in sub)
    if len(kids) == 2:
        for s0 in subs[0]:
            for s1 in subs[1]:
                out.append(frozenset({u}) | s0 | s1)
    memo[u] = out
    return out


def oracle_feasible_pairs(tree: DyadicTree) -> dict:
    """Definition-level enumeration oracle for the fig DP."""
    memo: dict = {}
    result = {}
    for u in tree.nodes:
        pairs = set()
        for sub in enumerate_subtrees(tree, u, memo):
            got = check_fig_definition(sub)
            if got is not None:
                pairs.add(got)
        result[u] = pairs
    return result


# ------------------------------- random slabs ------------------------------

def random_slab(rng: random.Random, den=16) -> Slab:
    x_lo = Q(rng.randint(0, 2 * den), den)
    length = Q(rng.randint(den, 2 * den), den)
    base = Q(rng.randint(-den, den), den)
    slope = Q(rng.randint(-den, den), den)
    width = Q(rng.randint(den // 4, den), den)
    return Slab(x_lo, x_lo + length, base, slope, width)


def random_slab_family(rng: random.Random, max_count=20, den=16) -> list:
    return [random_slab(rng, den) for _ in range(rng.randint(1, max_count))]


def random_intervals(rng: random.Random, max_count=12, den=16) -> list:
    out = []
    for _ in range(rng.randint(1, max_count)):
        lo = Q(rng.randint(-8 * den, 8 * den), den)
        out.append((lo, lo + Q(rng.randint(1, 6 * den), den)))
    return out


def random_subslab(rng: random.Random, host: Slab, tau: Fraction) -> Slab:
    """Uniform-ish admissible selection inside ``host`` with area ratio >= tau."""
    den = 64
    w = host.width * (tau + (1 - tau) * Q(rng.randint(0, den), den))
    slack = host.width - w
    off0 = slack * Q(rng.randint(0, den), den)
    off1 = slack * Q(rng.randint(0, den), den)
    slope = host.slope + (off1 - off0) / host.length
    return Slab(host.x_lo, host.x_hi, host.base_y + off0, slope, w)


# ------------------------------- raster oracle -----------------------------

def raster_union_area(slabs, resolution=2000) -> float:
    """Cell-center rasterization of a slab union over its bounding box."""
    corners = [c for s in slabs for c in s.corners()]
    x0 = min(float(c[0]) for c in corners)
    x1 = max(float(c[0]) for c in corners)
    y0 = min(float(c[1]) for c in corners)
    y1 = max(float(c[1]) for c in corners)
    xs = x0 + (np.arange(resolution) + 0.5) * (x1 - x0) / resolution
    ys = (y0 + (np.arange(resolution) + 0.5) * (y1 - y0) / resolution)[:, None]
    mask = np.zeros((resolution, resolution), dtype=bool)
    for s in slabs:
        lower = float(s.intercept) + float(s.slope) * xs
        inx = (xs >= float(s.x_lo)) & (xs <= float(s.x_hi))
        mask |= inx[None, :] & (ys >= lower[None, :]) & (ys <= (lower + float(s.width))[None, :])
    cell = (x1 - x0) * (y1 - y0) / resolution**2
    return float(mask.sum()) * cell


@pytest.fixture
def rng():
    return random.Random(20240817)
