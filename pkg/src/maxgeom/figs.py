"""Fig-tree detection, feasible (scale, height) pairs, and the analytic split.

A fig tree of scale ``n`` and height ``h`` is a finite tree whose boundary has
exactly ``2**n`` maximal paths, each with node-count ``h`` and splitting number
``n``.  Height is counted as the number of nodes on a boundary path, so the
complete tree of depth ``n`` is a fig tree of scale ``n`` and height ``n + 1``.

The per-node feasible pairs satisfy the recurrence

* ``(0, 1)`` always (the single-node witness),
* ``(n, h+1)`` when one child admits ``(n, h)`` (extend),
* ``(n+1, h+1)`` when both children admit ``(n, h)`` (split),

which is complete: pruning a witness at its root inverts exactly one rule.
States are packed into Python-int bitsets, bit ``n * stride + h`` per pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .dyadic import (
    DyadicTree,
    Node,
    boundary_paths,
    children_of,
    leaves_of,
    parent_of,
    splitting_number,
    tree_from_nodes,
)


@dataclass(frozen=True)
class FigWitness:
    """A fig tree extracted from a host tree, with its certified scale and height."""

    nodes: frozenset
    root: Node
    scale: int
    height: int

    def as_tree(self) -> DyadicTree:
        return tree_from_nodes(self.nodes, self.root)

    def leaves(self) -> frozenset:
        return leaves_of(self.as_tree())


def check_fig_definition(candidate: Iterable[Node]) -> tuple[int, int] | None:
    """Test the fig-tree conditions directly on a node set.

    Returns ``(scale, height)`` when the set is an ancestor-closed tree whose
    boundary consists of ``2**n`` paths of uniform node-count and uniform
    splitting number ``n``; otherwise ``None``.
    """
    nodes = frozenset(candidate)
    if not nodes:
        return None
    root = min(nodes)
    for u in nodes:
        if u != root and (parent_of(u) not in nodes):
            return None
    try:
        tree = tree_from_nodes(nodes, root)
    except ValueError:
        return None
    paths = boundary_paths(tree)
    count = len(paths)
    n = count.bit_length() - 1
    if count != (1 << n):
        return None
    heights = {len(p) for p in paths}
    if len(heights) != 1:
        return None
    h = heights.pop()
    if any(splitting_number(p, tree) != n for p in paths):
        return None
    return n, h


def _feasible_bitsets(tree: DyadicTree) -> tuple[dict, int]:
    """Bitset of feasible (scale, height) pairs per node; returns (map, stride)."""
    stride = tree.depth() + 2  # heights run 1..depth+1, scales 0..depth
    bits: dict = {}
    for u in sorted(tree.nodes, key=lambda v: -v.scale):
        s = 1 << (0 * stride + 1)
        kids = tree.children_in(u)
        for c in kids:
            s |= bits[c] << 1
        if len(kids) == 2:
            s |= (bits[kids[0]] & bits[kids[1]]) << (stride + 1)
        bits[u] = s
    return bits, stride


def _unpack(bitset: int, stride: int) -> set:
    out = set()
    n = 0
    while bitset:
        chunk = bitset & ((1 << stride) - 1)
        h = 0
        while chunk:
            if chunk & 1:
                out.add((n, h))
            chunk >>= 1
            h += 1
        bitset >>= stride
        n += 1
    return out


def feasible_pairs(tree: DyadicTree) -> dict:
    """For every node, the set of (scale, height) pairs of fig trees rooted there."""
    bits, stride = _feasible_bitsets(tree)
    return {u: _unpack(b, stride) for u, b in bits.items()}


def analytic_split(tree: DyadicTree, cap: int | None = None) -> tuple[int, bool]:
    """Largest fig-tree scale contained in the tree, clamped at ``cap``.

    Returns ``(lam, saturated)``; ``saturated`` flags a clamped value.
    """
    if cap is not None and cap < 1:
        raise ValueError("cap must be >= 1")
    bits, stride = _feasible_bitsets(tree)
    lam = max((b.bit_length() - 1) // stride for b in bits.values())
    if cap is not None and lam >= cap:
        return cap, True
    return lam, False


def extract_fig_tree(tree: DyadicTree, n: int) -> FigWitness:
    """A scale-``n`` fig tree inside ``tree`` of minimal height.

    Ties are broken by smallest height, then lexicographically smallest root;
    backtracking prefers the split rule, then the lower-index child, so the
    witness is deterministic.
    """
    if n < 0:
        raise ValueError("negative scale")
    bits, stride = _feasible_bitsets(tree)

    def has(u: Node, nn: int, hh: int) -> bool:
        return bool(bits[u] >> (nn * stride + hh) & 1)

    best: tuple[int, Node] | None = None
    for u in sorted(tree.nodes):
        chunk = bits[u] >> (n * stride) & ((1 << stride) - 1)
        if chunk:
            h = (chunk & -chunk).bit_length() - 1  # lowest feasible height at u
            if best is None or h < best[0]:
                best = (h, u)
    if best is None:
        raise ValueError(f"scale infeasible: no fig tree of scale {n}")
    height, root = best

    nodes = set()

    def backtrack(u: Node, nn: int, hh: int) -> None:
        nodes.add(u)
        if (nn, hh) == (0, 1):
            return
        kids = tree.children_in(u)
        if nn >= 1 and len(kids) == 2 and has(kids[0], nn - 1, hh - 1) and has(kids[1], nn - 1, hh - 1):
            backtrack(kids[0], nn - 1, hh - 1)
            backtrack(kids[1], nn - 1, hh - 1)
            return
        for c in kids:
            if has(c, nn, hh - 1):
                backtrack(c, nn, hh - 1)
                return
        raise AssertionError("inconsistent feasibility bitsets")

    backtrack(root, n, height)
    return FigWitness(frozenset(nodes), root, n, height)


def complete_fig(depth: int, root: Node = Node(0, 0)) -> FigWitness:
    """The complete depth-``depth`` tree as a fig witness of scale ``depth``."""
    from .dyadic import full_tree

    t = full_tree(depth, root)
    return FigWitness(t.nodes, root, depth, depth + 1)
