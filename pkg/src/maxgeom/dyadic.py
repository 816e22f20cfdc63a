"""Dyadic node addressing, ancestor-closed trees, paths and their splitting numbers.

A node ``(n, k)`` stands for the scale-``n`` slanted cell with orientation index
``k`` (realized geometrically in :mod:`maxgeom.slabs`).  The children of
``(n, k)`` are ``(n+1, 2k)`` and ``(n+1, 2k+1)``; the lower-orientation child
carries the even index.  All values here are immutable, so everything in this
module is safe to share across workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple


class Node(NamedTuple):
    """Combinatorial address (scale, index) with 0 <= index < 2**scale."""

    scale: int
    index: int


TreePath = tuple  # ordered root-to-descendant chain of Node, parent before child


def validate_node(u: Node) -> Node:
    if u.scale < 0:
        raise ValueError(f"negative scale in {u}")
    if not 0 <= u.index < (1 << u.scale):
        raise ValueError(f"index {u.index} out of range at scale {u.scale}")
    return u


def children_of(u: Node) -> tuple[Node, Node]:
    """Both scale ``n+1`` cells contained in ``u``, lower index first."""
    return Node(u.scale + 1, 2 * u.index), Node(u.scale + 1, 2 * u.index + 1)


def parent_of(u: Node) -> Node:
    if u.scale == 0:
        raise ValueError("scale-0 node has no parent")
    return Node(u.scale - 1, u.index >> 1)


def is_ancestor(u: Node, v: Node) -> bool:
    """True when ``v`` lies in the subtree of ``u`` (including v == u)."""
    d = v.scale - u.scale
    return d >= 0 and (v.index >> d) == u.index


def ancestor_at(v: Node, scale: int) -> Node:
    if scale > v.scale:
        raise ValueError(f"{v} has no ancestor at deeper scale {scale}")
    return Node(scale, v.index >> (v.scale - scale))


def common_root(nodes: Iterable[Node]) -> Node:
    """Deepest node containing every element of ``nodes``."""
    it = iter(nodes)
    try:
        r = next(it)
    except StopIteration:
        raise ValueError("empty family") from None
    for u in it:
        s = min(r.scale, u.scale)
        a, b = r.index >> (r.scale - s), u.index >> (u.scale - s)
        # strip bits until the prefixes agree
        x = a ^ b
        while x:
            s -= 1
            x >>= 1
        r = Node(s, a >> (min(r.scale, u.scale) - s))
    return r


@dataclass(frozen=True)
class DyadicTree:
    """Finite ancestor-closed node set with a designated root.

    Trees produced by :func:`build_tree` additionally have a minimal root
    (the root either branches or is the unique node).  Sets with a unary
    prefix above the first branch are still representable, which is what
    fig-tree candidates need.
    """

    nodes: frozenset
    root: Node

    def __post_init__(self):
        if self.root not in self.nodes:
            raise ValueError("root not among nodes")
        for u in self.nodes:
            validate_node(u)
            if not is_ancestor(self.root, u):
                raise ValueError(f"{u} is not a descendant of root {self.root}")
            if u != self.root and parent_of(u) not in self.nodes:
                raise ValueError(f"{u} missing its parent: not ancestor-closed")

    def __contains__(self, u: Node) -> bool:
        return u in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def depth(self) -> int:
        """Largest scale offset from the root."""
        return max(u.scale for u in self.nodes) - self.root.scale

    def children_in(self, u: Node) -> tuple[Node, ...]:
        return tuple(c for c in children_of(u) if c in self.nodes)

    def sorted_nodes(self) -> list:
        return sorted(self.nodes)


def build_tree(family: Iterable[Node]) -> DyadicTree:
    """Ancestor-closure of ``family`` up to its deepest common containing cell.

    The result is the smallest tree containing the family; its root is the
    unique minimal-area common ancestor, so the root either branches inside
    the tree or the tree is a single node.
    """
    fam = set(family)
    if not fam:
        raise ValueError("empty family")
    for u in fam:
        validate_node(u)
    root = common_root(fam)
    nodes = set()
    for u in fam:
        while u not in nodes:
            nodes.add(u)
            if u == root:
                break
            u = parent_of(u)
    return DyadicTree(frozenset(nodes), root)


def tree_from_nodes(nodes: Iterable[Node], root: Node | None = None) -> DyadicTree:
    """Wrap an already ancestor-closed node set without trimming unary prefixes."""
    ns = frozenset(nodes)
    if root is None:
        root = min(ns, default=None)
        if root is None:
            raise ValueError("empty family")
    return DyadicTree(ns, root)


def leaves_of(tree: DyadicTree) -> frozenset:
    """Nodes with no proper descendant in the tree."""
    return frozenset(u for u in tree.nodes if not tree.children_in(u))


def boundary_paths(tree: DyadicTree) -> frozenset:
    """All maximal paths, i.e. the root-to-leaf chains, as node tuples."""
    out = []
    for leaf in leaves_of(tree):
        out.append(tuple(ancestor_at(leaf, s) for s in range(tree.root.scale, leaf.scale + 1)))
    return frozenset(out)


def splitting_number(path: TreePath, tree: DyadicTree) -> int:
    """Number of tree nodes hanging off ``path``: children of path nodes not on it.

    ``path`` must be a parent-to-child chain contained in the tree.
    """
    pset = frozenset(path)
    if not pset <= tree.nodes:
        raise ValueError("path not contained in tree")
    for a, b in zip(path, path[1:]):
        if b not in children_of(a):
            raise ValueError("not a path: consecutive nodes are not parent/child")
    return sum(1 for v in path for c in tree.children_in(v) if c not in pset)


def normalize_root(tree: DyadicTree, new_root: Node) -> DyadicTree:
    """Re-address the tree so the same shape hangs below ``new_root``."""
    validate_node(new_root)
    r = tree.root
    mapped = set()
    for u in tree.nodes:
        d = u.scale - r.scale
        rel = u.index - (r.index << d)
        mapped.add(Node(new_root.scale + d, (new_root.index << d) + rel))
    return DyadicTree(frozenset(mapped), new_root)


def iter_descendants(u: Node, max_scale: int) -> Iterator[Node]:
    """All descendants of ``u`` down to ``max_scale`` inclusive (and ``u`` itself)."""
    for s in range(u.scale, max_scale + 1):
        d = s - u.scale
        base = u.index << d
        for k in range(base, base + (1 << d)):
            yield Node(s, k)


def full_tree(depth: int, root: Node = Node(0, 0)) -> DyadicTree:
    """The complete binary tree of the given depth below ``root``."""
    if depth < 0:
        raise ValueError("negative depth")
    return DyadicTree(frozenset(iter_descendants(root, root.scale + depth)), root)


# --- text serialization: "root n k" header plus one "n k" line per node ----

def dump_family(nodes: Iterable[Node]) -> str:
    return "".join(f"{u.scale} {u.index}\n" for u in sorted(set(nodes)))


def load_family(text: str) -> frozenset:
    out = set()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        a, b = line.split()
        out.add(validate_node(Node(int(a), int(b))))
    return frozenset(out)


def dump_tree(tree: DyadicTree) -> str:
    return f"root {tree.root.scale} {tree.root.index}\n" + dump_family(tree.nodes)


def load_tree(text: str) -> DyadicTree:
    root = None
    nodes = set()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "root":
            root = Node(int(parts[1]), int(parts[2]))
        else:
            nodes.add(validate_node(Node(int(parts[0]), int(parts[1]))))
    if root is None:
        raise ValueError("missing 'root n k' header line")
    return DyadicTree(frozenset(nodes), root)
