"""Canonical multisets and the branch-total search tree that samples them.

A ``Multiset`` is the canonical frequency map: (symbol, count) pairs with
strictly increasing symbols and positive counts. Symbols only need a
consistent total order (ints, bytes, tuples of bytes, ...).

``FreqTree`` is a binary search tree over the distinct symbols where every
node stores the total number of occurrences in its subtree; a node's own
count is its total minus its children's totals. Reading the tree left to
right lays the occurrences out on the index line [0, total), each symbol
owning the contiguous interval [c, c + p). ``forward_lookup`` maps a symbol
to its interval, ``reverse_lookup`` maps an index back to (symbol, c, p), and
the fused ``lookup_and_remove`` / ``insert_and_lookup`` update branch totals
on the way down so that lookup and mutation cost one root-to-node pass.

Trees count the nodes they touch (``visits``/``ops``) so complexity claims
can be checked empirically.
"""

from __future__ import annotations

from collections import Counter
from operator import index as _int

from .errors import ContractError, NotFoundError


class Multiset:
    """Immutable canonical multiset: sorted (symbol, count) pairs."""

    __slots__ = ("pairs", "total")

    def __init__(self, pairs=()):
        pairs = tuple((sym, _int(cnt)) for sym, cnt in pairs)
        prev = None
        for k, (sym, cnt) in enumerate(pairs):
            if cnt < 1:
                raise ContractError(f"count for {sym!r} must be >= 1, got {cnt}")
            if k and not prev < sym:
                raise ContractError("symbols must be strictly increasing")
            prev = sym
        self.pairs = pairs
        self.total = sum(cnt for _, cnt in pairs)

    @classmethod
    def from_iterable(cls, symbols) -> "Multiset":
        """Canonicalize any order of possibly repeating symbols."""
        return cls(sorted(Counter(symbols).items()))

    @property
    def unique(self) -> int:
        return len(self.pairs)

    def expand(self):
        """Yield every occurrence in canonical order."""
        for sym, cnt in self.pairs:
            for _ in range(cnt):
                yield sym

    def __eq__(self, other):
        return isinstance(other, Multiset) and self.pairs == other.pairs

    def __hash__(self):
        return hash(self.pairs)

    def __repr__(self):
        return f"Multiset({list(self.pairs)!r})"


class _Node:
    __slots__ = ("sym", "total", "left", "right")

    def __init__(self, sym, total):
        self.sym = sym
        self.total = total
        self.left = None
        self.right = None


class FreqTree:
    """Branch-total BST over the remaining occurrences of a multiset."""

    __slots__ = ("root", "visits", "ops")

    def __init__(self):
        self.root = None
        self.visits = 0  # nodes touched, cumulative across operations
        self.ops = 0

    @property
    def total(self) -> int:
        return self.root.total if self.root is not None else 0

    def forward_lookup(self, sym):
        """Return (c, p): occurrences ordered before ``sym``, and its count."""
        node = self.root
        offset = 0
        seen = 0
        while node is not None:
            seen += 1
            lt = node.left.total if node.left is not None else 0
            if sym < node.sym:
                node = node.left
            elif sym > node.sym:
                rt = node.right.total if node.right is not None else 0
                offset += node.total - rt  # left interval plus own count
                node = node.right
            else:
                rt = node.right.total if node.right is not None else 0
                self.visits += seen
                self.ops += 1
                return offset + lt, node.total - lt - rt
        self.visits += seen
        self.ops += 1
        raise NotFoundError(sym)

    def reverse_lookup(self, i):
        """Return (sym, c, p) for the unique interval containing ``i``."""
        i = _int(i)
        if not 0 <= i < self.total:
            raise ContractError(f"index {i} outside [0, {self.total})")
        node = self.root
        offset = 0
        seen = 0
        while True:
            seen += 1
            lt = node.left.total if node.left is not None else 0
            rt = node.right.total if node.right is not None else 0
            cnt = node.total - lt - rt
            if i < lt:
                node = node.left
            elif i < lt + cnt:
                self.visits += seen
                self.ops += 1
                return node.sym, offset + lt, cnt
            else:
                i -= lt + cnt
                offset += lt + cnt
                node = node.right

    def lookup_and_remove(self, i):
        """Remove one occurrence of the symbol whose interval holds ``i``.

        Returns (sym, c, p) as of before the removal. Branch totals along the
        search path are decremented on the way down; a node whose count hits
        zero is unlinked, promoting its in-order successor when it has two
        children.
        """
        i = _int(i)
        if not 0 <= i < self.total:
            raise ContractError(f"index {i} outside [0, {self.total})")
        parent = None
        on_left = False
        node = self.root
        offset = 0
        seen = 0
        while True:
            seen += 1
            node.total -= 1
            lt = node.left.total if node.left is not None else 0
            rt = node.right.total if node.right is not None else 0
            cnt = node.total + 1 - lt - rt
            if i < lt:
                parent, on_left = node, True
                node = node.left
            elif i < lt + cnt:
                break
            else:
                i -= lt + cnt
                offset += lt + cnt
                parent, on_left = node, False
                node = node.right
        sym = node.sym
        if cnt == 1:  # last occurrence: unlink the node
            if node.left is None or node.right is None:
                repl = node.left if node.left is not None else node.right
                if parent is None:
                    self.root = repl
                elif on_left:
                    parent.left = repl
                else:
                    parent.right = repl
            else:
                path = []
                succ = node.right
                while succ.left is not None:
                    path.append(succ)
                    succ = succ.left
                seen += len(path) + 1
                srt = succ.right.total if succ.right is not None else 0
                scount = succ.total - srt
                for mid in path:
                    mid.total -= scount
                if path:
                    path[-1].left = succ.right
                else:
                    node.right = succ.right
                node.sym = succ.sym
                # node.total already dropped by 1 on the walk; it now owns
                # scount occurrences and its right subtree lost the same.
        self.visits += seen
        self.ops += 1
        return sym, offset + lt, cnt

    def insert_and_lookup(self, sym):
        """Add one occurrence of ``sym``; return (c, p) after the insert."""
        if self.root is None:
            self.root = _Node(sym, 1)
            self.visits += 1
            self.ops += 1
            return 0, 1
        node = self.root
        offset = 0
        seen = 0
        while True:
            seen += 1
            tot = node.total
            node.total = tot + 1
            if sym < node.sym:
                if node.left is None:
                    node.left = _Node(sym, 1)
                    seen += 1
                    c, p = offset, 1
                    break
                node = node.left
            elif sym > node.sym:
                rt = node.right.total if node.right is not None else 0
                offset += tot - rt
                if node.right is None:
                    node.right = _Node(sym, 1)
                    seen += 1
                    c, p = offset, 1
                    break
                node = node.right
            else:
                lt = node.left.total if node.left is not None else 0
                rt = node.right.total if node.right is not None else 0
                c, p = offset + lt, tot + 1 - lt - rt
                break
        self.visits += seen
        self.ops += 1
        return c, p

    def to_multiset(self) -> Multiset:
        """In-order traversal back to canonical form."""
        pairs = []
        stack = []
        node = self.root
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = node.left
            node = stack.pop()
            lt = node.left.total if node.left is not None else 0
            rt = node.right.total if node.right is not None else 0
            pairs.append((node.sym, node.total - lt - rt))
            node = node.right
        return Multiset(pairs)

    def depth(self) -> int:
        d = 0
        stack = [(self.root, 1)] if self.root is not None else []
        while stack:
            node, k = stack.pop()
            if k > d:
                d = k
            if node.left is not None:
                stack.append((node.left, k + 1))
            if node.right is not None:
                stack.append((node.right, k + 1))
        return d


def build_balanced(m: Multiset) -> FreqTree:
    """Build a FreqTree for ``m`` with depth exactly ceil(log2(unique + 1)).

    The split keeps the right subtree perfect, so the depth bound is met with
    equality at every size and removals never deepen the tree.
    """
    pairs = m.pairs

    def build(lo, hi):
        n = hi - lo
        if n == 0:
            return None
        full = (1 << (n.bit_length() - 1)) - 1  # perfect right-subtree size
        mid = lo + (n - 1 - full)
        sym, cnt = pairs[mid]
        node = _Node(sym, cnt)
        node.left = build(lo, mid)
        node.right = build(mid + 1, hi)
        if node.left is not None:
            node.total += node.left.total
        if node.right is not None:
            node.total += node.right.total
        return node

    tree = FreqTree()
    tree.root = build(0, len(pairs))
    return tree
