"""Prefix trie over weighted strings with bounded best-first top-k.

Each node caches the maximum terminal weight in its subtree, so top_k can
expand only the branches whose bound still beats the current frontier. That
keeps short-prefix queries on large corpora fast: work is proportional to
the answer size and the number of near-tied branches, not the subtree size.
"""

from __future__ import annotations

import heapq
import math
import warnings


class _Node:
    __slots__ = ("children", "terminal", "weight", "max_weight")

    def __init__(self):
        self.children: dict[str, _Node] = {}
        self.terminal = False
        self.weight = 0.0
        self.max_weight = 0.0


class WeightedTrie:
    """Accumulating map from strings to non-negative weights.

    insert() adds to the stored weight; totals forced below zero clamp to
    zero with a warning. Entries whose weight is zero stay in the trie but
    are never returned by top_k.
    """

    def __init__(self):
        self.root = _Node()
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def __contains__(self, text: str) -> bool:
        node = self._find(text)
        return node is not None and node.terminal

    def weight_of(self, text: str) -> float:
        node = self._find(text)
        return node.weight if node is not None and node.terminal else 0.0

    def insert(self, text: str, weight: float = 1.0) -> None:
        if not text:
            raise ValueError("cannot insert an empty string")
        if not math.isfinite(weight):
            raise ValueError(f"weight must be finite, got {weight!r}")
        path = [self.root]
        node = self.root
        for ch in text:
            child = node.children.get(ch)
            if child is None:
                child = _Node()
                node.children[ch] = child
            node = child
            path.append(node)
        if not node.terminal:
            node.terminal = True
            self._size += 1
        new_weight = node.weight + weight
        if new_weight < 0.0:
            warnings.warn(
                f"weight for {text!r} would go negative ({new_weight:g}); clamping to 0",
                stacklevel=2,
            )
            new_weight = 0.0
        node.weight = new_weight
        if new_weight >= node.max_weight:
            for p in path:
                if new_weight > p.max_weight:
                    p.max_weight = new_weight
        else:
            # Weight dropped: recompute the cached bounds bottom-up.
            for p in reversed(path):
                bound = p.weight if p.terminal else 0.0
                for child in p.children.values():
                    if child.max_weight > bound:
                        bound = child.max_weight
                p.max_weight = bound

    def top_k(self, prefix: str, k: int) -> list[tuple[str, float]]:
        """The k heaviest positive-weight entries under prefix.

        Ordered by weight descending, then text ascending. Heap entries
        carry (-bound, text, seq, node); a None node marks a finished
        candidate, which is final once popped because every remaining
        bound is at most its weight.
        """
        if k <= 0:
            return []
        start = self._find(prefix)
        if start is None or start.max_weight <= 0.0:
            return []
        results: list[tuple[str, float]] = []
        seq = 0
        heap = [(-start.max_weight, prefix, seq, start)]
        while heap and len(results) < k:
            neg_bound, text, _, node = heapq.heappop(heap)
            if node is None:
                results.append((text, -neg_bound))
                continue
            if node.terminal and node.weight > 0.0:
                seq += 1
                heapq.heappush(heap, (-node.weight, text, seq, None))
            for ch, child in node.children.items():
                if child.max_weight > 0.0:
                    seq += 1
                    heapq.heappush(heap, (-child.max_weight, text + ch, seq, child))
        return results

    def items(self) -> list[tuple[str, float]]:
        """All (text, weight) entries, text ascending. Linear; for debugging."""
        out: list[tuple[str, float]] = []
        stack = [("", self.root)]
        while stack:
            text, node = stack.pop()
            if node.terminal:
                out.append((text, node.weight))
            for ch, child in node.children.items():
                stack.append((text + ch, child))
        out.sort()
        return out

    def _find(self, prefix: str) -> _Node | None:
        node = self.root
        for ch in prefix:
            node = node.children.get(ch)
            if node is None:
                return None
        return node
