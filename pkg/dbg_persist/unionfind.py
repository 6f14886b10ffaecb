"""Disjoint-set forest over hashable items with path compression."""
from __future__ import annotations

from collections.abc import Hashable, Iterable

__all__ = ["UnionFind"]


class UnionFind:
    """Union-find keyed by arbitrary hashable items.

    Items are registered on first use, so the structure can grow while a sweep
    discovers new elements.
    """

    def __init__(self, items: Iterable[Hashable] = ()):
        self.parents: dict[Hashable, Hashable] = {}
        self.num_components = 0
        for item in items:
            self.add(item)

    def add(self, item: Hashable) -> None:
        """Register *item* as a singleton class if it is new."""
        if item not in self.parents:
            self.parents[item] = item
            self.num_components += 1

    def find(self, item: Hashable) -> Hashable:
        """Return the representative of *item*'s class."""
        self.add(item)
        root = item
        while root != self.parents[root]:
            root = self.parents[root]
        # compress the path so every visited item points at the root
        while item != root:
            self.parents[item], item = root, self.parents[item]
        return root

    def union(self, a: Hashable, b: Hashable) -> bool:
        """Join the classes of *a* and *b*; return False if already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parents[rb] = ra
        self.num_components -= 1
        return True

    def union_all(self, items: Iterable[Hashable]) -> None:
        """Join all *items* into one class."""
        iterator = iter(items)
        first = next(iterator, None)
        if first is None:
            return
        self.add(first)
        for item in iterator:
            self.union(first, item)

    def components(self) -> list[frozenset]:
        """Return the current classes as frozensets."""
        groups: dict[Hashable, set] = {}
        for item in list(self.parents):
            groups.setdefault(self.find(item), set()).add(item)
        return [frozenset(g) for g in groups.values()]
