class UnionFind:
    """Union-find on 0..n-1; the root of each block is its least element."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if ra < rb:
            self.parent[rb] = ra
        else:
            self.parent[ra] = rb

    def blocks(self):
        """Blocks as sorted tuples, ordered by least element."""
        out = {}
        for a in range(len(self.parent)):
            out.setdefault(self.find(a), []).append(a)
        return [tuple(v) for _, v in sorted(out.items())]
