"""Small graph helpers shared by the solvers (union-find, restricted BFS)."""

from collections import deque


class UnionFind:
    """Union-find over arbitrary hashable items with path compression."""

    def __init__(self, items=()):
        self.parent = {}
        self.num_components = 0
        for item in items:
            self.add(item)

    def add(self, item):
        if item not in self.parent:
            self.parent[item] = item
            self.num_components += 1

    def find(self, item):
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # smaller id becomes the root, keeps results reproducible
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.num_components -= 1
        return True

    def components(self):
        groups = {}
        for item in self.parent:
            groups.setdefault(self.find(item), []).append(item)
        return sorted(sorted(g) for g in groups.values())


def norm_edge(u, v):
    return (u, v) if u < v else (v, u)


def adjacency(n, edges):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    for nbrs in adj:
        nbrs.sort()
    return adj


def restricted_path(adj, source, target, allowed):
    """BFS path from source to target using only vertices in ``allowed``.

    Returns the vertex list or None.
    """
    if source not in allowed or target not in allowed:
        return None
    if source == target:
        return [source]
    prev = {source: None}
    queue = deque([source])
    while queue:
        w = queue.popleft()
        for nb in adj[w]:
            if nb in prev or nb not in allowed:
                continue
            prev[nb] = w
            if nb == target:
                path = [nb]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                return path[::-1]
            queue.append(nb)
    return None


def restricted_component(adj, source, allowed):
    """Vertices reachable from source inside ``allowed``."""
    seen = {source}
    stack = [source]
    while stack:
        w = stack.pop()
        for nb in adj[w]:
            if nb not in seen and nb in allowed:
                seen.add(nb)
                stack.append(nb)
    return seen
