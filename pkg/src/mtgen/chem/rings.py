"""Ring perception: ring bonds via bridge detection, SSSR via Horton's method."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass


@dataclass(frozen=True)
class RingInfo:
    sssr: tuple[tuple[int, ...], ...]  # atom cycles in traversal order
    sssr_bonds: tuple[frozenset[int], ...]  # bond indices of each SSSR ring
    ring_bonds: frozenset[int]
    ring_atoms: frozenset[int]
    atom_ring_count: tuple[int, ...]  # SSSR rings containing each atom
    smallest_ring: tuple[int, ...]  # smallest SSSR ring size per atom, 0 if acyclic

    def in_ring(self, atom: int) -> bool:
        return atom in self.ring_atoms

    def bond_in_ring(self, bond: int) -> bool:
        return bond in self.ring_bonds


def _bridges(n: int, edges: list[tuple[int, int]]) -> set[int]:
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i, (a, b) in enumerate(edges):
        adj[a].append((b, i))
        adj[b].append((a, i))
    disc = [-1] * n
    low = [0] * n
    bridges: set[int] = set()
    t = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = t
        t += 1
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            v, pe, it = stack[-1]
            advanced = False
            for w, ei in it:
                if ei == pe:
                    continue
                if disc[w] == -1:
                    disc[w] = low[w] = t
                    t += 1
                    stack.append((w, ei, iter(adj[w])))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if not advanced:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] > disc[u]:
                        bridges.add(pe)
    return bridges


def perceive_rings(n: int, edges: list[tuple[int, int]]) -> RingInfo:
    bridges = _bridges(n, edges)
    ring_edges = [i for i in range(len(edges)) if i not in bridges]
    ring_atoms = set()
    for i in ring_edges:
        ring_atoms.update(edges[i])
    if not ring_edges:
        return RingInfo((), (), frozenset(), frozenset(), (0,) * n, (0,) * n)

    adj: dict[int, list[tuple[int, int]]] = {a: [] for a in ring_atoms}
    for i in ring_edges:
        a, b = edges[i]
        adj[a].append((b, i))
        adj[b].append((a, i))
    for a in adj:
        adj[a].sort()

    # cyclomatic number of the ring subgraph
    comps = 0
    seen: set[int] = set()
    for a in sorted(ring_atoms):
        if a in seen:
            continue
        comps += 1
        dq = deque([a])
        seen.add(a)
        while dq:
            v = dq.popleft()
            for w, _ in adj[v]:
                if w not in seen:
                    seen.add(w)
                    dq.append(w)
    n_rings = len(ring_edges) - len(ring_atoms) + comps

    candidates: dict[int, tuple[int, tuple[int, ...]]] = {}
    for v in sorted(ring_atoms):
        parent: dict[int, tuple[int, int]] = {v: (-1, -1)}
        dist = {v: 0}
        order = [v]
        dq = deque([v])
        while dq:
            x = dq.popleft()
            for w, ei in adj[x]:
                if w not in dist:
                    dist[w] = dist[x] + 1
                    parent[w] = (x, ei)
                    order.append(w)
                    dq.append(w)

        def path(x: int) -> tuple[list[int], list[int]]:
            atoms, bonds = [x], []
            while parent[x][0] != -1:
                p, ei = parent[x]
                bonds.append(ei)
                atoms.append(p)
                x = p
            return atoms, bonds  # from x back to v

        for ei in ring_edges:
            x, y = edges[ei]
            if x not in dist or y not in dist:
                continue
            if parent[x][1] == ei or parent[y][1] == ei:
                continue
            px, bx = path(x)
            py, by = path(y)
            if set(px) & set(py) != {v}:
                continue
            mask = 0
            for b in bx + by + [ei]:
                mask |= 1 << b
            if mask in candidates:
                continue
            cyc = tuple(reversed(px)) + tuple(py[:-1])
            candidates[mask] = (len(bx) + len(by) + 1, cyc)

    ordered = sorted(candidates.items(), key=lambda kv: (kv[1][0], sorted(kv[1][1])))
    basis: dict[int, int] = {}  # pivot bit -> reduced vector
    sssr: list[tuple[int, ...]] = []
    sssr_bonds: list[frozenset[int]] = []
    for mask, (_, cyc) in ordered:
        r = mask
        while r:
            pivot = r.bit_length() - 1
            if pivot in basis:
                r ^= basis[pivot]
            else:
                basis[pivot] = r
                break
        if r:
            sssr.append(cyc)
            sssr_bonds.append(frozenset(i for i in range(len(edges)) if mask >> i & 1))
            if len(sssr) == n_rings:
                break

    count = [0] * n
    smallest = [0] * n
    for cyc in sssr:
        for a in cyc:
            count[a] += 1
            if smallest[a] == 0 or len(cyc) < smallest[a]:
                smallest[a] = len(cyc)
    return RingInfo(
        tuple(sssr),
        tuple(sssr_bonds),
        frozenset(ring_edges),
        frozenset(ring_atoms),
        tuple(count),
        tuple(smallest),
    )
