"""Separated point sets in a discrete simplex, and the packing machinery
behind them.

The objects here are integer points with fixed coordinate sum r = 2d + 1.
A set is "2d-separated" when all pairwise l1 distances exceed 2d; since
points of equal coordinate sum are always an even l1 distance apart, that
is the same as distance >= 2d + 2. Corner points (all weight on one
coordinate) can always be forced into a maximum set, which reduces the
search to an independent-set problem on the interior candidates (all
coordinates <= d) with edges at distance <= 2d.

The independent-set solver is an exact branch and bound over bitmask
vertex sets: branch on the highest-degree remaining vertex (lex-least on
ties), bound by a greedy clique cover, with the incumbent seeded by a
deterministic iterated local search. A wall-clock budget degrades the
answer to best-found with ``optimal=False``, never to an invalid set.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NonUniqueConflict,
    NotSeparated,
    PreconditionViolated,
    SetTooSmall,
    WrongSimplex,
)


def _compositions(total: int, parts: int, cap: int | None = None):
    """Tuples of ``parts`` nonnegative ints summing to ``total``, each at
    most ``cap``, in descending lexicographic order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if cap is None or total <= cap:
            yield (total,)
        return
    hi = total if cap is None else min(total, cap)
    for first in range(hi, -1, -1):
        for rest in _compositions(total - first, parts - 1, cap):
            yield (first,) + rest


def simplex_points(m: int, r: int) -> list[tuple]:
    """All points of the discrete simplex: m nonnegative coordinates with
    sum r, descending lex order."""
    if m < 1 or r < 0:
        raise ValueError(f"need m >= 1 and r >= 0, got m={m}, r={r}")
    return list(_compositions(r, m))


def l1_distance(a, b) -> int:
    if len(a) != len(b):
        raise DimensionMismatch(f"points of length {len(a)} and {len(b)}")
    return sum(abs(x - y) for x, y in zip(a, b))


def is_d_separated(points, d: int):
    """(True, None) if all pairwise l1 distances exceed d, else
    (False, (i, j)) with the first violating index pair in scan order."""
    pts = [tuple(p) for p in points]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if l1_distance(pts[i], pts[j]) <= d:
                return False, (i, j)
    return True, None


def corner_points(m: int, d: int) -> list[tuple]:
    """The m scaled corners (2d+1) e_i, in coordinate order."""
    r = 2 * d + 1
    return [tuple(r if j == i else 0 for j in range(m)) for i in range(m)]


@dataclass(frozen=True)
class SeparatedSet:
    """An ordered 2d-separated subset of the sum-(2d+1) simplex.

    The invariants (membership, separation, and the 4^(m-1) size ceiling)
    are rechecked on construction, so instances cannot hold bad data.
    """

    m: int
    d: int
    points: tuple

    def __post_init__(self):
        r = 2 * self.d + 1
        pts = tuple(tuple(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        seen = set()
        for p in pts:
            if len(p) != self.m:
                raise WrongSimplex(f"point {p} does not have {self.m} coordinates")
            if any(not isinstance(c, int) or c < 0 for c in p):
                raise WrongSimplex(f"point {p} has a bad coordinate")
            if sum(p) != r:
                raise WrongSimplex(f"point {p} has coordinate sum {sum(p)}, expected {r}")
            if p in seen:
                raise NotSeparated(f"point {p} repeats")
            seen.add(p)
        ok, pair = is_d_separated(pts, 2 * self.d)
        if not ok:
            i, j = pair
            raise NotSeparated(
                f"points {pts[i]} and {pts[j]} are at l1 distance "
                f"{l1_distance(pts[i], pts[j])} <= {2 * self.d}")
        assert len(pts) <= 4 ** (self.m - 1)

    @property
    def size(self) -> int:
        return len(self.points)


def normalize_with_corners(s: SeparatedSet) -> SeparatedSet:
    """Rewrite a separated set so it contains every corner, without
    shrinking it.

    Any point conflicting with a corner is unique when it exists (its
    distance to the other corners is forced large), so it can be swapped
    for the corner in place; corners with no conflict are appended.
    """
    pts = list(s.points)
    for corner in corner_points(s.m, s.d):
        if corner in pts:
            continue
        conflicts = [i for i, p in enumerate(pts)
                     if l1_distance(p, corner) <= 2 * s.d]
        if len(conflicts) > 1:
            raise NonUniqueConflict(
                f"{len(conflicts)} points conflict with corner {corner}; "
                "input was not 2d-separated")
        if conflicts:
            pts[conflicts[0]] = corner
        else:
            pts.append(corner)
    return SeparatedSet(s.m, s.d, tuple(pts))


def interior_candidates(m: int, d: int) -> list[tuple]:
    """Simplex points separated from every corner: all coordinates <= d.
    Descending lex order; the bound is enforced during generation."""
    if m < 1 or d < 0:
        raise ValueError(f"need m >= 1 and d >= 0, got m={m}, d={d}")
    return list(_compositions(2 * d + 1, m, cap=d))


@dataclass(frozen=True)
class SepGraph:
    """Conflict graph on interior candidates: edges join points at l1
    distance <= 2d (too close to coexist). Adjacency is one bitmask per
    vertex."""

    m: int
    d: int
    vertices: tuple
    adjacency: tuple

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return sum(mask.bit_count() for mask in self.adjacency) // 2


def build_graph(m: int, d: int) -> SepGraph:
    verts = interior_candidates(m, d)
    n = len(verts)
    if n < 256:
        adj = [0] * n
        for i in range(n):
            vi = verts[i]
            for j in range(i + 1, n):
                if l1_distance(vi, verts[j]) <= 2 * d:
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
        return SepGraph(m, d, tuple(verts), tuple(adj))
    # Vectorized distance matrix for larger candidate sets; same semantics
    # as the loop above, just chunked so memory stays bounded.
    coords = np.array(verts, dtype=np.int16)
    adj = []
    chunk = max(1, (1 << 22) // (n * m))
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        dist = np.abs(coords[lo:hi, None, :] - coords[None, :, :]).sum(axis=2)
        close = dist <= 2 * d
        for row in range(hi - lo):
            close[row, lo + row] = False
        packed = np.packbits(close, axis=1, bitorder="little")
        for row in range(hi - lo):
            adj.append(int.from_bytes(packed[row].tobytes(), "little"))
    return SepGraph(m, d, tuple(verts), tuple(adj))


# -- exact maximum independent set ------------------------------------------


def _clique_cover_bound(adj, p: int) -> int:
    """Greedy clique cover of the vertex mask p; its size bounds any
    independent set inside p from above."""
    bound = 0
    rem = p
    while rem:
        v = (rem & -rem).bit_length() - 1
        rem &= rem - 1
        cand = adj[v] & rem
        while cand:
            u = (cand & -cand).bit_length() - 1
            rem &= ~(1 << u)
            cand &= adj[u] & ~(1 << u)
        bound += 1
    return bound


def _branch_vertex(adj, p: int) -> int:
    """Highest degree inside p, lex-least index on ties."""
    best_v, best_deg = -1, -1
    q = p
    while q:
        v = (q & -q).bit_length() - 1
        q &= q - 1
        deg = (adj[v] & p).bit_count()
        if deg > best_deg:
            best_v, best_deg = v, deg
    return best_v


def _greedy_fill(adj, n: int, mask: int, order) -> int:
    """Extend the independent set ``mask`` greedily along ``order``."""
    for v in order:
        bit = 1 << v
        if not (mask & bit) and not (adj[v] & mask):
            mask |= bit
    return mask


def _swap_improve(adj, n: int, full: int, cur: int) -> int:
    """Local optimum under two moves: add any free vertex, and the
    (1,2)-swap that trades one member for two nonadjacent outsiders whose
    only conflict is that member."""
    while True:
        outside = full & ~cur
        q = outside
        while q:
            v = (q & -q).bit_length() - 1
            q &= q - 1
            if not (adj[v] & cur):
                cur |= 1 << v
        one_tight: dict = {}
        q = full & ~cur
        swapped = False
        while q:
            v = (q & -q).bit_length() - 1
            q &= q - 1
            hit = adj[v] & cur
            if hit and not (hit & (hit - 1)):
                others = one_tight.setdefault(hit, [])
                for u in others:
                    if not (adj[u] >> v & 1):
                        cur = (cur & ~hit) | (1 << u) | (1 << v)
                        swapped = True
                        break
                if swapped:
                    break
                others.append(v)
        if not swapped:
            return cur


def _ils_lower_bound(adj, n: int, deadline, seed: int = 2024):
    """Deterministic iterated local search: randomized greedy fills plus
    (1,2)-swap local optima, perturbed by forcing one vertex in. Iteration
    counts depend only on the graph, so results are reproducible; the
    deadline only truncates oversized runs early."""
    rng = random.Random(seed)
    full = (1 << n) - 1
    order = list(range(n))
    cur = _swap_improve(adj, n, full, _greedy_fill(adj, n, 0, order))
    best = cur
    iters = 1200 if n <= 1200 else (150 if n <= 3000 else 12)
    for _ in range(iters):
        if deadline is not None and time.monotonic() > deadline:
            break
        v = rng.randrange(n)
        forced = (cur & ~adj[v]) | (1 << v)
        rng.shuffle(order)
        cand = _swap_improve(adj, n, full, _greedy_fill(adj, n, forced, order))
        if cand.bit_count() >= cur.bit_count():
            cur = cand
        if cur.bit_count() > best.bit_count():
            best = cur
    return best, best.bit_count()


def _mis_search(adj, start_mask: int, target: int | None, deadline,
                init_mask: int = 0, init_size: int = 0):
    """Core branch and bound.

    With ``target=None`` finds a maximum independent set inside
    ``start_mask``; with a target, stops as soon as an independent set of
    that size exists (decision mode). ``init_mask`` seeds the incumbent
    (it must be independent). Returns (best_mask, best_size, completed).
    """
    best_mask, best_size = init_mask, init_size
    floor = 0 if target is None else target - 1
    stack = [(start_mask, 0, 0)]
    nodes = 0
    while stack:
        p, size, mask = stack.pop()
        nodes += 1
        if deadline is not None and (nodes & 63) == 0 and time.monotonic() > deadline:
            return best_mask, best_size, False
        if size > best_size:
            best_mask, best_size = mask, size
            if target is not None and best_size >= target:
                return best_mask, best_size, True
        if not p:
            continue
        if size + _clique_cover_bound(adj, p) <= max(best_size, floor):
            continue
        v = _branch_vertex(adj, p)
        bit = 1 << v
        stack.append((p & ~bit, size, mask))  # exclude v, explored second
        stack.append((p & ~adj[v] & ~bit, size + 1, mask | bit))  # include v
    return best_mask, best_size, True


def _lex_min_of_size(adj, n: int, k: int, deadline):
    """Lex-least independent set of size k, found by k decision searches."""
    chosen = []
    p = (1 << n) - 1
    for v in range(n):
        if len(chosen) == k:
            break
        bit = 1 << v
        if not (p & bit):
            continue
        rest = p & ~adj[v] & ~bit
        need = k - len(chosen) - 1
        if need == 0:
            chosen.append(v)
            p = rest
            continue
        _, got, completed = _mis_search(adj, rest, need, deadline)
        if not completed:
            return None
        if got >= need:
            chosen.append(v)
            p = rest
    return chosen if len(chosen) == k else None


def max_independent_set(g: SepGraph, budget: float | None = None):
    """Exact maximum independent set of the conflict graph.

    Returns (vertex index list, optimal). Under a wall-clock budget the
    search may stop early, returning the best set found so far with
    ``optimal=False``; the set itself is always independent. When the
    optimum is proven, the reported set is the lex-least one of maximum
    size, so results are reproducible and partition-independent.
    """
    n = g.vertex_count
    if n == 0:
        return [], True
    adj = list(g.adjacency)
    deadline = None if budget is None else time.monotonic() + budget
    heur_deadline = deadline
    if budget is not None:
        heur_deadline = time.monotonic() + 0.4 * budget
    seed_mask, seed_size = _ils_lower_bound(adj, n, heur_deadline)
    mask, size, completed = _mis_search(adj, (1 << n) - 1, None, deadline,
                                        init_mask=seed_mask, init_size=seed_size)
    vertices = [v for v in range(n) if mask >> v & 1]
    if not completed:
        return vertices, False
    canonical = _lex_min_of_size(adj, n, size, deadline)
    if canonical is not None:
        vertices = canonical
    return vertices, True


def best_separated_set(m: int, d: int, budget: float | None = None):
    """Largest 2d-separated set the solver can certify: the m corners plus
    a maximum independent set of interior candidates.

    Returns (SeparatedSet, optimal). d = 0 degenerates to the m unit
    vectors: the interior is empty and the corners alone are the answer.
    """
    g = build_graph(m, d)
    indices, optimal = max_independent_set(g, budget)
    points = corner_points(m, d) + [g.vertices[i] for i in indices]
    return SeparatedSet(m, d, tuple(points)), optimal


def quadratic_construction(m: int, d: int) -> SeparatedSet:
    """Explicit separated set of size ~m^2/4 for large separation.

    Needs d >= m - 1. Besides the corners it places, for each stride j up
    to m/2 and offset k up to m - 2j, a three-coordinate point whose
    heights are staggered by the 2-adic valuation of j; the staggering is
    what keeps distinct strides far apart. Size is m(m+2)/4 for even m,
    (m+1)^2/4 for odd.
    """
    if m < 1:
        raise PreconditionViolated(f"need m >= 1, got {m}")
    if d < m - 1:
        raise PreconditionViolated(f"construction needs d >= m - 1, got m={m}, d={d}")
    points = corner_points(m, d)
    for j in range(1, m // 2 + 1):
        r = (j & -j).bit_length() - 1  # 2-adic valuation of j
        for k in range(1, m - 2 * j + 1):
            p = [0] * m
            p[k - 1] = d - r - k
            p[k + j - 1] = d
            p[k + 2 * j - 1] = r + k + 1
            points.append(tuple(p))
    expected = m * (m + 2) // 4 if m % 2 == 0 else (m + 1) ** 2 // 4
    assert len(points) == expected
    return SeparatedSet(m, d, tuple(points))


def constant_weight_bound(m: int) -> int:
    """Largest number of binary weight-3 words of length m with pairwise
    Hamming distance >= 4, by the classical closed form."""
    if m < 3:
        raise ValueError(f"need m >= 3, got {m}")
    base = m * ((m - 1) // 2) // 3
    if m % 6 == 5:
        base -= 1
    return base


def upper_bounds(m: int):
    """(separated-set ceiling 4^(m-1), matrix-size ceiling 2^(2m-3)).

    The matrix bound needs m >= 3; below that it is None.
    """
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    set_bound = 4 ** (m - 1)
    matrix_bound = 2 ** (2 * m - 3) if m >= 3 else None
    return set_bound, matrix_bound


def matrix_size_from_set(s: SeparatedSet) -> int:
    """Largest matrix size a separated set supports: n = floor((#S+1)/2),
    so 2n - 1 ordered points are available."""
    if s.size < 3:
        raise SetTooSmall(f"need at least 3 points, have {s.size}")
    return (s.size + 1) // 2
