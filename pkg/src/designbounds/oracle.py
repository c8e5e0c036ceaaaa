"""Ground-truth constructions and small exhaustive searches.

Searches are labelled (no isomorph rejection): each design is found exactly
once as a multiset of blocks, in a deterministic order.  They run under a
:class:`SearchBudget`; exceeding the node cap raises :class:`BudgetExhausted`
so that "nothing exists" and "gave up" are never confused.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional

from .designs import IncidenceStructure, OrthogonalArray


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 10_000_000
    max_solutions: int = 10**12

    def __post_init__(self):
        if self.max_nodes < 1 or self.max_solutions < 1:
            raise ValueError("search budget limits must be positive")


class BudgetExhausted(RuntimeError):
    def __init__(self, nodes: int, partial: list):
        super().__init__(f"search budget exhausted after {nodes} nodes ({len(partial)} found)")
        self.nodes = nodes
        self.partial = partial


class _Counter:
    __slots__ = ("nodes", "budget", "found")

    def __init__(self, budget: SearchBudget):
        self.nodes = 0
        self.budget = budget
        self.found: list = []

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise BudgetExhausted(self.nodes - 1, self.found)

    @property
    def full(self) -> bool:
        return len(self.found) >= self.budget.max_solutions


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


# --- fixed constructions ---------------------------------------------------

_FANO_LINES = ((0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5))


def fano_plane() -> IncidenceStructure:
    return IncidenceStructure(7, _FANO_LINES)


def near_pencil(v: int) -> IncidenceStructure:
    """One block on points ``0..v-2`` and the pairs ``{i, v-1}``."""
    if v < 3:
        raise ValueError(f"near-pencil needs v >= 3, got {v}")
    long_block = tuple(range(v - 1))
    return IncidenceStructure(v, [long_block] + [(i, v - 1) for i in range(v - 1)])


# GF(4) = {0, 1, w, w+1} encoded as 0, 1, 2, 3; addition is XOR.
_GF4_MUL = (
    (0, 0, 0, 0),
    (0, 1, 2, 3),
    (0, 2, 3, 1),
    (0, 3, 1, 2),
)


def _field_ops(q: int):
    if q == 4:
        return (lambda a, b: a ^ b), (lambda a, b: _GF4_MUL[a][b])
    if is_prime(q):
        return (lambda a, b: (a + b) % q), (lambda a, b: (a * b) % q)
    raise ValueError(f"unsupported plane order {q}: need a prime or 4")


def _normalized_vectors(q: int) -> list[tuple[int, int, int]]:
    vecs = [(1, x, y) for x in range(q) for y in range(q)]
    vecs += [(0, 1, y) for y in range(q)]
    vecs.append((0, 0, 1))
    return vecs


@dataclass(frozen=True)
class ProjectivePlane:
    q: int
    points: tuple[tuple[int, int, int], ...]  # homogeneous coordinates
    structure: IncidenceStructure  # block i is the line with coordinates points[i]


def pg2(q: int) -> ProjectivePlane:
    add, mul = _field_ops(q)
    vecs = _normalized_vectors(q)

    def dot(u, w):
        return add(add(mul(u[0], w[0]), mul(u[1], w[1])), mul(u[2], w[2]))

    lines = [[i for i, pt in enumerate(vecs) if dot(pt, ln) == 0] for ln in vecs]
    return ProjectivePlane(q, tuple(vecs), IncidenceStructure(len(vecs), lines))


def projective_plane(q: int) -> IncidenceStructure:
    return pg2(q).structure


@dataclass(frozen=True)
class Hyperoval:
    plane: ProjectivePlane
    points: frozenset[int]
    external_lines: frozenset[int]


def hyperoval_pg24() -> Hyperoval:
    """The conic ``y^2 = xz`` of PG(2,4) together with its nucleus ``(0,1,0)``."""
    plane = pg2(4)
    index = {pt: i for i, pt in enumerate(plane.points)}
    sq = [_GF4_MUL[t][t] for t in range(4)]
    coords = [(1, t, sq[t]) for t in range(4)] + [(0, 0, 1), (0, 1, 0)]
    pts = frozenset(index[c] for c in coords)
    pmask = sum(1 << p for p in pts)
    external = frozenset(i for i, m in enumerate(plane.structure.masks) if not m & pmask)
    return Hyperoval(plane, pts, external)


def oa_linear(p: int, k: int) -> OrthogonalArray:
    """OA_1(k, p) with row ``(a, b)`` holding ``(a*j + b) mod p`` in column ``j``."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not 2 <= k <= p:
        raise ValueError(f"need 2 <= k <= p, got k={k}, p={p}")
    rows = [tuple((a * j + b) % p for j in range(k)) for a in range(p) for b in range(p)]
    return OrthogonalArray(k, p, 1, rows)


# --- BIBD enumeration ------------------------------------------------------


def bibd_parameters(v: int, k: int, lam: int) -> Optional[tuple[int, int]]:
    """``(b, r)`` when the divisibility conditions hold, else ``None``."""
    if lam * (v - 1) % (k - 1):
        return None
    r = lam * (v - 1) // (k - 1)
    if v * r % k:
        return None
    return v * r // k, r


def iter_bibds(v: int, k: int, lam: int, budget: Optional[SearchBudget] = None) -> Iterator[IncidenceStructure]:
    """Yield every labelled (v, k, lambda)-BIBD, each once as a block multiset.

    The first pair still short of lambda is always covered next, by a block
    whose two smallest points are that pair.  Consecutive blocks chosen for the
    same pair are taken in nondecreasing order, which makes the block sequence
    of each design unique.  Raises :class:`BudgetExhausted` past the node cap
    (its ``partial`` list is empty here; :func:`enumerate_bibds` fills it).
    """
    if not 2 <= k <= v or lam < 1:
        raise ValueError(f"need 2 <= k <= v and lambda >= 1, got v={v}, k={k}, lambda={lam}")
    if bibd_parameters(v, k, lam) is None:
        return
    ctr = _Counter(budget or SearchBudget())
    if lam == 1:
        yield from _steiner_search(v, k, ctr)
        return
    cnt = [[0] * v for _ in range(v)]
    chosen: list[tuple[int, ...]] = []

    def extensions(x: int, y: int, need: int, start: int, partial: list[int]):
        if need == 0:
            yield tuple(partial)
            return
        for z in range(start, v - need + 1):
            if cnt[x][z] < lam and cnt[y][z] < lam and all(cnt[w][z] < lam for w in partial):
                partial.append(z)
                yield from extensions(x, y, need - 1, z + 1, partial)
                partial.pop()

    def place(block, delta):
        for a, c in combinations(block, 2):
            cnt[a][c] += delta

    def dfs(px: int, py: int, last: Optional[tuple[int, ...]]):
        x, y = px, py
        while x < v - 1 and cnt[x][y] >= lam:
            y += 1
            if y == v:
                x += 1
                y = x + 1
        if x >= v - 1:
            yield IncidenceStructure(v, sorted(chosen))
            return
        floor = last if (x, y) == (px, py) else None
        for rest in extensions(x, y, k - 2, y + 1, []):
            if floor is not None and rest < floor:
                continue
            ctr.tick()
            block = (x, y) + rest
            place(block, 1)
            chosen.append(block)
            yield from dfs(x, y, rest)
            chosen.pop()
            place(block, -1)

    yield from dfs(0, 1, None)


def enumerate_bibds(v: int, k: int, lam: int, budget: Optional[SearchBudget] = None) -> list[IncidenceStructure]:
    """All designs from :func:`iter_bibds`, stopping early at ``budget.max_solutions``."""
    budget = budget or SearchBudget()
    found: list[IncidenceStructure] = []
    try:
        for inc in iter_bibds(v, k, lam, budget):
            found.append(inc)
            if len(found) >= budget.max_solutions:
                break
    except BudgetExhausted as exc:
        raise BudgetExhausted(exc.nodes, found) from None
    return found


def _steiner_search(v: int, k: int, ctr: _Counter):
    """lambda = 1 case of :func:`enumerate_bibds` on bitmasks; same output order."""
    full = (1 << v) - 1
    uncovered = [full & ~(1 << p) for p in range(v)]
    blocks: list[tuple[int, ...]] = []
    masks: list[int] = []
    interned: dict[int, tuple[tuple[int, ...], int]] = {}

    def block_of(m: int):
        hit = interned.get(m)
        if hit is None:
            hit = interned[m] = (tuple(_bits(m)), m)
        return hit

    def cliques(pool: int, need: int):
        # masks of need-subsets of pool that are cliques of the uncovered graph
        while pool:
            low = pool & -pool
            pool ^= low
            if need == 1:
                yield low
            else:
                z = low.bit_length() - 1
                for rest in cliques(pool & uncovered[z], need - 1):
                    yield low | rest

    def dfs(x: int):
        while x < v and not uncovered[x]:
            x += 1
        if x == v:
            yield IncidenceStructure._trusted(v, tuple(blocks), tuple(masks))
            return
        u = uncovered[x]
        low = u & -u
        y = low.bit_length() - 1
        base = (1 << x) | low
        pool = u & uncovered[y] & ~((low << 1) - 1)
        for rest in (cliques(pool, k - 2) if k > 2 else (0,)):
            ctr.tick()
            block, m = block_of(base | rest)
            for p in block:
                uncovered[p] &= ~m
            blocks.append(block)
            masks.append(m)
            yield from dfs(x)
            blocks.pop()
            masks.pop()
            for p in block:
                uncovered[p] |= m & ~(1 << p)

    yield from dfs(0)


# --- PBD enumeration -------------------------------------------------------


def enumerate_pbds_with_block(
    v: int, k: int, max_b: int, budget: Optional[SearchBudget] = None
) -> list[IncidenceStructure]:
    """Every labelled PBD on v points with at most max_b blocks and some block of size k."""
    if not 2 <= k < v:
        raise ValueError(f"need 2 <= k < v, got k={k}, v={v}")
    if max_b < 1:
        return []
    ctr = _Counter(budget or SearchBudget())
    full = (1 << v) - 1
    # uncovered[p]: bitmask of points q whose pair with p is not yet covered
    uncovered = [full & ~(1 << p) for p in range(v)]
    chosen: list[tuple[int, ...]] = []

    def blocks_needed() -> int:
        # blocks through p are cliques of the uncovered graph meeting at p only
        best = 0
        for p in range(v):
            u = uncovered[p]
            if not u:
                continue
            biggest = 0
            for q in _bits(u):
                biggest = max(biggest, (uncovered[q] & u).bit_count() + 1)
            best = max(best, -(-u.bit_count() // biggest))
        return best

    def extensions(pool: int):
        # subsets S of pool that are cliques in the uncovered graph, in a fixed order
        if not pool:
            yield ()
            return
        z = pool.bit_length() - 1
        rest = pool & ~(1 << z)
        yield from extensions(rest)
        for s in extensions(rest & uncovered[z]):
            yield s + (z,)

    def cover(block, on: bool):
        m = 0
        for p in block:
            m |= 1 << p
        for p in block:
            if on:
                uncovered[p] &= ~m
            else:
                uncovered[p] |= m & ~(1 << p)

    def dfs():
        x = next((p for p in range(v) if uncovered[p]), None)
        if x is None:
            if any(len(b) == k for b in chosen):
                ctr.found.append(IncidenceStructure(v, list(chosen)))
            return
        if len(chosen) + blocks_needed() > max_b:
            return
        y = (uncovered[x] & -uncovered[x]).bit_length() - 1
        pool = uncovered[x] & uncovered[y] & ~((1 << (y + 1)) - 1)
        for rest in extensions(pool):
            ctr.tick()
            block = (x, y) + rest
            cover(block, True)
            chosen.append(block)
            dfs()
            chosen.pop()
            cover(block, False)
            if ctr.full:
                return

    dfs()
    return ctr.found


def _bits(m: int):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


# --- constant-weight codes -------------------------------------------------


def max_constant_weight_code(n: int, r: int, d: int, budget: Optional[SearchBudget] = None) -> int:
    """Largest set of weight-r words of length n with pairwise distance >= d.

    Exact maximum clique by branch and bound with greedy colouring bounds.
    Coordinate permutations act transitively on the words and preserve
    distance, so some maximum code contains word 0 and only its neighbourhood
    is searched.
    """
    if not 0 <= r <= n or n > 12:
        raise ValueError(f"need 0 <= r <= n <= 12, got n={n}, r={r}")
    if d < 1:
        raise ValueError("minimum distance must be positive")
    ctr = _Counter(budget or SearchBudget())
    words = [sum(1 << i for i in c) for c in combinations(range(n), r)]
    nv = len(words)
    adj = [0] * nv
    for i, j in combinations(range(nv), 2):
        if (words[i] ^ words[j]).bit_count() >= d:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    best = 0

    def colour(cands: int):
        order, bounds = [], []
        remaining = cands
        c = 0
        while remaining:
            c += 1
            avail = remaining
            while avail:
                low = avail & -avail
                u = low.bit_length() - 1
                avail &= ~adj[u] & ~low
                remaining &= ~low
                order.append(u)
                bounds.append(c)
        return order, bounds

    def expand(size: int, cands: int):
        nonlocal best
        order, bounds = colour(cands)
        for u, c in zip(reversed(order), reversed(bounds)):
            if size + c <= best:
                return
            ctr.tick()
            nxt = cands & adj[u]
            if nxt:
                expand(size + 1, nxt)
            elif size + 1 > best:
                best = size + 1
            cands &= ~(1 << u)

    if nv == 0:
        return 0
    best = 1
    if adj[0]:
        expand(1, adj[0])
    return best
