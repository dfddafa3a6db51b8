"""Exhaustive labeled-graph enumeration for small n: the ground-truth oracle.

Graphs on ``n <= 8`` vertices are represented by adjacency bitmasks.  The
classifier decides connectivity levels by vertex-cut enumeration, planarity by
the edge bound plus an exhaustive Kuratowski subdivision search, and the
series-parallel / outerplanar memberships by branch-and-bound minor search
(contraction recursion with a subgraph base case), independent of the
analytic machinery it is used to validate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
import os


MAX_N = 8
DEFAULT_MAX_N = 7


class TooLarge(Exception):
    pass


@dataclass
class SmallGraph:
    """Labeled graph on n <= 8 vertices as adjacency bitmasks."""
    n: int
    adj: tuple  # adj[i] = bitmask of neighbours of vertex i

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise TooLarge(f"n={self.n} outside 1..{MAX_N}")
        for i in range(self.n):
            if self.adj[i] >> self.n:
                raise ValueError("adjacency bits beyond n")
            if self.adj[i] & (1 << i):
                raise ValueError("loops are not allowed")
            for j in range(self.n):
                if bool(self.adj[i] & (1 << j)) != bool(self.adj[j] & (1 << i)):
                    raise ValueError("adjacency matrix not symmetric")

    @classmethod
    def from_edges(cls, n, edges):
        adj = [0] * n
        for (i, j) in edges:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return cls(n, tuple(adj))

    def edge_count(self):
        return sum(bin(a).count("1") for a in self.adj) // 2

    def degree(self, v):
        return bin(self.adj[v]).count("1")


@dataclass
class ClassFlags:
    connected: bool
    two_connected: bool
    three_connected: bool
    planar: bool
    series_parallel: bool
    outerplanar: bool


@dataclass
class ClassCounts:
    """Exact counts and vertex-1 degree histograms for one (family, n)."""
    family: str
    n: int
    total: int = 0
    connected: int = 0
    two_connected: int = 0
    three_connected: int = 0
    # histogram[level][k] = number of family graphs at that connectivity level
    # in which vertex 1 (index 0) has degree k
    histogram: dict = field(default_factory=dict)
    edge_profile: dict = field(default_factory=dict)  # m -> connected count

    def check(self):
        for level, total in (("all", self.total), ("connected", self.connected),
                             ("2conn", self.two_connected)):
            hist = self.histogram.get(level, {})
            assert sum(hist.values()) == total, (self.family, self.n, level)


# ---------------------------------------------------------------------------
# connectivity
# ---------------------------------------------------------------------------

def _component_mask(adj, start, alive):
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        f = frontier
        while f:
            v = (f & -f).bit_length() - 1
            f &= f - 1
            nxt |= adj[v] & alive
        frontier = nxt & ~seen
        seen |= nxt
    return seen & alive


def is_connected(adj, n, alive=None):
    alive = alive if alive is not None else (1 << n) - 1
    if alive == 0:
        return False
    start = (alive & -alive).bit_length() - 1
    return _component_mask(adj, start, alive) == alive


def _connected_after_removal(adj, n, removed_mask):
    alive = ((1 << n) - 1) & ~removed_mask
    if alive == 0:
        return True
    return is_connected(adj, n, alive)


def connectivity_flags(adj, n):
    conn = is_connected(adj, n)
    if not conn:
        return False, False, False
    if n == 1:
        return True, False, False
    if n == 2:
        return True, True, False
    two = all(_connected_after_removal(adj, n, 1 << v) for v in range(n))
    three = False
    if two and n >= 4:
        three = all(_connected_after_removal(adj, n, (1 << a) | (1 << b))
                    for a in range(n) for b in range(a + 1, n))
    return conn, two, three


# ---------------------------------------------------------------------------
# minors of K4 and K2,3
#
# Both targets have maximum degree 3, so minor containment coincides with
# topological (subdivision) containment; the searches below look for branch
# vertices plus internally disjoint paths with bitmask DFS.
# ---------------------------------------------------------------------------

def has_k4_minor(adj, n):
    if n < 4:
        return False
    return has_k4_subdivision(adj, n)


def has_k23_minor(adj, n):
    """Two poles joined by three internally disjoint paths of length >= 2."""
    if n < 5:
        return False
    full = (1 << n) - 1
    for a in range(n):
        if bin(adj[a]).count("1") < 3:
            continue
        for b in range(a + 1, n):
            if bin(adj[b]).count("1") < 3:
                continue
            free = full & ~(1 << a) & ~(1 << b)
            if _three_disjoint_long_paths(adj, a, b, free):
                return True
    return False


def _three_disjoint_long_paths(adj, a, b, free_mask):
    """Three vertex-disjoint a-b paths, each with at least one inner vertex."""

    def place(count, remaining):
        if count == 0:
            return True

        def dfs(cur, rem):
            m = adj[cur] & rem
            while m:
                v = (m & -m).bit_length() - 1
                m &= m - 1
                if adj[v] & (1 << b):
                    if place(count - 1, rem & ~(1 << v)):
                        return True
                if dfs(v, rem & ~(1 << v)):
                    return True
            return False

        return dfs(a, remaining)

    return place(3, free_mask)


# ---------------------------------------------------------------------------
# Kuratowski subdivisions (for planarity)
# ---------------------------------------------------------------------------

def _find_disjoint_paths(adj, pairs, free_mask):
    """Vertex-disjoint paths for each (a, b) pair, interiors within free_mask."""
    if not pairs:
        return True
    (a, b), rest = pairs[0], pairs[1:]
    # direct edge
    if adj[a] & (1 << b):
        if _find_disjoint_paths(adj, rest, free_mask):
            return True
    # paths through free internal vertices (DFS)
    stack = [(a, free_mask)]

    def dfs(cur, remaining):
        m = adj[cur] & remaining
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            if adj[v] & (1 << b):
                if _find_disjoint_paths(adj, rest, remaining & ~(1 << v)):
                    return True
            if dfs(v, remaining & ~(1 << v)):
                return True
        return False

    return dfs(a, free_mask)


def _has_subdivision(adj, n, branch_degrees, edges_of_h, assignments):
    """Search for a subdivision of H given branch degrees and an assignment
    generator (H-automorphism classes of role assignments)."""
    k = len(branch_degrees)
    min_deg = min(branch_degrees)
    candidates = [v for v in range(n) if bin(adj[v]).count("1") >= min_deg]
    if len(candidates) < k:
        return False
    full = (1 << n) - 1
    for combo in combinations(candidates, k):
        combo_mask = 0
        for v in combo:
            combo_mask |= 1 << v
        for perm in assignments(combo):
            if any(bin(adj[perm[i]]).count("1") < branch_degrees[i] for i in range(k)):
                continue
            pairs = [(perm[i], perm[j]) for (i, j) in edges_of_h]
            if _find_disjoint_paths(adj, pairs, full & ~combo_mask):
                return True
    return False


def has_k5_subdivision(adj, n):
    # K5 is vertex-transitive and complete: one assignment per vertex subset
    edges = [(i, j) for i in range(5) for j in range(i + 1, 5)]
    return _has_subdivision(adj, n, [4] * 5, edges, lambda combo: [combo])


def has_k33_subdivision(adj, n):
    # distinct assignments = bipartitions of the six branch vertices into
    # two triples; fixing the first vertex in side A removes the side swap
    edges = [(i, 3 + j) for i in range(3) for j in range(3)]

    def assignments(combo):
        rest = combo[1:]
        for pair in combinations(rest, 2):
            side_a = (combo[0],) + pair
            side_b = tuple(v for v in rest if v not in pair)
            yield side_a + side_b

    return _has_subdivision(adj, n, [3] * 6, edges, assignments)


def has_k4_subdivision(adj, n):
    edges = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    return _has_subdivision(adj, n, [3] * 4, edges, lambda combo: [combo])


def is_planar(adj, n, m=None):
    if n <= 4:
        return True
    m = m if m is not None else sum(bin(a).count("1") for a in adj) // 2
    if m > 3 * n - 6:
        return False
    if has_k5_subdivision(adj, n):
        return False
    if has_k33_subdivision(adj, n):
        return False
    return True


# ---------------------------------------------------------------------------
# classification and enumeration
# ---------------------------------------------------------------------------

def classify(g: SmallGraph) -> ClassFlags:
    if g.n > MAX_N:
        raise TooLarge(f"n={g.n} > {MAX_N}")
    adj, n = g.adj, g.n
    conn, two, three = connectivity_flags(adj, n)
    m = g.edge_count()
    sp = not has_k4_minor(adj, n) if m <= max(2 * n - 3, 1) else False
    outer = sp and not has_k23_minor(adj, n)
    planar = True if sp else is_planar(adj, n, m)
    return ClassFlags(conn, two, three, planar, sp, outer)


FAMILIES = ("outerplanar", "series_parallel", "planar")


def _family_flag(flags: ClassFlags, family: str) -> bool:
    if family == "outerplanar":
        return flags.outerplanar
    if family == "series_parallel":
        return flags.series_parallel
    if family == "planar":
        return flags.planar
    raise ValueError(f"unknown family {family!r}")


def enumerate_family(n, family, allow_n8=False) -> ClassCounts:
    return enumerate_all(n, allow_n8=allow_n8)[family]


def enumerate_all(n, allow_n8=False) -> dict:
    """One sweep over all labeled graphs on n vertices, all three families."""
    if n > (MAX_N if allow_n8 else DEFAULT_MAX_N):
        raise TooLarge(f"n={n} beyond limit (opt in for n=8)")
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    nedges = len(edges)
    counts = {fam: ClassCounts(fam, n) for fam in FAMILIES}
    for fam in FAMILIES:
        counts[fam].histogram = {"all": {}, "connected": {}, "2conn": {}, "3conn": {}}
    adj = [0] * n
    prev_mask = 0
    for mask in range(1 << nedges):
        gray = mask ^ (mask >> 1)
        flip = gray ^ prev_mask
        prev_mask = gray
        if flip:
            bit = flip.bit_length() - 1
            (i, j) = edges[bit]
            adj[i] ^= 1 << j
            adj[j] ^= 1 << i
        m = sum(bin(a).count("1") for a in adj) // 2
        conn, two, three = connectivity_flags(adj, n)
        sp = (m <= 2 * n - 3 or n <= 2) and not has_k4_minor(adj, n)
        outer = sp and not has_k23_minor(adj, n)
        planar = True if sp else is_planar(adj, n, m)
        k_root = bin(adj[0]).count("1")
        for fam, member in (("outerplanar", outer), ("series_parallel", sp),
                            ("planar", planar)):
            if not member:
                continue
            cc = counts[fam]
            cc.total += 1
            cc.histogram["all"][k_root] = cc.histogram["all"].get(k_root, 0) + 1
            if conn:
                cc.connected += 1
                cc.histogram["connected"][k_root] = \
                    cc.histogram["connected"].get(k_root, 0) + 1
                cc.edge_profile[m] = cc.edge_profile.get(m, 0) + 1
            if two:
                cc.two_connected += 1
                cc.histogram["2conn"][k_root] = cc.histogram["2conn"].get(k_root, 0) + 1
            if three:
                cc.three_connected += 1
                cc.histogram["3conn"][k_root] = cc.histogram["3conn"].get(k_root, 0) + 1
    for cc in counts.values():
        cc.check()
    return counts


def finite_n_distribution(n, family, level="connected", allow_n8=False):
    """Exact rational d_k^(n): histogram[k] / (count at that level)."""
    cc = enumerate_family(n, family, allow_n8=allow_n8)
    hist = cc.histogram[level]
    total = {"all": cc.total, "connected": cc.connected,
             "2conn": cc.two_connected, "3conn": cc.three_connected}[level]
    if total == 0:
        return {}
    return {k: Fraction(v, total) for k, v in sorted(hist.items())}


# ---------------------------------------------------------------------------
# persisted count tables
# ---------------------------------------------------------------------------

def save_counts(counts: dict, path):
    """Write count tables: one line per (family, n, level, k, count)."""
    with open(path, "w") as fh:
        for fam, cc in sorted(counts.items()):
            for level in ("all", "connected", "2conn", "3conn"):
                for k, v in sorted(cc.histogram[level].items()):
                    fh.write(f"{fam} {cc.n} {level} {k} {v}\n")


def load_counts(path, n):
    """Rebuild ClassCounts from a persisted table (histograms and totals)."""
    if not os.path.exists(path):
        return None
    counts = {fam: ClassCounts(fam, n) for fam in FAMILIES}
    for fam in FAMILIES:
        counts[fam].histogram = {"all": {}, "connected": {}, "2conn": {}, "3conn": {}}
    with open(path) as fh:
        for line in fh:
            fam, nn, level, k, v = line.split()
            if int(nn) != n:
                continue
            counts[fam].histogram[level][int(k)] = int(v)
    for cc in counts.values():
        cc.total = sum(cc.histogram["all"].values())
        cc.connected = sum(cc.histogram["connected"].values())
        cc.two_connected = sum(cc.histogram["2conn"].values())
        cc.three_connected = sum(cc.histogram["3conn"].values())
    return counts
