"""Decision procedures for dissolving constellations.

A group H over G (via the canonical letter-respecting morphism)
dissolves a constellation (Xi, g, Theta) when no pair of words u, v
whose paths from 1 run inside Xi resp. Theta and end at g satisfies
[u]_H = [v]_H.  Two exact deciders are provided:

- reachability: materialize H, lift Xi and Theta to the components of 1
  of their edge preimages in Gamma(H), and intersect the endpoint fibers
  over g.  Complete because the fiber of g in the lift is exactly the
  set of H-endpoints of qualifying words.
- linear: for a lazy mod-p top layer over a materialized M, endpoint
  sets over a fixed M-endpoint are cosets of the mod-p cycle spaces of
  the lifted subgraphs, so the fibers intersect iff the reference-path
  difference lies in the span of both cycle spaces (plus the per-letter
  constant vectors for tilde layers).  Decided by Gaussian elimination.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .automata import Subgraph, full_subgraph
from .constellations import Constellation, delta_a, maximal_constellations
from .gaschuetz import GaschuetzLayer, Tower
from .groups import MaterializedGroup, Morphism, canonical_morphism, traversal_vector
from .words import ASCII_LETTERS, Word

Vec = dict[tuple[int, int], int]


@dataclass(frozen=True)
class DissolveReport:
    label: str
    dissolved: bool
    method: str  # "reachability" or "linear"
    witness: tuple[Word, Word] | None = None  # (u, v) with [u]_H = [v]_H
    endpoint: int | None = None               # shared lifted endpoint (linear)
    vector: Vec | None = None                 # offending difference vector


def reachable_lift(xi: Subgraph, h_group: MaterializedGroup, phi: Morphism
                   ) -> tuple[Subgraph, dict[int, frozenset[int]]]:
    """Component of the identity of the edge preimage of xi in Gamma(H),
    with its fibers: fibers[g] is exactly the set of H-endpoints of
    words whose G-path from 1 stays inside xi and ends at g."""
    gamma_h = h_group.cayley
    base = xi.parent.base
    if base is None or not xi.has_vertex(base):
        raise ValueError("the base vertex must lie in the subgraph")
    vertices = frozenset(h for h in range(h_group.order) if phi(h) in xi.vertices)
    edges = frozenset((h, a) for h, a, _ in gamma_h.pos_edges()
                      if (phi(h), a) in xi.edges)
    comp = Subgraph(gamma_h, edges, vertices).component_of(0)
    lifted = Subgraph(gamma_h, frozenset(e for e in edges if e[0] in comp), comp)
    fibers: dict[int, set[int]] = {}
    for h in comp:
        fibers.setdefault(phi(h), set()).add(h)
    return lifted, {g: frozenset(s) for g, s in fibers.items()}


def _subgraph_word(sub: Subgraph, src: int, dst: int) -> Word | None:
    """Word labeling a path src -> dst inside the subgraph; prefers a
    purely positive path (BFS over forward edges) before falling back
    to a signed search."""
    for positive_only in (True, False):
        prev: dict[int, tuple[int, int, int]] = {src: (-1, -1, 0)}
        queue = deque([src])
        while queue:
            v = queue.popleft()
            for w, letter, sign, _ in sub.neighbors(v):
                if sign < 0 and positive_only:
                    continue
                if w not in prev:
                    prev[w] = (v, letter, sign)
                    queue.append(w)
        if dst in prev:
            pairs = []
            v = dst
            while v != src:
                u, letter, sign = prev[v]
                pairs.append((letter, sign))
                v = u
            return Word(tuple(reversed(pairs)))
    return None


def _path_stays(sub: Subgraph, w: Word) -> bool:
    v = sub.parent.base
    if not sub.has_vertex(v):
        return False
    for letter, sign in w:
        nxt = sub.parent.step(v, letter, sign)
        if nxt is None:
            return False
        edge = (v, letter) if sign > 0 else (nxt, letter)
        if edge not in sub.edges or not sub.has_vertex(nxt):
            return False
        v = nxt
    return True


def dissolves_materialized(h_group: MaterializedGroup, phi: Morphism,
                           c: Constellation, label: str = "") -> DissolveReport:
    """Exact reachability decision; failures carry a re-verified word pair."""
    xi_hat, fib_xi = reachable_lift(c.xi, h_group, phi)
    th_hat, fib_th = reachable_lift(c.theta, h_group, phi)
    shared = sorted(fib_xi.get(c.g, frozenset()) & fib_th.get(c.g, frozenset()))
    if not shared:
        return DissolveReport(label, True, "reachability")
    h = shared[0]
    u = _subgraph_word(xi_hat, 0, h)
    v = _subgraph_word(th_hat, 0, h)
    assert u is not None and v is not None
    assert h_group.evaluate(u) == h == h_group.evaluate(v)
    assert _path_stays(c.xi, u) and _path_stays(c.theta, v)
    return DissolveReport(label, False, "reachability", witness=(u, v))


class GFpSpan:
    """Row space over F_p with streaming insertion and membership tests."""

    def __init__(self, p: int):
        self.p = p
        self.rows: dict[tuple[int, int], Vec] = {}  # pivot column -> reduced row

    def _clean(self, vec: Vec) -> Vec:
        return {e: c % self.p for e, c in vec.items() if c % self.p}

    def reduce(self, vec: Vec) -> Vec:
        vec = self._clean(vec)
        while vec:
            piv = max(vec)
            row = self.rows.get(piv)
            if row is None:
                return vec
            c = vec[piv]
            vec = {e: (vec.get(e, 0) - c * row.get(e, 0)) % self.p
                   for e in set(vec) | set(row)}
            vec = {e: x for e, x in vec.items() if x}
        return vec

    def add(self, vec: Vec) -> bool:
        r = self.reduce(vec)
        if not r:
            return False
        piv = max(r)
        inv = pow(r[piv], -1, self.p)
        self.rows[piv] = {e: c * inv % self.p for e, c in r.items()}
        return True

    def contains(self, vec: Vec) -> bool:
        return not self.reduce(vec)

    @property
    def rank(self) -> int:
        return len(self.rows)


def _tree_vectors(sub: Subgraph, p: int) -> dict[int, Vec]:
    """Traversal vectors (mod p) of BFS-tree paths from the parent base
    to every vertex of the connected subgraph."""
    root = sub.parent.base
    vecs: dict[int, Vec] = {root: {}}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w, _, sign, edge in sub.neighbors(v):
            if w in vecs:
                continue
            nxt = dict(vecs[v])
            nxt[edge] = (nxt.get(edge, 0) + sign) % p
            if not nxt[edge]:
                del nxt[edge]
            vecs[w] = nxt
            queue.append(w)
    return vecs


def cycle_space_rows(sub: Subgraph, p: int) -> list[Vec]:
    """Fundamental-cycle basis of the subgraph's mod-p cycle space."""
    vecs = _tree_vectors(sub, p)
    rows = []
    for edge in sorted(sub.edges):
        u, _ = edge
        row = dict(vecs[u])
        row[edge] = (row.get(edge, 0) + 1) % p
        for e, c in vecs[sub.dst(edge)].items():
            row[e] = (row.get(e, 0) - c) % p
        row = {e: c for e, c in row.items() if c % p}
        if row:
            rows.append(row)
    return rows


def dissolves_linear(layer: GaschuetzLayer, phi: Morphism, c: Constellation,
                     label: str = "") -> DissolveReport:
    """Exact decision for a lazy top layer over the materialized base of
    phi, without enumerating the layer."""
    m_group = layer.base
    if phi.src is not m_group:
        raise ValueError("morphism must start at the layer's base group")
    xi_hat, fib_xi = reachable_lift(c.xi, m_group, phi)
    th_hat, fib_th = reachable_lift(c.theta, m_group, phi)
    shared = sorted(fib_xi.get(c.g, frozenset()) & fib_th.get(c.g, frozenset()))
    if not shared:
        return DissolveReport(label, True, "linear")
    p = layer.p
    span = GFpSpan(p)
    for row in cycle_space_rows(xi_hat, p):
        span.add(row)
    for row in cycle_space_rows(th_hat, p):
        span.add(row)
    if layer.tilde:
        for a in range(m_group.n_letters):
            span.add({(h, a): 1 for h in range(m_group.order)})
    vx = _tree_vectors(xi_hat, p)
    vt = _tree_vectors(th_hat, p)
    for m in shared:
        diff = dict(vx[m])
        for e, cnt in vt[m].items():
            diff[e] = (diff.get(e, 0) - cnt) % p
        diff = {e: cnt for e, cnt in diff.items() if cnt}
        if span.contains(diff):
            return DissolveReport(label, False, "linear", endpoint=m, vector=diff)
    return DissolveReport(label, True, "linear")


def _letter_label(letter: int, sign: int) -> str:
    return "delta:%s%s" % (ASCII_LETTERS[letter], "" if sign > 0 else "^-1")


def _targets(base: MaterializedGroup, weak: bool) -> list[tuple[str, Constellation]]:
    if weak:
        return [(_letter_label(letter, sign), delta_a(base, letter, sign))
                for letter in range(base.n_letters) for sign in (1, -1)]
    out = []
    for i, pair in enumerate(maximal_constellations(base)):
        for g in pair.g_choices:
            out.append(("max%d:g%d" % (i, g), pair.constellation(g)))
    return out


def dissolve_all(tower: Tower, weak: bool = False,
                 materialize_bound: int = 100000) -> list[DissolveReport]:
    """Dissolving reports for the tower's top group over its base, over
    the weak (delta) or the full maximal constellation family.  Uses
    reachability whenever the top materializes within the bound."""
    base = tower.levels[0]
    targets = _targets(base, weak)
    if tower.top is None:
        h_group = tower.levels[-1]
        phi = tower.morphism(len(tower.levels) - 1, 0)
        return [dissolves_materialized(h_group, phi, c, label) for label, c in targets]
    if tower.top.order() <= materialize_bound:
        h_group = tower.top.materialize(materialize_bound)
        phi = canonical_morphism(h_group, base)
        assert phi is not None
        return [dissolves_materialized(h_group, phi, c, label) for label, c in targets]
    phi = tower.morphism(len(tower.levels) - 1, 0)
    return [dissolves_linear(tower.top, phi, c, label) for label, c in targets]


def is_weak_dissolver(tower: Tower, materialize_bound: int = 100000) -> bool:
    return all(r.dissolved for r in dissolve_all(tower, weak=True,
                                                 materialize_bound=materialize_bound))


def is_dissolver(tower: Tower, materialize_bound: int = 100000) -> bool:
    return all(r.dissolved for r in dissolve_all(tower, weak=False,
                                                 materialize_bound=materialize_bound))


def _component_ids(sub: Subgraph) -> dict[int, int]:
    ids: dict[int, int] = {}
    nxt = 0
    for v in sorted(sub.vertices):
        if v in ids:
            continue
        for w in sub.component_of(v):
            ids[w] = nxt
        nxt += 1
    return ids


def disconnection_equivalence(phi: Morphism, letter: int, sign: int = 1
                              ) -> tuple[bool, bool, bool, bool]:
    """The four equivalent statements for H over G and a signed letter,
    computed independently: (1) Gamma(H) minus the kernel translates of
    the letter's base edge is disconnected, (2) 1 and the letter image
    are separated there, (3) every n and n*image are separated, (4) H
    dissolves the letter constellation of G."""
    h_group, g_group = phi.src, phi.dst
    img = h_group.images[letter] if sign > 0 else h_group.inv_idx(h_group.images[letter])
    kernel = phi.kernel()
    removed = {(h_group.mul_idx(n, img) if sign < 0 else n, letter) for n in kernel}
    # for sign < 0 the geometric edge of (n, a^-1) is (n * img, a)
    sub = full_subgraph(h_group.cayley).minus_edges(removed)
    ids = _component_ids(sub)
    disconnected = len(set(ids.values())) > 1
    separated_1 = ids[0] != ids[img]
    separated_all = all(ids[n] != ids[h_group.mul_idx(n, img)] for n in kernel)
    dissolved = dissolves_materialized(h_group, phi, delta_a(g_group, letter, sign)).dissolved
    return (disconnected, separated_1, separated_all, dissolved)


def _is_subgroup(group: MaterializedGroup, elems: frozenset[int]) -> bool:
    return (0 in elems
            and all(group.mul_idx(x, y) in elems for x in elems for y in elems)
            and all(group.inv_idx(x) in elems for x in elems))


@dataclass(frozen=True)
class KeyLemmaReport:
    n_edges: int
    failures: tuple[tuple[int, int], ...]

    @property
    def all_ok(self) -> bool:
        return not self.failures


def key_lemma_edge(h_group: MaterializedGroup, l_set: frozenset[int],
                   edge: tuple[int, int]) -> bool:
    """Disconnection with separated endpoints after removing the L
    translates of one edge of Gamma(H)."""
    g, letter = edge
    removed = {(h_group.mul_idx(x, g), letter) for x in l_set}
    sub = full_subgraph(h_group.cayley).minus_edges(removed)
    comp = sub.component_of(g)
    target = h_group.cayley.fwd[g][letter]
    return len(comp) < h_group.order and target not in comp


def key_lemma_report(g_group: MaterializedGroup, p: int, k_set,
                     bound: int = 100000) -> KeyLemmaReport:
    """Check, for every edge (g,a) of Gamma(G~), that removing the
    translates of the edge by the preimage L of K disconnects the graph
    with g and ga separated.  K must be a nontrivial subgroup of G."""
    k_set = frozenset(k_set)
    if k_set == {0}:
        raise ValueError("K must be nontrivial")
    if not _is_subgroup(g_group, k_set):
        raise ValueError("K is not a subgroup")
    h_group = GaschuetzLayer(g_group, p, tilde=True).materialize(bound)
    phi = canonical_morphism(h_group, g_group)
    assert phi is not None
    l_set = frozenset(h for h in range(h_group.order) if phi(h) in k_set)
    failures = tuple(edge[:2] for edge in h_group.cayley.pos_edges()
                     if not key_lemma_edge(h_group, l_set, edge[:2]))
    return KeyLemmaReport(h_group.cayley.n_pos_edges, failures)


def counting_lifts_check(phi: Morphism, w: Word) -> bool:
    """Pushing the H-traversal vector down along phi gives the
    G-traversal vector, as exact integers."""
    down: dict[tuple[int, int], int] = {}
    for (h, a), cnt in traversal_vector(phi.src, w).items():
        key = (phi(h), a)
        down[key] = down.get(key, 0) + cnt
    down = {e: c for e, c in down.items() if c}
    return down == traversal_vector(phi.dst, w)


def detecting_edges_check(phi: Morphism, c: Constellation, w: Word) -> bool:
    """Signed border-crossing count of the lifted word: the traversal of
    w in Gamma(H), summed over the preimages of the edges of Xi leaving
    the component of 1 of Xi intersect Theta minus those entering it,
    must equal exactly 1."""
    g_group = phi.dst
    if g_group.evaluate(w) != c.g:
        raise ValueError("word does not evaluate to the constellation's g")
    pi_g = traversal_vector(g_group, w)
    if not set(pi_g) <= c.xi.edges:
        raise ValueError("word traversal leaves xi")
    upsilon = c.xi.intersection(c.theta).component_of(c.base)
    border_out = {e for e in c.xi.edges
                  if e[0] in upsilon and c.xi.dst(e) not in upsilon}
    border_in = {e for e in c.xi.edges
                 if e[0] not in upsilon and c.xi.dst(e) in upsilon}
    total = 0
    for (h, a), cnt in traversal_vector(phi.src, w).items():
        if (phi(h), a) in border_out:
            total += cnt
        elif (phi(h), a) in border_in:
            total -= cnt
    return total == 1


@dataclass(frozen=True)
class RankReport:
    p: int
    tilde: bool
    rank: int        # kernel p-rank by the index formula
    cycle_dim: int   # E - V + 1 of the base Cayley graph
    tilde_deficit: int
    formula_ok: bool
    verified: bool | None  # enumeration check, None when out of bound


def schreier_rank_check(layer: GaschuetzLayer, verify_bound: int = 100000) -> RankReport:
    """The kernel rank of a plain layer equals the cycle-space dimension
    |G||A| - |G| + 1 of the base graph; tilde layers sit |A| lower."""
    base = layer.base
    rank = layer.kernel_rank()
    cycle_dim = base.order * base.n_letters - base.order + 1
    deficit = base.n_letters if layer.tilde else 0
    verified: bool | None = None
    if layer.order() <= verify_bound:
        mat = layer.materialize(verify_bound)
        phi = canonical_morphism(mat, base)
        assert phi is not None
        kernel = phi.kernel()
        verified = (len(kernel) == layer.p ** rank
                    and all(k == 0 or mat.element_order(k) == layer.p for k in kernel))
    return RankReport(layer.p, layer.tilde, rank, cycle_dim, deficit,
                      rank == cycle_dim - deficit, verified)
