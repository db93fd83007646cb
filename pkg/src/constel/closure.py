"""Finite-level closures, extendibility, and product membership.

At a finite level G, the closure of the subgroup generated by a list of
words is the full preimage of its image T <= G; its Stallings automaton
is the (complete) Schreier coset graph of T.  Extendibility at the level
asks whether a folded automaton appears as a pointed subgraph of that
coset graph, and product membership checks the level shadow of
membership in a product of finitely generated subgroups.
"""

from __future__ import annotations

from collections import deque

from .automata import InverseAutomaton, Subgraph, member, pointed_isomorphic, subgraph_automaton
from .gaschuetz import GaschuetzLayer, TowerSpec
from .groups import DEFAULT_BOUND, MaterializedGroup, materialize, subgroup_closure
from .words import Word


def subgroup_image(gens: list[Word], g_group: MaterializedGroup) -> frozenset[int]:
    """Image in G of the subgroup generated by the words."""
    return subgroup_closure(g_group, [g_group.evaluate(w) for w in gens])


def schreier_graph(g_group: MaterializedGroup, t_elems
                   ) -> tuple[InverseAutomaton, tuple[int, ...]]:
    """Right-coset graph of T (base coset T, BFS numbering) together
    with the coset index of every group element."""
    t_set = frozenset(t_elems)
    if 0 not in t_set:
        raise ValueError("subgroup must contain the identity")
    coset_of = [-1] * g_group.order
    start = frozenset(t_set)
    ids = {start: 0}
    for x in start:
        coset_of[x] = 0
    queue = deque([start])
    edges = []
    while queue:
        coset = queue.popleft()
        rep = min(coset)
        for letter in range(g_group.n_letters):
            nxt = frozenset(g_group.mul_idx(x, g_group.images[letter]) for x in coset)
            if nxt not in ids:
                ids[nxt] = len(ids)
                for x in nxt:
                    coset_of[x] = ids[nxt]
                queue.append(nxt)
            edges.append((ids[coset], letter, ids[nxt]))
    aut = InverseAutomaton(len(ids), g_group.n_letters, edges, base=0)
    return aut, tuple(coset_of)


def closure_at_level(gens: list[Word], g_group: MaterializedGroup) -> InverseAutomaton:
    """Stallings automaton of the level-G closure of <gens>: the coset
    graph of the image subgroup (complete, hence its own core)."""
    aut, _ = schreier_graph(g_group, subgroup_image(gens, g_group))
    return aut


def extendible_at_level(a: InverseAutomaton, g_group: MaterializedGroup
                        ) -> tuple[bool, InverseAutomaton]:
    """Whether the canonical morphism of a into the coset graph of its
    base-fiber subgroup is injective; also returns its image, the
    largest level-G quotient of a."""
    if a.base is None:
        raise ValueError("extendibility needs a based automaton")
    gamma = g_group.cayley
    seen = {(a.base, 0)}
    queue = deque(seen)
    g_edges: set[tuple[int, int]] = set()
    while queue:
        v, g = queue.popleft()
        for letter in range(a.n_letters):
            for sign in (1, -1):
                w = a.step(v, letter, sign)
                if w is None:
                    continue
                h = gamma.step(g, letter, sign)
                g_edges.add((g, letter) if sign > 0 else (h, letter))
                if (w, h) not in seen:
                    seen.add((w, h))
                    queue.append((w, h))
    t_set = frozenset(g for v, g in seen if v == a.base)
    sigma, coset_of = schreier_graph(g_group, t_set)
    vertices = frozenset(coset_of[g] for _, g in seen)
    edges = frozenset((coset_of[u], letter) for u, letter in g_edges)
    psi = subgraph_automaton(Subgraph(sigma, edges, vertices), 0)
    return pointed_isomorphic(psi, a), psi


def product_membership_at_level(w: Word, subgroups: list[list[Word]],
                                g_group: MaterializedGroup) -> bool:
    """Whether [w]_G lies in the literal set product T_1 ... T_n of the
    image subgroups; necessary at every level for membership in the
    closure of the product."""
    prod = {0}
    for gens in subgroups:
        t_set = subgroup_image(gens, g_group)
        prod = {g_group.mul_idx(s, t) for s in prod for t in t_set}
    return g_group.evaluate(w) in prod


def closure_chain(w: Word, gens: list[Word], spec: TowerSpec,
                  bound: int = DEFAULT_BOUND) -> list[bool]:
    """Membership of w in the level closure of <gens> at every level of
    the tower; nonincreasing since the projections carry image to image."""
    level = materialize(spec.base, bound)
    answers = [member(closure_at_level(gens, level), w)]
    for p, tilde in spec.layers:
        level = GaschuetzLayer(level, p, tilde=tilde).materialize(bound)
        answers.append(member(closure_at_level(gens, level), w))
    for earlier, later in zip(answers, answers[1:]):
        assert earlier or not later, "level membership must be nonincreasing"
    return answers
