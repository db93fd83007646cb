"""Completion of a connected incomplete inverse automaton to a
permutation automaton whose transition group is the alternating group.

The gadget adds q + k + 2 fresh vertices (q the smallest prime above the
input size m, k free padding): a b-cycle x_1 .. x_q of prime length, an
a-cycle through y, x_2, x_3, t_1 .. t_k, z, and one a-edge from the input
into x_1.  All letters are then closed to total even permutations; the
certificate (transitive + primitive + prime q-cycle with q <= n-3 + all
generators even) pins the group to Alt(n) by Jordan's criterion.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .automata import InverseAutomaton, embed_check, transition_group
from .perms import AlternatingCertificate, Permutation, alternating_certificate, is_prime


def smallest_prime_greater(m: int) -> int:
    if m < 1:
        raise ValueError("m must be positive")
    q = m + 1
    while not is_prime(q):
        q += 1
    return q


@dataclass(frozen=True)
class CompletionPlan:
    m: int
    q: int
    k: int
    n: int
    a: int  # letter attached to the input
    b: int  # letter carrying the prime cycle
    v: int  # input vertex receiving the a-edge to x_1
    x: tuple[int, ...]
    y: int
    z: int
    t: tuple[int, ...]


@dataclass(frozen=True)
class PredissolverReport:
    witnesses: tuple[int | None, ...]
    all_found: bool


def complete_to_alternating(aut: InverseAutomaton, n: int, seed: int = 0
                            ) -> tuple[InverseAutomaton, AlternatingCertificate, CompletionPlan]:
    m = aut.n
    if m < 3:
        raise ValueError("completion needs at least 3 vertices, got %d" % m)
    if aut.n_letters < 2:
        raise ValueError("completion needs at least two letters")
    if not aut.is_connected():
        raise ValueError("input automaton is not connected")
    if aut.is_complete():
        raise ValueError("input automaton is already complete")
    q = smallest_prime_greater(m)
    if n < m + q + 2:
        raise ValueError("n < m+q+2 = %d" % (m + q + 2))
    k = n - m - q - 2

    a = min(letter for letter in range(aut.n_letters) if aut.missing_outgoing(letter))
    v = min(aut.missing_outgoing(a))
    b = 0 if a != 0 else 1

    x = tuple(range(m, m + q))
    y, z = m + q, m + q + 1
    t = tuple(range(m + q + 2, n))

    fwd_by_letter: list[dict[int, int]] = [dict() for _ in range(aut.n_letters)]
    for u, letter, w in aut.pos_edges():
        fwd_by_letter[letter][u] = w

    fwd_by_letter[a][v] = x[0]
    a_cycle = [y, x[1], x[2], *t, z]
    for i, u in enumerate(a_cycle):
        fwd_by_letter[a][u] = a_cycle[(i + 1) % len(a_cycle)]
    for i in range(q):
        fwd_by_letter[b][x[i]] = x[(i + 1) % q]

    rng = random.Random(seed)
    for letter in range(aut.n_letters):
        action = fwd_by_letter[letter]
        targets = set(action.values())
        singles = []
        for u in range(n):
            if u in action or u in targets:
                continue
            action[u] = u  # free singleton, closed as a fixed point
            targets.add(u)
            singles.append(u)
        # close every maximal partial chain into its own cycle
        for start in range(n):
            if start in targets or start not in action:
                continue  # not a chain head
            end = start
            while end in action:
                end = action[end]
            action[end] = start
        perm = Permutation(tuple(action[u] for u in range(n)))
        if not perm.is_even():
            # merging two singleton fixed points into a 2-cycle flips parity
            if len(singles) < 2:
                raise AssertionError("no singletons left for parity repair")
            u, w = rng.sample(sorted(singles), 2)
            action[u], action[w] = w, u
        fwd_by_letter[letter] = action

    edges = [(u, letter, action[u])
             for letter, action in enumerate(fwd_by_letter)
             for u in sorted(action)]
    result = InverseAutomaton(n, aut.n_letters, edges, base=aut.base)

    for u, letter, w in aut.pos_edges():
        assert result.fwd[u][letter] == w  # extends the input verbatim
    group = transition_group(result)
    assert all(p.is_even() for p in group.perms)
    b_lengths = sorted(len(c) for c in group.perms[b].cycles(include_fixed=True))
    assert b_lengths.count(q) == 1 and all(l < q for l in b_lengths if l != q)
    cert = alternating_certificate(group)
    plan = CompletionPlan(m, q, k, n, a, b, v, x, y, z, t)
    return result, cert, plan


def predissolver_certificate(completion: InverseAutomaton,
                             amalgams: list[InverseAutomaton]) -> PredissolverReport:
    """Find, for each amalgam, a vertex of the completion at which it
    embeds; all found means the completion's transition group separates
    the word pair of every constellation behind the amalgams."""
    witnesses: list[int | None] = []
    for a in amalgams:
        if a.base is None:
            raise ValueError("amalgam must be based")
        found = None
        for start in range(completion.n):
            if embed_check(a, completion, start) is not None:
                found = start
                break
        witnesses.append(found)
    return PredissolverReport(tuple(witnesses), all(w is not None for w in witnesses))
