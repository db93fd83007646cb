"""Finite A-generated groups: a group together with a chosen generator
image per letter.  The assignment need not be injective; everything is
keyed by letter indices.

Materialized groups carry their full element list (BFS discovery order
from the identity, letters ascending, so element 0 is the identity) and
their Cayley graph as a complete inverse automaton.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass
from math import gcd

from .automata import InverseAutomaton
from .perms import Permutation
from .words import Word


@dataclass(frozen=True)
class CyclicSpec:
    n: int
    images: tuple[int, ...]  # residue per letter

    @property
    def n_letters(self) -> int:
        return len(self.images)


@dataclass(frozen=True)
class KleinSpec:
    images: tuple[tuple[int, int], ...]  # bit pair per letter

    @property
    def n_letters(self) -> int:
        return len(self.images)


@dataclass(frozen=True)
class PermSpec:
    degree: int
    images: tuple[Permutation, ...]

    @property
    def n_letters(self) -> int:
        return len(self.images)


@dataclass(frozen=True)
class ExtensionSpec:
    """Gaschütz extension layer over an inner spec; tilde quotients by the center."""

    inner: "GroupSpec"
    p: int
    tilde: bool

    @property
    def n_letters(self) -> int:
        return self.inner.n_letters


@dataclass(frozen=True)
class ProductSpec:
    left: "GroupSpec"
    right: "GroupSpec"

    @property
    def n_letters(self) -> int:
        return self.left.n_letters


GroupSpec = CyclicSpec | KleinSpec | PermSpec | ExtensionSpec | ProductSpec

DEFAULT_BOUND = 10 ** 6


class OrderBoundError(ValueError):
    pass


class MaterializedGroup:
    """Finite A-generated group with explicit elements and Cayley graph."""

    def __init__(self, n_letters, elems, index, images, mul, inv):
        self.n_letters = n_letters
        self.elems = elems
        self.index = index
        self.images = images  # element index per letter
        self._mul = mul
        self._inv = inv
        self.cayley = InverseAutomaton(
            len(elems), n_letters,
            [(i, a, self.mul_idx(i, img)) for i in range(len(elems)) for a, img in enumerate(images)],
            base=0)

    @property
    def order(self) -> int:
        return len(self.elems)

    def mul_idx(self, i: int, j: int) -> int:
        return self.index[self._mul(self.elems[i], self.elems[j])]

    def inv_idx(self, i: int) -> int:
        return self.index[self._inv(self.elems[i])]

    def evaluate(self, w: Word) -> int:
        v = self.cayley.trace(0, w)
        assert v is not None  # the Cayley graph is complete
        return v

    def is_identity(self, w: Word) -> bool:
        return self.evaluate(w) == 0

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != 0:
            x = self.mul_idx(x, i)
            k += 1
        return k

    def __repr__(self):
        return "MaterializedGroup(order=%d, letters=%d)" % (self.order, self.n_letters)


def _generate(n_letters, identity, images, mul, inv, bound) -> MaterializedGroup:
    index = {identity: 0}
    elems = [identity]
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for img in images:
            y = mul(x, img)
            if y not in index:
                if len(elems) >= bound:
                    raise OrderBoundError("materialization exceeds bound %d" % bound)
                index[y] = len(elems)
                elems.append(y)
                queue.append(y)
    return MaterializedGroup(n_letters, elems, index,
                             [index[img] for img in images], mul, inv)


def _warn_identity_letters(images, identity):
    for a, img in enumerate(images):
        if img == identity:
            warnings.warn("letter %d maps to the identity" % a, stacklevel=3)


def materialize(spec: GroupSpec, bound: int = DEFAULT_BOUND) -> MaterializedGroup:
    if isinstance(spec, CyclicSpec):
        if spec.n < 1:
            raise ValueError("cyclic group order must be positive")
        images = [r % spec.n for r in spec.images]
        if gcd(spec.n, *images) != 1 and spec.n > 1:
            raise ValueError("images do not generate the cyclic group of order %d" % spec.n)
        _warn_identity_letters(images, 0)
        return _generate(spec.n_letters, 0, images,
                         lambda x, y: (x + y) % spec.n, lambda x: (-x) % spec.n, bound)
    if isinstance(spec, KleinSpec):
        images = [tuple(b % 2 for b in img) for img in spec.images]
        _warn_identity_letters(images, (0, 0))
        g = _generate(spec.n_letters, (0, 0), images,
                      lambda x, y: (x[0] ^ y[0], x[1] ^ y[1]), lambda x: x, bound)
        if g.order != 4:
            raise ValueError("images do not generate the Klein four-group")
        return g
    if isinstance(spec, PermSpec):
        for img in spec.images:
            if img.degree != spec.degree:
                raise ValueError("permutation degree mismatch")
        from .perms import identity as perm_identity
        _warn_identity_letters(list(spec.images), perm_identity(spec.degree))
        return _generate(spec.n_letters, perm_identity(spec.degree), list(spec.images),
                         lambda x, y: x * y, lambda x: x.inverse(), bound)
    if isinstance(spec, ExtensionSpec):
        from .gaschuetz import GaschuetzLayer
        inner = materialize(spec.inner, bound)
        layer = GaschuetzLayer(inner, spec.p, spec.tilde)
        if layer.order() > bound:
            raise OrderBoundError("layer order %d exceeds bound %d" % (layer.order(), bound))
        return _generate(spec.n_letters, layer.identity, layer.images,
                         layer.mul, layer.inv, bound)
    if isinstance(spec, ProductSpec):
        if spec.left.n_letters != spec.right.n_letters:
            raise ValueError("product components must share the alphabet")
        left, right = materialize(spec.left, bound), materialize(spec.right, bound)
        return product_A(left, right, bound)
    raise TypeError("unknown group spec %r" % (spec,))


def product_A(g: MaterializedGroup, h: MaterializedGroup, bound: int = DEFAULT_BOUND) -> MaterializedGroup:
    """Subgroup of g x h generated by the paired letter images."""
    if g.n_letters != h.n_letters:
        raise ValueError("alphabet size mismatch")
    images = [(g.images[a], h.images[a]) for a in range(g.n_letters)]
    return _generate(g.n_letters, (0, 0), images,
                     lambda x, y: (g.mul_idx(x[0], y[0]), h.mul_idx(x[1], y[1])),
                     lambda x: (g.inv_idx(x[0]), h.inv_idx(x[1])), bound)


@dataclass(frozen=True, eq=False)
class Morphism:
    """Letter-respecting surjection between materialized groups."""

    src: MaterializedGroup
    dst: MaterializedGroup
    mapping: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def kernel(self) -> tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.mapping) if g == 0)

    def fibers(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i, g in enumerate(self.mapping):
            out.setdefault(g, []).append(i)
        return out

    def compose(self, other: "Morphism") -> "Morphism":
        """self: H->G composed with other: G->K, giving H->K."""
        if other.src is not self.dst:
            raise ValueError("morphisms do not compose")
        return Morphism(self.src, other.dst, tuple(other.mapping[g] for g in self.mapping))


def identity_morphism(g: MaterializedGroup) -> Morphism:
    return Morphism(g, g, tuple(range(g.order)))


def canonical_morphism(src: MaterializedGroup, dst: MaterializedGroup) -> Morphism | None:
    """The unique letter-respecting morphism src -> dst, if it exists.

    Exists iff the A-product of src and dst has exactly |src| elements.
    """
    if src.n_letters != dst.n_letters:
        raise ValueError("alphabet size mismatch")
    mapping = [-1] * src.order
    mapping[0] = 0
    queue = deque([0])
    while queue:
        h = queue.popleft()
        for a in range(src.n_letters):
            h2 = src.cayley.fwd[h][a]
            g2 = dst.cayley.fwd[mapping[h]][a]
            if mapping[h2] == -1:
                mapping[h2] = g2
                queue.append(h2)
            elif mapping[h2] != g2:
                return None
    return Morphism(src, dst, tuple(mapping))


def traversal_vector(g: MaterializedGroup, w: Word) -> dict[tuple[int, int], int]:
    """Signed traversal counts of w's path from the identity, per positive
    Cayley edge (element index, letter).  The word is read as given,
    without free reduction."""
    counts: dict[tuple[int, int], int] = {}
    v = 0
    for letter, sign in w:
        if sign > 0:
            e = (v, letter)
            v = g.cayley.fwd[v][letter]
            counts[e] = counts.get(e, 0) + 1
        else:
            v = g.cayley.bwd[v][letter]
            e = (v, letter)
            counts[e] = counts.get(e, 0) - 1
    return {e: c for e, c in counts.items() if c != 0}


def subgroup_closure(g: MaterializedGroup, gens) -> frozenset[int]:
    """Subgroup generated by the given element indices."""
    gens = [i for i in gens] + [g.inv_idx(i) for i in gens]
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = g.mul_idx(x, s)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def normal_closure(g: MaterializedGroup, gens) -> frozenset[int]:
    conjugates = {g.mul_idx(g.mul_idx(x, c), g.inv_idx(x))
                  for c in gens for x in range(g.order)}
    return subgroup_closure(g, conjugates)


def commutator_subgroup(g: MaterializedGroup) -> frozenset[int]:
    comms = []
    for a in range(g.n_letters):
        for b in range(g.n_letters):
            x, y = g.images[a], g.images[b]
            comms.append(g.mul_idx(g.mul_idx(g.mul_idx(x, y), g.inv_idx(x)), g.inv_idx(y)))
    return normal_closure(g, comms)


class AbelianQuotient:
    """The abelianization of a materialized group, with coset arithmetic."""

    def __init__(self, g: MaterializedGroup):
        self.group = g
        derived = sorted(commutator_subgroup(g))
        self.coset_of = [-1] * g.order
        self.reps: list[int] = []
        for x in range(g.order):
            if self.coset_of[x] != -1:
                continue
            cid = len(self.reps)
            self.reps.append(x)
            for k in derived:
                self.coset_of[g.mul_idx(k, x)] = cid
        self.letter_images = [self.coset_of[img] for img in g.images]

    @property
    def order(self) -> int:
        return len(self.reps)

    def mul(self, c1: int, c2: int) -> int:
        return self.coset_of[self.group.mul_idx(self.reps[c1], self.reps[c2])]

    def coset_order(self, c: int) -> int:
        k, x = 1, c
        while x != 0:
            x = self.mul(x, c)
            k += 1
        return k

    def eval_vector(self, v) -> int:
        """Coset of prod_a image_a^{v_a}."""
        out = 0
        for a, k in enumerate(v):
            img = self.letter_images[a]
            step = img if k >= 0 else self.coset_of[self.group.inv_idx(self.reps[img])]
            for _ in range(abs(k)):
                out = self.mul(out, step)
        return out

    def invariant_factors(self) -> list[int]:
        return _factors_from_order_counts(self.order, [self.coset_order(c) for c in range(self.order)])


def _factors_from_order_counts(order: int, elem_orders: list[int]) -> list[int]:
    """Invariant factors of a finite abelian group from its element orders.

    For each prime p the counts n_j = #{x : x^(p^j) = 1} = p^(f_j) recover
    the conjugate of the partition of p-exponents via f_j - f_(j-1);
    factors are assembled largest-with-largest across primes.
    """
    if order == 1:
        return []
    primes = []
    m, d = order, 2
    while d * d <= m:
        if m % d == 0:
            primes.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        primes.append(m)
    partitions: dict[int, list[int]] = {}
    for p in primes:
        conj: list[int] = []
        prev = 0
        j = 1
        while True:
            pj = p ** j
            n_j = sum(1 for o in elem_orders if pj % o == 0)
            f_j = _ilog(n_j, p)
            if f_j == prev:
                break
            conj.append(f_j - prev)
            prev = f_j
            j += 1
        nparts = conj[0] if conj else 0
        partitions[p] = [sum(1 for c in conj if c >= i) for i in range(1, nparts + 1)]
    width = max(len(parts) for parts in partitions.values())
    factors = []
    for rank in range(width):
        d = 1
        for p, parts in partitions.items():
            if rank < len(parts):
                d *= p ** parts[rank]
        factors.append(d)
    return sorted(factors)


def _ilog(n: int, p: int) -> int:
    k = 0
    while n > 1:
        n //= p
        k += 1
    return k


def abelianization(g: MaterializedGroup) -> list[int]:
    """Invariant factors (ascending, each dividing the next) of g/[g,g]."""
    return AbelianQuotient(g).invariant_factors()


def kernel_elements(phi: Morphism) -> tuple[int, ...]:
    return phi.kernel()
