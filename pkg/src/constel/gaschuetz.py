"""Mod-p extension layers over a finite A-generated group.

For a materialized group G with letter images phi(a), the plain layer is
the subgroup of F_p[G x A] |x G generated by the pairs (e_a, phi(a)),
where e_a is the indicator vector of the Cayley edge (1, a) and G shifts
edge indices by left multiplication.  The tilde layer is the quotient of
the plain layer by its center, which consists of the pairs (alpha, 1)
with alpha constant on each letter class.

Elements are kept lazy: a word evaluates to (traversal vector mod p,
base image) without enumerating the layer.  Materialization goes through
the generic BFS in `groups` when the order fits the bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd

from .automata import path_word
from .groups import (
    DEFAULT_BOUND,
    AbelianQuotient,
    GroupSpec,
    MaterializedGroup,
    Morphism,
    OrderBoundError,
    _generate,
    canonical_morphism,
    materialize,
    traversal_vector,
)
from .perms import is_prime
from .words import Word, concat, invert, power


class EdgeVector:
    """Sparse F_p vector indexed by positive Cayley edges (element, letter)."""

    __slots__ = ("p", "_items", "_key")

    def __init__(self, p: int, entries=()):
        self.p = p
        items: dict[tuple[int, int], int] = {}
        pairs = entries.items() if isinstance(entries, dict) else entries
        for e, c in pairs:
            c %= p
            if c:
                items[e] = c
            elif e in items:
                del items[e]
        self._items = items
        self._key = tuple(sorted(items.items()))

    def __getitem__(self, edge: tuple[int, int]) -> int:
        return self._items.get(edge, 0)

    def items(self):
        return iter(self._key)

    @property
    def is_zero(self) -> bool:
        return not self._items

    def __eq__(self, other) -> bool:
        return isinstance(other, EdgeVector) and self.p == other.p and self._key == other._key

    def __hash__(self) -> int:
        return hash((self.p, self._key))

    def __repr__(self):
        return "EdgeVector(%d, %r)" % (self.p, dict(self._key))

    def add(self, other: "EdgeVector") -> "EdgeVector":
        if other.p != self.p:
            raise ValueError("modulus mismatch")
        out = dict(self._items)
        for e, c in other._items.items():
            out[e] = out.get(e, 0) + c
        return EdgeVector(self.p, out)

    def neg(self) -> "EdgeVector":
        return EdgeVector(self.p, {e: -c for e, c in self._items.items()})

    def shifted(self, g: int, group: MaterializedGroup) -> "EdgeVector":
        """Image under the left shift (h, a) -> (g h, a)."""
        return EdgeVector(self.p, {(group.mul_idx(g, h), a): c
                                   for (h, a), c in self._items.items()})

    def label_normalized(self, n_elements: int) -> "EdgeVector":
        """Canonical coset form modulo constant-per-label vectors: the
        entry at (element 0, a) is forced to zero for every letter."""
        consts = {a: c for (h, a), c in self._items.items() if h == 0}
        if not consts:
            return self
        out = dict(self._items)
        for a, c in consts.items():
            for h in range(n_elements):
                out[(h, a)] = out.get((h, a), 0) - c
        return EdgeVector(self.p, out)

    def is_label_constant(self, n_elements: int) -> bool:
        return self.label_normalized(n_elements).is_zero


@dataclass(frozen=True)
class GaschuetzElement:
    alpha: EdgeVector
    g: int
    tilde: bool = False


def order_formula(base_order: int, n_letters: int, p: int, tilde: bool) -> int:
    """Layer order: |G| * p^(|G|(|A|-1)+1) plain, |G| * p^((|G|-1)(|A|-1)) tilde."""
    if tilde:
        return base_order * p ** ((base_order - 1) * (n_letters - 1))
    return base_order * p ** (base_order * (n_letters - 1) + 1)


class GaschuetzLayer:
    """Lazy arithmetic for the mod-p layer over a materialized base group."""

    def __init__(self, base: MaterializedGroup, p: int, tilde: bool = False):
        if not is_prime(p):
            raise ValueError("modulus %d is not prime" % p)
        self.base = base
        self.p = p
        self.tilde = tilde
        self.n_letters = base.n_letters
        self.identity = GaschuetzElement(EdgeVector(p), 0, tilde)
        self.images = [self._make(EdgeVector(p, {(0, a): 1}), base.images[a])
                       for a in range(base.n_letters)]

    def _make(self, alpha: EdgeVector, g: int) -> GaschuetzElement:
        if self.tilde:
            alpha = alpha.label_normalized(self.base.order)
        return GaschuetzElement(alpha, g, self.tilde)

    def mul(self, x: GaschuetzElement, y: GaschuetzElement) -> GaschuetzElement:
        return self._make(x.alpha.add(y.alpha.shifted(x.g, self.base)),
                          self.base.mul_idx(x.g, y.g))

    def inv(self, x: GaschuetzElement) -> GaschuetzElement:
        gi = self.base.inv_idx(x.g)
        return self._make(x.alpha.neg().shifted(gi, self.base), gi)

    def evaluate(self, w: Word) -> GaschuetzElement:
        counts = traversal_vector(self.base, w)
        return self._make(EdgeVector(self.p, counts), self.base.evaluate(w))

    def is_identity(self, w: Word) -> bool:
        x = self.evaluate(w)
        return x.g == 0 and x.alpha.is_zero

    def order(self) -> int:
        return order_formula(self.base.order, self.n_letters, self.p, self.tilde)

    def kernel_rank(self) -> int:
        """p-rank of the kernel of the projection onto the base."""
        if self.tilde:
            return (self.base.order - 1) * (self.n_letters - 1)
        return self.base.order * (self.n_letters - 1) + 1

    def materialize(self, bound: int = DEFAULT_BOUND) -> MaterializedGroup:
        if self.order() > bound:
            raise OrderBoundError("layer order %d exceeds bound %d" % (self.order(), bound))
        return _generate(self.n_letters, self.identity, self.images,
                         self.mul, self.inv, bound)

    def __repr__(self):
        return "GaschuetzLayer(base_order=%d, p=%d, tilde=%r)" % (
            self.base.order, self.p, self.tilde)


def gaschutz_group(base: MaterializedGroup, p: int, tilde: bool = False) -> GaschuetzLayer:
    return GaschuetzLayer(base, p, tilde)


@dataclass(frozen=True)
class CenterInfo:
    p: int
    n_letters: int
    base_order: int
    order: int
    generators: tuple[GaschuetzElement, ...]
    witness_words: tuple[Word, ...]

    def elements(self):
        """All center elements: label-constant vectors paired with 1."""
        letters = range(self.n_letters)
        for coeffs in itertools.product(range(self.p), repeat=self.n_letters):
            vec = EdgeVector(self.p, {(h, a): coeffs[a]
                                      for a in letters
                                      for h in range(self.base_order)})
            yield GaschuetzElement(vec, 0, False)


def center(layer: GaschuetzLayer) -> CenterInfo:
    """Center of a plain layer: label-constant vectors over the identity.

    For each letter a the witness word is a product, over the cycles of
    right multiplication by phi(a), of w_i a^ord(phi(a)) w_i^-1 where w_i
    labels a path from the identity to the smallest cycle element; it
    traverses every a-edge exactly once and evaluates to the generator
    that is constant 1 on letter a.
    """
    if layer.tilde:
        raise ValueError("the center description applies to the plain layer")
    base, p = layer.base, layer.p
    generators = []
    witnesses = []
    for a in range(base.n_letters):
        vec = EdgeVector(p, {(h, a): 1 for h in range(base.order)})
        gen = GaschuetzElement(vec, 0, False)
        ord_a = base.element_order(base.images[a])
        seen = set()
        pieces = []
        for start in range(base.order):
            if start in seen:
                continue
            h = start
            while h not in seen:
                seen.add(h)
                h = base.mul_idx(h, base.images[a])
            w_i = path_word(base.cayley, 0, start)
            assert w_i is not None  # the Cayley graph is connected
            pieces.append(concat(w_i, power(Word(((a, 1),)), ord_a), invert(w_i)))
        w_a = concat(*pieces)
        assert layer.evaluate(w_a) == gen
        generators.append(gen)
        witnesses.append(w_a)
    return CenterInfo(p, base.n_letters, base.order, p ** base.n_letters,
                      tuple(generators), tuple(witnesses))


@dataclass(frozen=True)
class StructureReport:
    order: int
    order_ok: bool
    kernel_size: int
    kernel_exponent_ok: bool
    kernel_abelian_ok: bool
    center_size: int
    center_order_ok: bool

    @property
    def all_ok(self) -> bool:
        return (self.order_ok and self.kernel_exponent_ok
                and self.kernel_abelian_ok and self.center_order_ok)


def coprime_structure_checks(base: MaterializedGroup, p: int,
                             bound: int = DEFAULT_BOUND) -> StructureReport:
    """Verify the split structure of the plain layer when p does not
    divide |G|: order |G|*p^(1+(|A|-1)|G|), kernel elementary abelian of
    exponent p, center of order p^|A|."""
    if not is_prime(p):
        raise ValueError("modulus %d is not prime" % p)
    if base.order % p == 0:
        raise ValueError("hypothesis violated: %d divides the base order %d" % (p, base.order))
    layer = GaschuetzLayer(base, p, tilde=False)
    mat = layer.materialize(bound)
    expected = base.order * p ** (1 + (base.n_letters - 1) * base.order)
    phi = canonical_morphism(mat, base)
    assert phi is not None
    kernel = phi.kernel()
    exponent_ok = all(k == 0 or mat.element_order(k) == p for k in kernel)
    abelian_ok = all(mat.mul_idx(x, y) == mat.mul_idx(y, x)
                     for x in kernel for y in kernel)
    center_size = sum(1 for x in range(mat.order)
                      if all(mat.mul_idx(x, img) == mat.mul_idx(img, x)
                             for img in mat.images))
    return StructureReport(
        order=mat.order,
        order_ok=mat.order == expected,
        kernel_size=len(kernel),
        kernel_exponent_ok=exponent_ok,
        kernel_abelian_ok=abelian_ok,
        center_size=center_size,
        center_order_ok=center_size == p ** base.n_letters,
    )


@dataclass(frozen=True)
class TowerSpec:
    base: GroupSpec
    layers: tuple[tuple[int, bool], ...]


@dataclass(frozen=True, eq=False)
class Tower:
    """Iterated layers G_0, G_1, ..., materialized except possibly the top."""

    spec: TowerSpec
    levels: tuple[MaterializedGroup, ...]
    top: GaschuetzLayer | None
    projections: tuple[Morphism, ...]  # projections[i]: levels[i+1] -> levels[i]

    @property
    def n_levels(self) -> int:
        return len(self.levels) + (1 if self.top is not None else 0)

    def orders(self) -> list[int]:
        out = [g.order for g in self.levels]
        if self.top is not None:
            out.append(self.top.order())
        return out

    def morphism(self, i: int, j: int) -> Morphism:
        """Composite projection levels[i] -> levels[j], i >= j."""
        if not 0 <= j <= i < len(self.levels):
            raise ValueError("level indices out of range")
        phi = Morphism(self.levels[i], self.levels[i],
                       tuple(range(self.levels[i].order)))
        for k in range(i, j, -1):
            phi = phi.compose(self.projections[k - 1])
        return phi

    def morphism_to_base(self, i: int) -> Morphism:
        return self.morphism(i, 0)

    def is_identity(self, w: Word) -> bool:
        """Word problem at the top level."""
        if self.top is not None:
            return self.top.is_identity(w)
        return self.levels[-1].is_identity(w)

    def evaluate(self, w: Word):
        if self.top is not None:
            return self.top.evaluate(w)
        return self.levels[-1].evaluate(w)


def build_tower(spec: TowerSpec, bound: int = DEFAULT_BOUND) -> Tower:
    for p, _ in spec.layers:
        if not is_prime(p):
            raise ValueError("modulus %d is not prime" % p)
    levels = [materialize(spec.base, bound)]
    for p, tilde in spec.layers[:-1]:
        levels.append(GaschuetzLayer(levels[-1], p, tilde).materialize(bound))
    top = None
    if spec.layers:
        p, tilde = spec.layers[-1]
        top = GaschuetzLayer(levels[-1], p, tilde)
    projections = []
    for i in range(len(levels) - 1):
        phi = canonical_morphism(levels[i + 1], levels[i])
        assert phi is not None  # successive layers project onto their base
        projections.append(phi)
    return Tower(spec, tuple(levels), top, tuple(projections))


def layer_abelianization(base: MaterializedGroup, p: int, tilde: bool) -> list[int]:
    """Invariant factors of the layer's abelianization, without
    materializing the layer.

    Words trivial in the plain layer are the w with trivial base image
    and traversal vector zero mod p; their letter-count vectors form
    p * Lambda, Lambda = ker(Z^A -> ab(G)).  The tilde quotient further
    kills the center witnesses, whose count vectors are |G| * e_a.  So
    the abelianization is Z^A / (p*Lambda) resp. Z^A / (p*Lambda + |G|Z^A).
    """
    if not is_prime(p):
        raise ValueError("modulus %d is not prime" % p)
    ab = AbelianQuotient(base)
    n = base.n_letters
    orders = [ab.coset_order(ab.letter_images[a]) for a in range(n)]
    lam = [[orders[a] if i == a else 0 for i in range(n)] for a in range(n)]
    for v in itertools.product(*[range(o) for o in orders]):
        if any(v) and ab.eval_vector(v) == 0:
            lam.append(list(v))
    rows = [[p * x for x in row] for row in lam]
    if tilde:
        for a in range(n):
            rows.append([base.order if i == a else 0 for i in range(n)])
    diag = _smith_diagonal(rows, n)
    assert len(diag) == n  # the relation lattice has finite index
    return [d for d in diag if d > 1]


def _smith_diagonal(rows: list[list[int]], ncols: int) -> list[int]:
    """Diagonal of the Smith normal form of an integer matrix, as a
    nonincreasingly divisible list d_1 | d_2 | ... (zeros dropped)."""
    mat = [list(r) for r in rows if any(r)]
    k = 0
    diag = []
    while k < len(mat) and k < ncols:
        piv = next(((i, j) for i in range(k, len(mat))
                    for j in range(k, ncols) if mat[i][j]), None)
        if piv is None:
            break
        i, j = piv
        mat[k], mat[i] = mat[i], mat[k]
        if j != k:
            for row in mat:
                row[k], row[j] = row[j], row[k]
        while True:
            dirty = False
            for i in range(k + 1, len(mat)):
                while mat[i][k]:
                    q = mat[i][k] // mat[k][k]
                    mat[i] = [a - q * b for a, b in zip(mat[i], mat[k])]
                    if mat[i][k]:
                        mat[i], mat[k] = mat[k], mat[i]
                        dirty = True
            for j in range(k + 1, ncols):
                while mat[k][j]:
                    q = mat[k][j] // mat[k][k]
                    for row in mat:
                        row[j] -= q * row[k]
                    if mat[k][j]:
                        for row in mat:
                            row[j], row[k] = row[k], row[j]
                        dirty = True
            if not dirty:
                break
        diag.append(abs(mat[k][k]))
        k += 1
    # enforce the divisibility chain; per prime this sorts exponents
    changed = True
    while changed:
        changed = False
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                if diag[j] % diag[i]:
                    g = gcd(diag[i], diag[j])
                    diag[i], diag[j] = g, diag[i] * diag[j] // g
                    changed = True
    return [d for d in diag if d]
