"""Finite groups as tables, finitely presented groups as relators.

Words over a presentation are tuples of nonzero integers: letter k > 0 is
generator k, letter -k the inverse of generator k (1-based).  Finite
groups carry dense multiplication and inverse tables validated at
construction, an optional shipped presentation with a generator-to-element
map, and, for groups built by closure, the breadth-first word of every
element in those generators.  On top of that live subgroup data with
canonical transversals, abelianization through Smith normal form,
Reidemeister-Schreier rewriting for kernels of maps onto finite quotients,
and lifting of characters through prime-power moduli.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    NotHomomorphism,
    NotSurjective,
    UnknownName,
)
from .gf_core import is_prime, smith_normal_form, solve_congruence

__all__ = [
    "Word",
    "inverse_word",
    "commutator_word",
    "Presentation",
    "FiniteGroup",
    "GroupHom",
    "SubgroupData",
    "AbelianStructure",
    "closure_group",
    "catalog",
    "evaluate_word",
    "kernel_of_character",
    "subgroup_from_members",
    "enumerate_subgroups",
    "abelianization",
    "reidemeister_schreier",
    "RSResult",
    "hom_lift_to_Zmod",
    "are_isomorphic",
]

Word = tuple[int, ...]

DEFAULT_CLOSURE_BUDGET = 4096
SUBGROUP_ORDER_LIMIT = 64


def _check_word(w: Sequence[int]) -> Word:
    w = tuple(int(x) for x in w)
    if any(x == 0 for x in w):
        raise ValueError("words cannot contain zero letters")
    return w


def inverse_word(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(tuple(w)))


def free_reduce(w: Sequence[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def commutator_word(a: Sequence[int], b: Sequence[int]) -> Word:
    a, b = tuple(a), tuple(b)
    return free_reduce(a + b + inverse_word(a) + inverse_word(b))


@dataclass(frozen=True)
class Presentation:
    """Finitely presented group: generator count plus relator words."""

    generator_count: int
    relators: tuple[Word, ...]
    label: str = ""

    def __post_init__(self):
        rel = tuple(_check_word(r) for r in self.relators)
        object.__setattr__(self, "relators", rel)
        for r in rel:
            if any(abs(x) > self.generator_count for x in r):
                raise ValueError("relator letter exceeds generator count")


class FiniteGroup:
    """Finite group as a validated multiplication table.

    Elements are indices 0..order-1.  ``elements`` optionally keeps the
    raw objects (matrices, permutations, tuples) behind the indices, and
    ``element_words`` a word in the shipped generators for each element.
    """

    def __init__(self, mul_table, names=None, label="",
                 known_presentation: Optional[Presentation] = None,
                 generator_map: Optional[Sequence[int]] = None,
                 elements=None, element_words=None):
        mul = np.array(mul_table, dtype=np.int64)
        n = mul.shape[0]
        if mul.shape != (n, n):
            raise ValueError("multiplication table must be square")
        if mul.min() < 0 or mul.max() >= n:
            raise ValueError("table entries out of range")
        idx = np.arange(n)
        identity = None
        for e in range(n):
            if np.array_equal(mul[e], idx) and np.array_equal(mul[:, e], idx):
                identity = e
                break
        if identity is None:
            raise ValueError("table has no two-sided identity")
        left = mul[mul]              # left[a, b, c] = (a*b)*c
        right = mul[:, mul]          # right[a, b, c] = a*(b*c)
        if not np.array_equal(left, right):
            raise ValueError("table is not associative")
        inv = np.full(n, -1, dtype=np.int64)
        for a in range(n):
            hits = np.nonzero(mul[a] == identity)[0]
            if hits.size != 1 or mul[hits[0], a] != identity:
                raise ValueError("table has no unique two-sided inverse")
            inv[a] = hits[0]
        mul.setflags(write=False)
        inv.setflags(write=False)
        self.order = n
        self.mul = mul
        self.inv = inv
        self.identity = identity
        self.element_names = tuple(names) if names else tuple(
            f"g{i}" for i in range(n))
        self.label = label or "group"
        self.known_presentation = known_presentation
        self.generator_map = tuple(generator_map) if generator_map else None
        self.elements = tuple(elements) if elements is not None else None
        self.element_words = (tuple(tuple(w) for w in element_words)
                              if element_words is not None else None)

    def __repr__(self):
        return f"FiniteGroup({self.label!r}, order={self.order})"

    def mul_idx(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def inv_idx(self, a: int) -> int:
        return int(self.inv[a])

    def conj(self, g: int, x: int) -> int:
        """g * x * g^-1."""
        return int(self.mul[self.mul[g, x], self.inv[g]])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv_idx(a), -k)
        acc = self.identity
        for _ in range(k):
            acc = int(self.mul[acc, a])
        return acc

    def order_of(self, a: int) -> int:
        k, acc = 1, a
        while acc != self.identity:
            acc = int(self.mul[acc, a])
            k += 1
        return k

    def element_orders(self) -> list[int]:
        return [self.order_of(a) for a in range(self.order)]


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by generator images (presentation source) or
    element images (finite source); validated at construction."""

    source: object
    target: FiniteGroup
    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(i) for i in self.images))
        if isinstance(self.source, Presentation):
            if len(self.images) != self.source.generator_count:
                raise NotHomomorphism("one image per generator required")
            for r in self.source.relators:
                if evaluate_word(r, self.images, self.target) \
                        != self.target.identity:
                    raise NotHomomorphism(f"relator {r} not satisfied")
        elif isinstance(self.source, FiniteGroup):
            src = self.source
            if len(self.images) != src.order:
                raise NotHomomorphism("one image per element required")
            im = np.array(self.images)
            if not np.array_equal(im[src.mul],
                                  self.target.mul[im[:, None], im[None, :]]):
                raise NotHomomorphism("images are not multiplicative")
        else:
            raise TypeError("source must be a Presentation or FiniteGroup")


# ---------------------------------------------------------------------------
# building groups
# ---------------------------------------------------------------------------

_GEN_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def _element_ops(gen):
    """(identity, mul, inv) for raw closure elements."""
    if isinstance(gen, tuple):  # permutation: i -> gen[i]
        n = len(gen)
        ident = tuple(range(n))

        def mul(a, b):
            return tuple(a[b[i]] for i in range(n))

        def inv(a):
            out = [0] * n
            for i, v in enumerate(a):
                out[v] = i
            return tuple(out)

        return ident, mul, inv
    # anything with * and .inverse(), e.g. UniMatrix
    if hasattr(gen, "identity_like"):
        ident = gen.identity_like()
    else:
        ident = gen * gen.inverse()
    return ident, (lambda a, b: a * b), (lambda a: a.inverse())


def closure_group(generators, budget: int = DEFAULT_CLOSURE_BUDGET,
                  label: str = "", names=None) -> FiniteGroup:
    """Smallest group containing the generators, as a table group.

    Elements are discovered breadth-first from the identity with the
    generators applied on the right in the given order, which fixes the
    indexing; each element keeps its discovery word.
    """
    generators = list(generators)
    if not generators:
        triv = FiniteGroup([[0]], names=["e"], label=label or "trivial",
                           elements=None, element_words=[()])
        return triv
    ident, mul, inv = _element_ops(generators[0])
    elems = [ident]
    index = {ident: 0}
    words: list[Word] = [()]
    parent: list[Optional[tuple[int, int]]] = [None]
    head = 0
    while head < len(elems):
        x = elems[head]
        for k, g in enumerate(generators):
            y = mul(x, g)
            if y not in index:
                if len(elems) >= budget:
                    raise BudgetExceeded(
                        f"closure exceeds budget {budget}",
                        {"discovered": len(elems)})
                index[y] = len(elems)
                elems.append(y)
                words.append(words[head] + (k + 1,))
                parent.append((head, k))
        head += 1
    n = len(elems)
    gen_idx = [index[g] for g in generators]
    table = np.zeros((n, n), dtype=np.int64)
    table[:, 0] = np.arange(n)
    # fill columns in discovery order: col(x*g) follows from col(x)
    for a in range(n):
        for k, gi in enumerate(gen_idx):
            table[a, gi] = index[mul(elems[a], generators[k])]
    for j in range(1, n):
        pj = parent[j]
        if pj is None:
            continue
        x, k = pj
        if j in gen_idx and x == 0:
            continue  # generator column already filled directly
        table[:, j] = table[table[:, x], gen_idx[k]]
    if names is None:
        names = ["e"] + ["".join(_GEN_LETTERS[l - 1] for l in w)
                         for w in words[1:]]
    return FiniteGroup(table, names=names, label=label or "closure",
                       generator_map=gen_idx, elements=elems,
                       element_words=words)


def evaluate_word(w: Sequence[int], images, group: FiniteGroup | None = None):
    """Product of images along a word; inverses for negative letters.

    With ``group`` given, images are element indices in it; without, the
    images must support ``*`` and ``.inverse()`` (or be permutation
    tuples) and at least one image is required.
    """
    w = _check_word(w)
    if group is not None:
        acc = group.identity
        for x in w:
            g = images[abs(x) - 1]
            acc = group.mul_idx(acc, g if x > 0 else group.inv_idx(g))
        return acc
    if not images:
        raise ValueError("need at least one image to infer the identity")
    ident, mul, inv = _element_ops(images[0])
    acc = ident
    for x in w:
        g = images[abs(x) - 1]
        acc = mul(acc, g if x > 0 else inv(g))
    return acc


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def _cyclic(m: int) -> FiniteGroup:
    table = [[(i + j) % m for j in range(m)] for i in range(m)]
    pres = Presentation(1, ((1,) * m,), label=f"cyclic({m})")
    return FiniteGroup(
        table, names=[f"x{i}" if i else "e" for i in range(m)],
        label=f"cyclic({m})", known_presentation=pres,
        generator_map=[1 % m], element_words=[(1,) * i for i in range(m)])


def _product(a: int, b: int) -> FiniteGroup:
    pairs = [(i, j) for i in range(a) for j in range(b)]
    idx = {p: k for k, p in enumerate(pairs)}
    table = [[idx[((i1 + i2) % a, (j1 + j2) % b)] for (i2, j2) in pairs]
             for (i1, j1) in pairs]
    rel = [(1,) * a, (2,) * b, commutator_word((1,), (2,))]
    pres = Presentation(2, tuple(rel), label=f"product({a},{b})")
    words = [(1,) * i + (2,) * j for (i, j) in pairs]
    return FiniteGroup(
        table, names=[f"({i},{j})" for (i, j) in pairs],
        label=f"product({a},{b})", known_presentation=pres,
        generator_map=[idx[(1 % a, 0)], idx[(0, 1 % b)]],
        elements=pairs, element_words=words)


def _elementary(p: int, k: int) -> FiniteGroup:
    if not is_prime(p):
        raise UnknownName(f"elementary({p},{k}): {p} is not prime")
    import itertools
    tuples = list(itertools.product(range(p), repeat=k))
    idx = {t: i for i, t in enumerate(tuples)}
    table = [[idx[tuple((x + y) % p for x, y in zip(t1, t2))]
              for t2 in tuples] for t1 in tuples]
    rel = [(i + 1,) * p for i in range(k)]
    rel += [commutator_word((i + 1,), (j + 1,))
            for i in range(k) for j in range(i + 1, k)]
    pres = Presentation(k, tuple(rel), label=f"elementary({p},{k})")
    gen_map = [idx[tuple(int(j == i) for j in range(k))] for i in range(k)]
    words = [sum(((i + 1,) * t[i] for i in range(k)), ())
             for t in tuples]
    return FiniteGroup(
        table, names=[str(t) for t in tuples],
        label=f"elementary({p},{k})", known_presentation=pres,
        generator_map=gen_map, elements=tuples, element_words=words)


def _dihedral(order: int) -> FiniteGroup:
    if order % 2 or order < 2:
        raise UnknownName(f"dihedral({order}): order must be even")
    m = order // 2
    # indices: r^i at i, s*r^i at m+i

    def mul(x, y):
        i, si = x % m, x // m
        j, sj = y % m, y // m
        if si == 0 and sj == 0:
            return (i + j) % m
        if si == 0 and sj == 1:
            return m + (j - i) % m
        if si == 1 and sj == 0:
            return m + (i + j) % m
        return (j - i) % m

    table = [[mul(x, y) for y in range(order)] for x in range(order)]
    rel = ((1,) * m, (2, 2), (2, 1, -2, 1))
    pres = Presentation(2, rel, label=f"dihedral({order})")
    names = [f"r{i}" if i else "e" for i in range(m)]
    names += [f"sr{i}" if i else "s" for i in range(m)]
    words = [(1,) * i for i in range(m)] + [(2,) + (1,) * i for i in range(m)]
    return FiniteGroup(
        table, names=names, label=f"dihedral({order})",
        known_presentation=pres, generator_map=[1 % m, m],
        element_words=words)


_Q8_AXES = "1ijk"


def _quaternion8() -> FiniteGroup:
    # elements: (sign, axis) with axis in {1, i, j, k}
    elems = [(1, 0), (-1, 0), (1, 1), (-1, 1), (1, 2), (-1, 2), (1, 3), (-1, 3)]
    idx = {e: k for k, e in enumerate(elems)}
    mul_axis = {}
    for a in range(1, 4):
        mul_axis[(0, a)] = (1, a)
        mul_axis[(a, 0)] = (1, a)
        mul_axis[(a, a)] = (-1, 0)
    mul_axis[(0, 0)] = (1, 0)
    for (a, b, c) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)]:
        mul_axis[(a, b)] = (1, c)
        mul_axis[(b, a)] = (-1, c)

    def mul(x, y):
        s1, a1 = elems[x]
        s2, a2 = elems[y]
        s3, a3 = mul_axis[(a1, a2)]
        return idx[(s1 * s2 * s3, a3)]

    table = [[mul(x, y) for y in range(8)] for x in range(8)]
    rel = ((1, 1, 1, 1), (1, 1, -2, -2), (2, 1, -2, 1))
    pres = Presentation(2, rel, label="quaternion8")
    names = [("" if s > 0 else "-") + _Q8_AXES[a] for (s, a) in elems]
    words = [(), (1, 1), (1,), (1, 1, 1), (2,), (1, 1, 2), (1, 2), (2, 1)]
    return FiniteGroup(table, names=names, label="quaternion8",
                       known_presentation=pres,
                       generator_map=[idx[(1, 1)], idx[(1, 2)]],
                       element_words=words)


def _unitriangular_catalog(size: int, p: int) -> FiniteGroup:
    from . import unitriangular as ut
    shape = ut.UniShape(size, p)
    if shape.group_order() > DEFAULT_CLOSURE_BUDGET:
        raise BudgetExceeded(
            f"u{size}({p}) has order {shape.group_order()}, not enumerable "
            f"within {DEFAULT_CLOSURE_BUDGET}")
    gens = [ut.sigma(shape, i) for i in range(1, size)]
    g = closure_group(gens, label=f"u{size}({p})")
    k = size - 1
    rel: list[Word] = [(i + 1,) * p for i in range(k)]
    rel += [commutator_word((i + 1,), (j + 1,))
            for i in range(k) for j in range(i + 1, k) if j - i >= 2]
    for i in range(k - 1):
        y = commutator_word((i + 1,), (i + 2,))
        rel.append(commutator_word(y, (i + 1,)))
        rel.append(commutator_word(y, (i + 2,)))
    if size == 4:
        y12 = commutator_word((1,), (2,))
        y23 = commutator_word((2,), (3,))
        rel.append(commutator_word(y12, y23))
        w = commutator_word(y12, (3,))
        rel.append(free_reduce(w + inverse_word(commutator_word((1,), y23))))
        for i in range(k):
            rel.append(commutator_word(w, (i + 1,)))
    pres = Presentation(k, tuple(rel), label=f"u{size}({p})")
    return FiniteGroup(np.asarray(g.mul), names=g.element_names,
                       label=g.label, known_presentation=pres,
                       generator_map=g.generator_map, elements=g.elements,
                       element_words=g.element_words)


_CATALOG_RE = re.compile(r"^([a-z]+[0-9]*)(?:\((\d+(?:,\d+)*)\))?$")


def catalog(name: str) -> FiniteGroup:
    """Named groups: cyclic(m), product(a,b), dihedral(2m), quaternion8,
    u3(p), u4(p), elementary(p,k).  Each ships a presentation."""
    m = _CATALOG_RE.match(name.strip())
    if not m:
        raise UnknownName(f"cannot parse group name {name!r}")
    base, args = m.group(1), m.group(2)
    args = [int(x) for x in args.split(",")] if args else []
    try:
        if base == "cyclic" and len(args) == 1 and args[0] >= 1:
            return _cyclic(args[0])
        if base == "product" and len(args) == 2 and min(args) >= 1:
            return _product(*args)
        if base == "elementary" and len(args) == 2 and args[1] >= 1:
            return _elementary(*args)
        if base == "dihedral" and len(args) == 1:
            return _dihedral(args[0])
        if base == "quaternion8" and not args:
            return _quaternion8()
        if base == "u3" and len(args) == 1 and is_prime(args[0]):
            return _unitriangular_catalog(3, args[0])
        if base == "u4" and len(args) == 1 and is_prime(args[0]):
            return _unitriangular_catalog(4, args[0])
    except BudgetExceeded:
        raise
    raise UnknownName(f"unknown catalog group {name!r}")


# ---------------------------------------------------------------------------
# subgroups
# ---------------------------------------------------------------------------

@dataclass
class SubgroupData:
    """A subgroup with a canonical left-coset transversal (identity first)."""

    parent: FiniteGroup
    member_indices: tuple[int, ...]
    transversal: tuple[int, ...]
    as_group: FiniteGroup
    parent_to_sub: dict = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.member_indices)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    def is_normal(self) -> bool:
        g = self.parent
        members = set(self.member_indices)
        return all(g.conj(x, h) in members
                   for x in range(g.order) for h in self.member_indices)

    def coset_lookup(self) -> np.ndarray:
        """coset_of[x] = position in the transversal with x in r*H."""
        g = self.parent
        out = np.full(g.order, -1, dtype=np.int64)
        for pos, r in enumerate(self.transversal):
            for h in self.member_indices:
                out[g.mul_idx(r, h)] = pos
        return out


def subgroup_from_members(parent: FiniteGroup,
                          members: Sequence[int]) -> SubgroupData:
    members = tuple(sorted(set(int(x) for x in members)))
    mem_set = set(members)
    if parent.identity not in mem_set:
        raise ValueError("subgroup must contain the identity")
    for a in members:
        if parent.inv_idx(a) not in mem_set:
            raise ValueError("member set not closed under inverse")
        for b in members:
            if parent.mul_idx(a, b) not in mem_set:
                raise ValueError("member set not closed under product")
    pos = {m: i for i, m in enumerate(members)}
    table = [[pos[parent.mul_idx(a, b)] for b in members] for a in members]
    sub = FiniteGroup(table, names=[parent.element_names[m] for m in members],
                      label=f"{parent.label}-sub{len(members)}")
    covered = set()
    transversal = []
    for x in [parent.identity] + [i for i in range(parent.order)
                                  if i != parent.identity]:
        if x in covered:
            continue
        transversal.append(x)
        covered.update(parent.mul_idx(x, h) for h in members)
    return SubgroupData(parent, members, tuple(transversal), sub, pos)


def _closure_members(g: FiniteGroup, seed) -> frozenset:
    members = {g.identity}
    frontier = [s for s in seed]
    members.update(frontier)
    while frontier:
        new = set()
        for a in list(members):
            for b in frontier:
                for c in (g.mul_idx(a, b), g.mul_idx(b, a)):
                    if c not in members:
                        new.add(c)
        members.update(new)
        frontier = list(new)
    return frozenset(members)


def kernel_of_character(g: FiniteGroup, chi, modulus: int | None = None
                        ) -> SubgroupData:
    """Kernel of a surjective character to Z/p with its cyclic transversal.

    The transversal is e, t, t^2, ..., t^(p-1) for the smallest-index t
    with chi(t) = 1.
    """
    values = list(chi.values) if hasattr(chi, "values") else list(chi)
    p = modulus or getattr(chi, "modulus", None)
    if p is None:
        raise ValueError("modulus required when chi is a bare value list")
    if not is_prime(p):
        raise NotSurjective(f"target modulus {p} must be prime")
    if len(values) != g.order:
        raise NotHomomorphism("need one value per element")
    v = np.array(values, dtype=np.int64) % p
    if not np.array_equal(v[g.mul], (v[:, None] + v[None, :]) % p):
        raise NotHomomorphism("values are not additive on the table")
    if not v.any():
        raise NotSurjective("character is zero")
    ones = np.nonzero(v == 1)[0]
    t = int(ones[0])
    sub = subgroup_from_members(g, [i for i in range(g.order) if v[i] == 0])
    transversal = tuple(g.power(t, k) for k in range(p))
    return SubgroupData(sub.parent, sub.member_indices, transversal,
                        sub.as_group, sub.parent_to_sub)


def enumerate_subgroups(g: FiniteGroup) -> list[SubgroupData]:
    """All subgroups, found by closing small seeds and then joins."""
    if g.order > SUBGROUP_ORDER_LIMIT:
        raise BudgetExceeded(
            f"subgroup enumeration capped at order {SUBGROUP_ORDER_LIMIT}")
    found = {frozenset([g.identity])}
    for a in range(g.order):
        found.add(_closure_members(g, [a]))
        for b in range(a + 1, g.order):
            found.add(_closure_members(g, [a, b]))
    while True:
        new = set()
        current = list(found)
        for i, s in enumerate(current):
            for t in current[i + 1:]:
                if s <= t or t <= s:
                    continue
                j = _closure_members(g, s | t)
                if j not in found:
                    new.add(j)
        if not new:
            break
        found.update(new)
    ordered = sorted(found, key=lambda s: (len(s), sorted(s)))
    return [subgroup_from_members(g, sorted(s)) for s in ordered]


# ---------------------------------------------------------------------------
# abelianization and character lifting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AbelianStructure:
    """Z^free_rank + sum Z/d_i with the image of every generator."""

    free_rank: int
    torsion: tuple[int, ...]
    generator_images: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    # each image is (torsion coordinates mod d_i, free coordinates)


def relator_exponent_matrix(p: Presentation) -> list[list[int]]:
    """generators x relators matrix of letter-exponent sums."""
    mat = [[0] * len(p.relators) for _ in range(p.generator_count)]
    for j, r in enumerate(p.relators):
        for x in r:
            mat[abs(x) - 1][j] += 1 if x > 0 else -1
    return mat


def abelianization(p: Presentation) -> AbelianStructure:
    mat = relator_exponent_matrix(p)
    g = p.generator_count
    if not p.relators:
        images = tuple(((), tuple(int(i == j) for i in range(g)))
                       for j in range(g))
        return AbelianStructure(g, (), images)
    snf = smith_normal_form(mat)
    torsion_pos = [i for i, d in enumerate(snf.diag) if d >= 2]
    torsion = tuple(snf.diag[i] for i in torsion_pos)
    free_rows = list(range(snf.rank, g))
    images = []
    for j in range(g):
        col = [snf.left[i][j] for i in range(g)]
        tor = tuple(col[i] % snf.diag[i] for i in torsion_pos)
        free = tuple(col[i] for i in free_rows)
        images.append((tor, free))
    return AbelianStructure(g - snf.rank, torsion, tuple(images))


def hom_lift_to_Zmod(source, chi_values: Sequence[int], prime: int,
                     exponent: int) -> Optional[tuple[int, ...]]:
    """Lift a character to Z/p through Z/p^exponent, if possible.

    ``source`` is a Presentation or AbelianStructure.  Returns the lifted
    per-generator values mod p^exponent, or None when no lift exists.
    The decision runs through the abelianization coordinates: the lifted
    functional must kill d_i times each torsion coordinate mod p^exponent
    and reduce to the given values mod p on every generator.
    """
    ab = abelianization(source) if isinstance(source, Presentation) else source
    if not is_prime(prime):
        raise ValueError(f"{prime} is not prime")
    if exponent < 1:
        raise ValueError("exponent must be >= 1")
    n_tor = len(ab.torsion)
    n_free = ab.free_rank
    gens = len(ab.generator_images)
    chi = [int(c) % prime for c in chi_values]
    if len(chi) != gens:
        raise ValueError("one character value per generator required")
    def build_system(n: int):
        m = prime ** n
        scale = prime ** (n - 1)
        rows, rhs = [], []
        for i in range(n_tor):
            row = [0] * (n_tor + n_free)
            row[i] = ab.torsion[i]
            rows.append(row)
            rhs.append(0)
        for j, (tor, free) in enumerate(ab.generator_images):
            row = [scale * t for t in tor] + [scale * f for f in free]
            rows.append(row)
            rhs.append(scale * chi[j])
        return rows, rhs, m

    if n_tor + n_free == 0 or gens == 0:
        if any(chi):
            raise NotHomomorphism("nonzero values on a trivial group")
        return tuple(0 for _ in chi)
    base_rows, base_rhs, _ = build_system(1)
    if solve_congruence(base_rows, base_rhs, prime) is None:
        raise NotHomomorphism(
            "input values are not a character of the abelianization")
    rows, rhs, m = build_system(exponent)
    sol = solve_congruence(rows, rhs, m)
    if sol is None:
        return None
    lifted = []
    for (tor, free) in ab.generator_images:
        val = sum(t * s for t, s in zip(tor, sol[:n_tor]))
        val += sum(f * s for f, s in zip(free, sol[n_tor:]))
        lifted.append(val % m)
    return tuple(lifted)


# ---------------------------------------------------------------------------
# Reidemeister-Schreier
# ---------------------------------------------------------------------------

@dataclass
class RSResult:
    """Kernel presentation with the rewriting data that produced it."""

    kernel: Presentation
    generator_words: tuple[Word, ...]   # kernel generator -> word of P
    transversal_words: tuple[Word, ...]
    _scan: Callable = field(repr=False)

    def rewrite_word(self, w: Sequence[int]) -> Word:
        """Rewrite a word of P lying in the kernel into kernel generators."""
        return self._scan(_check_word(w), check_closed=True)


def reidemeister_schreier(p: Presentation, f: GroupHom) -> RSResult:
    """Present the kernel of a surjection onto a finite group.

    Schreier generators are w_q g_i w_(q.f(g_i))^-1 over the breadth-first
    transversal; relators are the scans of every relator of ``p`` from
    every coset.
    """
    if not isinstance(f.source, Presentation):
        raise TypeError("hom source must be the presentation")
    q = f.target
    images = f.images
    # breadth-first coset exploration; cosets are elements of q
    order: list[int] = [q.identity]
    trans_word: dict[int, Word] = {q.identity: ()}
    tree: set[tuple[int, int]] = set()
    head = 0
    while head < len(order):
        c = order[head]
        for i in range(p.generator_count):
            c2 = q.mul_idx(c, images[i])
            if c2 not in trans_word:
                trans_word[c2] = trans_word[c] + (i + 1,)
                tree.add((c, i))
                order.append(c2)
        head += 1
    if len(order) != q.order:
        raise NotSurjective("generator images do not reach every coset")

    gen_of_pair: dict[tuple[int, int], int] = {}
    gen_words: list[Word] = []
    for c in order:
        for i in range(p.generator_count):
            if (c, i) in tree:
                continue
            c2 = q.mul_idx(c, images[i])
            gen_of_pair[(c, i)] = len(gen_words)
            gen_words.append(free_reduce(
                trans_word[c] + (i + 1,) + inverse_word(trans_word[c2])))

    def scan(word: Word, start: int = None, check_closed: bool = False) -> Word:
        c = q.identity if start is None else start
        start_c = c
        out: list[int] = []
        for x in word:
            i = abs(x) - 1
            if x > 0:
                pair = (c, i)
                c = q.mul_idx(c, images[i])
                if pair not in tree:
                    out.append(gen_of_pair[pair] + 1)
            else:
                c = q.mul_idx(c, q.inv_idx(images[i]))
                pair = (c, i)
                if pair not in tree:
                    out.append(-(gen_of_pair[pair] + 1))
        if check_closed and c != start_c:
            raise ValueError("word does not lie in the kernel")
        return free_reduce(tuple(out))

    relators = []
    for c in order:
        for r in p.relators:
            rw = scan(r, start=c)
            if rw:
                relators.append(rw)
    kernel = Presentation(len(gen_words), tuple(relators),
                          label=f"ker({p.label or 'P'})")
    return RSResult(kernel, tuple(gen_words),
                    tuple(trans_word[c] for c in order), scan)


# ---------------------------------------------------------------------------
# brute-force isomorphism (small orders)
# ---------------------------------------------------------------------------

def _generating_sequence(g: FiniteGroup) -> list[int]:
    gens: list[int] = []
    reached = frozenset([g.identity])
    while len(reached) < g.order:
        nxt = min(i for i in range(g.order) if i not in reached)
        gens.append(nxt)
        reached = _closure_members(g, gens)
    return gens


def are_isomorphic(a: FiniteGroup, b: FiniteGroup) -> bool:
    """Table isomorphism by brute-force relabeling; meant for order <= 16."""
    if a.order != b.order:
        return False
    if sorted(a.element_orders()) != sorted(b.element_orders()):
        return False
    gens = _generating_sequence(a)
    if not gens:
        return True
    # words of every element of a in those generators
    words: dict[int, Word] = {a.identity: ()}
    frontier = [a.identity]
    while frontier:
        new = []
        for x in frontier:
            for k, s in enumerate(gens):
                y = a.mul_idx(x, s)
                if y not in words:
                    words[y] = words[x] + (k + 1,)
                    new.append(y)
        frontier = new
    orders_a = [a.order_of(s) for s in gens]
    b_orders = b.element_orders()
    candidates = [[i for i in range(b.order) if b_orders[i] == o]
                  for o in orders_a]

    import itertools
    for choice in itertools.product(*candidates):
        fmap = np.empty(a.order, dtype=np.int64)
        for x, w in words.items():
            fmap[x] = evaluate_word(w, choice, b) if w else b.identity
        if len(set(fmap.tolist())) != a.order:
            continue
        if np.array_equal(fmap[a.mul], b.mul[fmap[:, None], fmap[None, :]]):
            return True
    return False
