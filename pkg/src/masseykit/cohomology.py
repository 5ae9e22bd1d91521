"""Normalized cochain complexes for finite groups with Z/p^k coefficients.

Conventions, fixed once here and relied on everywhere downstream:

* Cochains are non-homogeneous and normalized: a degree-d cochain is a
  function on d-tuples of group elements vanishing whenever some entry is
  the identity.  Values live in Z/p^k, optionally twisted by an
  orientation (a homomorphism to the units of Z/p^k) acting on the
  leading slot of the differential.
* The differential of a degree-d cochain f is
      (df)(g_1,...,g_{d+1}) = theta(g_1) f(g_2,...,g_{d+1})
          + sum_i (-1)^i f(..., g_i g_{i+1}, ...)
          + (-1)^{d+1} f(g_1,...,g_d).
* The cup product of untwisted cochains is
      (a cup b)(g_1,...,g_{i+j}) = a(g_1,...,g_i) * b(g_{i+1},...,g_{i+j}).
* Degree-1 transfer along a finite-index subgroup H with left transversal
  r_0=e, r_1, ... sends psi to g -> sum_i psi(r_{j(i)}^-1 g r_i) where
  g r_i lies in r_{j(i)} H; in degree 0 the same construction is the norm
  sum_i theta(r_i) a.

With trivial coefficients every normalized 1-cocycle is a homomorphism,
so degree-1 classes have canonical representatives; all indeterminacy
bookkeeping for Massey products exploits this.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    DegreeTooHigh,
    NonPrimeModulus,
    NotACocycle,
    NotNormal,
    NotSurjective,
)
from .gf_core import (
    PrimeSolver,
    is_prime,
    nullspace_array,
    rref_array,
    smith_normal_form,
)
from .groups import (
    FiniteGroup,
    SubgroupData,
    _generating_sequence,
    enumerate_subgroups,
    kernel_of_character,
)

__all__ = [
    "Orientation",
    "Cochain",
    "CohomClass",
    "Character",
    "zero_cochain",
    "cochain",
    "character",
    "character_from_function",
    "coboundary",
    "cup",
    "is_coboundary",
    "class_equal",
    "h_basis",
    "characters_of",
    "bockstein",
    "restriction",
    "corestriction_deg0",
    "corestriction_deg1",
    "conjugate_character",
    "norm_operators",
    "FourTermReport",
    "four_term_exactness",
    "ReductionReport",
    "formal_h90_check",
    "cochain_complex",
]

H2_ORDER_LIMIT = 32
H90_ORDER_LIMIT = 24


# ---------------------------------------------------------------------------
# coefficient twists
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Orientation:
    """Multiplicative unit character into (Z/p^k)^* twisting coefficients."""

    group: FiniteGroup
    modulus: int
    unit_values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) % self.modulus for v in self.unit_values)
        object.__setattr__(self, "unit_values", vals)
        g = self.group
        if len(vals) != g.order:
            raise ValueError("one unit per element required")
        if any(math.gcd(v, self.modulus) != 1 for v in vals):
            raise ValueError("orientation values must be units")
        u = np.array(vals, dtype=np.int64)
        if not np.array_equal(u[g.mul], (u[:, None] * u[None, :]) % self.modulus):
            raise ValueError("orientation is not multiplicative")

    def restrict(self, h: SubgroupData) -> "Orientation":
        return Orientation(h.as_group, self.modulus,
                           tuple(self.unit_values[m] for m in h.member_indices))


# ---------------------------------------------------------------------------
# cochains
# ---------------------------------------------------------------------------

class Cochain:
    """Normalized non-homogeneous cochain of degree 0..3."""

    __slots__ = ("group", "degree", "modulus", "values", "twist")

    def __init__(self, group: FiniteGroup, degree: int, modulus: int,
                 values, twist: Optional[Orientation] = None):
        if not 0 <= degree <= 3:
            raise DegreeTooHigh("cochain degrees 0..3 only")
        vals = np.array(values, dtype=np.int64) % modulus
        if vals.shape != (group.order,) * degree:
            raise ValueError("value array shape does not match the degree")
        if degree and group.order:
            for axis in range(degree):
                sl = [slice(None)] * degree
                sl[axis] = group.identity
                vals[tuple(sl)] = 0
        vals.setflags(write=False)
        if twist is not None and (twist.group is not group
                                  or twist.modulus != modulus):
            raise ValueError("twist does not match group/modulus")
        self.group = group
        self.degree = degree
        self.modulus = modulus
        self.values = vals
        self.twist = twist

    def __eq__(self, other):
        return (isinstance(other, Cochain) and self.group is other.group
                and self.degree == other.degree
                and self.modulus == other.modulus
                and np.array_equal(self.values, other.values))

    def __repr__(self):
        return (f"Cochain(deg={self.degree}, mod={self.modulus}, "
                f"group={self.group.label})")

    def is_zero(self) -> bool:
        return not self.values.any()

    def __add__(self, other: "Cochain") -> "Cochain":
        self._compat(other)
        return Cochain(self.group, self.degree, self.modulus,
                       (self.values + other.values) % self.modulus, self.twist)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._compat(other)
        return Cochain(self.group, self.degree, self.modulus,
                       (self.values - other.values) % self.modulus, self.twist)

    def scale(self, c: int) -> "Cochain":
        return Cochain(self.group, self.degree, self.modulus,
                       (self.values * int(c)) % self.modulus, self.twist)

    def _compat(self, other: "Cochain"):
        if (self.group is not other.group or self.degree != other.degree
                or self.modulus != other.modulus):
            raise ValueError("cochains are not compatible")


def zero_cochain(group: FiniteGroup, degree: int, modulus: int,
                 twist: Optional[Orientation] = None) -> Cochain:
    return Cochain(group, degree, modulus,
                   np.zeros((group.order,) * degree, dtype=np.int64), twist)


def cochain(group: FiniteGroup, degree: int, modulus: int, values,
            twist: Optional[Orientation] = None) -> Cochain:
    return Cochain(group, degree, modulus, values, twist)


@dataclass(frozen=True)
class CohomClass:
    """Cohomology class held by a cocycle representative."""

    representative: Cochain

    def __post_init__(self):
        rep = self.representative
        if rep.degree <= 2 and not coboundary(rep).is_zero():
            raise NotACocycle("representative has nonzero coboundary")

    @property
    def degree(self) -> int:
        return self.representative.degree

    @property
    def group(self) -> FiniteGroup:
        return self.representative.group

    @property
    def modulus(self) -> int:
        return self.representative.modulus

    def is_zero_class(self) -> bool:
        return is_coboundary(self.representative) is not None


class Character(Cochain):
    """Degree-1 special case: a (crossed) homomorphism to Z/m.

    With a twist theta the defining law is chi(gh) = chi(g) +
    theta(g) chi(h); trivial twist is plain additivity.
    """

    def __init__(self, group: FiniteGroup, modulus: int, values,
                 twist: Optional[Orientation] = None):
        super().__init__(group, 1, modulus, values, twist)
        v = self.values
        if twist is None:
            expect = (v[:, None] + v[None, :]) % modulus
        else:
            th = np.array(twist.unit_values, dtype=np.int64)
            expect = (v[:, None] + th[:, None] * v[None, :]) % modulus
        if not np.array_equal(v[group.mul], expect):
            raise ValueError("values do not satisfy the (crossed) "
                             "homomorphism law")

    def __call__(self, g: int) -> int:
        return int(self.values[g])

    def is_surjective_mod_p(self) -> bool:
        return bool(self.values.any())


def character(group: FiniteGroup, values, modulus: int,
              twist: Optional[Orientation] = None) -> Character:
    return Character(group, modulus, values, twist)


def character_from_function(group: FiniteGroup, fn, modulus: int) -> Character:
    """Character from a function on the raw elements behind the indices."""
    if group.elements is None:
        raise ValueError("group does not carry raw elements")
    return Character(group, modulus, [fn(e) for e in group.elements])


# ---------------------------------------------------------------------------
# differential and cup product
# ---------------------------------------------------------------------------

def coboundary(c: Cochain) -> Cochain:
    """The differential; raises DegreeTooHigh above degree 2."""
    if c.degree > 2:
        raise DegreeTooHigh("coboundary supports degrees 0..2")
    g = c.group
    mul = g.mul
    m = c.modulus
    if c.twist is None:
        theta = np.ones(g.order, dtype=np.int64)
    else:
        theta = np.array(c.twist.unit_values, dtype=np.int64)
    v = c.values
    if c.degree == 0:
        out = (theta * v - v) % m
    elif c.degree == 1:
        out = (theta[:, None] * v[None, :] - v[mul] + v[:, None]) % m
    else:
        out = (theta[:, None, None] * v[None, :, :]
               - v[mul]                       # f(g h, k)
               + v[:, mul]                    # f(g, h k)
               - v[:, :, None]) % m
    return Cochain(g, c.degree + 1, m, out, c.twist)


def cup(a: Cochain, b: Cochain) -> Cochain:
    """Cup product of untwisted cochains of total degree at most 3."""
    if a.group is not b.group or a.modulus != b.modulus:
        raise ValueError("cochains are not compatible")
    if a.twist is not None or b.twist is not None:
        raise ValueError("twisted cup products are not supported")
    if a.degree + b.degree > 3:
        raise DegreeTooHigh("cup supports total degree at most 3")
    vals = np.multiply.outer(a.values, b.values) % a.modulus
    return Cochain(a.group, a.degree + b.degree, a.modulus, vals)


# ---------------------------------------------------------------------------
# the cached complex of one group mod p
# ---------------------------------------------------------------------------

class _Complex:
    """Coboundary matrices and solvers of one finite group mod p.

    Cochain spaces are coordinatized over tuples of non-identity elements
    (the normalized ones), in the element order of the group with the
    identity removed.
    """

    def __init__(self, group: FiniteGroup, p: int):
        if not is_prime(p):
            raise NonPrimeModulus(f"{p} is not prime")
        self.group = group
        self.p = p
        n = group.order
        self.nonid = np.array([i for i in range(n) if i != group.identity],
                              dtype=np.int64)
        self.ne = n - 1
        col = np.full(n, -1, dtype=np.int64)
        col[self.nonid] = np.arange(self.ne)
        self.col_of = col
        self._d1 = None
        self._d1_solver = None
        self._z1 = None
        self._d2 = None
        self._z2 = None
        self._h2 = None
        self._h2_solver = None

    # -- flattening ---------------------------------------------------------

    def flatten(self, c: Cochain) -> np.ndarray:
        idx = np.ix_(*([self.nonid] * c.degree))
        return c.values[idx].ravel().copy()

    def unflatten(self, vec, degree: int) -> Cochain:
        vals = np.zeros((self.group.order,) * degree, dtype=np.int64)
        idx = np.ix_(*([self.nonid] * degree))
        vals[idx] = np.asarray(vec).reshape((self.ne,) * degree)
        return Cochain(self.group, degree, self.p, vals)

    # -- coboundary matrices -------------------------------------------------

    @property
    def d1(self) -> np.ndarray:
        """Matrix of C^1 -> C^2 over the normalized coordinates."""
        if self._d1 is None:
            ne = self.ne
            mul = self.group.mul
            prods = self.col_of[mul[self.nonid][:, self.nonid]]  # ne x ne
            mat = np.zeros((ne * ne, ne), dtype=np.int64)
            rows = np.arange(ne * ne)
            gi = rows // ne
            hj = rows % ne
            np.add.at(mat, (rows, gi), 1)
            np.add.at(mat, (rows, hj), 1)
            pc = prods.ravel()
            keep = pc >= 0
            np.add.at(mat, (rows[keep], pc[keep]), -1)
            self._d1 = mat % self.p
        return self._d1

    @property
    def d1_solver(self) -> PrimeSolver:
        if self._d1_solver is None:
            self._d1_solver = PrimeSolver(self.d1, self.p)
        return self._d1_solver

    @property
    def z1(self) -> np.ndarray:
        """Rows: value vectors (over non-identity elements) of a basis of
        the characters Hom(G, Z/p)."""
        if self._z1 is None:
            self._z1 = self.d1_solver.kernel_basis()
        return self._z1

    @property
    def d2(self) -> np.ndarray:
        """Matrix of C^2 -> C^3."""
        if self._d2 is None:
            ne = self.ne
            mul = self.group.mul
            prods = self.col_of[mul[self.nonid][:, self.nonid]]
            n3 = ne ** 3
            mat = np.zeros((n3, ne * ne), dtype=np.int8)
            rows = np.arange(n3)
            i = rows // (ne * ne)
            j = (rows // ne) % ne
            k = rows % ne
            np.add.at(mat, (rows, j * ne + k), 1)          # f(h, k)
            gh = prods[i, j]
            keep = gh >= 0
            np.add.at(mat, (rows[keep], gh[keep] * ne + k[keep]), -1)
            hk = prods[j, k]
            keep = hk >= 0
            np.add.at(mat, (rows[keep], i[keep] * ne + hk[keep]), 1)
            np.add.at(mat, (rows, i * ne + j), -1)
            self._d2 = mat % self.p
        return self._d2

    @property
    def z2(self) -> np.ndarray:
        if self._z2 is None:
            if self.group.order > H2_ORDER_LIMIT:
                raise BudgetExceeded(
                    f"degree-2 cohomology capped at order {H2_ORDER_LIMIT}")
            self._z2 = nullspace_array(self.d2, self.p)
        return self._z2

    @property
    def h2(self) -> np.ndarray:
        """Rows: flattened 2-cocycles representing a basis of H^2."""
        if self._h2 is None:
            b2_rows = self.d1.T % self.p
            self._h2 = _extend_basis(b2_rows, self.z2, self.p)
        return self._h2

    @property
    def h2_solver(self) -> PrimeSolver:
        """Solver for z = sum c_i h2[i] + d(f): columns are the h2 reps
        followed by the coboundaries of the 1-cochain basis."""
        if self._h2_solver is None:
            cols = np.concatenate([self.h2.T, self.d1], axis=1) \
                if len(self.h2) else self.d1
            self._h2_solver = PrimeSolver(cols, self.p)
        return self._h2_solver

    def h2_coordinates(self, flat: np.ndarray) -> np.ndarray:
        """Coordinates of a 2-cocycle class over the h2 basis."""
        sol = self.h2_solver.solve(flat)
        if sol is None:
            raise NotACocycle("vector is not a 2-cocycle class combination")
        return sol[: len(self.h2)] % self.p

    def char_vec(self, c: Cochain) -> np.ndarray:
        return c.values[self.nonid].copy()


def _extend_basis(base_rows: np.ndarray, new_rows: np.ndarray,
                  p: int) -> np.ndarray:
    """Rows of new_rows that extend the span of base_rows, reduced."""
    if len(base_rows):
        ech, pivots, rank = rref_array(base_rows, p)
        ech = ech[:rank]
        pivots = list(pivots)
    else:
        ech = np.zeros((0, new_rows.shape[1]), dtype=np.int64)
        pivots = []
    added = []
    for row in new_rows:
        r = row.copy() % p
        for erow, pc in zip(ech, pivots):
            if r[pc]:
                r = (r - r[pc] * erow) % p
        if r.any():
            pc = int(np.nonzero(r)[0][0])
            r = (r * pow(int(r[pc]), -1, p)) % p
            ech = np.vstack([ech, r])
            pivots.append(pc)
            added.append(row % p)
    return (np.array(added, dtype=np.int64) if added
            else np.zeros((0, new_rows.shape[1]), dtype=np.int64))


def cochain_complex(group: FiniteGroup, p: int) -> _Complex:
    """The cached normalized-cochain complex of a group mod p."""
    cache = getattr(group, "_cochain_complexes", None)
    if cache is None:
        cache = {}
        group._cochain_complexes = cache
    if p not in cache:
        cache[p] = _Complex(group, p)
    return cache[p]


# ---------------------------------------------------------------------------
# cocycle decisions and bases
# ---------------------------------------------------------------------------

def is_coboundary(z: Cochain) -> Optional[Cochain]:
    """A primitive f with df = z, or None; degrees 1 and 2 only."""
    if z.degree not in (1, 2):
        raise DegreeTooHigh("coboundary decisions for degrees 1 and 2 only")
    if z.twist is not None:
        raise ValueError("twisted coboundary decisions are not supported")
    if not is_prime(z.modulus):
        raise NonPrimeModulus("prime modulus required")
    if not coboundary(z).is_zero():
        raise NotACocycle("input is not a cocycle")
    if z.degree == 1:
        # primitives are constants; untwisted constants have zero boundary
        return zero_cochain(z.group, 0, z.modulus) if z.is_zero() else None
    cx = cochain_complex(z.group, z.modulus)
    sol = cx.d1_solver.solve(cx.flatten(z))
    return None if sol is None else cx.unflatten(sol, 1)


def class_equal(a: Cochain | CohomClass, b: Cochain | CohomClass) -> bool:
    ra = a.representative if isinstance(a, CohomClass) else a
    rb = b.representative if isinstance(b, CohomClass) else b
    return is_coboundary(ra - rb) is not None


def h_basis(group: FiniteGroup, degree: int, modulus: int) -> list[CohomClass]:
    """Representatives of a basis of H^degree(G, Z/p), degree 1 or 2."""
    if degree not in (1, 2):
        raise ValueError("h_basis supports degrees 1 and 2")
    if not is_prime(modulus):
        raise NonPrimeModulus(f"{modulus} is not prime")
    if degree == 2 and group.order > H2_ORDER_LIMIT:
        raise BudgetExceeded(
            f"degree-2 basis capped at order {H2_ORDER_LIMIT}")
    cx = cochain_complex(group, modulus)
    if degree == 1:
        return [CohomClass(cx.unflatten(row, 1)) for row in cx.z1]
    return [CohomClass(cx.unflatten(row, 2)) for row in cx.h2]


def characters_of(group: FiniteGroup, modulus: int) -> list[Character]:
    """All of Hom(G, Z/p), the zero character first, in the deterministic
    order induced by the coefficient sweep over the canonical basis."""
    cx = cochain_complex(group, modulus)
    basis = cx.z1
    p = modulus
    out = []
    import itertools
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        vec = np.zeros(cx.ne, dtype=np.int64)
        for c, row in zip(coeffs, basis):
            vec = (vec + c * row) % p
        vals = np.zeros(group.order, dtype=np.int64)
        vals[cx.nonid] = vec
        out.append(Character(group, p, vals))
    return out


def bockstein(chi: Character) -> CohomClass:
    """Connecting class of 0 -> Z/p -> Z/p^2 -> Z/p -> 0 on a character.

    Values are lifted by the canonical set section {0..p-1}; the cocycle
    (chi~(g) + chi~(h) - chi~(gh)) / p is exact in integers before the
    final reduction.
    """
    if chi.twist is not None:
        raise ValueError("untwisted characters only")
    p = chi.modulus
    if not is_prime(p):
        raise NonPrimeModulus(f"{p} is not prime")
    v = chi.values
    g = chi.group
    t = v[:, None] + v[None, :] - v[g.mul]
    if np.any(t % p):
        raise NotACocycle("character values are not additive")
    return CohomClass(Cochain(g, 2, p, (t // p) % p))


# ---------------------------------------------------------------------------
# restriction, transfer, conjugation
# ---------------------------------------------------------------------------

def restriction(x: CohomClass | Cochain, h: SubgroupData):
    """Restrict a class or cochain on G to the subgroup's own indexing."""
    c = x.representative if isinstance(x, CohomClass) else x
    members = np.array(h.member_indices, dtype=np.int64)
    if c.degree == 0:
        vals = c.values
    else:
        vals = c.values[np.ix_(*([members] * c.degree))]
    tw = c.twist.restrict(h) if c.twist is not None else None
    out = Cochain(h.as_group, c.degree, c.modulus, vals, tw)
    if isinstance(x, CohomClass):
        return CohomClass(out)
    return out


def corestriction_deg0(value: int, h: SubgroupData,
                       twist: Optional[Orientation] = None,
                       modulus: Optional[int] = None) -> int:
    """Degree-0 transfer: the norm sum over the coset transversal."""
    if twist is not None:
        m = twist.modulus
        return sum(twist.unit_values[r] * value for r in h.transversal) % m
    if modulus is None:
        raise ValueError("modulus required without a twist")
    return (len(h.transversal) * value) % modulus


def corestriction_deg1(psi: Character, h: SubgroupData) -> Character:
    """Degree-1 transfer from the subgroup up to the parent group.

    The result is independent of the transversal; trivial coefficients.
    """
    if psi.twist is not None:
        raise ValueError("trivial coefficients only")
    g = h.parent
    p = psi.modulus
    coset = h.coset_lookup()
    trans = h.transversal
    vals = np.zeros(g.order, dtype=np.int64)
    for x in range(g.order):
        acc = 0
        for r in trans:
            y = g.mul_idx(x, r)
            rj = trans[coset[y]]
            elt = g.mul_idx(g.inv_idx(rj), y)
            acc += psi.values[h.parent_to_sub[elt]]
        vals[x] = acc % p
    return Character(g, p, vals)


def conjugate_character(h: SubgroupData, g: int, psi: Character) -> Character:
    """(g . psi)(x) = psi(g^-1 x g) on a normal subgroup."""
    if not h.is_normal():
        raise NotNormal("conjugation action needs a normal subgroup")
    parent = h.parent
    ginv = parent.inv_idx(g)
    vals = [psi.values[h.parent_to_sub[parent.mul_idx(parent.mul_idx(ginv, m), g)]]
            for m in h.member_indices]
    out = np.zeros(h.as_group.order, dtype=np.int64)
    for pos, v in enumerate(vals):
        out[pos] = v
    return Character(h.as_group, psi.modulus, out)


def norm_operators(group: FiniteGroup, chi: Character, psi: Character):
    """The weighted partial norm and the full norm of psi along ker(chi).

    With t the canonical transversal generator (chi(t) = 1) and p the
    modulus, returns (sum_{l=0}^{p-2} (p-1-l) t^l.psi,
    sum_{l=0}^{p-1} t^l.psi); the pair satisfies
    (t-1).weighted = norm - p.psi pointwise.
    """
    if not chi.is_surjective_mod_p():
        raise NotSurjective("chi must be onto Z/p")
    p = chi.modulus
    h = kernel_of_character(group, chi)
    t = h.transversal[1]
    conj = [psi]
    for _ in range(p - 1):
        conj.append(conjugate_character(h, t, conj[-1]))
    weighted = np.zeros(h.as_group.order, dtype=np.int64)
    for l in range(p - 1):
        weighted = (weighted + (p - 1 - l) * conj[l].values) % p
    norm = np.zeros(h.as_group.order, dtype=np.int64)
    for l in range(p):
        norm = (norm + conj[l].values) % p
    return (Character(h.as_group, p, weighted), Character(h.as_group, p, norm))


# ---------------------------------------------------------------------------
# the four-term sequence at p = 2
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FourTermReport:
    exact_at_h1: bool
    exact_at_h2: bool

    @property
    def exact(self) -> bool:
        return self.exact_at_h1 and self.exact_at_h2


def _row_space_equal(a_rows, b_rows, p: int, ambient: int) -> bool:
    a = np.asarray(a_rows, dtype=np.int64).reshape(-1, ambient)
    b = np.asarray(b_rows, dtype=np.int64).reshape(-1, ambient)
    if ambient == 0:
        return True
    ra = rref_array(a, p)[2] if a.shape[0] else 0
    rb = rref_array(b, p)[2] if b.shape[0] else 0
    if ra != rb:
        return False
    if ra == 0:
        return True
    return rref_array(np.vstack([a, b]), p)[2] == ra


def four_term_exactness(group: FiniteGroup, chi: Character) -> FourTermReport:
    """Exactness of H1(H) -cor-> H1(G) -cup chi-> H2(G) -res-> H2(H)
    at the two middle spots, for p = 2 and H = ker(chi)."""
    if chi.modulus != 2:
        raise NonPrimeModulus("the four-term check runs at p = 2")
    if not chi.is_surjective_mod_p():
        raise NotSurjective("chi = 0 is rejected")
    if group.order > H2_ORDER_LIMIT:
        raise BudgetExceeded(
            f"four-term check capped at order {H2_ORDER_LIMIT}")
    p = 2
    cx = cochain_complex(group, p)
    h = kernel_of_character(group, chi)
    hx = cochain_complex(h.as_group, p)

    g_chars = [cx.unflatten(row, 1) for row in cx.z1]
    chi_vec = cx.char_vec(chi)

    # image of the transfer inside the character space
    cor_rows = []
    for row in hx.z1:
        psi = Character(h.as_group, p, hx.unflatten(row, 1).values)
        cor_rows.append(cx.char_vec(corestriction_deg1(psi, h)))
    # kernel of cup-with-chi on H^1(G), in character-value coordinates
    cup_coords = []
    for xi in g_chars:
        flat = np.multiply.outer(cx.char_vec(xi), chi_vec).ravel() % p
        cup_coords.append(cx.h2_coordinates(flat))
    cup_coords = np.array(cup_coords, dtype=np.int64).reshape(
        len(cup_coords), len(cx.h2))
    ker_rows = []
    for combo in nullspace_array(cup_coords.T, p) if len(cup_coords) else []:
        vec = np.zeros(cx.ne, dtype=np.int64)
        for c, row in zip(combo, cx.z1):
            vec = (vec + c * row) % p
        ker_rows.append(vec)

    exact_h1 = _row_space_equal(cor_rows, ker_rows, p, cx.ne)

    # image of cup-with-chi as a subspace of H^2(G) coordinates
    im_cup = cup_coords

    # kernel of the restriction H^2(G) -> H^2(H) in the same coordinates
    ker_res = []
    if len(cx.h2):
        res_cols = [hx.flatten(restriction(cx.unflatten(row, 2), h))
                    for row in cx.h2]
        mat = np.concatenate([np.array(res_cols).T, hx.d1], axis=1) % p
        # nullspace directions mix in pure coboundaries of H; the leading
        # coordinate blocks span the kernel subspace
        for combo in nullspace_array(mat, p):
            c_part = combo[: len(cx.h2)] % p
            if c_part.any():
                ker_res.append(c_part)

    exact_h2 = _row_space_equal(im_cup, ker_res, p, len(cx.h2))
    return FourTermReport(exact_at_h1=exact_h1, exact_at_h2=exact_h2)


# ---------------------------------------------------------------------------
# formal reduction-surjectivity probes (twisted coefficients)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReductionReport:
    subgroup_members: tuple[int, ...]
    level: int
    reduction_surjective: bool
    consecutive_surjective: bool


class _CrossedHomCounter:
    """Counts of twisted H^1 data of one subgroup at prime-power levels.

    Crossed homomorphisms are cut out by integer congruences on the
    values over non-identity elements; all group orders come from Smith
    normal forms, so no enumeration of cochains happens.
    """

    def __init__(self, sub: FiniteGroup, theta_units: Sequence[int], p: int):
        self.sub = sub
        self.p = p
        self.theta = [int(t) for t in theta_units]
        self.ne = sub.order - 1
        self.nonid = [i for i in range(sub.order) if i != sub.identity]
        self.col = {e: k for k, e in enumerate(self.nonid)}
        gens = _generating_sequence(sub)
        rows = []
        for s in gens:
            for x in range(sub.order):
                row = [0] * self.ne
                prod = sub.mul_idx(s, x)
                if prod != sub.identity:
                    row[self.col[prod]] += 1
                if s != sub.identity:
                    row[self.col[s]] -= 1
                if x != sub.identity:
                    row[self.col[x]] -= self.theta[s]
                if any(row):
                    rows.append(row)
        self.rows = rows

    @staticmethod
    def _count(rows, m: int, cols: int) -> int:
        """Number of solutions of rows . x = 0 (mod m) in (Z/m)^cols."""
        if not rows or cols == 0:
            return m ** cols
        snf = smith_normal_form(rows)
        total = 1
        for j in range(cols):
            d = snf.diag[j] if j < snf.rank else 0
            total *= math.gcd(d, m) if d else m
        return total

    def _scaled_rows(self, n: int):
        # crossed-hom conditions use theta mod p^n
        m = self.p ** n
        return [[x % m for x in row] for row in self.rows], m

    def coboundary_vector(self, n: int) -> list[int]:
        m = self.p ** n
        return [(self.theta[e] - 1) % m for e in self.nonid]

    def z1_order(self, n: int) -> int:
        rows, m = self._scaled_rows(n)
        return self._count(rows, m, self.ne)

    def b1_order(self, n: int) -> int:
        # order of the cyclic group of principal crossed homs a -> a*(theta-1)
        m = self.p ** n
        v = self.coboundary_vector(n)
        if self.ne == 0:
            return 1
        c = 0
        for x in v:
            c = math.gcd(c, x)
        c = math.gcd(c, m)
        return m // c if c else 1

    def h1_order(self, n: int) -> int:
        return self.z1_order(n) // self.b1_order(n)

    def image_order(self, n: int, t: int) -> int:
        """Order of the image of H^1(mod p^n) -> H^1(mod p^t), t < n."""
        m = self.p ** n
        scale = self.p ** (n - t)
        rows_n, _ = self._scaled_rows(n)
        v_t = self.coboundary_vector(t)
        # pairs (x, a) with x crossed mod p^n and x = a v_t mod p^t
        pair_rows = [row + [0] for row in rows_n]
        for k in range(self.ne):
            row = [0] * (self.ne + 1)
            row[k] = scale
            row[self.ne] = (-scale * v_t[k]) % m
            pair_rows.append(row)
        n_pairs = self._count(pair_rows, m, self.ne + 1)
        mult_rows = [[(scale * x) % m] for x in v_t]
        t_mult = self._count(mult_rows, m, 1)
        n_kernel_cocycles = n_pairs // t_mult
        ker = n_kernel_cocycles // self.b1_order(n)
        return self.h1_order(n) // ker

    def reduction_surjective(self, n: int, t: int) -> bool:
        if n == t:
            return True
        return self.image_order(n, t) == self.h1_order(t)


def formal_h90_check(group: FiniteGroup, theta: Orientation,
                     n_max: int) -> list[ReductionReport]:
    """Surjectivity of twisted H^1 reduction maps, per subgroup per level.

    For every subgroup H and 1 <= n <= n_max, decides whether
    H^1(H, Z/p^n twisted) -> H^1(H, Z/p twisted) is onto, and likewise
    for the consecutive level-(n-1) map.  Requires the orientation
    modulus to be at least p^n_max.
    """
    if group.order > H90_ORDER_LIMIT:
        raise BudgetExceeded(
            f"subgroup sweep capped at order {H90_ORDER_LIMIT}")
    m = theta.modulus
    factors = {}
    mm = m
    for q in range(2, mm + 1):
        while mm % q == 0:
            factors[q] = factors.get(q, 0) + 1
            mm //= q
        if mm == 1:
            break
    if len(factors) != 1:
        raise ValueError("orientation modulus must be a prime power")
    (p, k), = factors.items()
    if n_max > k:
        raise ValueError("n_max exceeds the orientation modulus exponent")
    reports = []
    for sub in enumerate_subgroups(group):
        units = [theta.unit_values[i] for i in sub.member_indices]
        counter = _CrossedHomCounter(sub.as_group, units, p)
        for n in range(1, n_max + 1):
            red = counter.reduction_surjective(n, 1)
            consec = counter.reduction_surjective(n, n - 1) if n >= 2 else True
            reports.append(ReductionReport(
                subgroup_members=sub.member_indices,
                level=n,
                reduction_surjective=red,
                consecutive_surjective=consec))
    return reports
