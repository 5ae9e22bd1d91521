"""Defining systems and Massey-product status decisions.

Two independent decision routes are implemented.

Finite groups: the entries a[i][i+1] of a defining system are the given
characters themselves (normalized degree-1 cocycles with trivial
coefficients are exactly the homomorphisms, so there is no coboundary
slack), and each inner entry a[i][j] ranges over an affine coset
(particular solution) + (space of characters) of the linear system
d(a[i][j]) = -sum_l a[i][l] cup a[l][j].  The status search sweeps those
cosets layer by layer in j - i; at the final layer the reachable value
set is an affine subspace, so vanishing reduces to one linear solve per
surviving combination.  The sweep is exhaustive over all defining
systems, which makes the outcome a decision, not a heuristic.

Presented groups: a character tuple lifts to the unitriangular group
U(n+1, p), or its corner-free quotient, exactly when a defining system
exists with value zero (resp. at all); the search freezes the
superdiagonal entries of every generator image to the character values
and sweeps the remaining entries exhaustively, checking relators by
batched matrix products.

Sign convention: the value of a defining system is the class of
-sum_{l=2..n} a[1][l] cup a[l][n+1]; the obstruction to lifting a
corner-free homomorphism through the central extension is the class of
+sum_{l=2..n} (coordinate 1,l) cup (coordinate l,n+1), so value =
-(obstruction) on the nose for lift-extracted systems.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetExceeded, InternalInconsistency, InvalidSystem
from .cohomology import (
    Character,
    Cochain,
    CohomClass,
    characters_of,
    coboundary,
    cochain_complex,
    corestriction_deg1,
    cup,
    h_basis,
    is_coboundary,
    restriction,
)
from .groups import (
    FiniteGroup,
    Presentation,
    GroupHom,
    closure_group,
    evaluate_word,
    kernel_of_character,
    reidemeister_schreier,
)
from .unitriangular import UniMatrix, UniShape, from_entries, project_bar

__all__ = [
    "MasseyStatus",
    "MasseyReport",
    "DefiningSystem",
    "validate_defining_system",
    "defining_system_value",
    "massey_status_finite",
    "layered_search",
    "UniLift",
    "lift_search",
    "induced_images",
    "defining_system_from_lift",
    "lift_obstruction",
    "obstruction_cochain_on",
    "FourfoldReport",
    "degenerate_fourfold_criterion",
    "example_group_presentation",
    "example_subgroup_rewriting",
    "example_subgroup_presentation",
    "WorkedExampleReport",
    "verify_worked_example",
]

DEFAULT_STATUS_BUDGET = 2 ** 20
DEFAULT_LIFT_BUDGET = 2 ** 24
STATUS_ORDER_LIMIT = 32
_LIFT_CHUNK = 2 ** 14


class MasseyStatus(enum.Enum):
    UNDEFINED = "Undefined"
    DEFINED_NOT_VANISHING = "DefinedNotVanishing"
    VANISHES = "Vanishes"


@dataclass(frozen=True)
class DefiningSystem:
    """Triangular array of degree-1 cochains indexed by (i, j),
    1 <= i < j <= n+1, without the (1, n+1) corner."""

    group: FiniteGroup
    prime: int
    n: int
    entries: dict = field(hash=False)

    def entry(self, i: int, j: int) -> Cochain:
        return self.entries[(i, j)]

    def positions(self):
        return _system_positions(self.n)


def _system_positions(n: int):
    return [(i, j) for i in range(1, n + 2) for j in range(i + 1, n + 2)
            if (i, j) != (1, n + 1)]


def validate_defining_system(ds: DefiningSystem,
                             chars: Sequence[Character]) -> bool:
    """Both defining-system conditions, checked exactly."""
    n = ds.n
    if len(chars) != n:
        return False
    want = set(_system_positions(n))
    if set(ds.entries) != want:
        return False
    for i in range(1, n + 1):
        a = ds.entry(i, i + 1)
        if not coboundary(a).is_zero():
            return False
        if is_coboundary(a - chars[i - 1]) is None:
            return False
    for (i, j) in want:
        if j - i < 2:
            continue
        rhs = None
        for l in range(i + 1, j):
            term = cup(ds.entry(i, l), ds.entry(l, j))
            rhs = term if rhs is None else rhs + term
        if coboundary(ds.entry(i, j)) != rhs.scale(-1):
            return False
    return True


def defining_system_value(ds: DefiningSystem) -> CohomClass:
    """Class of -sum_{l=2..n} a[1][l] cup a[l][n+1]."""
    n = ds.n
    acc = None
    for l in range(2, n + 1):
        term = cup(ds.entry(1, l), ds.entry(l, n + 1))
        acc = term if acc is None else acc + term
    val = acc.scale(-1)
    if not coboundary(val).is_zero():
        raise InvalidSystem("value cochain is not a cocycle; "
                            "the system does not satisfy its conditions")
    return CohomClass(val)


@dataclass
class MasseyReport:
    status: MasseyStatus
    witness: Optional[DefiningSystem]
    search_stats: dict

    @property
    def defined(self) -> bool:
        return self.status is not MasseyStatus.UNDEFINED

    @property
    def vanishes(self) -> bool:
        return self.status is MasseyStatus.VANISHES


# ---------------------------------------------------------------------------
# finite-group status decisions
# ---------------------------------------------------------------------------

def _check_char_tuple(group: FiniteGroup, chars: Sequence[Character]) -> int:
    if len(chars) < 2:
        raise ValueError("need at least two characters")
    p = chars[0].modulus
    for c in chars:
        if not isinstance(c, Character) or c.twist is not None:
            raise ValueError("untwisted characters required")
        if c.group is not group or c.modulus != p:
            raise ValueError("characters must live on the given group mod p")
    return p


class _StatusWorkspace:
    """Per-(group, p, chi_first, chi_last) linear machinery."""

    def __init__(self, group, p, chars):
        self.cx = cochain_complex(group, p)
        self.p = p
        self.vecs = [self.cx.char_vec(c) for c in chars]
        self.z1 = self.cx.z1
        self.solver = self.cx.d1_solver

    def cupflat(self, u, w):
        return np.multiply.outer(u, w).ravel() % self.p

    def value_space_solver(self, first_vec, last_vec):
        """Solver for v = sum_b s_b (chi_first cup psi_b)
        + sum_b t_b (psi_b cup chi_last) + d(u)."""
        from .gf_core import PrimeSolver
        cols = [self.cupflat(first_vec, psi) for psi in self.z1]
        cols += [self.cupflat(psi, last_vec) for psi in self.z1]
        mat = np.array(cols, dtype=np.int64).T if cols else \
            np.zeros((self.cx.ne ** 2, 0), dtype=np.int64)
        mat = np.concatenate([mat, self.cx.d1], axis=1)
        return PrimeSolver(mat, self.p)

    def combo_vec(self, coeffs):
        vec = np.zeros(self.cx.ne, dtype=np.int64)
        for c, row in zip(coeffs, self.z1):
            vec = (vec + int(c) * row) % self.p
        return vec

    def to_character(self, vec) -> Character:
        vals = np.zeros(self.cx.group.order, dtype=np.int64)
        vals[self.cx.nonid] = vec % self.p
        return Character(self.cx.group, self.p, vals)

    def to_cochain(self, vec) -> Cochain:
        return self.cx.unflatten(vec, 1)

    @property
    def group(self):
        return self.cx.group


def massey_status_finite(group: FiniteGroup, chars: Sequence[Character],
                         budget: int = DEFAULT_STATUS_BUDGET) -> MasseyReport:
    """Decide Undefined / DefinedNotVanishing / Vanishes for 2 <= n <= 4.

    n = 2 is the cup product; n = 3 is fully linear (the value coset is an
    affine subspace); n = 4 sweeps the middle layer over the feasible
    affine subspace of character coefficients and solves the final layer
    linearly for each surviving combination.
    """
    p = _check_char_tuple(group, chars)
    n = len(chars)
    if n > 4:
        raise ValueError("products of length at most 4 are supported")
    if group.order > STATUS_ORDER_LIMIT:
        raise BudgetExceeded(
            f"status decisions capped at order {STATUS_ORDER_LIMIT}")
    ws = _StatusWorkspace(group, p, chars)
    if n == 2:
        return _status_n2(ws, chars)
    if n == 3:
        return _status_n3(ws, chars)
    return _status_n4(ws, chars, budget)


def _witness(ws, chars, inner: dict) -> DefiningSystem:
    n = len(chars)
    entries = {}
    for i in range(1, n + 1):
        entries[(i, i + 1)] = Cochain(ws.group, 1, ws.p, chars[i - 1].values)
    for key, vec in inner.items():
        entries[key] = ws.to_cochain(vec)
    ds = DefiningSystem(ws.group, ws.p, n, entries)
    if not validate_defining_system(ds, chars):
        raise InternalInconsistency("constructed witness fails validation")
    return ds


def _status_n2(ws, chars) -> MasseyReport:
    stats = {"method": "cup", "solves": 1}
    val = ws.cupflat(ws.vecs[0], ws.vecs[1])
    vanish = ws.solver.solve((-val) % ws.p) is not None
    witness = _witness(ws, chars, {})
    status = MasseyStatus.VANISHES if vanish \
        else MasseyStatus.DEFINED_NOT_VANISHING
    return MasseyReport(status, witness, stats)


def _status_n3(ws, chars) -> MasseyReport:
    p = ws.p
    c13 = (-ws.cupflat(ws.vecs[0], ws.vecs[1])) % p
    c24 = (-ws.cupflat(ws.vecs[1], ws.vecs[2])) % p
    f13 = ws.solver.solve(c13)
    f24 = ws.solver.solve(c24)
    stats = {"method": "linear", "solves": 2}
    if f13 is None or f24 is None:
        return MasseyReport(MasseyStatus.UNDEFINED, None, stats)
    value0 = (-(ws.cupflat(ws.vecs[0], f24) + ws.cupflat(f13, ws.vecs[2]))) % p
    vsolver = ws.value_space_solver(ws.vecs[0], ws.vecs[2])
    sol = vsolver.solve(value0)
    stats["solves"] += 1
    z = len(ws.z1)
    if sol is None:
        witness = _witness(ws, chars, {(1, 3): f13, (2, 4): f24})
        stats["certificate"] = ("value coset misses the coboundaries: "
                                "one inconsistent linear system")
        return MasseyReport(MasseyStatus.DEFINED_NOT_VANISHING, witness, stats)
    s_coeffs, t_coeffs = sol[:z], sol[z:2 * z]
    a24 = (f24 + ws.combo_vec(s_coeffs)) % p
    a13 = (f13 + ws.combo_vec(t_coeffs)) % p
    witness = _witness(ws, chars, {(1, 3): a13, (2, 4): a24})
    if defining_system_value(witness).is_zero_class() is False:
        raise InternalInconsistency("vanishing witness has nonzero value")
    return MasseyReport(MasseyStatus.VANISHES, witness, stats)


def _status_n4(ws, chars, budget: int) -> MasseyReport:
    p = ws.p
    v1, v2, v3, v4 = ws.vecs
    c13 = (-ws.cupflat(v1, v2)) % p
    c24 = (-ws.cupflat(v2, v3)) % p
    c35 = (-ws.cupflat(v3, v4)) % p
    f13 = ws.solver.solve(c13)
    f24 = ws.solver.solve(c24)
    f35 = ws.solver.solve(c35)
    stats = {"method": "layered-linear", "solves": 3}
    if f13 is None or f24 is None or f35 is None:
        return MasseyReport(MasseyStatus.UNDEFINED, None, stats)
    z = len(ws.z1)
    ne = ws.cx.ne
    coker = ws.solver.transform[ws.solver.rank:] % p   # rows annihilate im(d1)

    # feasibility of the third layer is linear in the middle-layer
    # coefficients (beta for a13, gamma for a24, delta for a35):
    #   c14 = -(chi1 cup a24 + a13 cup chi3), c25 = -(chi2 cup a35 + a24 cup chi4)
    cup_1_psi = np.array([ws.cupflat(v1, psi) for psi in ws.z1]
                         ).reshape(z, ne * ne)
    cup_psi_3 = np.array([ws.cupflat(psi, v3) for psi in ws.z1]
                         ).reshape(z, ne * ne)
    cup_2_psi = np.array([ws.cupflat(v2, psi) for psi in ws.z1]
                         ).reshape(z, ne * ne)
    cup_psi_4 = np.array([ws.cupflat(psi, v4) for psi in ws.z1]
                         ).reshape(z, ne * ne)
    c14_0 = (-(ws.cupflat(v1, f24) + ws.cupflat(f13, v3))) % p
    c25_0 = (-(ws.cupflat(v2, f35) + ws.cupflat(f24, v4))) % p

    # unknown order: beta (a13), gamma (a24), delta (a35)
    nrows = coker.shape[0]
    lin = np.zeros((2 * nrows, 3 * z), dtype=np.int64)
    rhs = np.zeros(2 * nrows, dtype=np.int64)
    if nrows:
        lin[:nrows, z:2 * z] = (-coker @ cup_1_psi.T) % p
        lin[:nrows, :z] = (-coker @ cup_psi_3.T) % p
        rhs[:nrows] = (-(coker @ c14_0)) % p
        lin[nrows:, 2 * z:] = (-coker @ cup_2_psi.T) % p
        lin[nrows:, z:2 * z] = (-coker @ cup_psi_4.T) % p
        rhs[nrows:] = (-(coker @ c25_0)) % p
    from .gf_core import solve_array
    feas = solve_array(lin, rhs, p)
    if feas is None:
        stats["certificate"] = "third-layer feasibility system inconsistent"
        return MasseyReport(MasseyStatus.UNDEFINED, None, stats)
    part, kernel = feas
    kernel = np.asarray(kernel, dtype=np.int64).reshape(-1, 3 * z)
    n_combos = p ** len(kernel)
    stats["layer2_combos"] = n_combos
    if n_combos > budget:
        raise BudgetExceeded(
            f"{n_combos} feasible middle layers exceed budget {budget}",
            stats)

    vsolver = ws.value_space_solver(v1, v4)
    examined = 0
    first_defined = None
    for coeffs in itertools.product(range(p), repeat=len(kernel)):
        combo = part.copy()
        for c, krow in zip(coeffs, kernel):
            combo = (combo + c * krow) % p
        beta, gamma, delta = combo[:z], combo[z:2 * z], combo[2 * z:]
        a13 = (f13 + ws.combo_vec(beta)) % p
        a24 = (f24 + ws.combo_vec(gamma)) % p
        a35 = (f35 + ws.combo_vec(delta)) % p
        c14 = (-(ws.cupflat(v1, a24) + ws.cupflat(a13, v3))) % p
        c25 = (-(ws.cupflat(v2, a35) + ws.cupflat(a24, v4))) % p
        f14 = ws.solver.solve(c14)
        f25 = ws.solver.solve(c25)
        if f14 is None or f25 is None:
            raise InternalInconsistency(
                "feasible middle layer failed the third-layer solve")
        examined += 1
        inner = {(1, 3): a13, (2, 4): a24, (3, 5): a35,
                 (1, 4): f14, (2, 5): f25}
        if first_defined is None:
            first_defined = dict(inner)
        value0 = (-(ws.cupflat(v1, f25) + ws.cupflat(a13, a35)
                    + ws.cupflat(f14, v4))) % p
        sol = vsolver.solve(value0)
        if sol is not None:
            s_coeffs, t_coeffs = sol[:z], sol[z:2 * z]
            inner[(2, 5)] = (f25 + ws.combo_vec(s_coeffs)) % p
            inner[(1, 4)] = (f14 + ws.combo_vec(t_coeffs)) % p
            stats["examined"] = examined
            witness = _witness(ws, chars, inner)
            if not defining_system_value(witness).is_zero_class():
                raise InternalInconsistency(
                    "vanishing witness has nonzero value")
            return MasseyReport(MasseyStatus.VANISHES, witness, stats)
    stats["examined"] = examined
    witness = _witness(ws, chars, first_defined)
    stats["certificate"] = (
        "all feasible middle layers swept; every final-layer value coset "
        "misses the coboundaries")
    return MasseyReport(MasseyStatus.DEFINED_NOT_VANISHING, witness, stats)


def layered_search(group: FiniteGroup, chars: Sequence[Character],
                   budget: int = DEFAULT_STATUS_BUDGET) -> MasseyReport:
    """Plain exhaustive layer-by-layer sweep; the cross-check oracle.

    Enumerates every defining system outright (each inner entry over its
    full particular + character coset) and tests every value with the
    coboundary solver.  Exponentially slower than massey_status_finite
    but with no linear-algebra shortcuts in the search itself.
    """
    p = _check_char_tuple(group, chars)
    n = len(chars)
    if n > 4:
        raise ValueError("products of length at most 4 are supported")
    ws = _StatusWorkspace(group, p, chars)
    z = len(ws.z1)
    combos = [np.array(c, dtype=np.int64)
              for c in itertools.product(range(p), repeat=z)]
    stats = {"method": "layered-exhaustive", "examined": 0}

    def solutions(rhs):
        f = ws.solver.solve(rhs)
        if f is None:
            return []
        return [(f + ws.combo_vec(c)) % p for c in combos]

    found_defined = None
    total = 0
    if n == 2:
        return _status_n2(ws, chars)
    if n == 3:
        v1, v2, v3 = ws.vecs
        for a13 in solutions((-ws.cupflat(v1, v2)) % p):
            for a24 in solutions((-ws.cupflat(v2, v3)) % p):
                total += 1
                if total > budget:
                    raise BudgetExceeded("layered sweep over budget", stats)
                inner = {(1, 3): a13, (2, 4): a24}
                if found_defined is None:
                    found_defined = dict(inner)
                value = (-(ws.cupflat(v1, a24) + ws.cupflat(a13, v3))) % p
                if ws.solver.solve(value) is not None:
                    stats["examined"] = total
                    return MasseyReport(MasseyStatus.VANISHES,
                                        _witness(ws, chars, inner), stats)
    else:
        v1, v2, v3, v4 = ws.vecs
        for a13 in solutions((-ws.cupflat(v1, v2)) % p):
            for a24 in solutions((-ws.cupflat(v2, v3)) % p):
                for a35 in solutions((-ws.cupflat(v3, v4)) % p):
                    c14 = (-(ws.cupflat(v1, a24) + ws.cupflat(a13, v3))) % p
                    c25 = (-(ws.cupflat(v2, a35) + ws.cupflat(a24, v4))) % p
                    for a14 in solutions(c14):
                        for a25 in solutions(c25):
                            total += 1
                            if total > budget:
                                raise BudgetExceeded(
                                    "layered sweep over budget", stats)
                            inner = {(1, 3): a13, (2, 4): a24, (3, 5): a35,
                                     (1, 4): a14, (2, 5): a25}
                            if found_defined is None:
                                found_defined = dict(inner)
                            value = (-(ws.cupflat(v1, a25)
                                       + ws.cupflat(a13, a35)
                                       + ws.cupflat(a14, v4))) % p
                            if ws.solver.solve(value) is not None:
                                stats["examined"] = total
                                return MasseyReport(
                                    MasseyStatus.VANISHES,
                                    _witness(ws, chars, inner), stats)
    stats["examined"] = total
    if found_defined is None:
        return MasseyReport(MasseyStatus.UNDEFINED, None, stats)
    return MasseyReport(MasseyStatus.DEFINED_NOT_VANISHING,
                        _witness(ws, chars, found_defined), stats)


# ---------------------------------------------------------------------------
# unitriangular lifts of presented groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UniLift:
    """A homomorphism from a presentation into a unitriangular shape,
    lifting a tuple of characters along the superdiagonal coordinates."""

    presentation: Presentation
    shape: UniShape
    images: tuple[UniMatrix, ...]
    characters: tuple[tuple[int, ...], ...]   # per character: generator values

    def __post_init__(self):
        n = self.shape.size - 1
        if len(self.characters) != n:
            raise InvalidSystem("character count must match the shape")
        for r in self.presentation.relators:
            if not evaluate_word(r, self.images).is_identity():
                raise InvalidSystem(f"relator {r} not satisfied by images")
        for g, img in enumerate(self.images):
            for i in range(1, self.shape.size):
                if img.entry(i, i + 1) != self.characters[i - 1][g] % self.shape.prime:
                    raise InvalidSystem(
                        "superdiagonal entries disagree with the characters")


def _validate_char_rows(pres: Presentation, char_rows, p: int):
    rows = [tuple(int(v) % p for v in row) for row in char_rows]
    for row in rows:
        if len(row) != pres.generator_count:
            raise ValueError("one value per generator required")
        for r in pres.relators:
            acc = 0
            for x in r:
                acc += row[abs(x) - 1] if x > 0 else -row[abs(x) - 1]
            if acc % p:
                raise ValueError(
                    "character values do not vanish on a relator")
    return rows


def lift_search(pres: Presentation, char_rows, shape: UniShape,
                budget: int = DEFAULT_LIFT_BUDGET) -> list[UniLift]:
    """All homomorphisms into the shape lifting the character tuple.

    Per generator the superdiagonal is frozen to the character values and
    the remaining entries are swept exhaustively; candidates are ordered
    lexicographically over (generator, free position, value) and relators
    are evaluated by chunked batched matrix products.
    """
    p = shape.prime
    n = shape.size - 1
    rows = _validate_char_rows(pres, char_rows, p)
    if len(rows) != n:
        raise ValueError(f"need {n} characters for size {shape.size}")
    gens = pres.generator_count
    free_pos = [(i, j) for (i, j) in shape.positions if j != i + 1]
    f = len(free_pos)
    total = p ** (f * gens)
    if total > budget:
        raise BudgetExceeded(
            f"{total} candidates exceed budget {budget}",
            {"candidates": total})
    s = shape.size
    eye = np.eye(s, dtype=np.int64)

    base = []
    for g in range(gens):
        m = np.eye(s, dtype=np.int64)
        for i in range(1, s):
            m[i - 1, i] = rows[i - 1][g]
        base.append(m)

    corner = (0, s - 1)

    def batch_inverse(ms):
        nil = ms - eye
        inv = np.broadcast_to(eye, ms.shape).copy()
        for _ in range(s - 1):
            inv = (eye - np.matmul(nil, inv)) % p
        return inv

    out: list[UniLift] = []
    digits_per_gen = f
    for start in range(0, total, _LIFT_CHUNK):
        idx = np.arange(start, min(start + _LIFT_CHUNK, total))
        count = len(idx)
        # digit t of candidate c (most significant first across generators
        # then free positions)
        stacks = []
        rem = idx.copy()
        digits = []
        for t in range(f * gens):
            power = p ** (f * gens - 1 - t)
            digits.append((rem // power) % p)
            rem = rem % power
        for g in range(gens):
            ms = np.broadcast_to(base[g], (count, s, s)).copy()
            for k, (i, j) in enumerate(free_pos):
                ms[:, i - 1, j - 1] = digits[g * digits_per_gen + k]
            stacks.append(ms)
        inv_stacks = [batch_inverse(ms) for ms in stacks]
        ok = np.ones(count, dtype=bool)
        for r in pres.relators:
            prod = np.broadcast_to(eye, (count, s, s)).copy()
            for x in r:
                m = stacks[abs(x) - 1] if x > 0 else inv_stacks[abs(x) - 1]
                prod = np.matmul(prod, m) % p
                if shape.barred:
                    prod[:, corner[0], corner[1]] = 0
            ok &= (prod == eye).all(axis=(1, 2))
            if not ok.any():
                break
        for c in np.nonzero(ok)[0]:
            images = []
            for g in range(gens):
                dense = stacks[g][c]
                entries = {(i, j): int(dense[i - 1, j - 1])
                           for (i, j) in shape.positions}
                images.append(from_entries(shape, entries))
            out.append(UniLift(pres, shape, tuple(images),
                               tuple(tuple(r) for r in rows)))
    return out


def induced_images(lift: UniLift, group: FiniteGroup,
                   verify: bool = True) -> list[UniMatrix]:
    """Image of every element of a finite realization of the presentation.

    The group must carry element words in the presentation's generators.
    With ``verify`` the induced map is checked to be multiplicative on the
    full table; callers that have certified the presentation separately
    may skip the quadratic check.
    """
    if group.element_words is None:
        raise ValueError("group does not carry element words")
    ident = lift.images[0].identity_like()
    imgs = [evaluate_word(w, lift.images) if w else ident
            for w in group.element_words]
    if verify:
        for a in range(group.order):
            for b in range(group.order):
                if imgs[group.mul_idx(a, b)] != imgs[a] * imgs[b]:
                    raise InternalInconsistency(
                        "lift does not descend to the finite group")
    return imgs


def defining_system_from_lift(lift: UniLift, group: FiniteGroup,
                              verify: bool = True) -> DefiningSystem:
    """The defining system of coordinate functions of a corner-free lift,
    pushed onto a finite realization of the presentation."""
    shape = lift.shape
    if not shape.barred:
        lift = UniLift(lift.presentation, shape.barred_shape(),
                       tuple(project_bar(m) for m in lift.images),
                       lift.characters)
        shape = lift.shape
    p = shape.prime
    n = shape.size - 1
    imgs = induced_images(lift, group, verify=verify)
    entries = {}
    for (i, j) in shape.positions:
        vals = np.array([m.entry(i, j) for m in imgs], dtype=np.int64)
        entries[(i, j)] = Cochain(group, 1, p, vals)
    return DefiningSystem(group, p, n, entries)


def obstruction_cochain_on(group: FiniteGroup, imgs: Sequence[UniMatrix],
                           p: int) -> Cochain:
    """sum_{l=2..n} u[1][l] cup u[l][n+1] evaluated through given images."""
    s = imgs[0].shape.size
    n = s - 1
    vals = np.zeros((group.order, group.order), dtype=np.int64)
    for l in range(2, n + 1):
        u1l = np.array([m.entry(1, l) for m in imgs], dtype=np.int64)
        uln = np.array([m.entry(l, s) for m in imgs], dtype=np.int64)
        vals = (vals + np.multiply.outer(u1l, uln)) % p
    return Cochain(group, 2, p, vals)


def lift_obstruction(lift: UniLift) -> CohomClass:
    """Obstruction class to raising a corner-free lift through the center.

    The class lives on the finite image group generated by the lift's
    images; it is the pullback of the central extension class, i.e. the
    cocycle sum_{l} (coordinate 1,l) cup (coordinate l,n+1).  Its
    vanishing there certifies a cover of this particular lift; deciding
    lift existence for the character tuple as a whole goes through
    lift_search on the unbarred shape.
    """
    shape = lift.shape
    if not shape.barred:
        raise InvalidSystem("obstructions are taken for corner-free lifts")
    q = closure_group(list(lift.images), label="lift-image")
    coc = obstruction_cochain_on(q, q.elements, shape.prime)
    return CohomClass(coc)


# ---------------------------------------------------------------------------
# the degenerate fourfold criterion at p = 2
# ---------------------------------------------------------------------------

@dataclass
class FourfoldReport:
    lhs_defined: bool
    lhs_vanishes: bool
    rhs_defined_witness: Optional[tuple[tuple[int, ...], tuple[int, ...]]]
    rhs_vanishing_witness: Optional[tuple[tuple[int, ...], tuple[int, ...]]]
    agree: bool


def degenerate_fourfold_criterion(group: FiniteGroup, chi1: Character,
                                  chi2: Character, chi3: Character
                                  ) -> FourfoldReport:
    """Compare the fourfold product (chi1, chi2, chi3, chi1) against the
    subgroup-side criterion over H = ker(chi1).

    The right side looks for phi, psi in Hom(H, Z/2) with transfers chi2
    and chi3, phi cup res(chi3) zero, and phi cup psi either zero
    (vanishing clause) or in the image of restriction (definedness
    clause); both sides are computed independently and compared.
    """
    p = 2
    for c in (chi1, chi2, chi3):
        if c.modulus != p:
            raise ValueError("mod-2 characters required")
    if not chi1.is_surjective_mod_p():
        raise ValueError("chi1 must be nonzero")
    if group.order > 16:
        raise BudgetExceeded("fourfold criterion capped at order 16")
    lhs = massey_status_finite(group, [chi1, chi2, chi3, chi1])
    h = kernel_of_character(group, chi1)
    hchars = characters_of(h.as_group, p)
    res3 = restriction(chi3, h)
    res3 = Character(h.as_group, p, res3.values)
    g_h2 = h_basis(group, 2, p)
    hx = cochain_complex(h.as_group, p)
    res_cols = [hx.flatten(restriction(z.representative, h)) for z in g_h2]
    from .gf_core import PrimeSolver
    res_mat = np.concatenate(
        [np.array(res_cols).T if res_cols else
         np.zeros((hx.ne ** 2, 0), dtype=np.int64), hx.d1], axis=1)
    res_solver = PrimeSolver(res_mat, p)

    cor_cache = {c.values.tobytes(): corestriction_deg1(c, h) for c in hchars}

    def cor(c):
        return cor_cache[c.values.tobytes()]

    defined_wit = None
    vanish_wit = None
    for phi in hchars:
        if cor(phi) != chi2:
            continue
        phi_res3_zero = is_coboundary(cup(phi, res3)) is not None
        if not phi_res3_zero:
            continue
        for psi in hchars:
            if cor(psi) != chi3:
                continue
            pp = cup(phi, psi)
            if vanish_wit is None and is_coboundary(pp) is not None:
                vanish_wit = (tuple(phi.values.tolist()),
                              tuple(psi.values.tolist()))
            if defined_wit is None and \
                    res_solver.solve(hx.flatten(pp)) is not None:
                defined_wit = (tuple(phi.values.tolist()),
                               tuple(psi.values.tolist()))
        if defined_wit and vanish_wit:
            break
    agree = ((lhs.vanishes == (vanish_wit is not None))
             and (lhs.defined == (defined_wit is not None)))
    return FourfoldReport(
        lhs_defined=lhs.defined, lhs_vanishes=lhs.vanishes,
        rhs_defined_witness=defined_wit, rhs_vanishing_witness=vanish_wit,
        agree=agree)


# ---------------------------------------------------------------------------
# the bundled worked example
# ---------------------------------------------------------------------------

def example_group_presentation() -> Presentation:
    """The two-generator one-relator group with a^2 b = b a^2."""
    return Presentation(2, ((1, 1, 2, -1, -1, -2),), label="paper-g")


def example_subgroup_rewriting():
    """Index-2 kernel rewriting of the example group: a -> 0, b -> 1."""
    from .groups import catalog
    pres = example_group_presentation()
    z2 = catalog("cyclic(2)")
    hom = GroupHom(pres, z2, (0, 1))
    return reidemeister_schreier(pres, hom)


def example_subgroup_presentation() -> Presentation:
    rs = example_subgroup_rewriting()
    return Presentation(rs.kernel.generator_count, rs.kernel.relators,
                        label="paper-h")


@dataclass
class WorkedExampleReport:
    reduction_surjective: dict            # n -> bool, on the example group
    subgroup_free_rank: int
    subgroup_torsion: tuple[int, ...]
    chi_values: tuple[int, ...]
    chi_on_commutator: int
    chi_lifts_mod4: bool
    ubar_lift_count: int
    u_lift_count: int
    u_candidates: int

    @property
    def part1_pass(self) -> bool:
        return all(self.reduction_surjective.values())

    @property
    def part2_pass(self) -> bool:
        return (self.subgroup_free_rank == 2
                and self.subgroup_torsion == (2,)
                and self.chi_on_commutator == 1
                and not self.chi_lifts_mod4)

    @property
    def part3_pass(self) -> bool:
        return self.ubar_lift_count >= 1 and self.u_lift_count == 0

    @property
    def all_pass(self) -> bool:
        return self.part1_pass and self.part2_pass and self.part3_pass


def verify_worked_example() -> WorkedExampleReport:
    """One-shot reproduction of the bundled example computations.

    (1) every mod-2 character of the example group lifts through Z/2^n
    for n = 2, 3, 4; (2) the index-2 kernel has abelianization of free
    rank 2 with one invariant factor 2 and its top-corner coordinate
    character does not lift to Z/4; (3) the character triple lifts to the
    corner-free quotient of U(4, 2) but not to U(4, 2) itself.
    """
    from .groups import abelianization, hom_lift_to_Zmod
    from .unitriangular import UniShape as _Shape, sigma

    pres = example_group_presentation()
    reduction = {}
    for n in (2, 3, 4):
        reduction[n] = all(
            hom_lift_to_Zmod(pres, row, 2, n) is not None
            for row in itertools.product(range(2), repeat=2))

    rs = example_subgroup_rewriting()
    ab = abelianization(rs.kernel)
    sh3 = _Shape(3, 2)
    mats = [sigma(sh3, 1), sigma(sh3, 2)]
    chi = tuple(evaluate_word(w, mats).entry(1, 3) if w else 0
                for w in rs.generator_words)
    h_word = rs.rewrite_word((1, 2, -1, -2))
    chi_h = sum(chi[abs(x) - 1] * (1 if x > 0 else -1) for x in h_word) % 2
    lift4 = hom_lift_to_Zmod(rs.kernel, chi, 2, 2)

    char_rows = [(1, 1), (1, 0), (1, 0)]
    sh4 = _Shape(4, 2)
    ubar = lift_search(pres, char_rows, sh4.barred_shape())
    u = lift_search(pres, char_rows, sh4)
    return WorkedExampleReport(
        reduction_surjective=reduction,
        subgroup_free_rank=ab.free_rank,
        subgroup_torsion=ab.torsion,
        chi_values=chi,
        chi_on_commutator=chi_h,
        chi_lifts_mod4=lift4 is not None,
        ubar_lift_count=len(ubar),
        u_lift_count=len(u),
        u_candidates=2 ** 6,
    )
