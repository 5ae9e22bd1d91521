"""Shared test utilities: independent oracles and certifications."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from masseykit import cohomology as chm
from masseykit import groups as gr


def bareiss_det(matrix) -> int:
    """Exact integer determinant, fraction-free; test-side oracle."""
    m = [[Fraction(x) for x in row] for row in matrix]
    n = len(m)
    sign = 1
    for k in range(n):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            for j in range(k, n):
                m[i][j] -= f * m[k][j]
    det = sign
    for k in range(n):
        det *= m[k][k]
    assert det.denominator == 1
    return int(det)


def descend_once(pres: gr.Presentation, p: int):
    """Kernel presentation along some surjective character to Z/p."""
    ab = gr.abelianization(pres)
    n_tor = len(ab.torsion)
    chi = None
    for cand in range(n_tor + ab.free_rank):
        if cand < n_tor and ab.torsion[cand] % p:
            continue
        vals = []
        for (tor, free) in ab.generator_images:
            v = tor[cand] if cand < n_tor else free[cand - n_tor]
            vals.append(v % p)
        if any(vals):
            chi = vals
            break
    if chi is None:
        return None
    zp = gr.catalog(f"cyclic({p})")
    hom = gr.GroupHom(pres, zp, tuple((v * 1) % p for v in chi))
    return gr.reidemeister_schreier(pres, hom).kernel


def certify_max_p_quotient(pres: gr.Presentation, p: int, exponent: int) -> bool:
    """True when the presented group's maximal p-quotient has order
    p^exponent: descend through index-p kernels that many times and check
    the final abelianization admits no Z/p quotient."""
    cur = pres
    for _ in range(exponent):
        nxt = descend_once(cur, p)
        if nxt is None:
            return False
        cur = nxt
    ab = gr.abelianization(cur)
    return ab.free_rank == 0 and all(d % p for d in ab.torsion)


def char_rows_for(group: gr.FiniteGroup, chars) -> list[list[int]]:
    """Per-generator value rows of finite-group characters, for lifting."""
    assert group.generator_map is not None
    return [[int(c.values[g]) for g in group.generator_map] for c in chars]


def coordinate_character(group: gr.FiniteGroup, i: int, j: int,
                         p: int) -> chm.Character:
    return chm.character_from_function(group, lambda m: m.entry(i, j), p)


def random_cochain(rng, group, degree, modulus, twist=None):
    shape = (group.order,) * degree
    vals = np.array([rng.randrange(modulus)
                     for _ in range(group.order ** degree)]).reshape(shape)
    return chm.cochain(group, degree, modulus, vals, twist)
