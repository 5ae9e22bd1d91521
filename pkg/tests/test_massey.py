import itertools
import random

import pytest

from masseykit import cohomology as chm
from masseykit import groups as gr
from masseykit import massey as msy
from masseykit import unitriangular as ut
from masseykit.errors import BudgetExceeded, InvalidSystem

from helpers import char_rows_for, coordinate_character


def chars_of(g):
    return chm.characters_of(g, 2)


# ---------------------------------------------------------------------------
# defining systems
# ---------------------------------------------------------------------------

def test_validate_pair_system():
    g = gr.catalog("cyclic(2)")
    chi = chm.character(g, [0, 1], 2)
    ds = msy.DefiningSystem(g, 2, 2, {
        (1, 2): chm.cochain(g, 1, 2, chi.values),
        (2, 3): chm.cochain(g, 1, 2, chi.values)})
    assert msy.validate_defining_system(ds, [chi, chi])


def test_validate_rejects_perturbation():
    g = gr.catalog("u3(2)")
    u12 = coordinate_character(g, 1, 2, 2)
    u23 = coordinate_character(g, 2, 3, 2)
    rep = msy.massey_status_finite(g, [u12, u23, u12])
    ds = rep.witness
    assert msy.validate_defining_system(ds, [u12, u23, u12])
    # perturb one inner entry by a non-cocycle
    bad = dict(ds.entries)
    vals = bad[(1, 3)].values.copy()
    vals[1] = (vals[1] + 1) % 2
    cand = chm.cochain(g, 1, 2, vals)
    if chm.coboundary(cand).is_zero():
        vals[2] = (vals[2] + 1) % 2
        cand = chm.cochain(g, 1, 2, vals)
    bad[(1, 3)] = cand
    ds_bad = msy.DefiningSystem(g, 2, 3, bad)
    assert not msy.validate_defining_system(ds_bad, [u12, u23, u12])


def test_validate_lift_extracted_system():
    g = gr.catalog("u3(2)")
    u12 = coordinate_character(g, 1, 2, 2)
    u23 = coordinate_character(g, 2, 3, 2)
    tup = [u12, u23, u12]
    rows = char_rows_for(g, tup)
    sh = ut.UniShape(4, 2, True)
    lifts = msy.lift_search(g.known_presentation, rows, sh)
    assert lifts
    for lift in lifts[:4]:
        ds = msy.defining_system_from_lift(lift, g)
        assert msy.validate_defining_system(ds, tup)


def test_value_of_pair_system_is_cup():
    g = gr.catalog("cyclic(2)")
    chi = chm.character(g, [0, 1], 2)
    ds = msy.DefiningSystem(g, 2, 2, {
        (1, 2): chm.cochain(g, 1, 2, chi.values),
        (2, 3): chm.cochain(g, 1, 2, chi.values)})
    val = msy.defining_system_value(ds)
    assert chm.class_equal(val.representative,
                           chm.cup(chi, chi).scale(-1))


def test_value_zero_system():
    g = gr.catalog("cyclic(2)")
    zero = chm.zero_cochain(g, 1, 2)
    ds = msy.DefiningSystem(g, 2, 3, {
        (1, 2): zero, (2, 3): zero, (3, 4): zero,
        (1, 3): zero, (2, 4): zero})
    assert msy.defining_system_value(ds).is_zero_class()


# ---------------------------------------------------------------------------
# finite status decisions
# ---------------------------------------------------------------------------

def test_status_pairs_match_cup_oracle():
    for name in ("cyclic(4)", "product(2,2)", "quaternion8", "u3(2)"):
        g = gr.catalog(name)
        for c1, c2 in itertools.product(chars_of(g), repeat=2):
            rep = msy.massey_status_finite(g, [c1, c2])
            assert rep.defined
            want = chm.is_coboundary(chm.cup(c1, c2)) is not None
            assert rep.vanishes == want


def test_status_triple_with_zero_factor_vanishes():
    g = gr.catalog("quaternion8")
    cs = chars_of(g)
    zero = cs[0]
    rep = msy.massey_status_finite(g, [cs[1], zero, cs[2]])
    assert rep.status is msy.MasseyStatus.VANISHES


def test_status_matches_layered_search():
    rng = random.Random(7)
    for name in ("cyclic(4)", "product(2,2)", "u3(2)", "quaternion8"):
        g = gr.catalog(name)
        cs = chars_of(g)
        for _ in range(6):
            tup = [rng.choice(cs) for _ in range(3)]
            fast = msy.massey_status_finite(g, tup)
            slow = msy.layered_search(g, tup)
            assert fast.status == slow.status, (name, fast.status)


def test_status_fourfold_matches_layered_search_small():
    g = gr.catalog("cyclic(4)")
    cs = chars_of(g)
    for tup in itertools.product(cs, repeat=4):
        fast = msy.massey_status_finite(g, list(tup))
        slow = msy.layered_search(g, list(tup))
        assert fast.status == slow.status


def test_status_witness_revalidates():
    g = gr.catalog("u3(2)")
    cs = chars_of(g)
    rng = random.Random(8)
    for _ in range(8):
        tup = [rng.choice(cs) for _ in range(3)]
        rep = msy.massey_status_finite(g, tup)
        if rep.witness is not None:
            assert msy.validate_defining_system(rep.witness, tup)
            if rep.vanishes:
                assert msy.defining_system_value(rep.witness).is_zero_class()


def test_status_budget():
    # the all-zero fourfold tuple leaves the full middle layer feasible
    g = gr.catalog("elementary(2,4)")
    zero = chars_of(g)[0]
    with pytest.raises(BudgetExceeded):
        msy.massey_status_finite(g, [zero] * 4, budget=16)


# ---------------------------------------------------------------------------
# lift search
# ---------------------------------------------------------------------------

def test_lift_search_example_counts():
    pres = msy.example_group_presentation()
    rows = [(1, 1), (1, 0), (1, 0)]
    sh = ut.UniShape(4, 2)
    ubar = msy.lift_search(pres, rows, sh.barred_shape())
    u = msy.lift_search(pres, rows, sh)
    assert len(ubar) >= 1
    assert len(u) == 0
    # the bundled corner-free lift: a -> full superdiagonal, b -> (1,2) only
    ta = ut.project_bar(ut.i_plus_n(sh))
    tb = ut.from_entries(sh.barred_shape(), {(1, 2): 1})
    assert any(L.images == (ta, tb) for L in ubar)


def test_lift_search_ubar3_unique():
    g = gr.catalog("product(2,2)")
    pres = g.known_presentation
    sh = ut.UniShape(3, 2, True)
    for c1, c2 in itertools.product(chars_of(g), repeat=2):
        rows = char_rows_for(g, [c1, c2])
        lifts = msy.lift_search(pres, rows, sh)
        assert len(lifts) == 1


def test_lift_search_rejects_degenerate_size():
    with pytest.raises(ValueError):
        ut.UniShape(2, 2)


def test_lift_search_validates_characters():
    pres = gr.Presentation(1, ((1, 1),))
    with pytest.raises(ValueError):
        # the nontrivial character of Z/2 squared is not a relator-killer
        # for x^2 when asked mod 3
        msy.lift_search(pres, [(1,), (0,)], ut.UniShape(3, 3))


def test_lift_search_budget():
    pres = msy.example_group_presentation()
    with pytest.raises(BudgetExceeded):
        msy.lift_search(pres, [(1, 1), (1, 0), (1, 0)], ut.UniShape(4, 2),
                        budget=4)


def test_lift_images_respect_relators_and_superdiagonal():
    pres = msy.example_group_presentation()
    rows = [(1, 1), (1, 0), (1, 0)]
    sh = ut.UniShape(4, 2, True)
    for lift in msy.lift_search(pres, rows, sh):
        assert gr.evaluate_word(pres.relators[0], lift.images).is_identity()
        for gidx, img in enumerate(lift.images):
            for i in range(1, 4):
                assert img.entry(i, i + 1) == rows[i - 1][gidx]


# ---------------------------------------------------------------------------
# obstruction classes
# ---------------------------------------------------------------------------

def test_obstruction_of_example_lift_does_not_vanish():
    pres = msy.example_group_presentation()
    sh = ut.UniShape(4, 2)
    ta = ut.project_bar(ut.i_plus_n(sh))
    tb = ut.from_entries(sh.barred_shape(), {(1, 2): 1})
    lifts = msy.lift_search(pres, [(1, 1), (1, 0), (1, 0)],
                            sh.barred_shape())
    special = [L for L in lifts if L.images == (ta, tb)]
    assert len(special) == 1
    obs = msy.lift_obstruction(special[0])
    assert not obs.is_zero_class()


def test_obstruction_of_extendable_lift_vanishes():
    # commuting diagonal triple on the Klein group: an actual unbarred
    # lift exists, so its projection has trivial obstruction
    g = gr.catalog("product(2,2)")
    pres = g.known_presentation
    rows = [(1, 0), (0, 0), (0, 1)]
    sh = ut.UniShape(4, 2)
    u_lifts = msy.lift_search(pres, rows, sh)
    assert u_lifts
    proj = msy.UniLift(pres, sh.barred_shape(),
                       tuple(ut.project_bar(m) for m in u_lifts[0].images),
                       u_lifts[0].characters)
    assert msy.lift_obstruction(proj).is_zero_class()


def test_obstruction_zero_tuple():
    g = gr.catalog("cyclic(2)")
    pres = g.known_presentation
    rows = [(0,), (0,), (0,)]
    sh = ut.UniShape(4, 2, True)
    lifts = msy.lift_search(pres, rows, sh)
    zero_lift = [L for L in lifts
                 if all(not any(m.entries) for m in L.images)]
    assert len(zero_lift) == 1
    assert msy.lift_obstruction(zero_lift[0]).is_zero_class()


def test_obstruction_requires_barred():
    g = gr.catalog("cyclic(2)")
    pres = g.known_presentation
    lifts = msy.lift_search(pres, [(0,), (0,), (0,)], ut.UniShape(4, 2))
    with pytest.raises(InvalidSystem):
        msy.lift_obstruction(lifts[0])


def test_value_formula_against_obstruction():
    # for every corner-free lift found, the extracted system's value is
    # the negative of the obstruction class, compared on the group
    g = gr.catalog("u3(2)")
    pres = g.known_presentation
    cs = chars_of(g)
    rng = random.Random(10)
    sh = ut.UniShape(4, 2, True)
    for _ in range(6):
        tup = [rng.choice(cs) for _ in range(3)]
        rows = char_rows_for(g, tup)
        for lift in msy.lift_search(pres, rows, sh)[:4]:
            ds = msy.defining_system_from_lift(lift, g)
            val = msy.defining_system_value(ds)
            imgs = msy.induced_images(lift, g)
            obs = msy.obstruction_cochain_on(g, imgs, 2)
            assert chm.class_equal(val.representative, obs.scale(-1))


# ---------------------------------------------------------------------------
# Dwyer-type agreement between the two decision routes
# ---------------------------------------------------------------------------

def test_agreement_triples_u3():
    g = gr.catalog("u3(2)")
    pres = g.known_presentation
    cs = chars_of(g)
    sh = ut.UniShape(4, 2)
    rng = random.Random(11)
    for _ in range(10):
        tup = [rng.choice(cs) for _ in range(3)]
        rows = char_rows_for(g, tup)
        status = msy.massey_status_finite(g, tup)
        ubar = msy.lift_search(pres, rows, sh.barred_shape())
        u = msy.lift_search(pres, rows, sh)
        assert status.defined == (len(ubar) >= 1)
        assert status.vanishes == (len(u) >= 1)


# ---------------------------------------------------------------------------
# degenerate fourfold criterion
# ---------------------------------------------------------------------------

def test_fourfold_zero_tail():
    g = gr.catalog("product(2,2)")
    chi1 = chm.character(g, [0, 0, 1, 1], 2)
    zero = chm.character(g, [0, 0, 0, 0], 2)
    rep = msy.degenerate_fourfold_criterion(g, chi1, zero, zero)
    assert rep.lhs_defined and rep.lhs_vanishes
    assert rep.rhs_vanishing_witness is not None
    assert rep.agree


def test_fourfold_klein_instance():
    g = gr.catalog("product(2,2)")
    chi1 = chm.character(g, [0, 0, 1, 1], 2)
    chi2 = chm.character(g, [0, 1, 0, 1], 2)
    rep = msy.degenerate_fourfold_criterion(g, chi1, chi2, chi2)
    assert rep.agree


def test_fourfold_sweep_order8():
    for name in ("cyclic(8)", "product(2,4)", "dihedral(8)",
                 "quaternion8", "u3(2)"):
        g = gr.catalog(name)
        cs = chars_of(g)
        rng = random.Random(12)
        triples = [tuple(rng.choice(cs) for _ in range(3)) for _ in range(6)]
        for chi1, chi2, chi3 in triples:
            if not chi1.values.any():
                continue
            rep = msy.degenerate_fourfold_criterion(g, chi1, chi2, chi3)
            assert rep.agree, (name, rep)


def test_fourfold_sweep_exhaustive_elementary8():
    g = gr.catalog("elementary(2,3)")
    cs = chars_of(g)
    for chi1 in cs:
        if not chi1.values.any():
            continue
        for chi2, chi3 in itertools.product(cs, repeat=2):
            rep = msy.degenerate_fourfold_criterion(g, chi1, chi2, chi3)
            assert rep.agree


# ---------------------------------------------------------------------------
# the bundled worked example
# ---------------------------------------------------------------------------

def test_worked_example_report():
    rep = msy.verify_worked_example()
    assert rep.reduction_surjective == {2: True, 3: True, 4: True}
    assert rep.subgroup_free_rank == 2
    assert rep.subgroup_torsion == (2,)
    assert rep.chi_values == (0, 1, 0)
    assert rep.chi_on_commutator == 1
    assert not rep.chi_lifts_mod4
    assert rep.ubar_lift_count >= 1
    assert rep.u_lift_count == 0
    assert rep.all_pass


def test_example_subgroup_presentation_label():
    pres = msy.example_subgroup_presentation()
    assert pres.generator_count == 3
    ab = gr.abelianization(pres)
    assert ab.free_rank == 2 and ab.torsion == (2,)
