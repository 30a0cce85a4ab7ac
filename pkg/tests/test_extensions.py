"""Tensor powers, face/collapse maps, simplicial identities, rebasing."""

import itertools

import numpy as np
import pytest

from corings.extensions import (
    amitsur_rebase,
    external_extension,
    interleave,
    rebase_iso,
    rebase_pushforward,
)
from corings.rings import RingHom, RingTooLarge, enumerate_units


def test_tensor_power_ranks(f4_over_f2, gr42_over_z4):
    for ext in (f4_over_f2, gr42_over_z4):
        for m in (1, 2, 3, 4):
            t = ext.tensor_power(m)
            assert t.rank == ext.base.rank * ext.degree**m
            t.ring.validate()


def test_tensor_power_level_one_is_top(f4_over_f2):
    assert f4_over_f2.tensor_power(1).ring is f4_over_f2.top


def test_tensor_square_of_f4_splits(f4_over_f2):
    """F4 ⊗ F4 over F2 is F4 x F4: four idempotents, nine units."""
    t2 = f4_over_f2.tensor_power(2)
    idem = 0
    for coeffs in itertools.product(range(2), repeat=4):
        v = np.array(coeffs)
        if (t2.ring.mul_vec(v, v) == v).all():
            idem += 1
    assert idem == 4
    assert len(enumerate_units(t2.ring)) == 9


def test_units_of_f4_cube(f4_over_f2):
    t3 = f4_over_f2.tensor_power(3)
    assert len(enumerate_units(t3.ring)) == 81


def test_face_maps_are_ring_homs(f4_over_f2, gr42_over_z4):
    for ext in (f4_over_f2, gr42_over_z4):
        for m in (1, 2, 3):
            for i in range(1, m + 2):
                h = ext.face_map(m, i)
                assert h.is_unital() and h.is_multiplicative()


def test_face_map_inserts_one(f4_over_f2):
    ext = f4_over_f2
    a = ext.top.basis_element(1).coeffs
    one = ext.top.one
    t2, t3 = ext.tensor_power(2), ext.tensor_power(3)
    st = t2.embed_pure([a, one])
    # eta_2(s⊗t) = s⊗1⊗t
    assert (ext.face_map(2, 2).apply_vec(st) == t3.embed_pure([a, one, one])).all()
    # eta_1(s⊗t) = 1⊗s⊗t
    assert (ext.face_map(2, 1).apply_vec(st) == t3.embed_pure([one, a, one])).all()


def test_simplicial_identities(f4_over_f2, gr42_over_z4):
    """eta_j ∘ eta_i = eta_i ∘ eta_{j-1} for i < j, on every basis element."""
    for ext in (f4_over_f2, gr42_over_z4):
        for m in (1, 2):
            for j in range(1, m + 3):
                for i in range(1, j):
                    lhs = ext.face_map(m + 1, j).compose(ext.face_map(m, i))
                    rhs = ext.face_map(m + 1, i).compose(ext.face_map(m, j - 1))
                    assert (lhs.matrix == rhs.matrix).all(), (m, i, j)


def test_collapse_map(f4_over_f2):
    ext = f4_over_f2
    t3 = ext.tensor_power(3)
    m3 = ext.collapse_map(3)
    a = ext.top.basis_element(1).coeffs
    assert (m3.apply_vec(t3.one_vec()) == ext.top.one).all()
    # m(a⊗a⊗a) = a^3 = 1 in F4
    assert (m3.apply_vec(t3.embed_pure([a, a, a])) == ext.top.one).all()
    # m ∘ eta_i = m at every level and slot
    for m in (1, 2, 3):
        coll = ext.collapse_map(m)
        coll_up = ext.collapse_map(m + 1)
        for i in range(1, m + 2):
            comp = coll_up.compose(ext.face_map(m, i))
            assert (comp.matrix == coll.matrix).all()


def test_merge_maps_multiply_adjacent_slots(f4_over_f2):
    ext = f4_over_f2
    t3 = ext.tensor_power(3)
    a = ext.top.basis_element(1).coeffs
    one = ext.top.one
    v = t3.embed_pure([a, a, one])
    first = ext.merge_map(3, first=True)
    last = ext.merge_map(3, first=False)
    t2 = ext.tensor_power(2)
    aa = ext.top.mul_vec(a, a)
    assert (first.apply_vec(v) == t2.embed_pure([aa, one])).all()
    assert (last.apply_vec(v) == t2.embed_pure([a, a])).all()
    assert first.is_multiplicative() and last.is_multiplicative()


def test_slot_embed(gr42_over_z4):
    ext = gr42_over_z4
    x = ext.top.basis_element(1).coeffs
    one = ext.top.one
    t3 = ext.tensor_power(3)
    for i, expect in [
        (1, [x, one, one]),
        (2, [one, x, one]),
        (3, [one, one, x]),
    ]:
        h = ext.slot_embed(3, i)
        assert (h.apply_vec(x) == t3.embed_pure(expect)).all()


def test_rank_cap(f4_over_f2):
    with pytest.raises(RingTooLarge):
        f4_over_f2.tensor_power(30)


def test_extension_rejects_non_basis(f2, f4):
    eta = RingHom(f2, f4, np.outer(f4.one, f2.one) % 2)
    from corings.extensions import Extension

    with pytest.raises(ValueError):
        Extension(f2, f4, eta, np.array([[1, 0], [1, 0]]))  # dependent rows


def test_rebase_along_top_is_amitsur_extension(f4_over_f2):
    ext = f4_over_f2
    reb = amitsur_rebase(ext)
    assert reb.base == ext.top
    assert reb.degree == ext.degree
    reb.top.validate()
    # natural iso at levels 1..3 is a ring isomorphism onto S^{⊗(m+1)}
    for m in (1, 2, 3):
        iso = rebase_iso(ext, reb, m)
        src = reb.tensor_power(m).ring
        tgt = ext.tensor_power(m + 1).ring
        hom = RingHom(src, tgt, iso)  # validates unital + multiplicative
        from corings import zmod

        assert zmod.is_invertible(iso, ext.n)


def test_rebase_pushforward_matches_iso_and_face(f4_over_f2):
    """Pushing u ∈ S^⊗3 to (S⊗S)^{⊗_S 3} then down the natural iso is u_4."""
    ext = f4_over_f2
    reb = amitsur_rebase(ext)
    push = rebase_pushforward(ext, reb, ext.eta, 3)
    iso3 = rebase_iso(ext, reb, 3)
    eta4 = ext.face_map(3, 4).matrix
    assert (((iso3 @ push) - eta4) % ext.n == 0).all()


def test_external_extension_of_f4_with_itself(f4_over_f2):
    ext = f4_over_f2
    big = external_extension(ext, ext)
    assert big.degree == 4
    assert big.top.rank == 4
    big.top.validate()
    t2 = big.tensor_power(2)
    t2.ring.validate()
    assert t2.rank == 16


def test_interleave_is_multiplicative(f4_over_f2):
    """Interleaving is the ring map S^⊗3 ⊗ T^⊗3 -> (S⊗T)^⊗3 on pure pairs."""
    ext = f4_over_f2
    big = external_extension(ext, ext)
    t3 = ext.tensor_power(3)
    rng = np.random.default_rng(0)
    for _ in range(10):
        u1, u2 = rng.integers(0, 2, size=(2, t3.rank))
        v1, v2 = rng.integers(0, 2, size=(2, t3.rank))
        lhs = interleave(ext, ext, big, 3, t3.ring.mul_vec(u1, u2), t3.ring.mul_vec(v1, v2))
        big3 = big.tensor_power(3)
        rhs = big3.ring.mul_vec(
            interleave(ext, ext, big, 3, u1, v1), interleave(ext, ext, big, 3, u2, v2)
        )
        assert (lhs == rhs).all()
