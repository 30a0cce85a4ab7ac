"""Ring kernel: constructors, inverses, unit enumeration."""

import numpy as np
import pytest

from corings.rings import (
    RingTooLarge,
    enumerate_units,
    make_product_ring,
    make_quotient_ring,
    try_invert,
    zmod_ring,
)


def test_f4_defining_relation():
    f4 = make_quotient_ring(2, [1, 1, 1])
    a = f4.basis_element(1)
    assert (a * a).key() == (1, 1)  # a^2 = a + 1
    assert (a * a * a).is_one()  # a^3 = 1


def test_galois_ring_gr42():
    gr = make_quotient_ring(4, [1, 1, 1])
    assert gr.n == 4 and gr.rank == 2
    x = gr.basis_element(1)
    assert (x * x).key() == (3, 3)  # x^2 = -x - 1 mod 4


def test_split_quotient_has_idempotent():
    s = make_quotient_ring(2, [0, 1, 1])  # x^2 + x over F2
    x = s.basis_element(1)
    assert x * x == x


def test_non_monic_rejected():
    with pytest.raises(ValueError):
        make_quotient_ring(4, [1, 1, 2])  # leading coefficient 2 not a unit mod 4
    # unit leading coefficient is normalized instead
    r = make_quotient_ring(4, [1, 1, 3])
    assert r.rank == 2


def test_product_ring():
    f2 = zmod_ring(2)
    p = make_product_ring(f2, f2)
    assert p.rank == 2
    e0, e1 = p.basis_element(0), p.basis_element(1)
    assert e0 * e1 == p.zero()
    assert e0 * e0 == e0 and e1 * e1 == e1
    assert (e0 + e1).is_one()
    with pytest.raises(ValueError):
        make_product_ring(f2, zmod_ring(4))


def test_product_unit_count_multiplies():
    f4 = make_quotient_ring(2, [1, 1, 1])
    p = make_product_ring(f4, f4)
    assert len(enumerate_units(p)) == 9


def test_try_invert_f4():
    f4 = make_quotient_ring(2, [1, 1, 1])
    a = f4.basis_element(1)
    inv = try_invert(a)
    assert inv is not None and inv == a * a
    assert try_invert(f4.one_element()).is_one()


def test_try_invert_zero_divisor():
    s = make_quotient_ring(2, [0, 1, 1])
    assert try_invert(s.basis_element(1)) is None


def test_units_f4_and_f2x2():
    f4 = make_quotient_ring(2, [1, 1, 1])
    units = enumerate_units(f4)
    assert [u.key() for u in units] == [(0, 1), (1, 0), (1, 1)]
    s = make_quotient_ring(2, [0, 1, 1])
    assert [u.key() for u in enumerate_units(s)] == [(1, 0)]


def test_units_match_try_invert_exhaustively():
    for ring in (make_quotient_ring(4, [1, 1, 1]), make_quotient_ring(2, [0, 1, 1])):
        units = {u.key() for u in enumerate_units(ring)}
        from corings.rings import all_elements_array

        for row in all_elements_array(ring):
            e = ring.element(row)
            inv = try_invert(e)
            assert (inv is not None) == (e.key() in units)
            if inv is not None:
                assert (e * inv).is_one()


def test_unit_enumeration_cap():
    gr = make_quotient_ring(4, [1, 1, 1])
    with pytest.raises(RingTooLarge):
        enumerate_units(gr, cap=3)


def test_units_deterministic_across_jobs():
    gr = make_quotient_ring(4, [1, 1, 1])
    one_worker = [u.key() for u in enumerate_units(gr, jobs=1)]
    four_workers = [u.key() for u in enumerate_units(gr, jobs=4)]
    assert one_worker == four_workers
    assert len(one_worker) == 12  # |GR(4,2)*| = 16 - 4


def test_ring_validation_catches_bad_structure():
    import numpy as np

    from corings.rings import FiniteRing

    bad = np.zeros((2, 2, 2), dtype=np.int64)
    bad[0, 0, 0] = 1
    bad[0, 1, 1] = 1
    bad[1, 0, 0] = 1  # not commutative with [1,0]->e_0 but [0,1]->e_1
    with pytest.raises(ValueError):
        FiniteRing(2, bad, [1, 0])


def test_units_of_zmod_rings():
    from corings.rings import zmod_ring

    assert [u.key() for u in enumerate_units(zmod_ring(4))] == [(1,), (3,)]
    assert [u.key() for u in enumerate_units(zmod_ring(6))] == [(1,), (5,)]
