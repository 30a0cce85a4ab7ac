"""Amitsur 2-cohomology of the units functor, end to end.

We work with the degree-2 extensions F4/F2 and GR(4,2)/Z4, enumerate the
units of the tensor powers S^⊗2 and S^⊗3, apply the coboundaries

    delta_1(v) = v_1 v_2^{-1} v_3,        delta_2(u) = u_1 u_2^{-1} u_3 u_4^{-1},

and compute H^2 = Z^2 / B^2 exhaustively.
"""

import numpy as np

from corings import (
    TwistElement,
    check_norm_identities,
    compute_h2,
    delta1,
    delta2,
    make_quotient_ring,
    normalize,
    zmod_ring,
    enumerate_units,
)
from corings.extensions import Extension
from corings.rings import RingHom


def simple_extension(base, top):
    eta = RingHom(base, top, np.outer(top.one, base.one) % top.n)
    return Extension(base, top, eta, np.eye(top.rank, dtype=np.int64))


f2 = zmod_ring(2)
f4 = make_quotient_ring(2, [1, 1, 1])  # F4 = F2[x]/(x^2+x+1)
ext = simple_extension(f2, f4)

print(f"extension: {ext.name}, degree {ext.degree}")
t2, t3 = ext.tensor_power(2), ext.tensor_power(3)
units2 = enumerate_units(t2.ring, as_array=True)
units3 = enumerate_units(t3.ring, as_array=True)
print(f"|units(S^2)| = {len(units2)}, |units(S^3)| = {len(units3)}")

# delta_1 of the unit a⊗1 lands on the cocycle 1⊗a⊗1
a = f4.basis_element(1).coeffs
v = t2.embed_pure([a, f4.one])
u = delta1(ext, v)
print(f"delta_1(a⊗1) = {list(map(int, u))}   (the coordinates of 1⊗a⊗1)")
print(f"delta_2 of it is trivial: {bool((delta2(ext, u) == ext.tensor_power(4).one_vec()).all())}")

g = compute_h2(ext)
print(f"|Z^2| = {len(g.z2)}, |B^2| = {len(g.b2)}, |H^2| = {g.order}")
print("every cocycle is a coboundary here, as for any finite field extension")

# norms and normalization
tw = TwistElement(ext, u)
print(f"norm |1⊗a⊗1| = {list(map(int, tw.norm.coeffs))}  (that is, a)")
print(f"norm identities hold: {check_norm_identities(tw)}")
tw2, w = normalize(tw)
print(f"normalized cocycle: {list(map(int, tw2.u.coeffs))} with witness {list(map(int, w))}")

print()
z4 = zmod_ring(4)
gr = make_quotient_ring(4, [1, 1, 1])  # the Galois ring GR(4,2)
ext4 = simple_extension(z4, gr)
print(f"extension: {ext4.name}")
g4 = compute_h2(ext4)
print(f"|Z^2| = {len(g4.z2)}, |B^2| = {len(g4.b2)}, |H^2| = {g4.order}")
