"""Cosickle census, monoid quotients, Brauer classes and refinement compare.

A 2-cosickle is any u in S^⊗3 (invertible or not) with u_1 u_3 = u_2 u_4;
it is almost invertible when the partial collapses u^1 u^2 ⊗ u^3 and
u^1 ⊗ u^2 u^3 are units of S^⊗2.  Sweeping all of S^⊗3 yields the chain

    unit 2-cocycles  ⊂  almost invertible cosickles  ⊂  cosickles,

which under twisting matches Azumaya corings ⊂ counital corings ⊂
coassociative comultiplications with normal basis.  Dividing the two
cosickle monoids by the coboundary group B^2 gives the monoids whose
invertible parts recover H^2.  Brauer classes of Azumaya normal-basis
corings are cocycle classes; corings over different extensions of the same
base are compared after refining both to S⊗T.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import zmod
from .amitsur import TwistElement, _witness_search, delta1
from .coring import (
    NormalBasisCoring,
    _delta_tensor_id,
    _id_tensor_delta,
    external_product,
    is_azumaya,
    recover_twist,  # noqa: F401  (twist recovery is part of this module's surface)
    twisted_coring,
)
from .extensions import Extension
from .rings import DEFAULT_CAP, InternalCheckError, RingTooLarge, all_elements_array, enumerate_units

COSICKLE_CONDITION = "u1*u3 == u2*u4"


def is_cosickle(ext: Extension, u) -> bool:
    """The S^⊗4 identity u_1 u_3 = u_2 u_4; u need not be a unit."""
    return TwistElement(ext, np.asarray(u, dtype=np.int64) % ext.n).is_cosickle


def is_almost_invertible(ext: Extension, u) -> bool:
    """Cosickle with both partial collapses invertible in S^⊗2."""
    return TwistElement(ext, np.asarray(u, dtype=np.int64) % ext.n).is_almost_invertible


def counit_solution(ext: Extension, u) -> Optional[np.ndarray]:
    """An element v of S with u^1 v u^2 ⊗ u^3 = 1⊗1 = u^1 ⊗ u^2 v u^3, or None.

    This is the existence of a counit for the twisted comultiplication,
    decided as a linear system over Z/nZ; it is independent of the
    partial-collapse invertibility route.
    """
    u = np.asarray(u, dtype=np.int64) % ext.n
    t2 = ext.tensor_power(2)
    p = ext.merge_map(3, first=True).apply_vec(u)
    q = ext.merge_map(3, first=False).apply_vec(u)
    e1 = ext.slot_embed(2, 1).matrix
    e2 = ext.slot_embed(2, 2).matrix
    sys_mat = np.vstack(
        [
            (t2.ring.mulmat(p) @ e1) % ext.n,
            (t2.ring.mulmat(q) @ e2) % ext.n,
        ]
    )
    rhs = np.concatenate([t2.one_vec(), t2.one_vec()])
    return zmod.solve_right(sys_mat, rhs, ext.n)


def _coassoc_difference_tensor(ext: Extension) -> np.ndarray:
    """D with vec((Delta_u⊗id)Delta_u - (id⊗Delta_u)Delta_u) = sum u_i u_j D[:,i,j].

    Both triple coproducts are bilinear in u, so the direct coassociativity
    test over a sweep reduces to one quadratic form per matrix entry.
    """
    t3 = ext.tensor_power(3)
    k3 = t3.rank
    basis_corings = [
        twisted_coring(ext, np.eye(k3, dtype=np.int64)[i]) for i in range(k3)
    ]
    deltas = [c.comultiplication for c in basis_corings]
    m1 = [_delta_tensor_id(c) for c in basis_corings]
    m2 = [_id_tensor_delta(c) for c in basis_corings]
    k2 = ext.tensor_power(2).rank
    k4 = ext.tensor_power(4).rank
    d = np.zeros((k4 * k2, k3, k3), dtype=np.int64)
    for i in range(k3):
        for j in range(k3):
            diff = ((m1[i] @ deltas[j]) - (m2[i] @ deltas[j])) % ext.n
            d[:, i, j] = diff.reshape(-1)
    return d


@dataclass
class CosickleClassification:
    """Census of S^⊗3 with the tag chain and its cross-checking oracles."""

    ext: Extension
    elements: np.ndarray = field(repr=False)
    is_unit: np.ndarray = field(repr=False)
    is_cocycle: np.ndarray = field(repr=False)
    is_cosickle: np.ndarray = field(repr=False)
    is_almost_invertible: np.ndarray = field(repr=False)
    is_coassociative: np.ndarray = field(repr=False)
    counit_solvable: Optional[np.ndarray] = field(repr=False, default=None)
    condition: str = COSICKLE_CONDITION

    def __post_init__(self):
        chain = (
            (~self.is_cocycle | self.is_almost_invertible).all()
            and (~self.is_almost_invertible | self.is_cosickle).all()
            and (self.is_cosickle == self.is_coassociative).all()
        )
        if not chain:  # pragma: no cover - the implication chain is definitional
            raise InternalCheckError("tag implication chain violated in census")

    @property
    def admits_counit(self) -> Optional[np.ndarray]:
        """Coassociative and a counit exists (linear-solvability oracle)."""
        if self.counit_solvable is None:
            return None
        return self.is_coassociative & self.counit_solvable

    @property
    def counts(self) -> dict:
        out = {
            "elements": int(len(self.elements)),
            "units": int(self.is_unit.sum()),
            "unit_cocycles": int(self.is_cocycle.sum()),
            "cosickles": int(self.is_cosickle.sum()),
            "almost_invertible": int(self.is_almost_invertible.sum()),
            "coassociative": int(self.is_coassociative.sum()),
        }
        if self.counit_solvable is not None:
            out["admits_counit"] = int(self.admits_counit.sum())
        return out


def classify_all(
    ext: Extension,
    cap: int = DEFAULT_CAP,
    jobs: int = 1,
    counit_oracle: Optional[bool] = None,
) -> CosickleClassification:
    """Sweep all of S^⊗3 and tag every element.

    The coassociativity tag is computed by the direct two-triple-coproduct
    test (via its bilinear tensor), independently of the cosickle identity;
    the two must agree.  The counit-solvability oracle runs per element and
    is enabled automatically for sweeps of at most 4096 elements.
    """
    t2 = ext.tensor_power(2)
    t3 = ext.tensor_power(3)
    t4 = ext.tensor_power(4)
    total = t3.ring.size
    if total > cap:
        raise RingTooLarge(f"{t3.ring.name} has {total} elements, cap is {cap}")
    if counit_oracle is None:
        counit_oracle = total <= 4096
    elements = all_elements_array(t3.ring, cap=cap)
    unit_mask = np.zeros(total, dtype=bool)
    cosickle = np.zeros(total, dtype=bool)
    coassoc = np.zeros(total, dtype=bool)
    faces = [ext.face_map(3, i).matrix.T for i in range(1, 5)]
    c4 = t4.ring.struct.astype(np.int64)
    dtensor = _coassoc_difference_tensor(ext)
    chunk = 1 << 12

    def sweep(start: int) -> None:
        # writes land in disjoint slices, so chunks may run concurrently
        block = elements[start : start + chunk]
        unit_mask[start : start + chunk] = zmod.batch_is_unit(block, t3.ring.struct, ext.n)
        f = [(block @ h) % ext.n for h in faces]
        lhs = np.einsum("bi,bj,ijk->bk", f[0], f[2], c4) % ext.n
        rhs = np.einsum("bi,bj,ijk->bk", f[1], f[3], c4) % ext.n
        cosickle[start : start + chunk] = (lhs == rhs).all(axis=1)
        quad = np.einsum("bi,bj,Oij->bO", block, block, dtensor) % ext.n
        coassoc[start : start + chunk] = ~quad.any(axis=1)

    starts = list(range(0, total, chunk))
    if jobs > 1 and len(starts) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(sweep, starts))
    else:
        for start in starts:
            sweep(start)
    # almost invertible: both partial collapses are units
    merged1 = (elements @ ext.merge_map(3, first=True).matrix.T) % ext.n
    merged2 = (elements @ ext.merge_map(3, first=False).matrix.T) % ext.n
    both_units = zmod.batch_is_unit(merged1, t2.ring.struct, ext.n) & zmod.batch_is_unit(
        merged2, t2.ring.struct, ext.n
    )
    almost = cosickle & both_units
    cocycle = unit_mask & cosickle
    solvable = None
    if counit_oracle:
        solvable = np.array(
            [counit_solution(ext, row) is not None for row in elements], dtype=bool
        )
    return CosickleClassification(
        ext, elements, unit_mask, cocycle, cosickle, almost, coassoc, solvable
    )


# -- quotient monoids -----------------------------------------------------------------


_B2_CACHE: dict = {}


def _b2_rows(ext: Extension, cap: int = DEFAULT_CAP, jobs: int = 1) -> np.ndarray:
    if ext in _B2_CACHE:
        return _B2_CACHE[ext]
    units2 = enumerate_units(ext.tensor_power(2).ring, cap=cap, jobs=jobs, as_array=True)
    rows = {tuple(map(int, delta1(ext, v))) for v in units2}
    out = np.array(sorted(rows), dtype=np.int64)
    _B2_CACHE[ext] = out
    return out


@dataclass
class MonoidQuotient:
    """Orbits of the coboundary group acting on a cosickle monoid."""

    ext: Extension
    which: str
    b2: np.ndarray = field(repr=False)
    representatives: np.ndarray = field(repr=False)
    orbit_sizes: list[int] = field(repr=False)
    invertible: np.ndarray = field(repr=False)  # per representative

    @property
    def counts(self) -> dict:
        return {
            "orbits": len(self.representatives),
            "invertible_orbits": int(self.invertible.sum()),
            "b2_order": len(self.b2),
        }


def monoid_quotient(
    ext: Extension, which: str = "full", cap: int = DEFAULT_CAP, jobs: int = 1
) -> MonoidQuotient:
    """Quotient of the (almost invertible) cosickle monoid by B^2.

    which = "full" takes all cosickles, "almost" the almost invertible ones.
    Orbit representatives are the lexicographically least members.
    """
    if which not in ("full", "almost"):
        raise ValueError("which must be 'full' or 'almost'")
    census = classify_all(ext, cap=cap, jobs=jobs, counit_oracle=False)
    mask = census.is_cosickle if which == "full" else census.is_almost_invertible
    members = census.elements[mask]
    unit_lookup = {
        tuple(map(int, row)): bool(u)
        for row, u in zip(census.elements, census.is_unit)
    }
    b2 = _b2_rows(ext, cap=cap, jobs=jobs)
    t3 = ext.tensor_power(3).ring
    seen: set[tuple] = set()
    reps: list[tuple] = []
    sizes: list[int] = []
    invertible: list[bool] = []
    for row in members:
        key = tuple(map(int, row))
        if key in seen:
            continue
        orbit = {tuple(map(int, t3.mul_vec(row, b))) for b in b2}
        seen.update(orbit)
        rep = min(orbit)
        reps.append(rep)
        sizes.append(len(orbit))
        invertible.append(unit_lookup[rep])
    idx = sorted(range(len(reps)), key=lambda i: reps[i])
    return MonoidQuotient(
        ext,
        which,
        b2,
        np.array([reps[i] for i in idx], dtype=np.int64),
        [sizes[i] for i in idx],
        np.array([invertible[i] for i in idx], dtype=bool),
    )


# -- Brauer classes ------------------------------------------------------------------


class BrauerClass:
    """A cocycle class under coboundary equivalence, canonically represented.

    The representative is the lexicographically least normalized (norm 1)
    cocycle in the coset; products multiply twists and inverses invert them.
    """

    def __init__(self, ext: Extension, rep: tuple, cap: int = DEFAULT_CAP):
        self.ext = ext
        self.rep = rep
        self._cap = cap

    @classmethod
    def of_twist(cls, tw: TwistElement, cap: int = DEFAULT_CAP) -> "BrauerClass":
        from .amitsur import is_two_cocycle

        if not is_two_cocycle(tw):
            raise ValueError("Brauer classes are classes of unit 2-cocycles")
        ext = tw.ext
        b2 = _b2_rows(ext, cap=cap)
        t3 = ext.tensor_power(3).ring
        coll = ext.collapse_map(3).matrix
        orbit = np.array(
            sorted({tuple(map(int, t3.mul_vec(tw.u.coeffs, b))) for b in b2}), dtype=np.int64
        )
        norms = (orbit @ coll.T) % ext.n
        normalized = orbit[(norms == ext.top.one).all(axis=1)]
        if not len(normalized):  # pragma: no cover - every coset has norm-1 members
            raise InternalCheckError("coset contains no normalized cocycle")
        return cls(ext, tuple(map(int, normalized[0])), cap=cap)

    def twist(self) -> TwistElement:
        return TwistElement(self.ext, np.array(self.rep, dtype=np.int64))

    def __mul__(self, other: "BrauerClass") -> "BrauerClass":
        if self.ext != other.ext:
            raise ValueError("classes over different extensions")
        t3 = self.ext.tensor_power(3).ring
        prod = t3.mul_vec(np.array(self.rep), np.array(other.rep))
        return BrauerClass.of_twist(TwistElement(self.ext, prod), cap=self._cap)

    def inverse(self) -> "BrauerClass":
        tw = self.twist()
        return BrauerClass.of_twist(TwistElement(self.ext, tw.inverse.coeffs), cap=self._cap)

    def is_identity(self) -> bool:
        return self == BrauerClass.of_twist(
            TwistElement(self.ext, self.ext.tensor_power(3).one_vec()), cap=self._cap
        )

    def __eq__(self, other):
        return isinstance(other, BrauerClass) and self.ext == other.ext and self.rep == other.rep

    def __hash__(self):
        return hash((self.ext, self.rep))

    def __repr__(self):
        return f"BrauerClass({list(self.rep)} over {self.ext.name})"


def brauer_class(c: NormalBasisCoring, cap: int = DEFAULT_CAP) -> BrauerClass:
    """The class of an Azumaya normal-basis coring: its twist's cocycle class."""
    if not is_azumaya(c):
        raise ValueError("Brauer classes are classes of Azumaya corings")
    return BrauerClass.of_twist(c.twist, cap=cap)


# -- comparison after refinement -------------------------------------------------------


@dataclass
class RefinementComparison:
    equivalent: bool
    refined_ext: Extension
    left_twist: np.ndarray = field(repr=False)
    right_twist: np.ndarray = field(repr=False)
    witness: Optional[np.ndarray] = field(repr=False, default=None)


def compare_via_refinement(
    c: NormalBasisCoring, d: NormalBasisCoring, cap: int = DEFAULT_CAP
) -> RefinementComparison:
    """Brauer-compare Azumaya corings over S/R and T/R on the refinement S⊗T.

    Both corings are refined by external product with the canonical coring
    of the other side's algebra (the twists interleave with 1), and the
    refined twists are tested for cohomologousness over (S⊗T)/R.
    """
    if not (is_azumaya(c) and is_azumaya(d)):
        raise ValueError("refinement comparison is for Azumaya corings")
    if c.ext.base != d.ext.base:
        raise ValueError("corings over different base rings")
    from .coring import canonical_coring

    left = external_product(c, canonical_coring(d.ext))
    right = external_product(canonical_coring(c.ext), d)
    if left.ext != right.ext:  # pragma: no cover - same construction on both sides
        raise InternalCheckError("refinement produced mismatched extensions")
    w = _witness_search(left.ext, left.twist.u.coeffs, right.twist.u.coeffs, cap)
    return RefinementComparison(
        w is not None, left.ext, left.twist.u.coeffs, right.twist.u.coeffs, w
    )
