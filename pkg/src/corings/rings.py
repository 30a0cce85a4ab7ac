"""Finite commutative rings presented by structure constants over Z/nZ.

A ring here is a free Z/nZ-module of rank r with a commutative associative
unital multiplication given by an (r, r, r) structure tensor:
e_i * e_j = sum_k c[i, j, k] e_k.  Concrete rings come from monic polynomial
quotients Z/nZ[x]/(f) (finite fields, Galois rings) and finite products.

Elements are dense coefficient vectors reduced into [0, n); whenever an
ordering matters it is the lexicographic order on coefficient tuples.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Optional

import numpy as np

from . import zmod

DEFAULT_CAP = 2**20  # elements, for exhaustive enumeration
DEFAULT_RANK_CAP = 600  # structure tensors are rank^3 entries


class RingTooLarge(Exception):
    """Raised when an exhaustive operation would exceed the configured cap."""


class InternalCheckError(AssertionError):
    """Two independent computations of the same quantity disagreed."""


def _struct_dtype(n: int):
    if n <= 127:
        return np.int8
    if n <= 32767:
        return np.int16
    return np.int64


class FiniteRing:
    """A finite commutative ring, free over Z/nZ with structure constants."""

    def __init__(self, modulus: int, structure, one, name: str = "", check: bool = True):
        if modulus < 2:
            raise ValueError("modulus must be at least 2")
        self.n = int(modulus)
        c = np.asarray(structure, dtype=np.int64) % self.n
        if c.ndim != 3 or c.shape[0] != c.shape[1] or c.shape[1] != c.shape[2]:
            raise ValueError("structure constants must form an (r, r, r) array")
        self.rank = c.shape[0]
        self.struct = c.astype(_struct_dtype(self.n))
        self.one = np.asarray(one, dtype=np.int64) % self.n
        if self.one.shape != (self.rank,):
            raise ValueError("unit coefficient vector has wrong length")
        self.name = name or f"ring(n={self.n},r={self.rank})"
        if check:
            self.validate()

    # -- arithmetic on raw coefficient vectors ------------------------------

    def mul_vec(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        c = self.struct
        nx = np.nonzero(x)[0]
        ny = np.nonzero(y)[0]
        # sparse path: tensor powers of small rings have huge rank but the
        # elements we multiply there are sparse
        if len(nx) * len(ny) <= 4 * self.rank:
            out = np.zeros(self.rank, dtype=np.int64)
            for i in nx:
                xi = int(x[i])
                block = c[i][ny].astype(np.int64)  # (|ny|, rank)
                out += xi * (y[ny] @ block)
            return out % self.n
        return np.einsum("i,j,ijk->k", x.astype(np.int64), y.astype(np.int64), c) % self.n

    def mulmat(self, x: np.ndarray) -> np.ndarray:
        """Matrix of multiplication by x in the module basis."""
        return np.einsum("i,ijk->kj", np.asarray(x, dtype=np.int64), self.struct) % self.n

    def pow_vec(self, x: np.ndarray, e: int) -> np.ndarray:
        out = self.one.copy()
        base = x % self.n
        while e:
            if e & 1:
                out = self.mul_vec(out, base)
            base = self.mul_vec(base, base)
            e >>= 1
        return out

    # -- elements ------------------------------------------------------------

    def element(self, coeffs) -> "RingElement":
        v = np.asarray(coeffs, dtype=np.int64) % self.n
        if v.shape != (self.rank,):
            raise ValueError(f"expected {self.rank} coefficients, got {v.shape}")
        return RingElement(self, v)

    def zero(self) -> "RingElement":
        return self.element(np.zeros(self.rank, dtype=np.int64))

    def one_element(self) -> "RingElement":
        return self.element(self.one)

    def basis_element(self, i: int) -> "RingElement":
        v = np.zeros(self.rank, dtype=np.int64)
        v[i] = 1
        return self.element(v)

    @property
    def size(self) -> int:
        return self.n**self.rank

    # -- invariants ----------------------------------------------------------

    def validate(self) -> None:
        """Commutativity, associativity and unit law on all basis triples."""
        c = self.struct.astype(np.int64)
        if ((c - c.transpose(1, 0, 2)) % self.n).any():
            raise ValueError(f"{self.name}: multiplication is not commutative")
        lhs = np.einsum("ijm,mkl->ijkl", c, c) % self.n
        rhs = np.einsum("jkm,iml->ijkl", c, c) % self.n
        if ((lhs - rhs) % self.n).any():
            raise ValueError(f"{self.name}: multiplication is not associative")
        for i in range(self.rank):
            ei = np.zeros(self.rank, dtype=np.int64)
            ei[i] = 1
            if (self.mul_vec(self.one, ei) != ei).any():
                raise ValueError(f"{self.name}: unit law fails on basis element {i}")

    def __eq__(self, other):
        return (
            isinstance(other, FiniteRing)
            and self.n == other.n
            and self.rank == other.rank
            and (self.struct == other.struct).all()
            and (self.one == other.one).all()
        )

    def __hash__(self):
        if not hasattr(self, "_hash"):
            self._hash = hash((self.n, self.rank, self.struct.tobytes(), self.one.tobytes()))
        return self._hash

    def __repr__(self):
        return f"FiniteRing({self.name})"


class RingElement:
    """An element of a FiniteRing: a reduced coefficient vector."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: FiniteRing, coeffs: np.ndarray):
        self.ring = ring
        coeffs.flags.writeable = False
        self.coeffs = coeffs

    def key(self) -> tuple:
        return tuple(int(v) for v in self.coeffs)

    def __mul__(self, other: "RingElement") -> "RingElement":
        if self.ring is not other.ring and self.ring != other.ring:
            raise ValueError("elements live in different rings")
        return RingElement(self.ring, self.ring.mul_vec(self.coeffs, other.coeffs))

    def __add__(self, other: "RingElement") -> "RingElement":
        return RingElement(self.ring, (self.coeffs + other.coeffs) % self.ring.n)

    def __sub__(self, other: "RingElement") -> "RingElement":
        return RingElement(self.ring, (self.coeffs - other.coeffs) % self.ring.n)

    def __pow__(self, e: int) -> "RingElement":
        return RingElement(self.ring, self.ring.pow_vec(self.coeffs, e))

    def __eq__(self, other):
        return (
            isinstance(other, RingElement)
            and self.ring == other.ring
            and (self.coeffs == other.coeffs).all()
        )

    def __hash__(self):
        return hash((self.ring.n, self.ring.rank, self.coeffs.tobytes()))

    def is_one(self) -> bool:
        return (self.coeffs == self.ring.one).all()

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def __repr__(self):
        return f"<{list(map(int, self.coeffs))} in {self.ring.name}>"


class RingHom:
    """A unital ring homomorphism given by its matrix on module bases."""

    def __init__(self, source: FiniteRing, target: FiniteRing, matrix, check: bool = True):
        if source.n != target.n:
            raise ValueError("homomorphism between rings of different characteristic")
        self.source = source
        self.target = target
        self.matrix = np.asarray(matrix, dtype=np.int64) % target.n
        if self.matrix.shape != (target.rank, source.rank):
            raise ValueError("homomorphism matrix has wrong shape")
        if check:
            self.validate()

    def apply_vec(self, x: np.ndarray) -> np.ndarray:
        return (self.matrix @ (np.asarray(x, dtype=np.int64) % self.target.n)) % self.target.n

    def __call__(self, x: RingElement) -> RingElement:
        return self.target.element(self.apply_vec(x.coeffs))

    def compose(self, inner: "RingHom") -> "RingHom":
        """self after inner."""
        if inner.target != self.source:
            raise ValueError("composition mismatch: inner target is not the outer source")
        return RingHom(inner.source, self.target, (self.matrix @ inner.matrix) % self.target.n, check=False)

    def is_unital(self) -> bool:
        return (self.apply_vec(self.source.one) == self.target.one).all()

    def is_multiplicative(self) -> bool:
        m = self.matrix
        tgt = self.target
        # images of all basis products vs products of basis images
        lhs = np.einsum("ijk,lk->ijl", self.source.struct.astype(np.int64), m) % tgt.n
        imgs = m.T  # (source.rank, target.rank)
        prod = np.einsum("ia,abl->ibl", imgs, tgt.struct.astype(np.int64)) % tgt.n
        rhs = np.einsum("ibl,jb->ijl", prod, imgs) % tgt.n
        return not ((lhs - rhs) % tgt.n).any()

    def validate(self) -> None:
        if not self.is_unital():
            raise ValueError("map does not send 1 to 1")
        if self.source.rank * self.target.rank <= 100 * 100 and not self.is_multiplicative():
            raise ValueError("map is not multiplicative")

    def __eq__(self, other):
        return (
            isinstance(other, RingHom)
            and self.source == other.source
            and self.target == other.target
            and (self.matrix == other.matrix).all()
        )


def identity_hom(ring: FiniteRing) -> RingHom:
    return RingHom(ring, ring, np.eye(ring.rank, dtype=np.int64), check=False)


# -- constructors -------------------------------------------------------------


def _poly_name(coeffs: list[int]) -> str:
    terms = []
    for d in range(len(coeffs) - 1, -1, -1):
        c = coeffs[d]
        if c == 0:
            continue
        if d == 0:
            terms.append(str(c))
        elif d == 1:
            terms.append("x" if c == 1 else f"{c}x")
        else:
            terms.append(f"x^{d}" if c == 1 else f"{c}x^{d}")
    return " + ".join(terms) if terms else "0"


def make_quotient_ring(n: int, poly: Iterable[int]) -> FiniteRing:
    """Z/nZ[x]/(f) on the basis 1, x, ..., x^(deg f - 1).

    The leading coefficient of f must be a unit mod n; f is normalized to be
    monic.  Structure constants come from reduction of x^(i+j) modulo f.

    >>> f4 = make_quotient_ring(2, [1, 1, 1])   # x^2 + x + 1
    >>> a = f4.basis_element(1)
    >>> (a * a).key()                           # a^2 = a + 1
    (1, 1)
    """
    f = [int(c) % n for c in poly]
    while f and f[-1] == 0:
        f.pop()
    if len(f) < 2:
        raise ValueError("polynomial must have degree at least 1")
    try:
        lead_inv = zmod.modinv(f[-1], n)
    except ValueError:
        raise ValueError(f"leading coefficient {f[-1]} is not a unit modulo {n}") from None
    f = [(c * lead_inv) % n for c in f]
    deg = len(f) - 1
    # powers of x up to x^(2 deg - 2), reduced mod f
    powers = np.zeros((2 * deg - 1, deg), dtype=np.int64)
    powers[0, 0] = 1
    for k in range(1, 2 * deg - 1):
        prev = powers[k - 1]
        shifted = np.zeros(deg + 1, dtype=np.int64)
        shifted[1:] = prev
        # reduce the x^deg coefficient via x^deg = -(f[0] + ... + f[deg-1] x^(deg-1))
        top = shifted[deg]
        red = shifted[:deg].copy()
        if top:
            red = (red - top * np.array(f[:deg], dtype=np.int64)) % n
        powers[k] = red % n
    struct = np.zeros((deg, deg, deg), dtype=np.int64)
    for i in range(deg):
        for j in range(deg):
            struct[i, j] = powers[i + j]
    one = np.zeros(deg, dtype=np.int64)
    one[0] = 1
    return FiniteRing(n, struct, one, name=f"Z/{n}[x]/({_poly_name(f)})")


def make_product_ring(a: FiniteRing, b: FiniteRing) -> FiniteRing:
    """Componentwise product ring on the concatenated basis, unit (1, 1)."""
    if a.n != b.n:
        raise ValueError(f"modulus mismatch: {a.n} != {b.n}")
    r = a.rank + b.rank
    struct = np.zeros((r, r, r), dtype=np.int64)
    struct[: a.rank, : a.rank, : a.rank] = a.struct
    struct[a.rank :, a.rank :, a.rank :] = b.struct
    one = np.concatenate([a.one, b.one])
    return FiniteRing(a.n, struct, one, name=f"({a.name} x {b.name})")


def zmod_ring(n: int) -> FiniteRing:
    """Z/nZ itself, as the rank-1 quotient Z/nZ[x]/(x)."""
    ring = FiniteRing(n, np.ones((1, 1, 1), dtype=np.int64), np.ones(1, dtype=np.int64), name=f"Z/{n}")
    return ring


# -- units ---------------------------------------------------------------------


def try_invert(x: RingElement) -> Optional[RingElement]:
    """The inverse of x when it exists (unique in a commutative ring)."""
    ring = x.ring
    sol = zmod.solve_right(ring.mulmat(x.coeffs), ring.one, ring.n)
    if sol is None:
        return None
    return ring.element(sol)


def coeff_block(ring: FiniteRing, start: int, stop: int) -> np.ndarray:
    """Coefficient rows for element indices [start, stop) in lex order.

    Element index i has coefficients given by the base-n digits of i, most
    significant digit first, so increasing index is lexicographic order.
    """
    idx = np.arange(start, stop, dtype=np.int64)
    k = ring.rank
    out = np.empty((len(idx), k), dtype=np.int64)
    for j in range(k):
        out[:, j] = (idx // (ring.n ** (k - 1 - j))) % ring.n
    return out


def _unit_mask_for_block(ring: FiniteRing, start: int, stop: int) -> np.ndarray:
    block = coeff_block(ring, start, stop)
    return zmod.batch_is_unit(block, ring.struct, ring.n)


def enumerate_units(
    ring: FiniteRing, cap: int = DEFAULT_CAP, jobs: int = 1, as_array: bool = False
):
    """All invertible elements, in lexicographic coefficient order.

    Work may be partitioned across threads with `jobs`; the merged result is
    identical for every worker count.
    """
    total = ring.size
    if total > cap:
        raise RingTooLarge(f"{ring.name} has {total} elements, cap is {cap}")
    if total > 2**62:
        raise RingTooLarge("enumeration beyond 2^62 elements is unsupported")
    chunk = 1 << 13
    starts = list(range(0, total, chunk))
    if jobs > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            masks = list(
                pool.map(lambda s: _unit_mask_for_block(ring, s, min(s + chunk, total)), starts)
            )
    else:
        masks = [_unit_mask_for_block(ring, s, min(s + chunk, total)) for s in starts]
    rows = [
        coeff_block(ring, s, min(s + chunk, total))[m] for s, m in zip(starts, masks)
    ]
    units = np.vstack(rows) if rows else np.zeros((0, ring.rank), dtype=np.int64)
    if as_array:
        return units
    return [ring.element(v) for v in units]


def all_elements_array(ring: FiniteRing, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Coefficient rows of every ring element in lexicographic order."""
    total = ring.size
    if total > cap:
        raise RingTooLarge(f"{ring.name} has {total} elements, cap is {cap}")
    return coeff_block(ring, 0, total)
