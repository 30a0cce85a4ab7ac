"""Exact linear algebra over Z/nZ via the Howell normal form.

Z/nZ is not a field for composite n, so plain Gaussian elimination does not
give canonical forms, kernels or solvability tests.  The Howell form does:
it is the unique row-echelon-like canonical form of the row span of a matrix
over Z/nZ (Howell 1986; Storjohann-Mulders 1998).  Everything here is built
on one routine, :func:`howell`, which returns the form together with a
transformation matrix and a spanning set of the left kernel.

Conventions: matrices are numpy int64 arrays with entries reduced into
[0, n).  Row convention for the core (`x @ A`); the `*_right` wrappers
expose the column convention (`A @ x`) used by the rest of the package.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd
from typing import NamedTuple, Optional

import numpy as np


def _as_mod_array(a, n: int) -> np.ndarray:
    out = np.asarray(a, dtype=np.int64) % n
    return out


def gcdex(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (g, s, t) with s*a + t*b = g = gcd(a, b).

    >>> gcdex(12, 8)
    (4, 1, -1)
    """
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def modinv(a: int, n: int) -> int:
    """Inverse of a unit a modulo n; raises ValueError for non-units."""
    g, s, _ = gcdex(a % n, n)
    if g != 1:
        raise ValueError(f"{a} is not a unit modulo {n}")
    return s % n


def stab_unit(a: int, n: int) -> int:
    """A unit x mod n with x*a == gcd(a, n) mod n.  For a == 0 returns 1.

    Used to scale Howell pivots to their minimal representatives (divisors
    of n).

    >>> stab_unit(8, 12), (stab_unit(8, 12) * 8) % 12
    (5, 4)
    """
    a %= n
    if a == 0:
        return 1
    g = gcd(a, n)
    s = a // g
    d = n // g
    # s need not be a unit mod n; s + t*d is coprime to n for some small t.
    c = s
    while gcd(c, n) != 1:
        c += d
    return modinv(c, n)


def annihilator(a: int, n: int) -> int:
    """Generator of the annihilator ideal of a in Z/nZ: n // gcd(a, n) mod n."""
    if a % n == 0:
        return 1 % n
    return (n // gcd(a, n)) % n


class HowellForm(NamedTuple):
    """Howell form of the row span of a matrix A over Z/nZ.

    h: the canonical Howell rows (zero rows dropped), h = t @ A mod n.
    t: transformation rows.
    k: rows spanning the left kernel {x : x @ A == 0 mod n}.
    pivots: column index of each Howell row's pivot.
    """

    h: np.ndarray
    t: np.ndarray
    k: np.ndarray
    pivots: tuple


def howell(a, n: int) -> HowellForm:
    """Howell normal form with transformation and left-kernel rows.

    >>> hf = howell([[8, 5, 5], [0, 9, 8], [0, 0, 10]], 12)
    >>> hf.h
    array([[4, 1, 0],
           [0, 3, 0],
           [0, 0, 1]])
    """
    a = np.atleast_2d(_as_mod_array(a, n))
    nrows, ncols = a.shape
    h = a.copy()
    t = np.eye(nrows, dtype=np.int64)

    r = 0
    for c in range(ncols):
        m = h.shape[0]
        j = r
        while j < m and h[j, c] == 0:
            j += 1
        if j == m:
            continue
        if j > r:
            h[[r, j]] = h[[j, r]]
            t[[r, j]] = t[[j, r]]
        # scale the pivot to gcd(pivot, n), a divisor of n
        x = stab_unit(int(h[r, c]), n)
        if x != 1:
            h[r] = (x * h[r]) % n
            t[r] = (x * t[r]) % n
        # clear below the pivot with unimodular 2x2 updates
        for i in range(r + 1, m):
            if h[i, c] % n == 0:
                continue
            g, s_, t_ = gcdex(int(h[r, c]), int(h[i, c]))
            u_ = -(int(h[i, c]) // g)
            v_ = int(h[r, c]) // g
            row_r = (s_ * h[r] + t_ * h[i]) % n
            row_i = (u_ * h[r] + v_ * h[i]) % n
            h[r], h[i] = row_r, row_i
            row_r = (s_ * t[r] + t_ * t[i]) % n
            row_i = (u_ * t[r] + v_ * t[i]) % n
            t[r], t[i] = row_r, row_i
        # reduce entries above the pivot
        b = int(h[r, c])
        for i in range(r):
            q = int(h[i, c]) // b
            if q:
                h[i] = (h[i] - q * h[r]) % n
                t[i] = (t[i] - q * t[r]) % n
        # a zero-divisor pivot contributes an extra span row (Howell property);
        # after scaling the pivot equals gcd(original, n), so it divides n
        if b > 1:
            x = n // b
            h = np.vstack([h, (x * h[r]) % n])
            t = np.vstack([t, (x * t[r]) % n])
        r += 1

    nonzero = h.any(axis=1)
    # all zero rows sit at the bottom: every processed column is cleared below r
    hn = h[:r][nonzero[:r]] if r else h[:0]
    k = t[r:]
    k = k[k.any(axis=1)]
    tn = t[:r][nonzero[:r]] if r else t[:0]
    pivots = tuple(int(np.nonzero(row)[0][0]) for row in hn)
    return HowellForm(hn, tn, k, pivots)


def reduce_against(hf: HowellForm, v, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduce v against Howell rows; returns (coefficients, residue).

    v is in the row span iff the residue is zero; then coeffs @ hf.h == v.
    """
    v = _as_mod_array(v, n).copy()
    coeffs = np.zeros(hf.h.shape[0], dtype=np.int64)
    for i, p in enumerate(hf.pivots):
        if v[p] == 0:
            continue
        b = int(hf.h[i, p])
        g = gcd(b, n)
        if int(v[p]) % g != 0:
            # cannot be cleared: no later row touches this pivot column
            continue
        q = (int(v[p]) // g) * modinv(b // g, n // g) % (n // g)
        coeffs[i] = q
        v = (v - q * hf.h[i]) % n
    return coeffs, v


def in_row_span(hf: HowellForm, v, n: int) -> bool:
    _, res = reduce_against(hf, v, n)
    return not res.any()


def solve_right(a, b, n: int) -> Optional[np.ndarray]:
    """One solution x of A @ x == b mod n, or None if unsolvable."""
    a = np.atleast_2d(_as_mod_array(a, n))
    hf = howell(a.T, n)
    coeffs, res = reduce_against(hf, b, n)
    if res.any():
        return None
    return (coeffs @ hf.t) % n


def kernel_right(a, n: int) -> np.ndarray:
    """Rows spanning {x : A @ x == 0 mod n}."""
    a = np.atleast_2d(_as_mod_array(a, n))
    return howell(a.T, n).k


def is_invertible(a, n: int) -> bool:
    """Whether a square matrix is invertible over Z/nZ."""
    a = np.atleast_2d(_as_mod_array(a, n))
    m = a.shape[0]
    if a.shape[0] != a.shape[1]:
        return False
    h = howell(a, n).h
    return h.shape == (m, m) and bool((h == np.eye(m, dtype=np.int64)).all())


def inverse_matrix(a, n: int) -> np.ndarray:
    """Inverse of a square matrix over Z/nZ; raises ValueError if singular."""
    a = np.atleast_2d(_as_mod_array(a, n))
    m = a.shape[0]
    hf = howell(a, n)
    if hf.h.shape != (m, m) or not (hf.h == np.eye(m, dtype=np.int64)).all():
        raise ValueError("matrix is not invertible modulo %d" % n)
    return hf.t % n


def span_size(hf: HowellForm, n: int) -> int:
    """Number of elements of the row span of a Howell form."""
    size = 1
    for i, p in enumerate(hf.pivots):
        size *= n // gcd(int(hf.h[i, p]), n)
    return size


def same_row_span(a, b, n: int) -> bool:
    """Whether two matrices have the same row span (canonical forms equal)."""
    ha = howell(a, n).h
    hb = howell(b, n).h
    return ha.shape == hb.shape and bool((ha == hb).all())


@lru_cache(maxsize=None)
def prime_factors(n: int) -> tuple[int, ...]:
    """Distinct prime factors of n by trial division (n is desk-scale)."""
    ps = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            ps.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        ps.append(m)
    return tuple(ps)


def _inv_table(p: int) -> np.ndarray:
    t = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        t[a] = pow(a, p - 2, p)
    return t


def batch_nonsingular(mats: np.ndarray, p: int) -> np.ndarray:
    """Vectorized nonsingularity test over F_p for a batch of square matrices.

    mats: (B, k, k) int array.  Returns a boolean mask of length B.
    """
    m = (np.asarray(mats, dtype=np.int64) % p).copy()
    bsz, k, _ = m.shape
    ok = np.ones(bsz, dtype=bool)
    inv = _inv_table(p)
    rows = np.arange(bsz)
    for c in range(k):
        sub = m[:, c:, c]
        nz = sub != 0
        has = nz.any(axis=1)
        ok &= has
        piv = np.argmax(nz, axis=1) + c
        piv[~has] = c  # keep indices valid for the dead batches
        swap = piv != c
        if swap.any():
            w = rows[swap]
            pv = piv[swap]
            tmp = m[w, c, :].copy()
            m[w, c, :] = m[w, pv, :]
            m[w, pv, :] = tmp
        pivval = m[:, c, c].copy()
        pivval[pivval == 0] = 1
        m[:, c, :] = (m[:, c, :] * inv[pivval][:, None]) % p
        if c + 1 < k:
            factors = m[:, c + 1 :, c]
            m[:, c + 1 :, :] = (m[:, c + 1 :, :] - factors[:, :, None] * m[:, c : c + 1, :]) % p
    return ok


def batch_is_unit(coeffs: np.ndarray, struct: np.ndarray, n: int) -> np.ndarray:
    """Unit mask for a batch of ring elements given by coefficient rows.

    Elements of a finite Z/nZ-algebra are units iff they are units modulo
    every prime p | n (the kernel of reduction is nilpotent), which reduces
    to nonsingularity of the multiplication matrix over F_p.
    """
    coeffs = np.asarray(coeffs, dtype=np.int64)
    mulmats = np.einsum("bi,ijk->bkj", coeffs, np.asarray(struct, dtype=np.int64)) % n
    mask = np.ones(coeffs.shape[0], dtype=bool)
    for p in prime_factors(n):
        mask &= batch_nonsingular(mulmats, p)
    return mask
