"""Closed-form bounds on the number of common zeros.

Every function returns an exact Python int.  ``validity`` reports which
hypotheses of the corresponding theorems hold, so callers can annotate
rather than refuse.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial, prod

import numpy as np

from .errors import DegreeTooLarge, IndexOutOfRange, OutOfValidity, TooLarge
from .gf import field_make, matrix_rank
from .polyspace import first_nonzero, lambda_nth, lambda_size, monomials_desc_lex, nth_desc_lex
from .projgeom import monomial_values, pk, proj_points


@dataclass(frozen=True)
class BoundParams:
    q: int
    d: int
    m: int
    r: int

    def __post_init__(self):
        if self.q < 2 or self.d < 1 or self.m < 1 or self.r < 1:
            raise ValueError(f"invalid parameters {self}")
        if self.r > comb(self.m + self.d, self.d):
            raise IndexOutOfRange(f"r={self.r} exceeds dim S_d = {comb(self.m + self.d, self.d)}")


def floor_qpow(q: int, m: int, r: int) -> int:
    """floor(q^(m-r)): q^(m-r) for r <= m, and 0 for r = m + 1."""
    return q ** (m - r) if r <= m else 0


def tb_bound_general(p: BoundParams) -> int:
    """T_r(d, m) from the r-th descending-lex exponent tuple."""
    q, m = p.q, p.m
    nu = nth_desc_lex(p.m, p.d, p.r)
    j = first_nonzero(nu)
    total = pk(m - 2 * j, q)
    for i in range(j, m + 1):
        total += nu[i - 1] * (pk(m - i, q) - pk(m - i - j, q))
    return total


def tb_bound_explicit(p: BoundParams) -> int:
    """(d-1) q^(m-1) + p_{m-2} + floor(q^(m-r)), valid for d >= 2, r <= m+1."""
    if p.d < 2 or p.r > p.m + 1:
        raise OutOfValidity("explicit T_r needs d >= 2 and r <= m+1")
    return (p.d - 1) * p.q ** (p.m - 1) + pk(p.m - 2, p.q) + floor_qpow(p.q, p.m, p.r)


def hp_bound_general(p: BoundParams) -> int:
    """H_r(d, m): affine maximum for degree <= d < q in m variables."""
    if p.d >= p.q:
        raise DegreeTooLarge(f"H_r needs d < q, got d={p.d}, q={p.q}")
    alpha = lambda_nth(p.d, p.m, p.q, p.r)
    return p.q ** p.m - (1 + sum(a * p.q ** (p.m - j) for j, a in enumerate(alpha, start=1)))


def hp_bound_explicit(p: BoundParams) -> int:
    if p.d >= p.q or p.r > p.m + 1:
        raise OutOfValidity("explicit H_r needs d < q and r <= m+1")
    return (p.d - 1) * p.q ** (p.m - 1) + floor_qpow(p.q, p.m, p.r)


def hp_affine(q: int, d: int, m: int, r: int) -> int:
    """H_r(d, m) without the BoundParams range check on r (affine space has more monomials)."""
    if d >= q:
        raise DegreeTooLarge(f"H_r needs d < q, got d={d}, q={q}")
    alpha = lambda_nth(d, m, q, r)
    return q ** m - (1 + sum(a * q ** (m - j) for j, a in enumerate(alpha, start=1)))


def serre_bound(q: int, d: int, m: int) -> int:
    """d q^(m-1) + p_{m-2}; a theorem for d <= q + 1."""
    if d < 1:
        raise ValueError("d must be positive")
    return d * q ** (m - 1) + pk(m - 2, q)


def lachaud_bound(delta: int, n: int, q: int) -> int:
    if delta < 1 or n < 0:
        raise ValueError("need delta >= 1 and n >= 0")
    return delta * pk(n, q)


def conjecture_bound(p: BoundParams) -> int:
    """H_r(d-1, m) + p_{m-1}, for 1 < d < q and r <= binom(m+d-1, m)."""
    if not 1 < p.d < p.q:
        raise OutOfValidity("conjectured value needs 1 < d < q")
    if p.r > lambda_size(p.d - 1, p.m, p.q):
        raise OutOfValidity(f"conjectured value needs r <= {lambda_size(p.d - 1, p.m, p.q)}")
    return hp_affine(p.q, p.d - 1, p.m, p.r) + pk(p.m - 1, p.q)


def validity(p: BoundParams) -> dict[str, bool]:
    """Which hypotheses hold for these parameters."""
    return {
        "tbc_hypothesis": p.d < p.q - 1,
        "main_theorem": p.d < p.q - 1 and p.r <= p.m + 1,
        "explicit_tb": p.d >= 2 and p.r <= p.m + 1,
        "serre": p.d <= p.q + 1,
        "hp": p.d < p.q,
        "conjecture": 1 < p.d < p.q and p.r <= comb(p.m + p.d - 1, p.m),
    }


# -- dimension of the degree-d part of the vanishing ideal of P^m(F_q) ------------------

def gbinom(n: int, k: int) -> int:
    """Generalised binomial n(n-1)...(n-k+1)/k! for k >= 0, and 0 for k < 0."""
    if k < 0:
        return 0
    return prod(range(n - k + 1, n + 1)) // factorial(k)


def _rd_sum(q: int, d: int, m: int, term) -> int:
    total = 0
    for j in range(2, m + 2):
        inner = 0
        for i in range(0, j - 1):
            inner += term(d + (i + 1) * (q - 1) - j * q)
        total += (-1) ** j * comb(m + 1, j) * inner
    return total


def ideal_dim_rd(q: int, d: int, m: int) -> int:
    """Alternating double sum for dim I_d (d >= q + 1).

    Inner term for k = d + (i+1)(q-1) - jq is binom(k + m, m), taken as 0
    for k < 0.  This is the reading that agrees with
    :func:`ideal_dim_oracle`; see :func:`ideal_dim_rd_literal` for the
    variant with upper index k - m.
    """
    if d <= q:
        raise OutOfValidity("formula stated for d >= q + 1")
    return _rd_sum(q, d, m, lambda k: comb(k + m, m) if k >= 0 else 0)


def ideal_dim_rd_literal(q: int, d: int, m: int) -> int:
    """Same sum with inner term binom(k - m, k) in the generalised convention.

    Agrees with the oracle only at d = q + 1.
    """
    if d <= q:
        raise OutOfValidity("formula stated for d >= q + 1")
    return _rd_sum(q, d, m, lambda k: gbinom(k - m, k))


def ideal_dim_oracle(q: int, d: int, m: int) -> int:
    """dim S_d minus the rank of evaluation at all points of P^m(F_q)."""
    M = comb(m + d, d)
    N = pk(m, q)
    if M * N > 10 ** 7:
        raise TooLarge(f"evaluation matrix {M} x {N} too large")
    F = field_make(q)
    V = monomial_values(F, monomials_desc_lex(m, d), proj_points(m, F))
    return M - matrix_rank(F, np.asarray(V))
