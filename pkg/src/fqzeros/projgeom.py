"""Rational points of P^m and A^m over F_q and zero counting."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from math import comb
from typing import Sequence

import numpy as np

from . import accel
from .errors import (
    DegreeTooLarge,
    FieldMismatch,
    FieldTooLarge,
    MixedParameters,
    PointOnL,
    RankDeficient,
    TooLarge,
)
from .gf import FieldSpec, field_make, matrix_rank
from .polyspace import HomPoly, Poly, PolyFamily, monomials_desc_lex

# cells above which counting tabulates only the monomials in use
DENSE_TABLE_LIMIT = 4 * 10 ** 6


def pk(k: int, q: int) -> int:
    """|P^k(F_q)| = q^k + ... + q + 1, and 0 for k < 0."""
    if q < 2:
        raise ValueError("q must be at least 2")
    if k < 0:
        return 0
    return (q ** (k + 1) - 1) // (q - 1)


@dataclass(frozen=True)
class ZeroCount:
    projective: int
    hyperplane: int | None = None  # zeros with x_0 = 0
    affine: int | None = None  # zeros with x_0 = 1


# -- point tables ------------------------------------------------------------------------

@functools.lru_cache(maxsize=64)
def _proj_points(m: int, q: int) -> np.ndarray:
    rows = []
    for lead in range(m + 1):
        tail = m - lead
        block = np.zeros((q ** tail, m + 1), dtype=np.int64)
        block[:, lead] = 1
        if tail:
            block[:, lead + 1:] = np.array(list(itertools.product(range(q), repeat=tail)), dtype=np.int64)
        rows.append(block)
    pts = np.concatenate(rows, axis=0)
    pts.setflags(write=False)
    return pts


def proj_points(m: int, spec: FieldSpec) -> np.ndarray:
    """Normalised points of P^m(F_q): first nonzero coordinate 1.

    Ordered by the position of the leading 1, then lexicographically on the tail.
    Returned as a read-only (p_m x (m+1)) int array.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if pk(m, spec.q) > 10 ** 7:
        raise TooLarge(f"P^{m}(F_{spec.q}) has too many points to enumerate")
    return _proj_points(m, spec.q)


@functools.lru_cache(maxsize=64)
def _affine_points(m: int, q: int) -> np.ndarray:
    if m == 0:
        pts = np.zeros((1, 0), dtype=np.int64)
    else:
        pts = np.array(list(itertools.product(range(q), repeat=m)), dtype=np.int64)
    pts.setflags(write=False)
    return pts


def affine_points(m: int, spec: FieldSpec) -> np.ndarray:
    if spec.q ** m > 10 ** 7:
        raise TooLarge(f"A^{m}(F_{spec.q}) has too many points to enumerate")
    return _affine_points(m, spec.q)


def power_table(F: FieldSpec, emax: int) -> np.ndarray:
    """T[x, e] = x^e for 0 <= e <= emax (with 0^0 = 1)."""
    T = np.zeros((F.q, emax + 1), dtype=np.int64)
    T[:, 0] = 1
    for e in range(1, emax + 1):
        T[:, e] = F.mul_arr(T[:, e - 1], np.arange(F.q))
    return T


def monomial_values(F: FieldSpec, monos: Sequence[tuple], points: np.ndarray) -> np.ndarray:
    """V[j, P] = value of monomial j at point P."""
    monos = np.array(monos, dtype=np.int64).reshape(len(monos), -1)
    emax = int(monos.max()) if monos.size else 0
    T = power_table(F, emax)
    V = np.ones((len(monos), len(points)), dtype=np.int64)
    for i in range(monos.shape[1]):
        V = F.mul_arr(V, T[points[:, i][None, :], monos[:, i][:, None]])
    return V


@functools.lru_cache(maxsize=32)
def proj_monomial_table(q: int, m: int, d: int) -> np.ndarray:
    F = field_make(q)
    V = monomial_values(F, monomials_desc_lex(m, d), proj_points(m, F))
    V = np.ascontiguousarray(V)
    V.setflags(write=False)
    return V


def _tables(F: FieldSpec):
    if F.add_table is None:
        raise FieldTooLarge(f"zero counting needs full tables (q <= 256), got q={F.q}")
    return F.add_table, F.mul_table


# -- counting --------------------------------------------------------------------------------

def _as_family(family) -> PolyFamily:
    return family if isinstance(family, PolyFamily) else PolyFamily(family)


def zero_mask_proj(family) -> np.ndarray:
    fam = _as_family(family)
    F = fam.field
    add, mul = _tables(F)
    pts = proj_points(fam.m, F)
    if comb(fam.m + fam.d, fam.d) * len(pts) <= DENSE_TABLE_LIMIT:
        V = proj_monomial_table(F.q, fam.m, fam.d)
        return accel.zero_mask(fam.coefficient_matrix(), V, add, mul)
    # large ambient space: tabulate only the monomials that occur
    monos = sorted({mono for f in fam for mono in f.terms}, reverse=True)
    if not monos:
        return np.ones(len(pts), dtype=np.bool_)
    V = np.ascontiguousarray(monomial_values(F, monos, pts))
    B = np.array([[f.terms.get(mono, 0) for mono in monos] for f in fam], dtype=np.int64)
    return accel.zero_mask(B, V, add, mul)


def count_proj_zeros(family) -> ZeroCount:
    """Common zeros in P^m(F_q), split into the x_0 = 0 part and the affine part."""
    fam = _as_family(family)
    mask = zero_mask_proj(fam)
    pts = proj_points(fam.m, fam.field)
    aff = int(mask[pts[:, 0] == 1].sum())
    total = int(mask.sum())
    return ZeroCount(projective=total, hyperplane=total - aff, affine=aff)


def count_affine_zeros(polys: Sequence[Poly], m: int | None = None) -> int:
    """Common zeros in A^m(F_q) of polynomials in m variables (total degree < q)."""
    polys = list(polys)
    if not polys:
        raise ValueError("empty system")
    F = polys[0].field
    n = polys[0].nvars if m is None else m
    for f in polys:
        if f.field is not F:
            raise FieldMismatch("polynomials over different fields")
        if f.nvars != n:
            raise MixedParameters("polynomials in different numbers of variables")
        if f.total_degree >= F.q:
            raise DegreeTooLarge(f"affine counting requires total degree < q={F.q}")
    add, mul = _tables(F)
    monos = sorted({mono for f in polys for mono in f.terms}, reverse=True)
    pts = affine_points(n, F)
    if not monos:
        return len(pts)
    V = np.ascontiguousarray(monomial_values(F, monos, pts))
    B = np.array([[f.terms.get(mono, 0) for mono in monos] for f in polys], dtype=np.int64)
    return int(accel.zero_mask(B, V, add, mul).sum())


def dehomogenize(f: HomPoly) -> Poly:
    """Substitute x_0 = 1; the result lives in the m variables x_1..x_m."""
    F = f.field
    out: dict = {}
    for mono, c in f.terms.items():
        key = mono[1:]
        v = F.fadd(out.get(key, 0), c)
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return Poly._raw(F, f.nvars - 1, out)


def homogenize(f: Poly, d: int) -> HomPoly:
    """Inverse of :func:`dehomogenize` for a polynomial of total degree <= d."""
    if f.total_degree > d:
        raise ValueError(f"total degree {f.total_degree} exceeds {d}")
    terms = {(d - sum(mono),) + mono: c for mono, c in f.terms.items()}
    return HomPoly._rawh(f.field, f.nvars, d, terms)


def restrict_hyperplane(f: HomPoly) -> HomPoly:
    """Restriction to x_0 = 0, as a polynomial in x_1..x_m."""
    terms = {mono[1:]: c for mono, c in f.terms.items() if mono[0] == 0}
    return HomPoly._rawh(f.field, f.m - 1, f.d, terms)


# -- Veronese section -----------------------------------------------------------------

def _normalize_rows(F: FieldSpec, A: np.ndarray) -> np.ndarray:
    lead = np.argmax(A != 0, axis=1)
    lc = A[np.arange(len(A)), lead]
    return F.mul_arr(F.inv_table[lc][:, None], A)


def veronese_section_count(family) -> int:
    """Rational points of (Veronese image of P^m) cut by the family's hyperplanes in P^{M-1}."""
    fam = _as_family(family)
    F = fam.field
    if fam.rank < fam.r:
        raise RankDeficient(f"family has rank {fam.rank} < r = {fam.r}")
    pts = proj_points(fam.m, F)
    monos = monomials_desc_lex(fam.m, fam.d)
    img = _normalize_rows(F, monomial_values(F, monos, pts).T)
    image = {tuple(row) for row in img.tolist()}
    if len(image) != len(pts):
        raise AssertionError("Veronese map failed to be injective")
    Y = np.array(sorted(image), dtype=np.int64)
    C = fam.coefficient_matrix()
    # linear equations sum_j c_j y_j = 0 on P^{M-1}
    acc = np.zeros((len(C), len(Y)), dtype=np.int64)
    for j in range(len(monos)):
        acc = F.add_arr(acc, F.mul_arr(C[:, j][:, None], Y[:, j][None, :]))
    return int((acc == 0).all(axis=0).sum())


# -- hyperplanes through a point -----------------------------------------------------

def dual_points(m: int, spec: FieldSpec) -> np.ndarray:
    """Hyperplanes of P^m as normalised coefficient vectors (same order as points)."""
    return proj_points(m, spec)


def linear_coeffs(f: HomPoly) -> list[int]:
    if f.d != 1:
        raise ValueError("not a linear form")
    out = [0] * (f.m + 1)
    for mono, c in f.terms.items():
        out[mono.index(1)] = c
    return out


def hyperplane_codim_census(linear_forms: Sequence[HomPoly], P: Sequence[int]) -> tuple[int, int]:
    """Tally codim of L = V(forms) inside each hyperplane through P.

    Returns (#hyperplanes where the codimension drops to r-1, #where it stays r).
    """
    forms = list(linear_forms)
    F = forms[0].field
    m = forms[0].m
    r = len(forms)
    if not 1 <= r <= m + 1:
        raise ValueError(f"need 1 <= r <= m+1, got r={r}")
    Hm = np.array([linear_coeffs(h) for h in forms], dtype=np.int64)
    if matrix_rank(F, Hm) != r:
        raise RankDeficient("linear forms are dependent")
    P = np.array([F._check(x) for x in P], dtype=np.int64)
    if len(P) != m + 1:
        raise MixedParameters("point has the wrong number of coordinates")
    vals = np.zeros(r, dtype=np.int64)
    for j in range(m + 1):
        vals = F.add_arr(vals, F.mul_arr(Hm[:, j], P[j]))
    if not vals.any():
        raise PointOnL("P lies on L")
    low = high = 0
    for h in dual_points(m, F):
        s = 0
        for j in range(m + 1):
            s = F.fadd(s, F.fmul(int(h[j]), int(P[j])))
        if s:
            continue
        codim = matrix_rank(F, np.vstack([Hm, h[None, :]])) - 1
        if codim == r - 1:
            low += 1
        elif codim == r:
            high += 1
        else:  # pragma: no cover - would contradict linear algebra
            raise AssertionError(f"unexpected codimension {codim}")
    return low, high


def hyperplane_masks(m: int, spec: FieldSpec) -> np.ndarray:
    """Row h is the point mask of the hyperplane with dual coordinates dual_points[h]."""
    pts = proj_points(m, spec)
    H = dual_points(m, spec)
    add, mul = _tables(spec)
    acc = np.zeros((len(H), len(pts)), dtype=np.int64)
    for j in range(m + 1):
        acc = add[acc, mul[H[:, j][:, None], pts[:, j][None, :]]]
    return acc == 0
