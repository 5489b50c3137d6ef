"""Explicit families attaining the extremal zero counts."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Sequence

from .bounds import BoundParams, tb_bound_general
from .errors import BadLambdas, DegreeTooLarge, TooMany
from .gf import field_make
from .polyspace import HomPoly, PolyFamily, constant, linear_form, variable
from .projgeom import count_proj_zeros, pk, proj_points

# certify by direct counting when P^m has at most this many points
CERT_LIMIT = 10 ** 5


@dataclass(frozen=True)
class ConstructionSpec:
    kind: str  # "tb_maximal" | "line_family" | "fermat"
    params: BoundParams
    lambdas: tuple[int, ...] = field(default=())


def _certify(fam: PolyFamily, spec: ConstructionSpec, expected: int) -> PolyFamily:
    q, m = spec.params.q, fam.m
    cert = {"params": {"q": q, "d": fam.d, "m": m, "r": fam.r}, "kind": spec.kind, "bound": expected}
    if pk(m, q) <= CERT_LIMIT:
        count = count_proj_zeros(fam).projective
        cert.update(count=count, match=count == expected, certificate="counted")
    else:
        cert.update(count=None, match=None, certificate="formula-only")
    fam.meta["certificate"] = cert
    fam.meta["spec"] = spec
    return fam


def tb_maximal_family(params: BoundParams, lambdas: Sequence[int] | None = None) -> PolyFamily:
    """F*_i = x_{i-1} * prod_k (x_m - lambda_k x_0), i = 1..r.

    The zero count is T_r(d, m); for d = 1 the product is empty and the
    family is x_0, ..., x_{r-1}.
    """
    q, d, m, r = params.q, params.d, params.m, params.r
    if not 1 <= d <= q + 1:
        raise DegreeTooLarge(f"need 1 <= d <= q+1, got d={d}, q={q}")
    if not 1 <= r <= m + 1:
        raise ValueError(f"need 1 <= r <= m+1, got r={r}")
    F = field_make(q)
    if lambdas is None:
        lambdas = tuple(range(d - 1))
    lambdas = tuple(F._check(x) for x in lambdas)
    if len(lambdas) != d - 1 or len(set(lambdas)) != d - 1:
        raise BadLambdas(f"need {d - 1} distinct field elements, got {lambdas}")
    x0, xm = variable(F, m, 0), variable(F, m, m)
    G = constant(F, m)
    for lam in lambdas:
        G = G * (xm - x0 * lam)
    fam = PolyFamily([variable(F, m, i) * G for i in range(r)])
    fam.meta["gstar"] = G
    return _certify(fam, ConstructionSpec("tb_maximal", params, lambdas), tb_bound_general(params))


def line_forms(q: int) -> list[HomPoly]:
    """L_a = a_1 x_0 - a_0 x_1 for the points a of P^1(F_q), in point order."""
    F = field_make(q)
    return [linear_form(F, [int(a1), F.fneg(int(a0))]) for a0, a1 in proj_points(1, F)]


def line_family(q: int, d: int, r: int) -> PolyFamily:
    """Members L_1...L_{d+1} with L_i dropped, i = 1..r; zero count d - r + 1."""
    if d > q:
        raise DegreeTooLarge(f"line family needs d <= q, got d={d}, q={q}")
    if not 1 <= r <= d + 1:
        raise ValueError(f"need 1 <= r <= d+1, got r={r}")
    F = field_make(q)
    Ls = line_forms(q)[: d + 1]
    members = []
    for i in range(r):
        f = constant(F, 1)
        for k, L in enumerate(Ls):
            if k != i:
                f = f * L
        members.append(f)
    fam = PolyFamily(members)
    return _certify(fam, ConstructionSpec("line_family", BoundParams(q, d, 1, r)), d - r + 1)


def fermat_polynomial(q: int, m: int, i: int, j: int) -> HomPoly:
    F = field_make(q)
    xi, xj = variable(F, m, i), variable(F, m, j)
    return xi ** q * xj - xj ** q * xi


def fermat_family(q: int, m: int, r: int) -> PolyFamily:
    """The first r of x_i^q x_j - x_j^q x_i, 0 <= i < j <= m, in (i, j) lex order."""
    total = comb(m + 1, 2)
    if not 1 <= r <= total:
        raise TooMany(f"only {total} Fermat polynomials exist for m={m}")
    pairs = list(combinations(range(m + 1), 2))[:r]
    fam = PolyFamily([fermat_polynomial(q, m, i, j) for i, j in pairs])
    return _certify(fam, ConstructionSpec("fermat", BoundParams(q, q + 1, m, r)), pk(m, q))
