"""Close families of sets and of polynomials, and gcd correlation profiles."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Iterator, Sequence

import numpy as np

from .errors import NotClose, NotCoprimeClose, RankDeficient, StructureViolation
from .gf import matrix_rank
from .polyspace import (
    HomPoly,
    PolyFamily,
    _divmod_exact,
    divide_exact,
    gcd,
    gcd_many,
    linear_form,
)
from .projgeom import dual_points, linear_coeffs


# -- set families ------------------------------------------------------------------

@dataclass
class SetFamily:
    ground: frozenset
    members: list[frozenset]

    def __init__(self, members: Iterable[Iterable[Hashable]], ground: Iterable[Hashable] | None = None):
        self.members = [frozenset(A) for A in members]
        if len(set(self.members)) != len(self.members):
            raise ValueError("members must be pairwise distinct")
        sizes = {len(A) for A in self.members}
        if len(sizes) > 1:
            raise ValueError("members must share one cardinality")
        union = frozenset().union(*self.members) if self.members else frozenset()
        self.ground = frozenset(ground) if ground is not None else union
        if not union <= self.ground:
            raise ValueError("members must lie in the ground set")

    @property
    def k(self) -> int:
        return len(self.members[0]) if self.members else 0

    @property
    def n(self) -> int:
        return len(self.ground)

    @property
    def r(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class SetStructure:
    common_size: int
    nu: tuple | None = None


def set_is_close(fam: SetFamily) -> bool:
    k = fam.k
    return all(len(A & B) == k - 1 for A, B in combinations(fam.members, 2))


def _omit_one_nu(members: Sequence[frozenset]) -> tuple | None:
    """nu with members[i] = {nu_1..nu_r} minus nu_i, if the family has that shape."""
    union = frozenset().union(*members)
    if len(union) != len(members):
        return None
    nu = []
    for A in members:
        missing = union - A
        if len(missing) != 1:
            return None
        nu.append(next(iter(missing)))
    return tuple(nu)


def set_structure(fam: SetFamily) -> SetStructure:
    """Size of the common intersection, and nu when it is empty and 1 < k < n."""
    if not set_is_close(fam):
        raise NotClose("family is not close")
    k, r = fam.k, fam.r
    common = frozenset.intersection(*fam.members)
    size = len(common)
    if r == 1:
        return SetStructure(size)
    if size not in (k - 1, k - r + 1):
        raise StructureViolation(f"common intersection has size {size}, expected {k - 1} or {k - r + 1}")
    nu = None
    if size == 0 and 1 < k < fam.n:
        nu = _omit_one_nu(fam.members)
        if nu is None:
            raise StructureViolation("empty intersection without the omit-one shape")
    return SetStructure(size, nu)


def close_families(n: int, k: int, rmax: int) -> Iterator[list[frozenset]]:
    """All close families of size 2..rmax in I_k([n]), each listed once (as sorted cliques)."""
    subsets = [frozenset(c) for c in combinations(range(1, n + 1), k)]
    adj = [[j for j in range(len(subsets)) if j > i and len(subsets[i] & subsets[j]) == k - 1]
           for i in range(len(subsets))]
    adjset = [set(a) for a in adj]

    def extend(clique, cands):
        if len(clique) >= 2:
            yield [subsets[i] for i in clique]
        if len(clique) == rmax:
            return
        for c in cands:
            yield from extend(clique + [c], [x for x in cands if x > c and x in adjset[c]])

    for i in range(len(subsets)):
        yield from extend([i], adj[i])


# -- linear factors --------------------------------------------------------------------

def normalized_linear_forms(m: int, field) -> list[HomPoly]:
    """One representative (first nonzero coefficient 1) per class of linear forms."""
    return [linear_form(field, list(h)) for h in dual_points(m, field)]


def linear_factors(f: HomPoly) -> tuple[list[HomPoly], HomPoly]:
    """Split off linear factors by trial division, with multiplicity.

    Returns (factors, cofactor) where the cofactor has no linear factor.
    """
    if f.is_zero():
        raise ValueError("zero polynomial")
    factors = []
    rest = f.terms
    F = f.field
    for L in normalized_linear_forms(f.m, F):
        while sum(next(iter(rest))) > 0:
            q = _divmod_exact(F, rest, L.terms)
            if q is None:
                break
            factors.append(L)
            rest = q
    d = sum(next(iter(rest)))
    return factors, HomPoly._rawh(F, f.m, d, rest)


def has_linear_factor(f: HomPoly) -> bool:
    if f.is_zero() or f.d == 0:
        return False
    F = f.field
    return any(_divmod_exact(F, f.terms, L.terms) is not None for L in normalized_linear_forms(f.m, F))


def splits_into_distinct_lines(f: HomPoly) -> list[HomPoly] | None:
    """The d pairwise non-proportional linear factors of f, or None."""
    factors, rest = linear_factors(f)
    if rest.d != 0 or len(factors) != f.d or len(set(factors)) != len(factors):
        return None
    return factors


# -- polynomial close families ---------------------------------------------------------

def _require_rank(fam: PolyFamily):
    if fam.rank < fam.r:
        raise RankDeficient(f"family has rank {fam.rank} < r = {fam.r}")


def _pair_degrees(fam: PolyFamily) -> list[list[int]]:
    r = fam.r
    b = [[fam.d] * r for _ in range(r)]
    for i, j in combinations(range(r), 2):
        b[i][j] = b[j][i] = gcd(fam[i], fam[j]).d
    return b


def poly_is_close(fam: PolyFamily) -> bool:
    _require_rank(fam)
    k = fam.d
    return all(gcd(fam[i], fam[j]).d == k - 1 for i, j in combinations(range(fam.r), 2))


def is_coprime_close(fam: PolyFamily) -> bool:
    return poly_is_close(fam) and gcd_many(fam.members).d == 0


@dataclass(frozen=True)
class PolyStructure:
    k: int
    forms: tuple | None = None


def poly_structure(fam: PolyFamily) -> PolyStructure:
    """For a coprime close family in degree k: k = 1, or k = r-1 with
    member_i = c_i * prod_{j != i} H_j for pairwise non-proportional linear H_j.
    """
    if not is_coprime_close(fam):
        raise NotCoprimeClose("family is not coprime close")
    k, r = fam.d, fam.r
    if k == 1:
        return PolyStructure(1)
    if k != r - 1:
        raise StructureViolation(f"coprime close family with k={k}, r={r}")
    factor_sets = []
    for f in fam:
        lines = splits_into_distinct_lines(f)
        if lines is None:
            raise StructureViolation(f"{f} is not a product of distinct linear forms")
        factor_sets.append(frozenset(lines))
    nu = _omit_one_nu(factor_sets)
    if nu is None:
        raise StructureViolation("linear factors do not have the omit-one shape")
    for i, f in enumerate(fam):
        prod = None
        for j, H in enumerate(nu):
            if j != i:
                prod = H if prod is None else prod * H
        c = divide_exact(f, prod)
        if c.d != 0:
            raise StructureViolation("omit-one product does not reproduce the member")
    return PolyStructure(k, tuple(nu))


# -- correlation profile -------------------------------------------------------------------

@dataclass
class CorrelationProfile:
    b: int
    pairwise: list[list[int]]
    gcd: HomPoly
    cofactors: list[HomPoly]
    case: str  # "Case1" | "Case2" | "Case3"
    branch: str | None = None  # Case3 only: "b=d-1" or "b=d-r+1"
    common_linear_factor: bool = False
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        from .polyspace import format_poly

        return {
            "b": self.b,
            "pairwise": self.pairwise,
            "gcd": format_poly(self.gcd),
            "cofactors": [format_poly(g) for g in self.cofactors],
            "case": self.case,
            "branch": self.branch,
            "common_linear_factor": self.common_linear_factor,
        }


def correlation_profile(fam: PolyFamily) -> CorrelationProfile:
    if fam.r < 2 or fam.d < 2:
        raise ValueError("correlation profile needs r >= 2 and d >= 2")
    _require_rank(fam)
    d, r = fam.d, fam.r
    G = gcd_many(fam.members)
    b = G.d
    cof = [divide_exact(f, G) for f in fam]
    pairwise = _pair_degrees(fam)
    offdiag = [pairwise[i][j] for i, j in combinations(range(r), 2)]
    for v in offdiag:
        if not b <= v <= d - 1:
            raise StructureViolation(f"correlation factor {v} outside [{b}, {d - 1}]")
    branch = None
    if any(v == 0 for v in offdiag):
        case = "Case1"
    elif any(0 < v < d - 1 for v in offdiag):
        case = "Case2"
    else:
        case = "Case3"
        if b == d - 1:
            branch = "b=d-1"
        elif b == d - r + 1:
            branch = "b=d-r+1"
        else:
            raise StructureViolation(f"Case3 with b={b}, neither d-1 nor d-r+1")
    return CorrelationProfile(b, pairwise, G, cof, case, branch, has_linear_factor(G))


def dual_rank(forms: Sequence[HomPoly]) -> int:
    """Rank of the matrix of dual coordinates of linear forms."""
    F = forms[0].field
    return matrix_rank(F, np.array([linear_coeffs(h) for h in forms], dtype=np.int64))
