"""Exhaustive and randomised searches for maximal zero counts.

Families are enumerated up to span: every r-dimensional subspace of the
coefficient space appears once, as its reduced row echelon basis.  The
common zero set of a family only depends on its span.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations
from math import comb
from typing import Iterator, Sequence

import numpy as np

from . import accel
from .bounds import BoundParams, conjecture_bound, hp_affine, serre_bound, tb_bound_general
from .closefam import dual_rank, has_linear_factor, splits_into_distinct_lines
from .errors import BudgetExceeded, OutOfValidity
from .gf import FieldSpec, field_make
from .polyspace import (
    HomPoly,
    Poly,
    PolyFamily,
    format_poly,
    gcd_many,
    hom_from_vector,
    monomials_desc_lex,
    monomials_upto,
    variable,
)
from .projgeom import (
    affine_points,
    count_proj_zeros,
    homogenize,
    hyperplane_masks,
    monomial_values,
    pk,
    proj_monomial_table,
)

DEFAULT_BUDGET = 10 ** 9
MATCH, BELOW, EXCEEDS = "Match", "BelowBound", "ExceedsBound"


def thread_count() -> int:
    env = os.environ.get("FQZEROS_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def gaussian_binomial(M: int, r: int, q: int) -> int:
    if r < 0 or r > M:
        return 0
    num = den = 1
    for i in range(r):
        num *= q ** (M - i) - 1
        den *= q ** (r - i) - 1
    return num // den


# -- subspace enumeration ------------------------------------------------------------------

@dataclass(frozen=True)
class PivotBlock:
    """All RREF bases with a given pivot set; free entries vary in odometer order."""

    pivots: tuple[int, ...]
    free_r: tuple[int, ...]
    free_c: tuple[int, ...]
    size: int

    def basis(self, t: int, r: int, M: int, q: int) -> np.ndarray:
        B = np.zeros((r, M), dtype=np.int64)
        B[np.arange(r), list(self.pivots)] = 1
        for k in range(len(self.free_r) - 1, -1, -1):
            t, digit = divmod(t, q)
            B[self.free_r[k], self.free_c[k]] = digit
        return B


class SubspaceIter:
    """Every r-dimensional subspace of F_q^M exactly once, as an RREF basis.

    Pivot sets run in lex order; within a pivot set the free entries (row
    major) advance like an odometer, last entry fastest.
    """

    def __init__(self, M: int, r: int, spec: FieldSpec | int):
        if not 1 <= r <= M:
            raise ValueError(f"need 1 <= r <= M, got r={r}, M={M}")
        self.M, self.r = M, r
        self.spec = spec if isinstance(spec, FieldSpec) else field_make(spec)

    def __len__(self) -> int:
        return gaussian_binomial(self.M, self.r, self.spec.q)

    def blocks(self) -> Iterator[PivotBlock]:
        q, M = self.spec.q, self.M
        for piv in combinations(range(M), self.r):
            pset = set(piv)
            fr, fc = [], []
            for i, p in enumerate(piv):
                for j in range(p + 1, M):
                    if j not in pset:
                        fr.append(i)
                        fc.append(j)
            yield PivotBlock(piv, tuple(fr), tuple(fc), q ** len(fr))

    def __iter__(self) -> Iterator[np.ndarray]:
        q = self.spec.q
        for blk in self.blocks():
            for t in range(blk.size):
                yield blk.basis(t, self.r, self.M, q)


def enumerate_subspaces(M: int, r: int, spec: FieldSpec | int) -> SubspaceIter:
    return SubspaceIter(M, r, spec)


# -- reports ---------------------------------------------------------------------------------------

@dataclass
class SearchReport:
    params: dict
    mode: str
    spaces_examined: int
    max_count: int
    bound: int | None
    bound_name: str
    verdict: str
    witnesses: list[list[str]] = field(default_factory=list)
    structure: list[bool] = field(default_factory=list)
    maximizers: int | None = None
    maximizers_with_linear_factor: int | None = None
    seed: int | None = None
    backend: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def all_maximizers_linear(self) -> bool | None:
        if self.maximizers is None or self.maximizers_with_linear_factor is None:
            return None
        return self.maximizers == self.maximizers_with_linear_factor

    def to_json(self) -> dict:
        out = asdict(self)
        out["all_maximizers_linear"] = self.all_maximizers_linear
        return out

    CSV_COLUMNS = ("q", "d", "m", "r", "mode", "spaces_examined", "max_count", "bound",
                   "verdict", "maximizers", "maximizers_with_linear_factor")

    def csv_row(self) -> dict:
        row = {k: self.params.get(k) for k in ("q", "d", "m", "r")}
        row.update(mode=self.mode, spaces_examined=self.spaces_examined, max_count=self.max_count,
                   bound=self.bound, verdict=self.verdict, maximizers=self.maximizers,
                   maximizers_with_linear_factor=self.maximizers_with_linear_factor)
        return row


def verdict_for(max_count: int, bound: int) -> str:
    if max_count == bound:
        return MATCH
    return BELOW if max_count < bound else EXCEEDS


# -- the exhaustive scan -------------------------------------------------------------------------------

@dataclass
class ScanResult:
    best: int
    maximizers: int
    with_hyperplane: int
    witnesses: list[np.ndarray]
    examined: int


def _chunk_size() -> int:
    return 1 << 20 if accel.USE_NUMBA else 1 << 16


def scan_subspaces(M: int, r: int, F: FieldSpec, V: np.ndarray, hyper: np.ndarray | None,
                   wcap: int, threads: int | None = None) -> ScanResult:
    """Max common-zero count over all r-dim subspaces of F^M, given a monomial table V (M x N)."""
    it = SubspaceIter(M, r, F)
    add, mul = F.add_table, F.mul_table
    check = hyper is not None and len(hyper) > 0
    hyp = hyper if check else np.zeros((0, V.shape[1]), dtype=np.bool_)
    V = np.ascontiguousarray(V, dtype=np.int64)
    step = _chunk_size()
    tasks = []
    for blk in it.blocks():
        for lo in range(0, blk.size, step):
            tasks.append((blk, lo, min(lo + step, blk.size)))

    def run(task):
        blk, lo, hi = task
        return accel.scan_rref(blk.pivots, blk.free_r, blk.free_c, M, F.q, V, add, mul,
                               hyp, check, lo, hi, wcap)

    n = threads or thread_count()
    if n > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(run, tasks))
    else:
        results = [run(t) for t in tasks]

    # merge in enumeration order so the outcome does not depend on scheduling
    best, nmax, nlin, wit = -1, 0, 0, []
    for (blk, _, _), (b, k, l, w) in zip(tasks, results):
        if b < best:
            continue
        if b > best:
            best, nmax, nlin, wit = b, 0, 0, []
        nmax += k
        nlin += l
        for t in w:
            if len(wit) < wcap:
                wit.append(blk.basis(int(t), r, M, F.q))
    return ScanResult(best, nmax, nlin, wit, len(it))


def _magnitude(n: int) -> str:
    return str(n) if n < 10 ** 12 else f"~10^{len(str(n)) - 1}"


def _check_budget(spaces: int, points: int, budget: int):
    if spaces * points > budget:
        raise BudgetExceeded(f"{_magnitude(spaces)} subspaces x {points} points exceeds budget {budget}")


def witness_family(F: FieldSpec, m: int, d: int, B: np.ndarray) -> PolyFamily:
    monos = monomials_desc_lex(m, d)
    return PolyFamily([hom_from_vector(F, m, d, row, monos) for row in B])


def exhaustive_max(params: BoundParams, budget: int = DEFAULT_BUDGET, witnesses: int = 8,
                   threads: int | None = None, orbit_filter=None) -> SearchReport:
    """Maximum common-zero count over all r-dim subspaces of S_d, compared with T_r(d, m).

    ``orbit_filter`` is reserved for restricting the scan to representatives
    of projective-linear orbits; it is not implemented and must be None.
    """
    if orbit_filter is not None:
        raise NotImplementedError("orbit-representative filtering is not available")
    q, d, m, r = params.q, params.d, params.m, params.r
    F = field_make(q)
    M = comb(m + d, d)
    spaces = gaussian_binomial(M, r, q)
    _check_budget(spaces, pk(m, q), budget)
    V = proj_monomial_table(q, m, d)
    # for d <= q a form vanishing on a whole hyperplane is divisible by its equation
    use_hyper = 2 <= d <= q
    hyper = hyperplane_masks(m, F) if use_hyper else None
    res = scan_subspaces(M, r, F, V, hyper, witnesses, threads)
    bound = tb_bound_general(params)
    wit_polys, structure = [], []
    for B in res.witnesses:
        fam = witness_family(F, m, d, B)
        wit_polys.append([format_poly(f) for f in fam])
        if d >= 2:
            structure.append(has_linear_factor(gcd_many(fam.members)))
    return SearchReport(
        params=asdict(params), mode="exhaustive", spaces_examined=res.examined,
        max_count=res.best, bound=bound, bound_name="tb", verdict=verdict_for(res.best, bound),
        witnesses=wit_polys, structure=structure, maximizers=res.maximizers,
        maximizers_with_linear_factor=res.with_hyperplane if use_hyper else None,
        backend=accel.backend(),
        extra={"theorem_hypotheses": 1 <= d < q - 1 and r <= m + 1},
    )


def structure_ok(rep: SearchReport) -> bool:
    """Every maximiser has a common linear factor (vacuous for d = 1)."""
    if rep.params["d"] < 2:
        return True
    if rep.maximizers_with_linear_factor is not None and not rep.all_maximizers_linear:
        return False
    return all(rep.structure)


def exhaustive_affine_max(q: int, d: int, m: int, r: int, budget: int = DEFAULT_BUDGET,
                          witnesses: int = 8, threads: int | None = None) -> SearchReport:
    """Maximum affine zero count over r-dim spaces of polynomials of degree <= d < q."""
    F = field_make(q)
    monos = monomials_upto(m, d)
    M = len(monos)
    if not 1 <= r <= M:
        raise ValueError(f"need 1 <= r <= {M}")
    bound = hp_affine(q, d, m, r)
    spaces = gaussian_binomial(M, r, q)
    pts = affine_points(m, F)
    _check_budget(spaces, len(pts), budget)
    V = monomial_values(F, monos, pts)
    res = scan_subspaces(M, r, F, V, None, witnesses, threads)
    wit = [[format_poly(Poly(F, m, dict(zip(monos, row.tolist())))) for row in B] for B in res.witnesses]
    rep = SearchReport(
        params={"q": q, "d": d, "m": m, "r": r}, mode="affine", spaces_examined=res.examined,
        max_count=res.best, bound=bound, bound_name="hp", verdict=verdict_for(res.best, bound),
        witnesses=wit, maximizers=res.maximizers, backend=accel.backend(),
    )
    rep.extra["witness_bases"] = [B.tolist() for B in res.witnesses]
    return rep


# -- Serre sharpness ---------------------------------------------------------------------------------

@dataclass
class AuditReport:
    q: int
    d: int
    m: int
    serre_bound: int
    max_count: int
    maximizers: int
    all_split: bool
    all_concurrent: bool
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.max_count == self.serre_bound and self.all_split and self.all_concurrent


def serre_sharpness_audit(q: int, d: int, m: int, budget: int = DEFAULT_BUDGET,
                          cap: int = 10 ** 6) -> AuditReport:
    """Check that every hypersurface with the maximal count is a union of d
    distinct hyperplanes through a common codimension-2 subspace."""
    if d > q + 1:
        raise OutOfValidity("audit needs d <= q+1")
    F = field_make(q)
    M = comb(m + d, d)
    _check_budget(gaussian_binomial(M, 1, q), pk(m, q), budget)
    res = scan_subspaces(M, 1, F, proj_monomial_table(q, m, d), None, cap)
    if res.maximizers > cap:
        raise BudgetExceeded(f"{res.maximizers} maximisers exceed the witness cap {cap}")
    sb = serre_bound(q, d, m)
    all_split = all_conc = True
    failures = []
    if res.best == sb:
        for B in res.witnesses:
            f = hom_from_vector(F, m, d, B[0])
            lines = splits_into_distinct_lines(f)
            if lines is None:
                all_split = False
                failures.append(f"not split: {format_poly(f)}")
                continue
            if d >= 2 and dual_rank(lines) != 2:
                all_conc = False
                failures.append(f"not concurrent: {format_poly(f)}")
    return AuditReport(q, d, m, sb, res.best, res.maximizers, all_split, all_conc, failures)


# -- random probes --------------------------------------------------------------------------------

RANDOM_CHUNK = 1 << 14


def _select_bound(params: BoundParams, bound: str) -> int:
    if bound == "tb":
        return tb_bound_general(params)
    if bound == "conjecture":
        return conjecture_bound(params)
    raise ValueError(f"unknown bound {bound!r}")


def random_probe(params: BoundParams, samples: int, seed: int, bound: str = "tb",
                 inject: Sequence[PolyFamily] = (), witnesses: int = 4) -> SearchReport:
    """Zero counts of ``samples`` random rank-r families (rank-deficient draws are rejected)."""
    q, d, m, r = params.q, params.d, params.m, params.r
    F = field_make(q)
    M = comb(m + d, d)
    V = proj_monomial_table(q, m, d)
    add, mul = F.add_table, F.mul_table
    rng = np.random.Generator(np.random.PCG64(seed))
    best, wit = -1, []
    for fam in inject:
        c = count_proj_zeros(fam).projective
        if c > best:
            best, wit = c, [[format_poly(f) for f in fam]]
    accepted = drawn = 0
    while accepted < samples:
        B = rng.integers(0, q, size=(RANDOM_CHUNK, r, M), dtype=np.int64)
        drawn += RANDOM_CHUNK
        keep = accel.rank_batch(B, add, mul, F.neg_table, F.inv_table) == r
        B = B[keep][: samples - accepted]
        accepted += len(B)
        counts = accel.count_zeros_batch(B, V, add, mul)
        if len(counts) == 0:
            continue
        k = int(np.argmax(counts))
        if counts[k] > best:
            best = int(counts[k])
            wit = [[format_poly(f) for f in witness_family(F, m, d, B[k])]]
    b = _select_bound(params, bound)
    vacuous = best < 0
    best = max(best, 0)
    rep = SearchReport(
        params=asdict(params), mode="random", spaces_examined=accepted + len(inject),
        max_count=best, bound=b, bound_name=bound,
        verdict=BELOW if vacuous else verdict_for(best, b), witnesses=wit[:witnesses],
        seed=seed, backend=accel.backend(),
        extra={"vacuous": vacuous, "drawn": drawn if samples else 0},
    )
    return rep


def _affine_to_projective(F: FieldSpec, m: int, d: int, affine: Sequence[Poly]) -> PolyFamily:
    x0 = variable(F, m, 0)
    return PolyFamily([x0 * homogenize(f, d - 1) for f in affine])


def conjecture_probe(params: BoundParams, samples: int, seed: int, budget: int = DEFAULT_BUDGET,
                     directed_samples: int = 2000) -> SearchReport:
    """Random search against H_r(d-1, m) + p_{m-1}, plus a directed lower-bound pass.

    The directed pass multiplies homogenised affine systems of degree <= d-1
    by x_0.  Affine systems come from an exhaustive affine search when it
    fits in ``budget``, else from random sampling.
    """
    q, d, m, r = params.q, params.d, params.m, params.r
    if not 1 < d < q:
        raise OutOfValidity("conjecture probe needs 1 < d < q")
    if not m + 1 < r <= comb(m + d - 1, m):
        raise OutOfValidity(f"conjecture probe needs {m + 1} < r <= {comb(m + d - 1, m)}")
    F = field_make(q)
    cb = conjecture_bound(params)
    monos = monomials_upto(m, d - 1)
    Ma = len(monos)
    directed: list[PolyFamily] = []
    source = "random"
    spaces = gaussian_binomial(Ma, r, q)
    if spaces * q ** m <= budget:
        aff = exhaustive_affine_max(q, d - 1, m, r, budget=budget, witnesses=4)
        for B in aff.extra["witness_bases"]:
            polys = [Poly(F, m, dict(zip(monos, row))) for row in B]
            directed.append(_affine_to_projective(F, m, d, polys))
        source = "exhaustive-affine"
    else:
        rng = np.random.Generator(np.random.PCG64([seed, 1]))
        Vaff = monomial_values(F, monos, affine_points(m, F))
        add, mul = F.add_table, F.mul_table
        B = rng.integers(0, q, size=(directed_samples, r, Ma), dtype=np.int64)
        B = B[accel.rank_batch(B, add, mul, F.neg_table, F.inv_table) == r]
        counts = accel.count_zeros_batch(B, Vaff, add, mul)
        for k in np.argsort(-counts, kind="stable")[:4]:
            polys = [Poly(F, m, dict(zip(monos, row))) for row in B[k].tolist()]
            directed.append(_affine_to_projective(F, m, d, polys))
    lower = max((count_proj_zeros(fam).projective for fam in directed), default=0)
    rep = random_probe(params, samples, seed, bound="conjecture", inject=directed)
    rep.mode = "conjecture"
    rep.extra.update(directed_source=source, directed_lower_bound=lower, gap=cb - lower,
                     exceeded=rep.max_count > cb)
    return rep
