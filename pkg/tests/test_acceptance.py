"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line (printed in the pytest summary, or
directly when this file is run as a script) before asserting.
"""

from __future__ import annotations

import json
import time
from math import comb

import numpy as np

from acceptance_log import record
from generators import random_case12_family, random_census_instance, random_omit_one
from fqzeros.bounds import (
    BoundParams,
    conjecture_bound,
    hp_bound_explicit,
    hp_bound_general,
    ideal_dim_oracle,
    ideal_dim_rd,
    ideal_dim_rd_literal,
    serre_bound,
    tb_bound_explicit,
    tb_bound_general,
)
from fqzeros.closefam import SetFamily, close_families, poly_structure, set_structure
from fqzeros.constructions import fermat_family, line_family, tb_maximal_family
from fqzeros.projgeom import count_proj_zeros, hyperplane_codim_census, pk
from fqzeros.search import (
    conjecture_probe,
    exhaustive_affine_max,
    exhaustive_max,
    serre_sharpness_audit,
    structure_ok,
)

GRID_Q = (2, 3, 4, 5, 7, 8, 9)


def _grid():
    for q in GRID_Q:
        for d in range(1, 7):
            for m in range(1, 6):
                for r in range(1, m + 2):
                    yield BoundParams(q, d, m, r)


def check(num, desc, ok, detail):
    record(num, desc, ok, detail)
    assert ok, detail


# 1 ---------------------------------------------------------------------------------------

def test_01_bound_identities():
    t0 = time.perf_counter()
    bad, n = [], 0
    for p in _grid():
        n += 1
        g = tb_bound_general(p)
        if p.d >= 2 and g != tb_bound_explicit(p):
            bad.append(("tb", p))
        if p.d == 1 and g != pk(p.m - p.r, p.q):
            bad.append(("d=1", p))
        if p.r == 1 and p.d >= 2 and tb_bound_explicit(p) != serre_bound(p.q, p.d, p.m):
            bad.append(("serre", p))
        if p.d < p.q and hp_bound_general(p) != hp_bound_explicit(p):
            bad.append(("hp", p))
        if 1 < p.d < p.q and conjecture_bound(p) != tb_bound_explicit(p):
            bad.append(("conjecture", p))
    dt = time.perf_counter() - t0
    check(1, "bound identities on the parameter grid", not bad and dt < 1.0,
          f"{n} points, {len(bad)} mismatches, {dt:.3f}s")


# 2 ---------------------------------------------------------------------------------------

def test_02_construction_certificates():
    t0 = time.perf_counter()
    bad, n = [], 0
    for p in _grid():
        if pk(p.m, p.q) > 10 ** 5 or p.d > p.q + 1:
            continue
        count = count_proj_zeros(tb_maximal_family(p)).projective
        expected = tb_bound_explicit(p) if p.d >= 2 else pk(p.m - p.r, p.q)
        n += 1
        if count != expected:
            bad.append(("tb", p, count, expected))
    for q in GRID_Q:
        for d in range(1, min(6, q) + 1):
            for r in range(1, d + 2):
                n += 1
                if count_proj_zeros(line_family(q, d, r)).projective != d - r + 1:
                    bad.append(("lines", q, d, r))
        for m in range(1, 6):
            if pk(m, q) > 10 ** 5:
                continue
            for r in range(1, comb(m + 1, 2) + 1):
                n += 1
                if count_proj_zeros(fermat_family(q, m, r)).projective != pk(m, q):
                    bad.append(("fermat", q, m, r))
    dt = time.perf_counter() - t0
    check(2, "construction certificates (tb family, line family, Fermat family)", not bad and dt < 30,
          f"{n} families, {len(bad)} mismatches, {dt:.1f}s")


# 3 ---------------------------------------------------------------------------------------

def _main_theorem_runs():
    runs = [(4, 2, 2, r) for r in (1, 2, 3)] + [(5, 2, 2, r) for r in (1, 2, 3)] + [(5, 3, 2, 1)]
    runs += [(4, 1, 3, r) for r in range(1, 5)]
    for q in (2, 3):
        for m in (1, 2, 3):
            runs += [(q, 1, m, r) for r in range(1, m + 2)]
    return runs


def test_03_main_theorem_exhaustive():
    failures, slowest = [], 0.0
    runs = _main_theorem_runs()
    for q, d, m, r in runs:
        t0 = time.perf_counter()
        rep = exhaustive_max(BoundParams(q, d, m, r), witnesses=16)
        dt = time.perf_counter() - t0
        slowest = max(slowest, dt)
        if rep.verdict != "Match" or not structure_ok(rep) or dt > 600:
            failures.append((q, d, m, r, rep.max_count, rep.bound, rep.verdict))
    check(3, "exhaustive maximum equals T_r with a common linear factor in every maximiser", not failures,
          f"{len(runs)} runs, failures={failures}, slowest {slowest:.1f}s")


# 4 ---------------------------------------------------------------------------------------

def test_04_serre_sharpness():
    t0 = time.perf_counter()
    cases = [(2, 2, 2), (3, 2, 2), (4, 2, 2), (4, 3, 2)]
    audits = [serre_sharpness_audit(q, d, m) for q, d, m in cases]
    dt = time.perf_counter() - t0
    ok = all(a.ok for a in audits) and dt < 300
    detail = ", ".join(f"q={a.q} d={a.d}: {a.maximizers} maximisers" for a in audits)
    check(4, "every r=1 maximiser is d distinct concurrent lines", ok, f"{detail}, {dt:.1f}s")


# 5 ---------------------------------------------------------------------------------------

def test_05_affine_maximum():
    t0 = time.perf_counter()
    cases = [(3, 2, 1, r) for r in (1, 2, 3)] + [(3, 2, 2, r) for r in (1, 2)]
    cases += [(4, 2, 1, r) for r in (1, 2, 3)] + [(4, 3, 1, r) for r in (1, 2, 3, 4)]
    bad = []
    for q, d, m, r in cases:
        rep = exhaustive_affine_max(q, d, m, r)
        if rep.max_count != hp_bound_general(BoundParams(q, d, m, r)):
            bad.append((q, d, m, r, rep.max_count))
    dt = time.perf_counter() - t0
    check(5, "exhaustive affine maximum equals H_r", not bad and dt < 600,
          f"{len(cases)} runs, mismatches={bad}, {dt:.1f}s")


# 6 ---------------------------------------------------------------------------------------

def test_06_structure_theorems():
    t0 = time.perf_counter()
    nsets, bad = 0, []
    for n in range(1, 7):
        for k in range(1, n + 1):
            for members in close_families(n, k, n + 1):
                nsets += 1
                try:
                    s = set_structure(SetFamily(members, ground=range(1, n + 1)))
                except AssertionError as exc:
                    bad.append((n, k, exc))
                    continue
                r = len(members)
                if s.common_size not in (k - 1, k - r + 1):
                    bad.append((n, k, members))
                if s.common_size == 0 and 1 < k < n and (s.nu is None or len(s.nu) != r):
                    bad.append((n, k, members))
    rng = np.random.default_rng(20240617)
    ninv = 0
    while ninv < 1000:
        q = int(rng.choice([2, 3, 5]))
        m = int(rng.integers(1, 4))
        r = int(rng.integers(2, 6))
        if r > pk(m, q):
            continue
        fam, forms = random_omit_one(rng, q, m, r)
        st = poly_structure(fam)
        ninv += 1
        expected_k = 1 if r == 2 else r - 1
        if st.k != expected_k or (r > 2 and list(st.forms) != [H.monic() for H in forms]):
            bad.append(("omit-one", q, m, r))
    dt = time.perf_counter() - t0
    check(6, "close-family size dichotomy and omit-one inversion", not bad and dt < 120,
          f"{nsets} set families, {ninv} polynomial families, {len(bad)} failures, {dt:.1f}s")


# 7 ---------------------------------------------------------------------------------------

def test_07_hyperplane_census():
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    bad, n = [], 0
    while n < 1000:
        q = int(rng.choice([2, 3, 4, 5]))
        m = int(rng.integers(1, 5))
        r = int(rng.integers(1, m + 2))
        forms, P = random_census_instance(rng, q, m, r)
        got = hyperplane_codim_census(forms, P)
        want = (pk(r - 2, q), pk(m - 1, q) - pk(r - 2, q))
        n += 1
        if got != want:
            bad.append((q, m, r, got, want))
    dt = time.perf_counter() - t0
    check(7, "hyperplane codimension census", not bad and dt < 120,
          f"{n} instances, {len(bad)} mismatches, {dt:.1f}s")


# 8 ---------------------------------------------------------------------------------------

def test_08_strict_inequality_case1_case2():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    settings = [(q, d) for q in (4, 5, 7) for d in range(2, q - 1)]
    bad, n, cases = [], 0, {"Case1": 0, "Case2": 0}
    while n < 1000:
        q, d = settings[int(rng.integers(len(settings)))]
        m = int(rng.integers(2, 4))
        r = int(rng.integers(2, m + 2))
        fam, prof = random_case12_family(rng, q, m, d, r)
        c = count_proj_zeros(fam).projective
        limit = (d - 1) * q ** (m - 1) + pk(m - 2, q)
        n += 1
        cases[prof.case] += 1
        if not c < limit:
            bad.append((q, d, m, r, c, limit))
    dt = time.perf_counter() - t0
    check(8, "Case1/Case2 families stay strictly below (d-1)q^(m-1) + p_(m-2)", not bad and dt < 300,
          f"{n} families ({cases['Case1']} Case1, {cases['Case2']} Case2), {len(bad)} violations, {dt:.1f}s")


# 9 ---------------------------------------------------------------------------------------

def test_09_ideal_dimension():
    t0 = time.perf_counter()
    bad = []
    for q in (2, 3):
        for m in (1, 2):
            if ideal_dim_oracle(q, q + 1, m) != comb(m + 1, 2):
                bad.append(("fermat", q, m))
    n, literal_mismatch = 0, 0
    for q in (2, 3, 4, 5):
        for m in (1, 2, 3):
            for d in range(q + 1, q + 5):
                if comb(m + d, d) * pk(m, q) > 10 ** 6:
                    continue
                n += 1
                o = ideal_dim_oracle(q, d, m)
                if ideal_dim_rd(q, d, m) != o:
                    bad.append(("rd", q, d, m))
                if ideal_dim_rd_literal(q, d, m) != o:
                    literal_mismatch += 1
    dt = time.perf_counter() - t0
    check(9, "vanishing-ideal dimension: Fermat count and alternating-sum formula", not bad and dt < 60,
          f"{n} (q,d,m) checked, {len(bad)} mismatches; literal binom(k-m,k) reading disagrees on "
          f"{literal_mismatch}, {dt:.1f}s")


# 10 --------------------------------------------------------------------------------------

CONJECTURE_RUNS = [(5, 3, 2, 4), (5, 3, 2, 5), (5, 3, 2, 6), (4, 3, 2, 4)]
SAMPLES = 10 ** 6
SEED = 74


def test_10_conjecture_probe():
    t0 = time.perf_counter()
    exceeded, mismatched, summary = [], [], []
    for q, d, m, r in CONJECTURE_RUNS:
        p = BoundParams(q, d, m, r)
        rep = conjecture_probe(p, SAMPLES, seed=SEED)
        if rep.max_count > conjecture_bound(p) or rep.spaces_examined < SAMPLES:
            exceeded.append((q, d, m, r, rep.max_count))
        again = conjecture_probe(p, SAMPLES, seed=SEED)
        a, b = rep.to_json(), again.to_json()
        if json.dumps(a, sort_keys=True) != json.dumps(b, sort_keys=True):
            mismatched.append((q, d, m, r))
        summary.append(f"r={r} q={q}: max {rep.max_count}/{rep.bound} gap {rep.extra['gap']}")
    dt = time.perf_counter() - t0
    check(10, "conjecture probe finds no family above H_r(d-1,m)+p_(m-1), reproducibly",
          not exceeded and not mismatched and dt < 1800,
          f"{'; '.join(summary)}; exceeded={exceeded}, irreproducible={mismatched}, {dt:.0f}s")


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
