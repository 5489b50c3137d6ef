"""Slow reference implementations used as test oracles.

Nothing here imports fqzeros: field arithmetic is done on coefficient
lists modulo an irreducible found by exhaustive search, and every count is
a direct loop over points.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product


def is_prime(n):
    return n >= 2 and all(n % k for k in range(2, int(n ** 0.5) + 1))


def split_q(q):
    for p in range(2, q + 1):
        if is_prime(p):
            e, t = 0, q
            while t % p == 0:
                t //= p
                e += 1
            if t == 1:
                return p, e
    raise ValueError(q)


def _pmul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def _trim(a):
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


@lru_cache(maxsize=None)
def modulus(q):
    """Lex-least monic irreducible of degree e (coefficients low to high), by exhaustion."""
    p, e = split_q(q)
    if e == 1:
        return (0, 1)
    reducible = set()
    for a in range(1, e):
        for ca in product(range(p), repeat=a):
            for cb in product(range(p), repeat=e - a):
                reducible.add(tuple(_pmul(list(ca) + [1], list(cb) + [1], p)))
    for c in product(range(p), repeat=e):
        cand = tuple(c) + (1,)
        if cand not in reducible:
            return cand
    raise AssertionError


def digits(q, a):
    p, e = split_q(q)
    return [(a // p ** i) % p for i in range(e)]


def undigits(q, ds):
    p, _ = split_q(q)
    return sum(int(c) * p ** i for i, c in enumerate(ds))


def add(q, a, b):
    p, _ = split_q(q)
    return undigits(q, [(x + y) % p for x, y in zip(digits(q, a), digits(q, b))])


def neg(q, a):
    p, _ = split_q(q)
    return undigits(q, [(-x) % p for x in digits(q, a)])


def mul(q, a, b):
    p, e = split_q(q)
    prod_ = _pmul(digits(q, a), digits(q, b), p)
    mod = list(modulus(q))
    for k in range(len(prod_) - 1, e - 1, -1):
        c = prod_[k]
        if c:
            for i in range(e + 1):
                prod_[k - e + i] = (prod_[k - e + i] - c * mod[i]) % p
    return undigits(q, (prod_ + [0] * e)[:e])


def inv(q, a):
    for b in range(1, q):
        if mul(q, a, b) == 1:
            return b
    raise ZeroDivisionError


def power(q, a, k):
    out = 1
    for _ in range(k):
        out = mul(q, out, a)
    return out


def is_primitive(q, g):
    if g == 0:
        return False
    x, seen = 1, set()
    for _ in range(q - 1):
        x = mul(q, x, g)
        seen.add(x)
    return len(seen) == q - 1


# -- geometry ---------------------------------------------------------------------------

def normalize(q, v):
    for c in v:
        if c:
            s = inv(q, c)
            return tuple(mul(q, s, x) for x in v)
    return None


def proj_points(m, q):
    pts = {normalize(q, v) for v in product(range(q), repeat=m + 1) if any(v)}
    return sorted(pts, key=lambda P: (next(i for i, c in enumerate(P) if c), P))


def evaluate(q, terms, point):
    total = 0
    for mono, c in terms.items():
        t = c
        for x, e in zip(point, mono):
            t = mul(q, t, power(q, x, e))
        total = add(q, total, t)
    return total


def monomials(m, d):
    """Exponent tuples in m+1 variables of total degree d, in descending lex."""
    return sorted((t for t in product(range(d + 1), repeat=m + 1) if sum(t) == d), reverse=True)


def zero_mask(q, terms, points):
    mask = 0
    for k, P in enumerate(points):
        if evaluate(q, terms, P) == 0:
            mask |= 1 << k
    return mask


def rank(q, rows):
    rows = [list(r) for r in rows]
    rk, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rk < len(rows) and col < ncols:
        piv = next((i for i in range(rk, len(rows)) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        s = inv(q, rows[rk][col])
        rows[rk] = [mul(q, s, x) for x in rows[rk]]
        for i in range(len(rows)):
            if i != rk and rows[i][col]:
                c = rows[i][col]
                rows[i] = [add(q, x, neg(q, mul(q, c, y))) for x, y in zip(rows[i], rows[rk])]
        rk += 1
        col += 1
    return rk


def span(q, rows):
    out = set()
    for coeffs in product(range(q), repeat=len(rows)):
        v = [0] * len(rows[0])
        for c, row in zip(coeffs, rows):
            v = [add(q, x, mul(q, c, y)) for x, y in zip(v, row)]
        out.add(tuple(v))
    return frozenset(out)


def count_subspaces(M, r, q):
    """Number of r-dim subspaces of F_q^M via ordered independent tuples / |GL_r|."""
    num = 1
    for i in range(r):
        num *= q ** M - q ** i
    den = 1
    for i in range(r):
        den *= q ** r - q ** i
    return num // den


def max_common_zeros(q, m, d, r):
    """max |V(F_1..F_r)| over linearly independent r-sets, plus number of maximising spans.

    Enumerates r-subsets of normalised coefficient vectors, which lists every
    r-dim subspace many times; independent of any echelon-form enumeration.
    """
    monos = monomials(m, d)
    pts = proj_points(m, q)
    vecs = [v for v in product(range(q), repeat=len(monos)) if any(v) and normalize(q, v) == v]
    masks = {v: zero_mask(q, dict(zip(monos, v)), pts) for v in vecs}
    best, spans = -1, set()
    for combo in combinations(vecs, r):
        if rank(q, combo) < r:
            continue
        mask = -1
        for v in combo:
            mask &= masks[v]
        c = bin(mask & ((1 << len(pts)) - 1)).count("1")
        if c > best:
            best, spans = c, set()
        if c == best:
            spans.add(span(q, combo))
    return best, len(spans)


def max_affine_zeros(q, m, d, r):
    monos = sorted((t for t in product(range(d + 1), repeat=m) if sum(t) <= d), reverse=True)
    pts = list(product(range(q), repeat=m))
    vecs = [v for v in product(range(q), repeat=len(monos)) if any(v) and normalize(q, v) == v]
    masks = {v: zero_mask(q, dict(zip(monos, v)), pts) for v in vecs}
    best = -1
    full = (1 << len(pts)) - 1
    for combo in combinations(vecs, r):
        if rank(q, combo) < r:
            continue
        mask = full
        for v in combo:
            mask &= masks[v]
        best = max(best, bin(mask).count("1"))
    return best


def desc_lex_tuples(m, d):
    return sorted((t for t in product(range(d + 1), repeat=m + 1) if sum(t) == d), reverse=True)


def lambda_sorted(d, m, q):
    """Lambda(d, m) in ascending lex, by filtering all of [0, q-1]^m."""
    return sorted(t for t in product(range(q), repeat=m) if sum(t) >= m * (q - 1) - d)
