"""Finite fields F_q, q = p^e, with elements encoded as integer indices.

An element sum_i c_i x^i (c_i in F_p, x a root of the field modulus) is
stored as the integer sum_i c_i p^i.  Index 0 is zero and index 1 is one.
Multiplication goes through log/antilog tables over a fixed primitive
element; addition is digit-wise modulo p.  For q <= TABLE_LIMIT full
addition and multiplication tables are also materialised; the counting
kernels rely on them.
"""

from __future__ import annotations

import functools
import itertools
import re

import numpy as np

from .errors import DivisionByZero, FieldMismatch, FieldTooLarge, NotPrimePower, ParseError

MAX_Q = 2 ** 16
TABLE_LIMIT = 256


def factor_int(n: int) -> dict[int, int]:
    """Prime factorisation by trial division (n is tiny here)."""
    out: dict[int, int] = {}
    k = 2
    while k * k <= n:
        while n % k == 0:
            out[k] = out.get(k, 0) + 1
            n //= k
        k += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise NotPrimePower(f"q={q} is not a prime power")
    f = factor_int(q)
    if len(f) != 1:
        raise NotPrimePower(f"q={q} has more than one prime factor")
    ((p, e),) = f.items()
    return p, e


# -- polynomials over F_p as coefficient lists, low to high --------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod_p(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    b = _trim(list(b))
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return a


def _monic_polys(p: int, deg: int):
    for low in itertools.product(range(p), repeat=deg):
        yield list(low) + [1]


def is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg <= 1:
        return deg == 1
    for k in range(1, deg // 2 + 1):
        for cand in _monic_polys(p, k):
            if not _polymod_p(poly, cand, p):
                return False
    return True


def least_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically least (low-to-high) monic irreducible of degree e."""
    for cand in _monic_polys(p, e):
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # cannot happen


# -- the field ----------------------------------------------------------------

class FieldSpec:
    """Immutable description of F_q with precomputed arithmetic tables.

    Build instances with :func:`field_make`; identical q gives the identical
    (cached) object.
    """

    def __init__(self, q: int):
        p, e = prime_power(q)
        if q > MAX_Q:
            raise FieldTooLarge(f"q={q} exceeds the supported maximum {MAX_Q}")
        self.p = p
        self.e = e
        self.q = q
        self.modulus = least_irreducible(p, e)
        self._pow_p = [p ** i for i in range(e)]
        self.generator = self._find_generator()

        n = q - 1
        exp = np.zeros(2 * n, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = 1
        for k in range(n):
            exp[k] = x
            log[x] = k
            x = self._slow_mul(x, self.generator)
        exp[n:] = exp[:n]
        self.exp_table = exp
        self.log_table = log
        self.exp_table.setflags(write=False)
        self.log_table.setflags(write=False)

        digits = np.array([self._digits(a) for a in range(q)], dtype=np.int64).reshape(q, e)
        self.digits = digits
        self.digits.setflags(write=False)
        neg = np.array([self._from_digits([(-c) % p for c in row]) for row in digits], dtype=np.int64)
        self.neg_table = neg
        self.neg_table.setflags(write=False)
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(n - log[1:]) % n]
        self.inv_table = inv
        self.inv_table.setflags(write=False)

        self.add_table = None
        self.mul_table = None
        if q <= TABLE_LIMIT:
            a = np.arange(q)
            self.add_table = self._add_vec(a[:, None], a[None, :]).astype(np.int64)
            self.mul_table = self._mul_vec(a[:, None], a[None, :]).astype(np.int64)
            self.add_table.setflags(write=False)
            self.mul_table.setflags(write=False)
            self._addl = self.add_table.tolist()
            self._mull = self.mul_table.tolist()
        else:
            self._addl = self._mull = None
        self._negl = self.neg_table.tolist()
        self._invl = self.inv_table.tolist()

    # -- construction helpers
    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            a, c = divmod(a, self.p)
            out.append(c)
        return out

    def _from_digits(self, ds) -> int:
        return int(sum(int(c) * w for c, w in zip(ds, self._pow_p)))

    def _slow_mul(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        if e > 1:
            prod = _polymod_p(prod, list(self.modulus), p)
        prod = (list(prod) + [0] * e)[:e]
        return self._from_digits(prod)

    def _slow_pow(self, a: int, k: int) -> int:
        result = 1
        while k:
            if k & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            k >>= 1
        return result

    def _find_generator(self) -> int:
        n = self.q - 1
        if n == 1:
            return 1
        primes = list(factor_int(n))
        for g in range(2, self.q):
            if all(self._slow_pow(g, n // ell) != 1 for ell in primes):
                return g
        raise AssertionError("no primitive element")  # cannot happen

    # -- vectorised arithmetic on index arrays
    def _add_vec(self, a, b):
        if self.e == 1:
            return (np.asarray(a) + np.asarray(b)) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        da = self.digits[np.asarray(a)]
        db = self.digits[np.asarray(b)]
        return ((da + db) % self.p) @ np.array(self._pow_p, dtype=np.int64)

    def _mul_vec(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        a, b = np.broadcast_arrays(a, b)
        out = self.exp_table[(self.log_table[a] + self.log_table[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def add_arr(self, a, b):
        if self.add_table is not None:
            return self.add_table[a, b]
        return self._add_vec(a, b)

    def mul_arr(self, a, b):
        if self.mul_table is not None:
            return self.mul_table[a, b]
        return self._mul_vec(a, b)

    def neg_arr(self, a):
        return self.neg_table[a]

    def sub_arr(self, a, b):
        return self.add_arr(a, self.neg_table[b])

    # -- unchecked scalar arithmetic on plain ints (hot paths in polynomial code)
    def fadd(self, a: int, b: int) -> int:
        if self._addl is not None:
            return self._addl[a][b]
        if self.e == 1:
            return (a + b) % self.p
        return int(self._add_vec(a, b))

    def fmul(self, a: int, b: int) -> int:
        if self._mull is not None:
            return self._mull[a][b]
        if a == 0 or b == 0:
            return 0
        return int(self.exp_table[(self.log_table[a] + self.log_table[b]) % (self.q - 1)])

    def fneg(self, a: int) -> int:
        return self._negl[a]

    def finv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no inverse")
        return self._invl[a]

    # -- scalar arithmetic
    def _check(self, a) -> int:
        if isinstance(a, FieldElem):
            if a.field is not self:
                raise FieldMismatch("element belongs to a different field")
            return a.index
        a = int(a)
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element index of F_{self.q}")
        return a

    def add(self, a, b) -> int:
        a, b = self._check(a), self._check(b)
        return int(self._add_vec(a, b))

    def sub(self, a, b) -> int:
        a, b = self._check(a), self._check(b)
        return int(self._add_vec(a, int(self.neg_table[b])))

    def neg(self, a) -> int:
        return int(self.neg_table[self._check(a)])

    def mul(self, a, b) -> int:
        a, b = self._check(a), self._check(b)
        if a == 0 or b == 0:
            return 0
        return int(self.exp_table[(self.log_table[a] + self.log_table[b]) % (self.q - 1)])

    def inv(self, a) -> int:
        a = self._check(a)
        if a == 0:
            raise DivisionByZero("0 has no inverse")
        return int(self.inv_table[a])

    def div(self, a, b) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int) -> int:
        a = self._check(a)
        k = int(k)
        if a == 0:
            if k < 0:
                raise DivisionByZero("0 has no inverse")
            return 1 if k == 0 else 0
        return int(self.exp_table[(int(self.log_table[a]) * k) % (self.q - 1)])

    def log(self, a) -> int:
        a = self._check(a)
        if a == 0:
            raise DivisionByZero("log of 0")
        return int(self.log_table[a])

    def antilog(self, k: int) -> int:
        return int(self.exp_table[k % (self.q - 1)])

    def order(self, a) -> int:
        """Multiplicative order of a nonzero element."""
        k = self.log(a)
        n = self.q - 1
        from math import gcd

        return n // gcd(n, k)

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def __call__(self, a) -> "FieldElem":
        if isinstance(a, str):
            return FieldElem(self, self.parse(a))
        return FieldElem(self, self._check(a))

    # -- text format
    def format(self, a) -> str:
        a = self._check(a)
        if self.e == 1:
            return str(a)
        if a == 0:
            return "0"
        k = int(self.log_table[a])
        return "1" if k == 0 else f"g^{k}"

    _GPOW = re.compile(r"^g(?:\^(-?\d+))?$")

    def parse(self, text: str) -> int:
        s = text.strip()
        m = self._GPOW.match(s)
        if m:
            k = int(m.group(1)) if m.group(1) is not None else 1
            return self.antilog(k)
        neg = s.startswith("-")
        if neg:
            s = s[1:].strip()
        if not s.isdigit():
            raise ParseError(f"cannot parse field element {text!r}")
        v = int(s)
        if self.e == 1:
            v %= self.p
        elif v not in (0, 1):
            raise ParseError(f"extension field elements are written 0, 1 or g^k, got {text!r}")
        return self.neg(v) if neg else v

    def __repr__(self) -> str:
        return f"FieldSpec(q={self.q}, p={self.p}, e={self.e}, modulus={self.modulus}, generator={self.generator})"

    def __reduce__(self):
        return (field_make, (self.q,))


@functools.lru_cache(maxsize=None)
def field_make(q: int) -> FieldSpec:
    """Return the canonical F_q (deterministic modulus and generator)."""
    return FieldSpec(int(q))


def elements(spec: FieldSpec) -> list[int]:
    return list(spec.elements())


class FieldElem:
    """A field element bound to its field, with operator overloading."""

    __slots__ = ("field", "index")

    def __init__(self, field: FieldSpec, index: int):
        self.field = field
        self.index = int(index)

    def _other(self, b) -> int:
        if isinstance(b, FieldElem):
            if b.field is not self.field:
                raise FieldMismatch(f"F_{self.field.q} vs F_{b.field.q}")
            return b.index
        return self.field._check(b)

    def __add__(self, b):
        return FieldElem(self.field, self.field.add(self.index, self._other(b)))

    __radd__ = __add__

    def __sub__(self, b):
        return FieldElem(self.field, self.field.sub(self.index, self._other(b)))

    def __mul__(self, b):
        return FieldElem(self.field, self.field.mul(self.index, self._other(b)))

    __rmul__ = __mul__

    def __truediv__(self, b):
        return FieldElem(self.field, self.field.div(self.index, self._other(b)))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.index))

    def __pow__(self, k: int):
        return FieldElem(self.field, self.field.pow(self.index, k))

    def inverse(self):
        return FieldElem(self.field, self.field.inv(self.index))

    def __eq__(self, b):
        if isinstance(b, FieldElem):
            return self.field is b.field and self.index == b.index
        if isinstance(b, int):
            return self.index == b
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.index))

    def __int__(self):
        return self.index

    def __repr__(self):
        return f"FieldElem({self.field.format(self.index)} in F_{self.field.q})"

    def __str__(self):
        return self.field.format(self.index)


# -- dense linear algebra over F_q ----------------------------------------------

def rref(F: FieldSpec, mat) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of an integer index matrix over F_q."""
    A = np.array(mat, dtype=np.int64, copy=True)
    if A.ndim != 2:
        A = A.reshape(len(A), -1)
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = F.mul_arr(int(F.inv_table[A[r, c]]), A[r])
        for i in range(rows):
            if i != r and A[i, c]:
                factor = int(F.neg_table[A[i, c]])
                A[i] = F.add_arr(A[i], F.mul_arr(factor, A[r]))
        pivots.append(c)
        r += 1
    return A, pivots


def matrix_rank(F: FieldSpec, mat) -> int:
    A = np.asarray(mat)
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])
