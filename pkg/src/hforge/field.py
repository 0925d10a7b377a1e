"""Prime-power fields GF(p^k) with full discrete-log tables.

Elements are plain ints: the canonical encoding sum(c_i * p**i) of the
coefficient vector (c_0, ..., c_{k-1}) in ascending degree.  All
multiplicative work goes through the log/antilog tables; addition is
digit-wise mod p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from sympy import factorint, isprime

from .errors import DivisionByZero, LogOfZero, NotAPrimePower, TableTooLarge

MAX_TABLE = 2**26

Poly = list[int]


@dataclass(frozen=True)
class PrimePower:
    value: int
    p: int
    s: int

    def __post_init__(self) -> None:
        if self.s < 1 or not isprime(self.p) or self.p**self.s != self.value:
            raise NotAPrimePower(f"{self.value} != {self.p}^{self.s}")

    def __int__(self) -> int:
        return self.value


def make_prime_power(n: int) -> PrimePower:
    if n < 2:
        raise NotAPrimePower(f"{n} is not a prime power")
    fac = factorint(n)
    if len(fac) != 1:
        raise NotAPrimePower(f"{n} has {len(fac)} distinct prime factors")
    ((p, s),) = fac.items()
    return PrimePower(n, int(p), int(s))


# -- polynomials over GF(p), ascending coefficient lists ---------------------


def _trim(a: Poly) -> Poly:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], f: Sequence[int], p: int) -> Poly:
    r = _trim([x % p for x in a])
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(r) - 1 >= df:
        coef = r[-1] * inv_lead % p
        shift = len(r) - 1 - df
        for i, fc in enumerate(f):
            r[shift + i] = (r[shift + i] - coef * fc) % p
        _trim(r)
    return r


def poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def poly_mulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], p: int) -> Poly:
    return poly_mod(poly_mul(a, b, p), f, p)


def poly_powmod(a: Sequence[int], e: int, f: Sequence[int], p: int) -> Poly:
    result: Poly = [1]
    base = poly_mod(a, f, p)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, f, p)
        base = poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def poly_sub(a: Sequence[int], b: Sequence[int], p: int) -> Poly:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> Poly:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Irreducibility of a monic polynomial over GF(p)."""
    k = len(f) - 1
    if k <= 0:
        return False
    if k == 1:
        return True
    if k <= 3:
        # no root <=> irreducible in degree 2 and 3
        return all(sum(c * pow(x, i, p) for i, c in enumerate(f)) % p for x in range(p))
    # Rabin: x^(p^k) = x mod f, and gcd(x^(p^(k/r)) - x, f) = 1 for primes r | k
    x = [0, 1]

    def frob(d: int) -> Poly:
        h = x
        for _ in range(d):
            h = poly_powmod(h, p, f, p)
        return h

    if poly_sub(frob(k), x, p):
        return False
    for r in factorint(k):
        if len(poly_gcd(poly_sub(frob(k // r), x, p), f, p)) > 1:
            return False
    return True


def digits_of(n: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        n, d = divmod(n, p)
        out.append(d)
    return out


def encode(coeffs: Sequence[int], p: int) -> int:
    return sum((c % p) * p**i for i, c in enumerate(coeffs))


def format_poly(coeffs: Sequence[int]) -> str:
    return "[" + ",".join(str(c) for c in coeffs) + "]"


# -- the field ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FieldCtx:
    p: int
    k: int
    modulus: tuple[int, ...]
    omega: int
    log_table: np.ndarray = field(repr=False)
    antilog_table: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return self.p**self.k

    @property
    def mult_order(self) -> int:
        return self.order - 1

    @cached_property
    def digits(self) -> np.ndarray:
        """(order, k) matrix of base-p digits, row x = coefficients of x."""
        idx = np.arange(self.order, dtype=np.int64)
        return np.stack([(idx // self.p**i) % self.p for i in range(self.k)], axis=1)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return ((-self.digits) % self.p) @ self.weights

    @cached_property
    def weights(self) -> np.ndarray:
        return self.p ** np.arange(self.k, dtype=np.int64)

    def header(self) -> str:
        return f"GF({self.p}^{self.k}) mod {format_poly(self.modulus)}"

    def same_presentation(self, other: FieldCtx) -> bool:
        return (self.p, self.k, self.modulus, self.omega) == (
            other.p,
            other.k,
            other.modulus,
            other.omega,
        )

    # scalar arithmetic
    def coeffs(self, x: int) -> list[int]:
        return digits_of(x, self.p, self.k)

    def elem(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.k:
            raise ValueError(f"too many coefficients for degree {self.k}")
        return encode(coeffs, self.p)

    def add(self, x: int, y: int) -> int:
        p = self.p
        return encode([(a + b) for a, b in zip(self.coeffs(x), self.coeffs(y))], p)

    def neg(self, x: int) -> int:
        return int(self.neg_table[x])

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        lx, ly = int(self.log_table[x]), int(self.log_table[y])
        return int(self.antilog_table[(lx + ly) % self.mult_order])

    def inv(self, x: int) -> int:
        if x == 0:
            raise DivisionByZero("inverse of 0")
        return int(self.antilog_table[(-int(self.log_table[x])) % self.mult_order])

    def pow(self, x: int, e: int) -> int:
        if x == 0:
            if e < 0:
                raise DivisionByZero("negative power of 0")
            return 1 if e == 0 else 0
        return int(self.antilog_table[(int(self.log_table[x]) * e) % self.mult_order])

    def log(self, x: int) -> int:
        if x == 0:
            raise LogOfZero("log of 0")
        return int(self.log_table[x])

    def exp(self, i: int) -> int:
        return int(self.antilog_table[i % self.mult_order])

    # vectorised helpers
    def add_arrays(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return ((self.digits[x] + self.digits[y]) % self.p) @ self.weights

    def add_const(self, x: np.ndarray, c: int) -> np.ndarray:
        return ((self.digits[x] + self.digits[c]) % self.p) @ self.weights

    def scale(self, x: np.ndarray, c: int) -> np.ndarray:
        """Multiply every element of ``x`` by the constant ``c``."""
        x = np.asarray(x, dtype=np.int64)
        if c == 0:
            return np.zeros_like(x)
        out = np.zeros_like(x)
        nz = x != 0
        out[nz] = self.antilog_table[(self.log_table[x[nz]] + self.log_table[c]) % self.mult_order]
        return out


def _mul_matrix(a: Poly, f: Sequence[int], p: int, k: int) -> np.ndarray:
    """k x k matrix over GF(p) of the linear map x -> a*x mod f on digit vectors."""
    m = np.zeros((k, k), dtype=np.int64)
    for j in range(k):
        col = poly_mulmod(a, [0] * j + [1], f, p)
        m[: len(col), j] = col
    return m


def _is_primitive(a: Poly, f: Sequence[int], p: int, order: int, primes: Sequence[int]) -> bool:
    if not a:
        return False
    if poly_powmod(a, order, f, p) != [1]:
        return False
    return all(poly_powmod(a, order // r, f, p) != [1] for r in primes)


def build_field(
    p: int,
    k: int,
    modulus: Sequence[int] | None = None,
    omega: int | None = None,
) -> FieldCtx:
    """Build GF(p^k) deterministically.

    Without overrides the modulus is the first monic irreducible polynomial
    when its non-leading coefficients are read as a canonical encoding, and
    omega is the primitive element with the least encoding.  ``modulus``
    (ascending, monic) and ``omega`` pin an alternative presentation.
    """
    if not isprime(p) or k < 1:
        raise NotAPrimePower(f"bad field parameters p={p}, k={k}")
    order = p**k
    if order > MAX_TABLE:
        raise TableTooLarge(f"{p}^{k} = {order} exceeds {MAX_TABLE}")

    if modulus is None:
        for enc in range(order):
            cand = digits_of(enc, p, k) + [1]
            if is_irreducible(cand, p):
                mod = cand
                break
    else:
        mod = [int(c) % p for c in modulus]
        if len(mod) != k + 1 or mod[-1] != 1 or not is_irreducible(mod, p):
            raise ValueError(f"{format_poly(mod)} is not a monic irreducible of degree {k}")

    n = order - 1
    primes = [int(r) for r in factorint(n)] if n > 1 else []
    if omega is None:
        omega = next(
            e for e in range(1, order) if _is_primitive(_trim(digits_of(e, p, k)), mod, p, n, primes)
        )
    elif not _is_primitive(_trim(digits_of(omega, p, k)), mod, p, n, primes):
        raise ValueError(f"element {omega} is not primitive")

    antilog = _power_table(omega, mod, p, k, n)
    log = np.full(order, -1, dtype=np.int64)
    log[antilog] = np.arange(n, dtype=np.int64)
    return FieldCtx(p, k, tuple(mod), omega, log, antilog)


def _power_table(omega: int, mod: Sequence[int], p: int, k: int, n: int) -> np.ndarray:
    # first block of powers by repeated multiplication, later blocks by one
    # vectorised multiplication with omega**block
    weights = p ** np.arange(k, dtype=np.int64)
    w = _trim(digits_of(omega, p, k))
    step = _mul_matrix(w, mod, p, k)
    block = max(1, int(n**0.5))
    first = np.zeros((min(block, n), k), dtype=np.int64)
    cur = np.zeros(k, dtype=np.int64)
    cur[0] = 1
    for i in range(len(first)):
        first[i] = cur
        cur = (step @ cur) % p
    jump = _mul_matrix(_trim([int(c) for c in cur]), mod, p, k)
    chunks = [first]
    while sum(len(c) for c in chunks) < n:
        chunks.append((chunks[-1] @ jump.T) % p)
    digits = np.concatenate(chunks)[:n]
    return digits @ weights


def field_arith(ctx: FieldCtx, op: str, *operands: int) -> int:
    """Dispatch one of add/sub/mul/inv/neg/pow on canonical encodings."""
    ops = {
        "add": ctx.add,
        "sub": ctx.sub,
        "mul": ctx.mul,
        "inv": ctx.inv,
        "neg": ctx.neg,
        "pow": ctx.pow,
    }
    try:
        fn = ops[op]
    except KeyError:
        raise ValueError(f"unknown field operation {op!r}") from None
    return fn(*operands)


def log_index(ctx: FieldCtx, x: int) -> int:
    return ctx.log(x)
