"""Cyclotomic classes of GF(q^2) and cyclotomic numbers of order 8."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import BadModulus, FitFailure, IndexOutOfRange, NonIntegerCount, NoRepresentation
from .field import FieldCtx, PrimePower, build_field, make_prime_power

# Entry (i, j) names n_{ORDER8_PATTERN[i][j]}: the pattern of (i, j)_8 when q = 3 mod 8.
ORDER8_PATTERN: tuple[tuple[int, ...], ...] = (
    (1, 2, 3, 2, 4, 2, 3, 2),
    (5, 5, 6, 2, 2, 2, 2, 7),
    (8, 2, 8, 7, 3, 2, 3, 6),
    (5, 2, 2, 5, 2, 7, 6, 2),
    (1, 5, 8, 5, 1, 5, 8, 5),
    (5, 2, 7, 6, 2, 5, 2, 2),
    (8, 7, 3, 2, 3, 6, 8, 2),
    (5, 6, 2, 2, 2, 2, 7, 5),
)


@dataclass(frozen=True, eq=False)
class CycloCtx:
    field: FieldCtx
    q: PrimePower
    _tables: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.field.order != self.q.value**2:
            raise ValueError(f"field of order {self.field.order} is not GF({self.q.value}^2)")

    @property
    def order(self) -> int:
        return self.field.order

    def class_index(self, n: int) -> np.ndarray:
        """log(x) mod n for every element; -1 marks zero."""
        if (self.order - 1) % n:
            raise BadModulus(f"{n} does not divide q^2-1 = {self.order - 1}")
        tab = self._tables.get(n)
        if tab is None:
            tab = np.where(self.field.log_table < 0, -1, self.field.log_table % n)
            tab.setflags(write=False)
            self._tables[n] = tab
        return tab


def make_cyclo_ctx(
    q: int | PrimePower,
    modulus: Sequence[int] | None = None,
    omega: int | None = None,
) -> CycloCtx:
    pp = q if isinstance(q, PrimePower) else make_prime_power(q)
    fld = build_field(pp.p, 2 * pp.s, modulus=modulus, omega=omega)
    return CycloCtx(fld, pp)


def cyclotomic_class(ctx: CycloCtx, n: int, i: int) -> np.ndarray:
    tab = ctx.class_index(n)
    if not 0 <= i < n:
        raise IndexOutOfRange(f"class index {i} not in [0, {n})")
    return np.flatnonzero(tab == i)


def classes_union(ctx: CycloCtx, n: int, indices: Iterable[int]) -> np.ndarray:
    """Union of the classes C_i^(n), indices read mod n."""
    tab = ctx.class_index(n)
    wanted = np.zeros(n, dtype=bool)
    wanted[[int(i) % n for i in indices]] = True
    return np.flatnonzero((tab >= 0) & wanted[np.maximum(tab, 0)])


def build_named_sets(ctx: CycloCtx, kind: str, i: int) -> np.ndarray:
    """Half lines H_i, punctured lines L_i, lines S_i and Paley sets D_i."""
    q = ctx.q.value
    ranges = {"H": 2 * (q + 1), "L": q + 1, "S": q + 1, "D": 4}
    if kind not in ranges:
        raise ValueError(f"unknown set kind {kind!r}")
    if not 0 <= i < ranges[kind]:
        raise IndexOutOfRange(f"{kind}_{i} out of range [0, {ranges[kind]})")
    if kind == "H":
        return cyclotomic_class(ctx, 2 * (q + 1), i)
    if kind == "L":
        return cyclotomic_class(ctx, q + 1, i)
    if kind == "S":
        return np.concatenate([[0], cyclotomic_class(ctx, q + 1, i)])
    return classes_union(ctx, 4, (i, i + 1))


@dataclass(frozen=True)
class CycloTable:
    order: int
    counts: np.ndarray

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CycloTable):
            return NotImplemented
        return self.order == other.order and np.array_equal(self.counts, other.counts)

    def rows(self) -> list[list[int]]:
        return self.counts.tolist()


def cyclotomic_numbers_bruteforce(ctx: CycloCtx, n: int) -> CycloTable:
    """(i, j)_n = #{x in C_i : x + 1 in C_j}, one pass over the field."""
    tab = ctx.class_index(n)
    fld = ctx.field
    x = np.arange(1, ctx.order, dtype=np.int64)
    y = fld.add_const(x, 1)
    keep = y != 0
    counts = np.zeros((n, n), dtype=np.int64)
    np.add.at(counts, (tab[x[keep]], tab[y[keep]]), 1)
    return CycloTable(n, counts)


@dataclass(frozen=True)
class TwoSquareRep:
    a: int
    b_abs: int
    b_signed: int | None = None

    def with_sign(self, sign: int) -> TwoSquareRep:
        return replace(self, b_signed=sign * self.b_abs)


def solve_a_b(q: int | PrimePower) -> TwoSquareRep:
    """Proper q^2 = a^2 + 2b^2 with a = 1 mod 4, found by exhaustive scan over b."""
    qv = int(q)
    if qv % 8 != 3:
        raise NoRepresentation(f"q={qv} is not 3 mod 8")
    q2 = qv * qv
    found = []
    for b in range(1, math.isqrt(q2 // 2) + 1):
        rest = q2 - 2 * b * b
        a = math.isqrt(rest)
        if a * a == rest and math.gcd(a, b) == 1:
            found.append((a if a % 4 == 1 else -a, b))
    if len(found) != 1:
        raise NoRepresentation(f"q={qv}: {len(found)} proper representations")
    a, b = found[0]
    return TwoSquareRep(a, b)


def n_values_times_64(q: int, a: int, b: int) -> tuple[int, ...]:
    """64*n_1, ..., 64*n_8 (returned with a dummy slot 0 so index i is n_i)."""
    q2 = q * q
    return (
        0,
        q2 - 15 + 2 * q,
        q2 + 1 - 2 * q - 4 * a,
        q2 + 1 - 6 * q + 8 * a,
        q2 + 1 + 18 * q,
        q2 - 7 - 2 * q + 4 * a,
        q2 + 1 + 6 * q + 4 * a + 16 * b,
        q2 + 1 + 6 * q + 4 * a - 16 * b,
        q2 - 7 + 2 * q - 8 * a,
    )


def n_values(q: int, a: int, b: int) -> tuple[int, ...]:
    scaled = n_values_times_64(q, a, b)
    bad = [i for i in range(1, 9) if scaled[i] % 64]
    if bad:
        raise NonIntegerCount(f"64*n_{bad[0]} = {scaled[bad[0]]} not divisible by 64 (q={q}, a={a}, b={b})")
    return tuple(v // 64 for v in scaled)


def cyclotomic_numbers_formula(q: int | PrimePower, rep: TwoSquareRep) -> CycloTable:
    qv = int(q)
    if qv % 8 != 3:
        raise ValueError(f"q={qv} is not 3 mod 8")
    if rep.b_signed is None:
        raise ValueError("b sign has not been fitted")
    n = n_values(qv, rep.a, rep.b_signed)
    counts = np.array([[n[t] for t in row] for row in ORDER8_PATTERN], dtype=np.int64)
    return CycloTable(8, counts)


def fit_b_sign(ctx: CycloCtx, rep: TwoSquareRep) -> TwoSquareRep:
    """Choose the sign of b that makes the closed form match this presentation."""
    brute = cyclotomic_numbers_bruteforce(ctx, 8)
    hits = []
    for sign in (1, -1):
        cand = rep.with_sign(sign)
        try:
            if cyclotomic_numbers_formula(ctx.q, cand) == brute:
                hits.append(cand)
        except NonIntegerCount:
            continue
    if len(hits) != 1:
        raise FitFailure(f"q={ctx.q.value}: {len(hits)} signs of b reproduce the brute-force table")
    return hits[0]


def compute_N1_to_N4(ctx: CycloCtx, I: Iterable[int]) -> tuple[int, int, int, int]:
    """Set-count N_1..N_4 for D = union of C_i^(8), i in I."""
    I = sorted({int(i) % 8 for i in I})
    if len(I) != 3:
        raise ValueError("I must be a 3-subset of {0..7}")
    tab = ctx.class_index(8)
    x = np.arange(1, ctx.order, dtype=np.int64)
    x1 = ctx.field.add_const(x, 1)
    in_i = np.zeros(8, dtype=bool)
    in_i[I] = True

    def in_shift(elems: np.ndarray, k: int) -> np.ndarray:
        # membership in omega^k D
        t = tab[elems]
        return (t >= 0) & in_i[(t - k) % 8]

    def meet(k1: int, k2: int) -> int:
        # |omega^k1 D  intersect  (omega^k2 D + 1)|: y in omega^k2 D with y+1 in omega^k1 D
        return int(np.count_nonzero(in_shift(x, k2) & in_shift(x1, k1)))

    n1 = meet(1, 3) + meet(3, 1)
    n2 = meet(-1, 1) + meet(1, -1)
    n3 = meet(0, 2) + meet(2, 0)
    n4 = meet(-2, 0) + meet(0, -2)
    return n1, n2, n3, n4


def closed_form_N(q: int, a: int, b: int) -> tuple[int, int, int, int]:
    """N_1..N_4 from the order-8 cyclotomic numbers, for I = {0, 2, 3}.

    For I = {0, 2, 7} pass -b.  N_4 is expanded directly from the table:
    its q coefficient is -20.
    """
    num = (
        18 * q * q - 4 * q - 22,
        18 * q * q - 4 * q - 22,
        18 * q * q + 28 * q - 8 * a - 32 * b - 46,
        18 * q * q - 20 * q + 8 * a + 32 * b - 46,
    )
    if any(v % 64 for v in num):
        raise NonIntegerCount(f"closed-form N not integral for q={q}, a={a}, b={b}")
    return tuple(v // 64 for v in num)  # type: ignore[return-value]


def pattern_multiplicities() -> dict[int, int]:
    counts = {i: 0 for i in range(1, 9)}
    for row in ORDER8_PATTERN:
        for t in row:
            counts[t] += 1
    return counts
