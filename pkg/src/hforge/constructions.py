"""Block constructions: Paley sets, B_0/B_1, cyclotomic type-H families, E-blocks
and the four-block family in Z_2 x GF(q^2)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from sympy import isprime

from .cyclotomy import CycloCtx, TwoSquareRep, classes_union, fit_b_sign, make_cyclo_ctx, solve_a_b
from .errors import ConditionConflict, NotAdmissible, NotAPrimePower, SpecViolation
from .field import PrimePower, make_prime_power
from .group_ring import Block, GroupCtx, z2_field_group


def form_value(c: int) -> int:
    return 12 * c * c + 4 * c + 3


def is_prime_power(n: int) -> bool:
    try:
        make_prime_power(n)
    except NotAPrimePower:
        return False
    return True


def admissible_q_list(max_q: int) -> list[int]:
    """Prime powers 12c^2 + 4c + 3 < max_q over all integers c, ascending."""
    if max_q < 3:
        raise ValueError("bound must be at least 3")
    vals = set()
    for sign in (1, -1):
        c = 0 if sign == 1 else -1
        while (v := form_value(c)) < max_q:
            if isprime(v) or is_prime_power(v):
                vals.add(v)
            c += sign
    return sorted(vals)


def solve_c(q: int) -> int | None:
    """The integer c with 12c^2 + 4c + 3 = q, if any."""
    disc = 3 * q - 8
    if disc < 0:
        return None
    r = math.isqrt(disc)
    if r * r != disc:
        return None
    for num in (r - 1, -r - 1):
        if num % 6 == 0 and form_value(num // 6) == q:
            return num // 6
    return None


@dataclass(frozen=True)
class QParams:
    q: PrimePower
    c: int
    m: int
    rep: TwoSquareRep
    I: tuple[int, ...]
    y: int
    J1: tuple[int, ...]
    J2: tuple[int, ...]

    @property
    def qv(self) -> int:
        return self.q.value


def select_y(I: Sequence[int]) -> int:
    """The member of I whose parity occurs exactly once in I."""
    odd = [i for i in I if i % 2]
    even = [i for i in I if i % 2 == 0]
    if len(odd) == 1:
        return odd[0]
    if len(even) == 1:
        return even[0]
    raise ValueError(f"{sorted(I)} has no element of unique parity")


def j_sets(y: int, m: int, q: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    j1 = tuple((y + 2 + 4 * i) % (q + 1) for i in range(m))
    j2 = tuple((y + 4 * i) % (q + 1) for i in range(m))
    return j1, j2


def derive_params(q: int | PrimePower, ctx: CycloCtx | None = None) -> QParams:
    """All per-q data; ``ctx`` fixes the presentation that pins the sign of b."""
    qv = int(q)
    c = solve_c(qv)
    if c is None or qv % 8 != 3 or not is_prime_power(qv):
        raise NotAdmissible(f"q={qv} is not a prime power of the form 12c^2+4c+3")
    pp = q if isinstance(q, PrimePower) else make_prime_power(qv)
    if ctx is None:
        ctx = make_cyclo_ctx(pp)
    rep = fit_b_sign(ctx, solve_a_b(pp))
    if rep.a != 4 * c * c + 12 * c + 1 or rep.b_abs != abs(8 * c * c - 2):
        raise ConditionConflict(f"q={qv}: (a, |b|) = ({rep.a}, {rep.b_abs}) disagrees with c={c}")
    cond_a = 3 * qv == rep.a + 4 * rep.b_signed + 16
    cond_b = 3 * qv == rep.a - 4 * rep.b_signed + 16
    if cond_a == cond_b:
        raise ConditionConflict(f"q={qv}: sign conditions hold {'both' if cond_a else 'neither'}")
    I = (0, 2, 3) if cond_a else (0, 2, 7)
    m = (qv - 3) // 8
    y = select_y(I)
    J1, J2 = j_sets(y, m, qv)
    return QParams(pp, c, m, rep, I, y, J1, J2)


def index_conditions(params: QParams) -> dict[str, bool]:
    """The four set conditions tying the half-line index sets I_1, I_2 to J_1, J_2."""
    q, m = params.qv, params.m
    n2 = 2 * (q + 1)
    I1, I2 = half_line_index_sets(params)
    J1, J2 = set(params.J1), set(params.J2)
    I1p = {x % (q + 1) for x in I1}
    I2p = {x % (q + 1) for x in I2}
    return {
        "sizes": len(I1) == len(I2) == 3 * (q + 1) // 4 and len(J1) == len(J2) == m,
        "no_antipodal_half_lines": all(not (S & {(h + q + 1) % n2 for h in S}) for S in (I1, I2)),
        "lines_disjoint": all(a % (q + 1) != b for S, J in ((I1, J1), (I2, J2)) for a in S for b in J),
        "cover_count": len(I1) + 2 * len(J1) == len(I2) + 2 * len(J2) == q,
        "nested": J1 <= (I2p | J2) and J2 <= (I1p | J1),
    }


def half_line_index_sets(params: QParams) -> tuple[set[int], set[int]]:
    q, m = params.qv, params.m
    n2 = 2 * (q + 1)
    I1 = {(x + 8 * i) % n2 for x in params.I for i in range(2 * m + 1)}
    return I1, {(x + 2) % n2 for x in I1}


def build_paley_pds(ctx: CycloCtx, i: int) -> Block:
    """D_i: union of two consecutive fourth-power classes."""
    if ctx.q.value % 4 != 3:
        raise ValueError("Paley type sets need q = 3 mod 4")
    return Block(classes_union(ctx, 4, (i, i + 1)))


def build_B0_B1(gctx: GroupCtx, ctx: CycloCtx) -> tuple[Block, Block]:
    d0 = build_paley_pds(ctx, 0).elements
    d2 = build_paley_pds(ctx, 2).elements
    rest = np.setdiff1d(np.arange(ctx.order), d0)
    b0 = Block(np.concatenate([gctx.lift(0, d0), gctx.lift(1, rest)]))
    b1 = Block(np.concatenate([gctx.lift(0, d2), gctx.lift(1, d2)]))
    return b0, b1


@dataclass(frozen=True)
class LmsSpec:
    e: int
    alpha: int
    A: tuple[int, ...]
    B_sets: tuple[tuple[int, ...], ...]


def check_lms_spec(spec: LmsSpec, q: int) -> int:
    """Raise SpecViolation unless every hypothesis holds; returns beta."""
    e = spec.e
    if e < 2 or e & (e - 1) or (q + 1) % e or ((q + 1) // e) % 2 == 0:
        raise SpecViolation("e", f"{e} is not the exact power of 2 dividing q+1={q + 1}")
    if spec.alpha % 2 == 0 or spec.alpha >= e:
        raise SpecViolation("alpha", f"alpha={spec.alpha} must be odd and < e={e}")
    num = q * e - spec.alpha * (q + 1)
    if num % (2 * e):
        raise SpecViolation("beta", "beta is not an integer")
    beta = num // (2 * e)
    if len(set(spec.A)) != spec.alpha or any(not 0 <= a < 2 * e for a in spec.A):
        raise SpecViolation("A", f"need {spec.alpha} distinct indices in [0, {2 * e})")
    if len(spec.B_sets) != e:
        raise SpecViolation("B", f"need {e} index sets, got {len(spec.B_sets)}")
    for r, B in enumerate(spec.B_sets):
        if len(set(B)) != beta or any(not 0 <= b <= q for b in B):
            raise SpecViolation("B", f"B_{r} must be {beta} distinct indices in [0, {q}]")
    for b in {b for B in spec.B_sets for b in B}:
        for a in spec.A:
            if (b - a) % e == 0:
                raise SpecViolation("congruence", f"b={b} = a={a} mod {e}")
    return beta


def build_lms_blocks(ctx: CycloCtx, spec: LmsSpec) -> list[Block]:
    """Blocks omega^i (H u M_i) from half-line classes and punctured lines."""
    q = ctx.q.value
    check_lms_spec(spec, q)
    e = spec.e
    blocks = []
    for i, B in enumerate(spec.B_sets):
        h = classes_union(ctx, 2 * e, (a + i for a in spec.A))
        mi = classes_union(ctx, q + 1, (b + i for b in B))
        blocks.append(Block(np.concatenate([h, mi])))
    return blocks


def lms_spec_for(params: QParams) -> LmsSpec:
    q, y, m = params.qv, params.y, params.m
    b_low = tuple((y - 2 + 4 * i) % (q + 1) for i in range(m))
    return LmsSpec(4, 3, params.I, (params.J1, params.J1, b_low, b_low))


def build_E_blocks(params: QParams, ctx: CycloCtx) -> tuple[Block, Block, Block, Block]:
    """E_0..E_3: three eighth-power classes plus m punctured lines each."""
    q = params.qv
    I, J1, J2 = params.I, params.J1, params.J2

    def blk(shift_c: int, J: Sequence[int], shift_l: int) -> Block:
        cls = classes_union(ctx, 8, (i + shift_c for i in I))
        lines = classes_union(ctx, q + 1, (j + shift_l for j in J))
        return Block(np.concatenate([cls, lines]))

    return blk(0, J1, 0), blk(2, J2, 0), blk(1, J1, 1), blk(3, J2, 1)


@dataclass(frozen=True, eq=False)
class DiffFamily:
    ctx: GroupCtx
    blocks: tuple[Block, ...]
    declared: tuple[int, tuple[int, ...], int]

    def __post_init__(self) -> None:
        v, ks, _ = self.declared
        if v != self.ctx.order:
            raise ValueError(f"declared v={v} but |G|={self.ctx.order}")
        if tuple(len(b) for b in self.blocks) != tuple(ks):
            raise ValueError(f"block sizes {[len(b) for b in self.blocks]} != declared {list(ks)}")

    @property
    def lam(self) -> int:
        return self.declared[2]


def family_from_E(gctx: GroupCtx, b0: Block, b1: Block, E: Sequence[Block]) -> tuple[Block, Block, Block, Block]:
    n = gctx.field.order
    allf = np.arange(n)
    b2 = Block(np.concatenate([gctx.lift(0, E[0].elements), gctx.lift(1, np.setdiff1d(allf, E[1].elements))]))
    b3 = Block(np.concatenate([gctx.lift(0, E[2].elements), gctx.lift(1, np.setdiff1d(allf, E[3].elements))]))
    return b0, b1, b2, b3


def build_family(
    q: int | PrimePower,
    ctx: CycloCtx | None = None,
    params: QParams | None = None,
) -> DiffFamily:
    """The (2q^2; q^2, q^2-1, q^2, q^2; 2q^2-2) family in Z_2 x GF(q^2)."""
    if ctx is None:
        ctx = make_cyclo_ctx(int(q))
    if params is None:
        params = derive_params(ctx.q, ctx)
    gctx = z2_field_group(ctx.field)
    b0, b1 = build_B0_B1(gctx, ctx)
    blocks = family_from_E(gctx, b0, b1, build_E_blocks(params, ctx))
    n = ctx.order
    return DiffFamily(gctx, blocks, (2 * n, (n, n - 1, n, n), 2 * n - 2))
