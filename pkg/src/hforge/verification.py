"""Brute-force checkers.

Every verifier looks only at element sets or matrix rows.  Where a
right-hand side needs named sets (D_0, D_2, eighth-power classes) they are
rebuilt here from the field's log table, not taken from the construction.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .group_ring import (
    FIELD_ADDITIVE,
    Block,
    GroupCtx,
    difference_product,
    equals,
    family_autocorrelation,
    format_element,
    identity,
    indicator,
    linear_combination,
    nonzero,
    whole_group,
)


@dataclass
class VerifyReport:
    subject: str
    passed: bool
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def line(self, machine: bool = False) -> str:
        ms = f"{self.elapsed * 1000:.1f}"
        detail = ";".join(f"{k}={v}" for k, v in self.details.items()) or "-"
        if machine:
            return f"status={'PASS' if self.passed else 'FAIL'}\nsubject={self.subject}\ndetail={detail}\nms={ms}"
        return f"{'PASS' if self.passed else 'FAIL'} subject={self.subject} detail={detail} ms={ms}"

    def __bool__(self) -> bool:
        return self.passed


class _Timer:
    def __enter__(self) -> _Timer:
        self.start = time.perf_counter()
        self.stop: float | None = None
        return self

    def __exit__(self, *exc) -> None:
        self.stop = time.perf_counter()

    @property
    def elapsed(self) -> float:
        # also valid inside the block, for early returns
        return (self.stop or time.perf_counter()) - self.start


def _mismatch_details(ctx: GroupCtx, mismatch: tuple[int, int, int]) -> dict:
    g, got, want = mismatch
    return {"element": format_element(ctx, g), "observed": got, "expected": want}


def _report(subject: str, t: _Timer, ok: bool, details: dict | None = None) -> VerifyReport:
    return VerifyReport(subject, ok, {} if ok else (details or {}), t.elapsed)


def check_difference_family(
    ctx: GroupCtx,
    blocks: Sequence[Block],
    lam: int,
    sizes: Sequence[int] | None = None,
    subject: str = "difference family",
) -> VerifyReport:
    with _Timer() as t:
        got = tuple(len(b) for b in blocks)
        if sizes is not None and got != tuple(sizes):
            ok, details = False, {"sizes": list(got), "declared": list(sizes)}
        elif any(np.any((b.elements < 0) | (b.elements >= ctx.order)) for b in blocks):
            ok, details = False, {"reason": "element outside group"}
        else:
            ac = family_autocorrelation(ctx, blocks)
            rhs = linear_combination(ctx, [(lam, whole_group(ctx)), (sum(got) - lam, identity(ctx))])
            ok, mm = equals(ac, rhs)
            details = {} if ok else _mismatch_details(ctx, mm)
    return _report(subject, t, ok, details)


def verify_difference_family(family) -> VerifyReport:
    v, ks, lam = family.declared
    if v != family.ctx.order:
        return VerifyReport("difference family", False, {"v": v, "order": family.ctx.order})
    return check_difference_family(family.ctx, family.blocks, lam, ks, f"DF({v};{','.join(map(str, ks))};{lam})")


def infer_lambda(order: int, blocks: Sequence[Block]) -> int | None:
    """lambda forced by counting differences, or None when not integral."""
    total = sum(len(b) * (len(b) - 1) for b in blocks)
    if order < 2 or total % (order - 1):
        return None
    return total // (order - 1)


def _fourth_power_sets(fld) -> tuple[np.ndarray, np.ndarray]:
    cls = np.where(fld.log_table < 0, -1, fld.log_table % 4)
    d0 = np.flatnonzero((cls == 0) | (cls == 1))
    d2 = np.flatnonzero((cls == 2) | (cls == 3))
    return d0, d2


def verify_pds(ctx: GroupCtx, D: Block) -> VerifyReport:
    """Paley type pattern ((q^2-5)/4) D + ((q^2-1)/4) D-bar + ((q^2-1)/2) 0."""
    with _Timer() as t:
        n = ctx.order
        subject = f"PDS |D|={len(D)}"
        if ctx.kind != FIELD_ADDITIVE or (n - 1) % 4:
            return _report(subject, t, False, {"reason": "needs GF(q^2) with q = 3 mod 4"})
        if 0 in D:
            return _report(subject, t, False, {"reason": "0 in D"})
        coeffs = ((n - 5) // 4, (n - 1) // 4, (n - 1) // 2)
        d = indicator(ctx, D)
        dbar = nonzero(ctx) - d
        rhs = linear_combination(ctx, [(coeffs[0], d), (coeffs[1], dbar), (coeffs[2], identity(ctx))])
        ok, mm = equals(difference_product(ctx, D, D), rhs)
    return _report(f"PDS |D|={len(D)} coeffs={coeffs}", t, ok, None if ok else _mismatch_details(ctx, mm))


def verify_type_H(ctx: GroupCtx, blocks: Sequence[Block], lam: int | None = None) -> VerifyReport:
    with _Timer() as t:
        ks = [len(b) for b in blocks]
        implied = sum(ks) - ctx.order
        subject = f"type H lambda={implied}"
        if len(blocks) != 4:
            return _report(subject, t, False, {"reason": f"{len(blocks)} blocks"})
        if lam is not None and lam != implied:
            return _report(subject, t, False, {"reason": "sum k - |G| != lambda", "lambda": lam, "implied": implied})
        if implied < 0:
            return _report(subject, t, False, {"reason": "sum k < |G|"})
        inner = check_difference_family(ctx, blocks, implied, ks, subject)
    return VerifyReport(subject, inner.passed, inner.details, t.elapsed)


def _cross_sum(ctx: GroupCtx, E: Sequence[Block]):
    pairs = ((0, 1), (1, 0), (2, 3), (3, 2))
    return linear_combination(ctx, [(1, difference_product(ctx, E[i], E[j])) for i, j in pairs])


def verify_cross_condition(E: Sequence[Block], ctx: GroupCtx) -> VerifyReport:
    """E0 E1^(-1) + E1 E0^(-1) + E2 E3^(-1) + E3 E2^(-1) = (q-1)^2 F + 2 D_0 - 2 D_2."""
    with _Timer() as t:
        fld = ctx.field
        q = round(fld.order**0.5)
        d0, d2 = _fourth_power_sets(fld)
        lhs = _cross_sum(ctx, E)
        rhs = linear_combination(ctx, [((q - 1) ** 2, whole_group(ctx)), (2, d0), (-2, d2)])
        ok, mm = equals(lhs, rhs)
    details = None if ok else {**_mismatch_details(ctx, mm), "totals": f"{lhs.total()}/{rhs.total()}"}
    return _report("cross condition", t, ok, details)


def verify_z_identity(E: Sequence[Block], params, ctx: GroupCtx) -> VerifyReport:
    """Cross sum minus the eighth-class cross products equals 8m(4m+1) 0 + m(28m+5) F*."""
    with _Timer() as t:
        fld = ctx.field
        m = params.m
        cls8 = np.where(fld.log_table < 0, -1, fld.log_table % 8)
        C = [Block(np.flatnonzero(cls8 == i)) for i in range(8)]
        terms = [(1, _cross_sum(ctx, E))]
        for h in (0, 1):
            for i in params.I:
                for j in params.I:
                    terms.append((-1, difference_product(ctx, C[(i + h) % 8], C[(j + 2 + h) % 8])))
                    terms.append((-1, difference_product(ctx, C[(i + 2 + h) % 8], C[(j + h) % 8])))
        lhs = linear_combination(ctx, terms)
        z = linear_combination(ctx, [(8 * m * (4 * m + 1), identity(ctx)), (m * (28 * m + 5), nonzero(ctx))])
        ok, mm = equals(lhs, z)
    subject = f"Z identity m={m} ({8 * m * (4 * m + 1)},{m * (28 * m + 5)})"
    return _report(subject, t, ok, None if ok else _mismatch_details(ctx, mm))


def verify_hadamard(M) -> VerifyReport:
    """Pairwise row orthogonality via xor + popcount on packed rows."""
    with _Timer() as t:
        n = M.order
        rows = M.words
        first = None
        for i in range(n - 1):
            pc = np.bitwise_count(rows[i + 1 :] ^ rows[i]).sum(axis=1, dtype=np.int64)
            bad = np.flatnonzero(pc * 2 != n)
            if len(bad):
                first = (i, i + 1 + int(bad[0]), int(n - 2 * pc[bad[0]]))
                break
    if first is None:
        return VerifyReport(f"hadamard order={n}", True, {}, t.elapsed)
    i, j, dot = first
    return VerifyReport(f"hadamard order={n}", False, {"rows": f"{i},{j}", "dot": dot}, t.elapsed)
