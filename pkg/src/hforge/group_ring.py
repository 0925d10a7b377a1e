"""Integer group rings over (GF(q^2), +) and Z_2 x (GF(q^2), +).

Group elements are indices in [0, |G|).  For the product group the index
of (bit, x) is ``bit * q^2 + x`` with x the field encoding, so every group
is a product of cyclic factors Z_p^k (x Z_2) read off the base-p digits.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import ContextMismatch, ParseError
from .field import FieldCtx, build_field, format_poly

FIELD_ADDITIVE = "field_additive"
Z2_TIMES_FIELD = "z2_times_field"

# pair-loop chunk: number of (a, b) pairs materialised at once
_CHUNK_PAIRS = 1 << 22
# auto mode switches to the transform once a product exceeds this many pairs
_PAIR_LIMIT = 1 << 27


@dataclass(frozen=True, eq=False)
class GroupCtx:
    kind: str
    field: FieldCtx

    def __post_init__(self) -> None:
        if self.kind not in (FIELD_ADDITIVE, Z2_TIMES_FIELD):
            raise ValueError(f"unknown group kind {self.kind!r}")

    @property
    def order(self) -> int:
        return self.field.order * (2 if self.kind == Z2_TIMES_FIELD else 1)

    @cached_property
    def moduli(self) -> np.ndarray:
        m = [self.field.p] * self.field.k
        if self.kind == Z2_TIMES_FIELD:
            m.append(2)
        return np.array(m, dtype=np.int64)

    @cached_property
    def weights(self) -> np.ndarray:
        return np.concatenate([[1], np.cumprod(self.moduli)[:-1]]).astype(np.int64)

    @cached_property
    def coords(self) -> np.ndarray:
        idx = np.arange(self.order, dtype=np.int64)
        return (idx[:, None] // self.weights) % self.moduli

    @cached_property
    def neg_table(self) -> np.ndarray:
        return ((-self.coords) % self.moduli) @ self.weights

    @property
    def zero(self) -> int:
        return 0

    def compatible(self, other: GroupCtx) -> bool:
        return self is other or (
            self.kind == other.kind
            and self.field.p == other.field.p
            and self.field.k == other.field.k
        )

    def sub(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return ((self.coords[x] - self.coords[y]) % self.moduli) @ self.weights

    def add(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return ((self.coords[x] + self.coords[y]) % self.moduli) @ self.weights

    def neg(self, x: np.ndarray) -> np.ndarray:
        return self.neg_table[x]

    def lift(self, bit: int, field_elems: Iterable[int] | np.ndarray) -> np.ndarray:
        """Embed field elements into the {bit} fiber of Z_2 x F."""
        if self.kind != Z2_TIMES_FIELD:
            raise ContextMismatch("lift needs a Z_2 x F group")
        return np.asarray(field_elems, dtype=np.int64) + bit * self.field.order

    def split(self, g: int) -> tuple[int, int]:
        if self.kind == FIELD_ADDITIVE:
            return 0, int(g)
        return divmod(int(g), self.field.order)

    def fft_shape(self) -> tuple[int, ...]:
        # C-order reshape: most significant coordinate first
        return tuple(int(m) for m in self.moduli[::-1])

    def label(self) -> str:
        f = self.field
        base = f"GF({f.p}^{f.k}) mod {format_poly(f.modulus)}"
        return ("Z2x" + base) if self.kind == Z2_TIMES_FIELD else base


def field_group(fld: FieldCtx) -> GroupCtx:
    return GroupCtx(FIELD_ADDITIVE, fld)


def z2_field_group(fld: FieldCtx) -> GroupCtx:
    return GroupCtx(Z2_TIMES_FIELD, fld)


def _as_indices(elements: Iterable[int] | np.ndarray) -> np.ndarray:
    if not isinstance(elements, np.ndarray):
        elements = list(elements)
    return np.asarray(elements, dtype=np.int64).ravel()


class Block:
    """A subset of a group, held as a sorted array of distinct indices."""

    __slots__ = ("elements",)

    def __init__(self, elements: Iterable[int] | np.ndarray) -> None:
        arr = np.unique(_as_indices(elements))
        arr.setflags(write=False)
        self.elements = arr

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return (int(x) for x in self.elements)

    def __contains__(self, g: object) -> bool:
        i = np.searchsorted(self.elements, g)
        return bool(i < len(self.elements) and self.elements[i] == g)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Block):
            return NotImplemented
        return np.array_equal(self.elements, other.elements)

    def __hash__(self) -> int:
        return hash(self.elements.tobytes())

    def __repr__(self) -> str:
        return f"Block(size={len(self)})"

    def mask(self, order: int) -> np.ndarray:
        m = np.zeros(order, dtype=bool)
        m[self.elements] = True
        return m


@dataclass(frozen=True, eq=False)
class GroupRingElem:
    ctx: GroupCtx
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        if self.coeffs.shape != (self.ctx.order,):
            raise ContextMismatch(f"coefficient vector of length {self.coeffs.shape} for |G|={self.ctx.order}")

    def _check(self, other: GroupRingElem) -> None:
        if not self.ctx.compatible(other.ctx):
            raise ContextMismatch(f"{self.ctx.label()} vs {other.ctx.label()}")

    def __add__(self, other: GroupRingElem) -> GroupRingElem:
        self._check(other)
        return GroupRingElem(self.ctx, self.coeffs + other.coeffs)

    def __sub__(self, other: GroupRingElem) -> GroupRingElem:
        self._check(other)
        return GroupRingElem(self.ctx, self.coeffs - other.coeffs)

    def __neg__(self) -> GroupRingElem:
        return GroupRingElem(self.ctx, -self.coeffs)

    def __rmul__(self, k: int) -> GroupRingElem:
        return GroupRingElem(self.ctx, int(k) * self.coeffs)

    def __getitem__(self, g: int) -> int:
        return int(self.coeffs[g])

    def total(self) -> int:
        return int(self.coeffs.sum())


def indicator(ctx: GroupCtx, elements: Block | Iterable[int] | np.ndarray) -> GroupRingElem:
    idx = elements.elements if isinstance(elements, Block) else _as_indices(elements)
    v = np.zeros(ctx.order, dtype=np.int64)
    np.add.at(v, idx, 1)
    return GroupRingElem(ctx, v)


def whole_group(ctx: GroupCtx) -> GroupRingElem:
    return GroupRingElem(ctx, np.ones(ctx.order, dtype=np.int64))


def identity(ctx: GroupCtx) -> GroupRingElem:
    v = np.zeros(ctx.order, dtype=np.int64)
    v[0] = 1
    return GroupRingElem(ctx, v)


def nonzero(ctx: GroupCtx) -> GroupRingElem:
    return whole_group(ctx) - identity(ctx)


def _pairs_product(ctx: GroupCtx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros(ctx.order, dtype=np.int64)
    if len(a) == 0 or len(b) == 0:
        return out
    ca, cb = ctx.coords[a], ctx.coords[b]
    step = max(1, _CHUNK_PAIRS // len(b))
    for start in range(0, len(a), step):
        d = (ca[start : start + step, None, :] - cb[None, :, :]) % ctx.moduli
        out += np.bincount((d @ ctx.weights).ravel(), minlength=ctx.order)
    return out


def _fft_product(ctx: GroupCtx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    shape = ctx.fft_shape()
    fa = np.zeros(ctx.order)
    fb = np.zeros(ctx.order)
    fa[a] = 1
    fb[b] = 1
    spec = np.fft.fftn(fa.reshape(shape)) * np.conj(np.fft.fftn(fb.reshape(shape)))
    return np.rint(np.fft.ifftn(spec).real).astype(np.int64).ravel()


def difference_product(ctx: GroupCtx, A: Block, B: Block, method: str = "auto") -> GroupRingElem:
    """A * B^(-1): coefficient of g counts pairs (a, b) with a - b = g.

    ``method`` is "pairs" (direct pair enumeration), "fft" (character
    transform over the product of cyclic factors) or "auto", which uses the
    pair loop unless the product has more than 2^27 pairs.
    """
    a, b = A.elements, B.elements
    if method == "auto":
        method = "pairs" if len(a) * len(b) <= _PAIR_LIMIT else "fft"
    if method == "pairs":
        coeffs = _pairs_product(ctx, a, b)
    elif method == "fft":
        coeffs = _fft_product(ctx, a, b)
    else:
        raise ValueError(f"unknown method {method!r}")
    return GroupRingElem(ctx, coeffs)


def family_autocorrelation(ctx: GroupCtx, blocks: Sequence[Block], method: str = "auto") -> GroupRingElem:
    if not blocks:
        raise ValueError("empty family")
    total = np.zeros(ctx.order, dtype=np.int64)
    for blk in blocks:
        total += difference_product(ctx, blk, blk, method).coeffs
    return GroupRingElem(ctx, total)


Term = Union[GroupRingElem, Block, np.ndarray]


def linear_combination(ctx: GroupCtx, terms: Iterable[tuple[int, Term]]) -> GroupRingElem:
    out = np.zeros(ctx.order, dtype=np.int64)
    for k, t in terms:
        if isinstance(t, GroupRingElem):
            if not ctx.compatible(t.ctx):
                raise ContextMismatch(f"{t.ctx.label()} vs {ctx.label()}")
            out += int(k) * t.coeffs
        else:
            out += int(k) * indicator(ctx, t).coeffs
    return GroupRingElem(ctx, out)


def equals(lhs: GroupRingElem, rhs: GroupRingElem) -> tuple[bool, tuple[int, int, int] | None]:
    """Componentwise equality; on failure the least mismatching (g, lhs[g], rhs[g])."""
    if not lhs.ctx.compatible(rhs.ctx):
        raise ContextMismatch(f"{lhs.ctx.label()} vs {rhs.ctx.label()}")
    diff = np.flatnonzero(lhs.coeffs != rhs.coeffs)
    if len(diff) == 0:
        return True, None
    g = int(diff[0])
    return False, (g, int(lhs.coeffs[g]), int(rhs.coeffs[g]))


def format_element(ctx: GroupCtx, g: int) -> str:
    bit, x = ctx.split(g)
    return f"{bit}:" + ",".join(str(c) for c in ctx.field.coeffs(x))


# -- family file ---------------------------------------------------------------

_HEADER = re.compile(r"^DF (Z2x)?GF\((\d+)\^(\d+)\) mod \[([\d,]*)\] blocks=(\d+)$")
_BLOCK = re.compile(r"^block (\d+) size=(\d+):(.*)$")


def dumps_family(ctx: GroupCtx, blocks: Sequence[Block]) -> str:
    lines = [f"DF {ctx.label()} blocks={len(blocks)}"]
    for i, blk in enumerate(blocks):
        toks = " ".join(format_element(ctx, g) for g in blk)
        lines.append(f"block {i} size={len(blk)}:" + (" " + toks if toks else ""))
    return "\n".join(lines) + "\n"


def loads_family(text: str) -> tuple[GroupCtx, list[Block]]:
    lines = [ln.rstrip("\r") for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty family file")
    m = _HEADER.match(lines[0])
    if not m:
        raise ParseError(f"bad header: {lines[0]!r}")
    z2, p, k, poly, n = m.groups()
    p, k, n = int(p), int(k), int(n)
    try:
        modulus = [int(c) for c in poly.split(",")]
        fld = build_field(p, k, modulus=modulus)
    except Exception as exc:
        raise ParseError(f"bad field presentation: {exc}") from exc
    ctx = GroupCtx(Z2_TIMES_FIELD if z2 else FIELD_ADDITIVE, fld)
    if len(lines) != n + 1:
        raise ParseError(f"header announces {n} blocks, found {len(lines) - 1}")
    blocks = []
    for i, ln in enumerate(lines[1:]):
        bm = _BLOCK.match(ln)
        if not bm or int(bm.group(1)) != i:
            raise ParseError(f"bad block line {i}: {ln[:60]!r}")
        elems = []
        for tok in bm.group(3).split():
            try:
                bit_s, coeff_s = tok.split(":")
                bit = int(bit_s)
                coeffs = [int(c) for c in coeff_s.split(",")]
            except ValueError:
                raise ParseError(f"bad element token {tok!r}") from None
            if len(coeffs) != k or any(not 0 <= c < p for c in coeffs) or bit not in (0, 1):
                raise ParseError(f"element {tok!r} out of range")
            if bit and not z2:
                raise ParseError(f"element {tok!r} has a Z2 part in a field group")
            elems.append(bit * fld.order + fld.elem(coeffs))
        if len(set(elems)) != len(elems):
            raise ParseError(f"block {i} repeats an element")
        if len(elems) != int(bm.group(2)):
            raise ParseError(f"block {i} declares size {bm.group(2)}, has {len(elems)}")
        blocks.append(Block(elems))
    return ctx, blocks


def write_family(path: str | Path, ctx: GroupCtx, blocks: Sequence[Block]) -> None:
    Path(path).write_text(dumps_family(ctx, blocks), encoding="ascii")


def read_family(path: str | Path) -> tuple[GroupCtx, list[Block]]:
    return loads_family(Path(path).read_text(encoding="ascii"))
