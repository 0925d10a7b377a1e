"""Group-invariant sign matrices and the two Hadamard arrays.

A sign matrix is stored row-packed: bit 1 means entry -1.  The
Goethals-Seidel layout is data (``GS_LAYOUT``); the bordered variant used for
type H_4^* families reuses it with every slot matrix bordered by a constant
row and column.  The border signs are not transcribed from anywhere: they
are recovered by exhaustive search on the smallest family and re-verified
for every later build.
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import CalibrationExhausted, OrderMismatch, ParamMismatch, ParseError
from .group_ring import Block, GroupCtx

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SignMatrix:
    order: int
    words: np.ndarray  # (order, ceil(order / 64)) uint64

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> SignMatrix:
        dense = np.asarray(dense)
        n = dense.shape[0]
        if dense.shape != (n, n):
            raise OrderMismatch(f"matrix of shape {dense.shape} is not square")
        if not np.all(np.abs(dense) == 1):
            raise ValueError("entries must be +1 or -1")
        bits = np.packbits(dense < 0, axis=1, bitorder="little")
        width = -(-n // 64) * 8
        padded = np.zeros((n, width), dtype=np.uint8)
        padded[:, : bits.shape[1]] = bits
        return cls(n, padded.view(np.uint64))

    def to_dense(self) -> np.ndarray:
        bits = np.unpackbits(self.words.view(np.uint8), axis=1, bitorder="little")[:, : self.order]
        return (1 - 2 * bits.astype(np.int8)).astype(np.int8)

    def flip(self, i: int, j: int) -> SignMatrix:
        words = self.words.copy()
        words[i, j // 64] ^= np.uint64(1) << np.uint64(j % 64)
        return SignMatrix(self.order, words)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignMatrix):
            return NotImplemented
        return self.order == other.order and np.array_equal(self.words, other.words)


def block_dense(ctx: GroupCtx, B: Block) -> np.ndarray:
    """M[x][y] = -1 if y - x in B else +1, as int8."""
    mask = B.mask(ctx.order)
    c = ctx.coords
    diff = ((c[None, :, :] - c[:, None, :]) % ctx.moduli) @ ctx.weights
    return np.where(mask[diff], -1, 1).astype(np.int8)


def block_to_sign_matrix(ctx: GroupCtx, B: Block) -> SignMatrix:
    return SignMatrix.from_dense(block_dense(ctx, B))


def inversion_matrix(ctx: GroupCtx) -> np.ndarray:
    """0/1 permutation matrix R[x][y] = 1 iff x + y = 0."""
    n = ctx.order
    r = np.zeros((n, n), dtype=np.int8)
    r[np.arange(n), ctx.neg_table] = 1
    return r


def _perm_of(R: np.ndarray) -> np.ndarray:
    n = R.shape[0]
    if R.shape != (n, n) or not (np.all(R.sum(axis=0) == 1) and np.all(R.sum(axis=1) == 1)):
        raise ValueError("R is not a permutation matrix")
    return R.argmax(axis=0)


# (slot, transpose, sign, times_R) for each cell of the 4 x 4 array
GS_LAYOUT: tuple[tuple[tuple[int, bool, int, bool], ...], ...] = (
    ((0, False, 1, False), (1, False, 1, True), (2, False, 1, True), (3, False, 1, True)),
    ((1, False, -1, True), (0, False, 1, False), (3, True, -1, True), (2, True, 1, True)),
    ((2, False, -1, True), (3, True, 1, True), (0, False, 1, False), (1, True, -1, True)),
    ((3, False, -1, True), (2, True, -1, True), (1, True, 1, True), (0, False, 1, False)),
)


def _dense(x: SignMatrix | np.ndarray) -> np.ndarray:
    return x.to_dense() if isinstance(x, SignMatrix) else np.asarray(x, dtype=np.int8)


def _assemble(slots: Sequence[np.ndarray], perm: np.ndarray) -> np.ndarray:
    m = slots[0].shape[0]
    if any(s.shape != (m, m) for s in slots) or len(perm) != m:
        raise OrderMismatch(f"slot orders {[s.shape for s in slots]} vs R of order {len(perm)}")
    out = np.empty((4 * m, 4 * m), dtype=np.int8)
    for r, row in enumerate(GS_LAYOUT):
        for c, (slot, transpose, sign, times_r) in enumerate(row):
            x = slots[slot].T if transpose else slots[slot]
            if times_r:
                x = x[:, perm]
            out[r * m : (r + 1) * m, c * m : (c + 1) * m] = sign * x
    return out


def goethals_seidel(A, B, C, D, R: np.ndarray) -> SignMatrix:
    """Goethals-Seidel array on four group-invariant sign matrices of one order."""
    return SignMatrix.from_dense(_assemble([_dense(x) for x in (A, B, C, D)], _perm_of(np.asarray(R))))


# -- bordered array for type H_4^* families ------------------------------------


def _signs(s: str) -> tuple[int, ...]:
    if len(s) != 4 or set(s) - {"+", "-"}:
        raise ParseError(f"bad sign string {s!r}")
    return tuple(1 if ch == "+" else -1 for ch in s)


def _sign_str(v: Sequence[int]) -> str:
    return "".join("+" if x > 0 else "-" for x in v)


_SCHEME = re.compile(r"^perm=(\d),(\d),(\d),(\d) c=(\S{4}) s=(\S{4}) eps=(\S{4})$")


@dataclass(frozen=True, order=True)
class BorderScheme:
    """slot_perm[k] is the block placed in slot k; signs are per slot."""

    slot_perm: tuple[int, int, int, int]
    c: tuple[int, int, int, int]
    s: tuple[int, int, int, int]
    eps: tuple[int, int, int, int]

    def __post_init__(self) -> None:
        if sorted(self.slot_perm) != [0, 1, 2, 3]:
            raise ValueError(f"{self.slot_perm} is not a permutation of 0..3")
        for v in (self.c, self.s, self.eps):
            if len(v) != 4 or any(x not in (1, -1) for x in v):
                raise ValueError("signs must be four values in {+1, -1}")

    def line(self) -> str:
        p = ",".join(map(str, self.slot_perm))
        return f"perm={p} c={_sign_str(self.c)} s={_sign_str(self.s)} eps={_sign_str(self.eps)}"

    @classmethod
    def parse(cls, line: str) -> BorderScheme:
        m = _SCHEME.match(line.strip())
        if not m:
            raise ParseError(f"bad scheme line {line!r}")
        g = m.groups()
        try:
            return cls(tuple(int(x) for x in g[:4]), _signs(g[4]), _signs(g[5]), _signs(g[6]))
        except ValueError as exc:
            raise ParseError(str(exc)) from exc

    def negated(self) -> BorderScheme:
        """The scheme producing -H."""
        return BorderScheme(self.slot_perm, tuple(-x for x in self.c), tuple(-x for x in self.s), tuple(-x for x in self.eps))


def identity_scheme() -> BorderScheme:
    return BorderScheme((0, 1, 2, 3), (1, 1, 1, 1), (1, 1, 1, 1), (1, 1, 1, 1))


def all_schemes() -> Iterable[BorderScheme]:
    signs = list(itertools.product((1, -1), repeat=4))
    for perm in itertools.permutations(range(4)):
        for c in signs:
            for s in signs:
                for eps in signs:
                    yield BorderScheme(perm, c, s, eps)


def check_h4_star(family) -> int:
    """n for a (2n; n, n, n, n-1; 2n-2) family, else ParamMismatch."""
    v, ks, lam = family.declared
    if len(family.blocks) != 4 or v % 2:
        raise ParamMismatch(f"declared {family.declared} is not type H4*")
    n = v // 2
    if sorted(ks) != [n - 1, n, n, n] or lam != 2 * n - 2 or sum(ks) - (v + 1) != lam:
        raise ParamMismatch(f"declared {family.declared} is not (2n; n,n,n,n-1; 2n-2)")
    return n


def bordered(m: np.ndarray, corner: int, border: int, eps: int) -> np.ndarray:
    n = m.shape[0]
    out = np.empty((n + 1, n + 1), dtype=np.int8)
    out[0, 0] = corner
    out[0, 1:] = border
    out[1:, 0] = border
    out[1:, 1:] = eps * m
    return out


def extended_inversion(ctx: GroupCtx) -> np.ndarray:
    """R extended by a lone fixed corner: permutation on order |G| + 1."""
    return np.concatenate([[0], ctx.neg_table + 1])


def _ww_dense(mats: Sequence[np.ndarray], perm_r: np.ndarray, scheme: BorderScheme) -> np.ndarray:
    slots = [
        bordered(mats[scheme.slot_perm[k]], scheme.c[k], scheme.s[k], scheme.eps[k])
        for k in range(4)
    ]
    return _assemble(slots, perm_r)


def wallis_whiteman(family, scheme: BorderScheme) -> SignMatrix:
    """Hadamard matrix of order 4(|G| + 1) from a type H_4^* family."""
    check_h4_star(family)
    mats = [block_dense(family.ctx, b) for b in family.blocks]
    return SignMatrix.from_dense(_ww_dense(mats, extended_inversion(family.ctx), scheme))


def border_row_condition(scheme: BorderScheme, row_sums: Sequence[int]) -> bool:
    """Orthogonality of row 0 with the rest of the first block row.

    ``row_sums[b]`` is the row sum of block b's sign matrix; the condition is
    sum over slots of s_k (c_k + eps_k * row_sum) = 0.
    """
    total = 0
    for k in range(4):
        total += scheme.s[k] * (scheme.c[k] + scheme.eps[k] * row_sums[scheme.slot_perm[k]])
    return total == 0


def _is_hadamard_dense(h: np.ndarray) -> bool:
    n = h.shape[0]
    hf = h.astype(np.float64)
    first = hf[0] @ hf.T
    if first[0] != n or np.any(first[1:]):
        return False
    return bool(np.array_equal(hf @ hf.T, n * np.eye(n)))


def calibrate_border_scheme(family, cache_path: str | Path | None = None) -> list[BorderScheme]:
    """Every scheme in the documented space that yields a Hadamard matrix for ``family``."""
    check_h4_star(family)
    ctx = family.ctx
    mats = [block_dense(ctx, b) for b in family.blocks]
    row_sums = [int(m[0].sum()) for m in mats]
    perm_r = extended_inversion(ctx)
    found = []
    tried = 0
    for scheme in all_schemes():
        if not border_row_condition(scheme, row_sums):
            continue
        tried += 1
        if _is_hadamard_dense(_ww_dense(mats, perm_r, scheme)):
            found.append(scheme)
    log.info("calibration: %d candidates assembled, %d pass", tried, len(found))
    if not found:
        raise CalibrationExhausted(f"no scheme in the documented space works ({tried} assembled)")
    if cache_path is not None:
        write_schemes(cache_path, found[:1])
    return found


def write_schemes(path: str | Path, schemes: Sequence[BorderScheme]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(s.line() + "\n" for s in schemes), encoding="ascii")


def read_schemes(path: str | Path) -> list[BorderScheme]:
    return [BorderScheme.parse(ln) for ln in Path(path).read_text(encoding="ascii").splitlines() if ln.strip()]


# -- matrix file -----------------------------------------------------------------


def dumps_matrix(M: SignMatrix) -> str:
    chars = np.where(M.to_dense() > 0, ord("+"), ord("-")).astype(np.uint8)
    rows = [r.tobytes().decode("ascii") for r in chars]
    return f"H {M.order}\n" + "\n".join(rows) + "\n"


def loads_matrix(text: str) -> SignMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty matrix file")
    m = re.match(r"^H (\d+)$", lines[0])
    if not m:
        raise ParseError(f"bad header {lines[0]!r}")
    n = int(m.group(1))
    rows = lines[1:]
    if len(rows) != n or any(len(r) != n or set(r) - {"+", "-"} for r in rows):
        raise ParseError(f"expected {n} rows of {n} characters over {{+,-}}")
    raw = np.frombuffer("".join(rows).encode("ascii"), dtype=np.uint8).reshape(n, n)
    dense = np.where(raw == ord("+"), 1, -1).astype(np.int8)
    return SignMatrix.from_dense(dense)


def write_matrix(path: str | Path, M: SignMatrix) -> None:
    Path(path).write_text(dumps_matrix(M), encoding="ascii")


def read_matrix(path: str | Path) -> SignMatrix:
    return loads_matrix(Path(path).read_text(encoding="ascii"))
