"""Parameter catalog, prime-power sieve, conjecture scan and the build pipeline."""

from __future__ import annotations

import logging
import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from sympy import integer_nthroot, isprime

from .assembly import (
    SignMatrix,
    block_to_sign_matrix,
    calibrate_border_scheme,
    goethals_seidel,
    inversion_matrix,
    read_schemes,
    wallis_whiteman,
    write_matrix,
)
from .constructions import build_E_blocks, build_family, derive_params, form_value
from .cyclotomy import make_cyclo_ctx
from .errors import BoundTooLarge, HForgeError, PipelineError
from .group_ring import field_group, write_family
from .verification import verify_difference_family, verify_hadamard, verify_type_H

log = logging.getLogger(__name__)

SIEVE_LIMIT = 10**8
SCAN_LIMIT = 10**14
CALIBRATION_FILE = "calibration.txt"


# -- sieve ---------------------------------------------------------------------


def prime_sieve(limit: int) -> np.ndarray:
    """Boolean array is_prime[0 .. limit-1]."""
    if limit <= 2:
        return np.zeros(max(limit, 0), dtype=bool)
    is_p = np.ones(limit, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(limit - 1) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return is_p


def prime_powers_below(limit: int) -> np.ndarray:
    """Sorted prime powers p^s (s >= 1) strictly below ``limit``."""
    is_p = prime_sieve(limit)
    primes = np.flatnonzero(is_p)
    powers = [primes]
    for p in primes[primes <= math.isqrt(max(limit - 1, 0))]:
        p = int(p)
        v = p * p
        extra = []
        while v < limit:
            extra.append(v)
            v *= p
        powers.append(np.array(extra, dtype=np.int64))
    return np.sort(np.concatenate(powers))


def sieve_counts(max_q: int) -> tuple[int, int]:
    """(#prime powers of the form 12c^2+4c+3, #prime powers = 3 mod 8), both below max_q."""
    if max_q > SIEVE_LIMIT:
        raise BoundTooLarge(f"sieve bound {max_q} > {SIEVE_LIMIT}")
    pp = prime_powers_below(max_q)
    count_3mod8 = int(np.count_nonzero(pp % 8 == 3))
    form = []
    for sign in (1, -1):
        c = 0 if sign == 1 else -1
        while (v := form_value(c)) < max_q:
            form.append(v)
            c += sign
    form_arr = np.unique(np.array(form, dtype=np.int64))
    count_form = int(np.count_nonzero(np.isin(form_arr, pp)))
    return count_form, count_3mod8


# -- conjecture scan ---------------------------------------------------------------


def proper_prime_power(n: int) -> tuple[int, int] | None:
    """(p, alpha) with alpha > 1 and p prime when n = p^alpha, else None."""
    if n < 4:
        return None
    for alpha in range(n.bit_length(), 1, -1):
        root, exact = integer_nthroot(n, alpha)
        if exact and isprime(root):
            return int(root), alpha
    return None


def conjecture_scan(max_q: int) -> list[tuple[int, int, int, int]]:
    """Every (c, value, p, alpha) with 12c^2+4c+3 = p^alpha < max_q, alpha > 1."""
    if max_q > SCAN_LIMIT:
        raise BoundTooLarge(f"scan bound {max_q} > {SCAN_LIMIT}")
    hits = []
    for sign in (1, -1):
        c = 0 if sign == 1 else -1
        while (v := form_value(c)) < max_q:
            if not isprime(v):
                pp = proper_prime_power(v)
                if pp is not None:
                    hits.append((c, v, *pp))
            c += sign
    return sorted(hits, key=lambda h: h[1])


# -- catalog and pipeline ------------------------------------------------------------


@dataclass
class CatalogEntry:
    q: int
    c: int
    m: int
    a: int
    b_abs: int
    hadamard_order_ww: int = field(init=False)
    hadamard_order_gs: int = field(init=False)
    family_verified: bool = False
    gs_verified: bool = False
    ww_verified: bool = False

    def __post_init__(self) -> None:
        self.hadamard_order_ww = 4 * (2 * self.q * self.q + 1)
        self.hadamard_order_gs = 4 * self.q * self.q


def resolve_cache(cache: str | Path | None = None) -> Path:
    if cache is None:
        cache = os.environ.get("HFORGE_CACHE") or Path.cwd() / ".hforge"
    return Path(cache)


def family_path(cache: Path, q: int) -> Path:
    return cache / f"family_q{q}.txt"


def matrix_path(cache: Path, q: int, method: str) -> Path:
    return cache / f"hadamard_q{q}_{method}.txt"


def load_or_calibrate(cache: Path):
    """First cached border scheme; calibrates on q = 3 when the cache is empty."""
    path = cache / CALIBRATION_FILE
    if path.exists():
        schemes = read_schemes(path)
        if schemes:
            return schemes[0]
    log.info("no calibration cache at %s; calibrating on q=3", path)
    return calibrate_border_scheme(build_family(3), cache_path=path)[0]


@dataclass
class _Stages:
    timings: dict[str, float] = field(default_factory=dict)

    def run(self, name: str, fn, *args, **kwargs):
        t = time.perf_counter()
        try:
            out = fn(*args, **kwargs)
        except HForgeError as exc:
            raise PipelineError(name, exc) from exc
        self.timings[name] = time.perf_counter() - t
        log.info("stage %-14s %8.1f ms", name, self.timings[name] * 1000)
        return out


def run_pipeline(q: int, method: str, cache: str | Path | None = None) -> tuple[CatalogEntry, Path]:
    """field -> params -> family -> verify -> assemble -> verify matrix -> write."""
    if method not in ("gs", "ww"):
        raise ValueError(f"unknown method {method!r}")
    cache = resolve_cache(cache)
    st = _Stages()
    ctx = st.run("field", make_cyclo_ctx, q)
    params = st.run("params", derive_params, ctx.q, ctx)
    entry = CatalogEntry(q, params.c, params.m, params.rep.a, params.rep.b_abs)
    cache.mkdir(parents=True, exist_ok=True)
    if method == "gs":
        E = st.run("blocks", build_E_blocks, params, ctx)
        gctx = field_group(ctx.field)
        rep = st.run("verify-family", verify_type_H, gctx, E, q * (q - 2))
        _require(rep, "verify-family")
        entry.family_verified = True
        mats = [block_to_sign_matrix(gctx, e) for e in E]
        H: SignMatrix = st.run("assemble", goethals_seidel, *mats, inversion_matrix(gctx))
    else:
        fam = st.run("family", build_family, params.q, ctx, params)
        write_family(family_path(cache, q), fam.ctx, fam.blocks)
        rep = st.run("verify-family", verify_difference_family, fam)
        _require(rep, "verify-family")
        entry.family_verified = True
        scheme = st.run("calibration", load_or_calibrate, cache)
        H = st.run("assemble", wallis_whiteman, fam, scheme)
    rep = st.run("verify-matrix", verify_hadamard, H)
    _require(rep, "verify-matrix")
    setattr(entry, f"{method}_verified", True)
    out = matrix_path(cache, q, method)
    st.run("write", write_matrix, out, H)
    return entry, out


def _require(rep, stage: str) -> None:
    if not rep.passed:
        raise PipelineError(stage, HForgeError(rep.line()))
