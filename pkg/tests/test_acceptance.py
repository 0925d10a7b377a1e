"""The thirteen acceptance criteria, each at its stated tolerance and time limit."""

from __future__ import annotations

import random
import time
from contextlib import contextmanager

import numpy as np
import pytest
from conftest import ACCEPTANCE_LINES
from oracles import ADMISSIBLE_BELOW_1E5, SIEVE_1E7

from hforge.assembly import (
    block_to_sign_matrix,
    calibrate_border_scheme,
    goethals_seidel,
    inversion_matrix,
    read_schemes,
    wallis_whiteman,
)
from hforge.cli import main
from hforge.constructions import build_E_blocks, build_family, build_paley_pds, derive_params
from hforge.cyclotomy import (
    closed_form_N,
    compute_N1_to_N4,
    cyclotomic_numbers_bruteforce,
    cyclotomic_numbers_formula,
    fit_b_sign,
    make_cyclo_ctx,
    solve_a_b,
)
from hforge.errors import CalibrationExhausted
from hforge.group_ring import Block, field_group
from hforge.verification import (
    check_difference_family,
    verify_cross_condition,
    verify_difference_family,
    verify_hadamard,
    verify_z_identity,
    verify_pds,
    verify_type_H,
)

Q_CORE = (3, 11, 19, 43)


@contextmanager
def criterion(number: int, title: str, limit: float | None = None):
    """Time the body, print a PASS/FAIL line, then fail the test on a miss."""
    state = {"detail": ""}
    t = time.perf_counter()
    ok = False
    try:
        yield state
        ok = True
    finally:
        elapsed = time.perf_counter() - t
        over = limit is not None and elapsed >= limit
        passed = ok and not over
        extra = state["detail"] or ("time limit" if over else "")
        line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'} {title} ({elapsed:.2f}s"
        line += f" < {limit:g}s)" if limit is not None else ")"
        if extra:
            line += f" {extra}"
        print(line)
        ACCEPTANCE_LINES.append(line)
    assert not over, f"criterion {number} took {elapsed:.2f}s, limit {limit}s"


def cli_lines(capsys, *argv) -> list[str]:
    assert main(list(argv)) == 0
    return capsys.readouterr().out.splitlines()


def test_c01_enumeration(capsys):
    with criterion(1, "list-q --max 100000 equals the 58-value list", 1.0) as st:
        out = [int(x) for x in cli_lines(capsys, "list-q", "--max", "100000")]
        st["detail"] = f"count={len(out)}"
        assert out == ADMISSIBLE_BELOW_1E5
        assert out[:6] == [3, 11, 19, 43, 59, 179]


def test_c02_sieve(capsys):
    with criterion(2, "sieve --max 10^7 gives (386, 166181)", 60.0) as st:
        kv = dict(ln.split("=") for ln in cli_lines(capsys, "--machine", "sieve", "--max", str(10**7)))
        got = (int(kv["count_form"]), int(kv["count_3mod8"]))
        st["detail"] = f"got={got}"
        assert got == SIEVE_1E7


def test_c03_cyclotomic_tables():
    with criterion(3, "closed-form order-8 tables equal brute force, q in 3..59", 5.0):
        for q in (3, 11, 19, 43, 59):
            ctx = make_cyclo_ctx(q)
            rep = fit_b_sign(ctx, solve_a_b(q))
            brute = cyclotomic_numbers_bruteforce(ctx, 8)
            assert brute.counts.shape == (8, 8)
            assert cyclotomic_numbers_formula(q, rep) == brute, q


def test_c04_two_squares():
    with criterion(4, "proper q^2 = a^2 + 2b^2 with a, b from c"):
        for q in (3, 11, 19, 43, 59):
            rep = solve_a_b(q)
            c = next(c for c in range(-10, 11) if 12 * c * c + 4 * c + 3 == q)
            assert rep.a**2 + 2 * rep.b_abs**2 == q * q
            assert rep.a % 4 == 1 and np.gcd(rep.a, rep.b_abs) == 1
            assert (rep.a, rep.b_abs) == (4 * c * c + 12 * c + 1, abs(8 * c * c - 2))


def test_c05_pds():
    with criterion(5, "D_0..D_3 are Paley type PDS at q = 3, 11, 19"):
        for q in (3, 11, 19):
            ctx = make_cyclo_ctx(q)
            g = field_group(ctx.field)
            coeffs = ((q * q - 5) // 4, (q * q - 1) // 4, (q * q - 1) // 2)
            for i in range(4):
                rep = verify_pds(g, build_paley_pds(ctx, i))
                assert rep.passed and str(coeffs) in rep.subject, rep.line()


def test_c06_type_H():
    with criterion(6, "E-blocks are type H with lambda = q(q-2), q in 3..43", 10.0):
        for q in Q_CORE:
            ctx = make_cyclo_ctx(q)
            p = derive_params(ctx.q, ctx)
            rep = verify_type_H(field_group(ctx.field), build_E_blocks(p, ctx), q * (q - 2))
            assert rep.passed, rep.line()


def test_c07_cross_condition():
    with criterion(7, "cross condition and the Z identity, q in 3..43"):
        for q in Q_CORE:
            ctx = make_cyclo_ctx(q)
            p = derive_params(ctx.q, ctx)
            g = field_group(ctx.field)
            E = build_E_blocks(p, ctx)
            assert verify_cross_condition(E, g).passed, q
            assert verify_z_identity(E, p, g).passed, q


def test_c08_N_values():
    with criterion(8, "N1 = N2, N3 = N4 + 4 and closed forms, q in 3..43"):
        for q in Q_CORE:
            ctx = make_cyclo_ctx(q)
            p = derive_params(ctx.q, ctx)
            n = compute_N1_to_N4(ctx, p.I)
            assert n[0] == n[1] and n[2] == n[3] + 4, (q, n)
            b = p.rep.b_signed if p.I == (0, 2, 3) else -p.rep.b_signed
            assert n == closed_form_N(q, p.rep.a, b), (q, n)


@pytest.mark.parametrize("q,limit", [(3, 1.0), (11, 1.0), (19, 1.0), (43, 10.0)])
def test_c09_main_family(q, limit):
    n = q * q
    with criterion(9, f"(2q^2; q^2,q^2-1,q^2,q^2; 2q^2-2) family verifies at q={q}", limit):
        fam = build_family(q)
        assert fam.declared == (2 * n, (n, n - 1, n, n), 2 * n - 2)
        rep = verify_difference_family(fam)
        assert rep.passed, rep.line()


@pytest.mark.slow
@pytest.mark.parametrize("q", [59, 179])
def test_c09_extended(q):
    # non-gating extended run
    rep = verify_difference_family(build_family(q))
    line = f"criterion  9 {'PASS' if rep.passed else 'FAIL'} extended run q={q} ({rep.elapsed:.2f}s verify)"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert rep.passed


@pytest.mark.parametrize("q,order", [(3, 36), (11, 484)])
def test_c10_goethals_seidel(q, order):
    with criterion(10, f"Goethals-Seidel matrix of order {order} is Hadamard", 1.0):
        ctx = make_cyclo_ctx(q)
        p = derive_params(ctx.q, ctx)
        g = field_group(ctx.field)
        H = goethals_seidel(*[block_to_sign_matrix(g, e) for e in build_E_blocks(p, ctx)], inversion_matrix(g))
        assert H.order == order
        assert verify_hadamard(H).passed


@pytest.fixture(scope="module")
def scheme_cache(tmp_path_factory):
    return tmp_path_factory.mktemp("calibration") / "calibration.txt"


def test_c11a_calibration(scheme_cache):
    with criterion(11, "calibration at q=3 finds at least one border scheme", 120.0) as st:
        try:
            found = calibrate_border_scheme(build_family(3), cache_path=scheme_cache)
        except CalibrationExhausted as exc:
            st["detail"] = f"CalibrationExhausted: {exc}"
            raise
        st["detail"] = f"schemes={len(found)}"
        assert found and read_schemes(scheme_cache) == found[:1]


@pytest.mark.parametrize("q,order", [(3, 76), (11, 972), (19, 2892)])
def test_c11b_wallis_whiteman(q, order, scheme_cache):
    if not scheme_cache.exists():
        calibrate_border_scheme(build_family(3), cache_path=scheme_cache)
    scheme = read_schemes(scheme_cache)[0]
    with criterion(11, f"bordered array with cached scheme gives Hadamard order {order}", 10.0):
        H = wallis_whiteman(build_family(q), scheme)
        assert H.order == order
        assert verify_hadamard(H).passed


def test_c12_conjecture_scan(capsys):
    with criterion(12, "conjecture-scan --max 10^9 finds no proper prime power", 10.0) as st:
        out = cli_lines(capsys, "--machine", "conjecture-scan", "--max", str(10**9))
        st["detail"] = out[0]
        assert out == ["hits=0"]


def test_c13_mutation_sensitivity():
    with criterion(13, "100/100 family mutations and 100/100 matrix flips detected") as st:
        rng = random.Random(20240613)
        fam = build_family(11)
        ctx = fam.ctx
        assert verify_difference_family(fam).passed
        caught_f = 0
        for _ in range(100):
            i = rng.randrange(4)
            elems = fam.blocks[i].elements
            x = int(elems[rng.randrange(len(elems))])
            y = rng.choice([g for g in range(ctx.order) if g not in fam.blocks[i]])
            blocks = list(fam.blocks)
            blocks[i] = Block(np.append(elems[elems != x], y))
            caught_f += not check_difference_family(ctx, blocks, fam.lam).passed
        scheme = calibrate_border_scheme(build_family(3))[0]
        H = wallis_whiteman(fam, scheme)
        assert verify_hadamard(H).passed
        caught_m = 0
        for _ in range(100):
            caught_m += not verify_hadamard(H.flip(rng.randrange(H.order), rng.randrange(H.order))).passed
        st["detail"] = f"family={caught_f}/100 matrix={caught_m}/100"
        assert caught_f == 100 and caught_m == 100
