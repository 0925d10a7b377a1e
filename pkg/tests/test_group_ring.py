from __future__ import annotations

from collections import Counter

import numpy as np
import pytest
from conftest import cyclo, family
from hypothesis import given, settings
from hypothesis import strategies as st

from hforge.constructions import build_paley_pds
from hforge.cyclotomy import build_named_sets
from hforge.errors import ContextMismatch, ParseError
from hforge.field import build_field
from hforge.group_ring import (
    Block,
    difference_product,
    dumps_family,
    equals,
    family_autocorrelation,
    field_group,
    identity,
    indicator,
    linear_combination,
    loads_family,
    nonzero,
    whole_group,
    z2_field_group,
)


def naive_product(ctx, A, B):
    """Pair loop through scalar field arithmetic only."""
    f = ctx.field
    n = f.order
    cnt = Counter()
    for a in A:
        for b in B:
            ba, xa = divmod(int(a), n)
            bb, xb = divmod(int(b), n)
            cnt[((ba - bb) % 2) * n + f.sub(xa, xb)] += 1
    out = np.zeros(ctx.order, dtype=np.int64)
    for g, c in cnt.items():
        out[g] = c
    return out


G9 = field_group(cyclo(3).field)
Z2G9 = z2_field_group(cyclo(3).field)
Z2G25 = z2_field_group(build_field(5, 2))


def subsets(ctx):
    return st.lists(st.integers(0, ctx.order - 1), max_size=ctx.order, unique=True).map(Block)


def test_identity_product():
    z = Block([0])
    r = difference_product(G9, z, z)
    assert r[0] == 1 and r.total() == 1


def test_S_products():
    ctx = cyclo(3)
    S = [Block(build_named_sets(ctx, "S", i)) for i in range(4)]
    for i in range(4):
        for j in range(4):
            r = difference_product(G9, S[i], S[j])
            if i == j:
                assert equals(r, linear_combination(G9, [(3, S[i])]))[0]
            else:
                assert equals(r, whole_group(G9))[0]


def test_two_element_block():
    g = 1  # element 1 of F_9 (order 3, so g != -g)
    r = family_autocorrelation(G9, [Block([0, g])])
    assert r[0] == 2 and r[g] == 1 and r[G9.neg(np.array([g]))[0]] == 1 and r.total() == 4


def test_q3_family_autocorrelation():
    fam = family(3)
    r = family_autocorrelation(fam.ctx, fam.blocks)
    assert r[0] == 35
    assert set(r.coeffs[1:].tolist()) == {16}


def test_linear_combination_examples():
    gstar = linear_combination(G9, [(1, whole_group(G9)), (-1, identity(G9))])
    assert equals(gstar, nonzero(G9))[0]
    d0 = build_paley_pds(cyclo(3), 0)
    d2 = build_paley_pds(cyclo(3), 2)
    v = linear_combination(G9, [(2, d0), (-2, d2)])
    assert set(v.coeffs.tolist()) <= {-2, 0, 2} and v.total() == 0
    w = linear_combination(G9, [(7, nonzero(G9)), (17, identity(G9))])
    assert w[0] == 17 and set(w.coeffs[1:].tolist()) == {7}


def test_equals_mismatch():
    ok, mm = equals(whole_group(G9), nonzero(G9))
    assert not ok and mm == (0, 1, 0)
    assert equals(whole_group(G9), whole_group(G9)) == (True, None)


def test_paley_coefficients_q3():
    d0 = build_paley_pds(cyclo(3), 0)
    rhs = linear_combination(G9, [(1, d0), (2, nonzero(G9) - indicator(G9, d0)), (4, identity(G9))])
    assert equals(difference_product(G9, d0, d0), rhs)[0]


def test_context_mismatch():
    with pytest.raises(ContextMismatch):
        linear_combination(G9, [(1, whole_group(Z2G9))])
    with pytest.raises(ContextMismatch):
        equals(whole_group(G9), whole_group(Z2G9))


def test_B0_B1_fiber_counts():
    # B0 and B1 have autocorrelation (q^2-2) F* + (2q^2-1) 0 on each fiber pattern
    fam = family(3)
    ctx = fam.ctx
    r = linear_combination(ctx, [(1, difference_product(ctx, b, b)) for b in fam.blocks[:2]])
    n = 9
    assert r[0] == 17
    assert set(r.coeffs[1:n].tolist()) == {7}
    # {1}-fiber: (q^2-1) F + 2 D_0 - 2 D_2
    d0 = build_paley_pds(cyclo(3), 0).elements
    d2 = build_paley_pds(cyclo(3), 2).elements
    fiber = r.coeffs[n:]
    assert set(fiber[d0].tolist()) == {10}
    assert set(fiber[d2].tolist()) == {6}
    assert fiber[0] == 8


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_product_against_naive(data):
    ctx = data.draw(st.sampled_from([G9, Z2G9, Z2G25]))
    A = data.draw(subsets(ctx))
    B = data.draw(subsets(ctx))
    want = naive_product(ctx, A, B)
    for method in ("pairs", "fft"):
        r = difference_product(ctx, A, B, method=method)
        assert np.array_equal(r.coeffs, want)
        assert r.total() == len(A) * len(B)
    swapped = difference_product(ctx, B, A).coeffs
    assert np.array_equal(swapped[ctx.neg_table], want)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_autocorrelation_symmetric(data):
    ctx = data.draw(st.sampled_from([Z2G9, Z2G25]))
    blocks = data.draw(st.lists(subsets(ctx), min_size=1, max_size=4))
    r = family_autocorrelation(ctx, blocks).coeffs
    assert np.array_equal(r, r[ctx.neg_table])
    assert r[0] == sum(len(b) for b in blocks)


def test_fft_matches_pairs_at_q11():
    fam = family(11)
    b = fam.blocks[2]
    a = difference_product(fam.ctx, b, b, method="pairs").coeffs
    assert np.array_equal(a, difference_product(fam.ctx, b, b, method="fft").coeffs)


def test_unknown_method():
    with pytest.raises(ValueError):
        difference_product(G9, Block([0]), Block([0]), method="magic")


@pytest.mark.parametrize("q", [3, 11])
def test_family_roundtrip(q):
    fam = family(q)
    text = dumps_family(fam.ctx, fam.blocks)
    ctx, blocks = loads_family(text)
    assert ctx.compatible(fam.ctx) and ctx.field.modulus == fam.ctx.field.modulus
    assert list(blocks) == list(fam.blocks)
    assert dumps_family(ctx, blocks) == text


def test_family_header_format():
    text = dumps_family(family(3).ctx, family(3).blocks)
    first, second = text.splitlines()[:2]
    assert first == "DF Z2xGF(3^2) mod [1,0,1] blocks=4"
    assert second.startswith("block 0 size=9: ")


@pytest.mark.parametrize(
    "text",
    [
        "",
        "DF nonsense\n",
        "DF Z2xGF(3^2) mod [1,0,1] blocks=2\nblock 0 size=1: 0:0,0\n",
        "DF Z2xGF(3^2) mod [1,0,1] blocks=1\nblock 0 size=2: 0:0,0\n",
        "DF Z2xGF(3^2) mod [1,0,1] blocks=1\nblock 0 size=1: 0:3,0\n",
        "DF Z2xGF(3^2) mod [1,0,1] blocks=1\nblock 0 size=2: 0:0,0 0:0,0\n",
        "DF Z2xGF(3^2) mod [2,0,1] blocks=1\nblock 0 size=1: 0:0,0\n",
        "DF GF(3^2) mod [1,0,1] blocks=1\nblock 0 size=1: 1:0,0\n",
    ],
)
def test_family_parse_errors(text):
    with pytest.raises(ParseError):
        loads_family(text)
