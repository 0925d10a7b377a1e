from __future__ import annotations

import functools

import pytest

from hforge.constructions import build_family, derive_params
from hforge.cyclotomy import make_cyclo_ctx

# GF(9) presented as GF(3)[x]/(x^2 - x - 1) with omega = x (encoding 3);
# x^3 = 2x + 1 has encoding 7 and x^5 = x + 2 has encoding 5.
ALT_MODULUS = (2, 2, 1)
ALT_OMEGA = 3
ALT_OMEGA_CUBED = 7
ALT_OMEGA_FIFTH = 5


@functools.lru_cache(maxsize=None)
def cyclo(q: int):
    return make_cyclo_ctx(q)


@functools.lru_cache(maxsize=None)
def params(q: int):
    return derive_params(cyclo(q).q, cyclo(q))


@functools.lru_cache(maxsize=None)
def family(q: int):
    return build_family(q, cyclo(q), params(q))


@pytest.fixture
def alt9():
    return make_cyclo_ctx(3, modulus=ALT_MODULUS, omega=ALT_OMEGA)


@pytest.fixture
def cache(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("HFORGE_CACHE", str(d))
    return d


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
