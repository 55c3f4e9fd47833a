"""Parity between the compiled kernels and the pure-Python fallback."""

import numpy as np
import pytest

from linkcap import _chainkernels_py as pure

compiled = pytest.importorskip(
    "linkcap._chainkernels", reason="compiled extension not built"
)

REL = 1e-14


def _close(a, b):
    return a == pytest.approx(b, rel=REL, abs=1e-300)


def test_g_entropy_parity():
    for x in [0.0, 1e-12, 0.3, 1.0, 7.5, 100.0, 1e6, 1e12]:
        assert _close(compiled.g_entropy(x), pure.g_entropy(x))


def test_g_entropy_domain_errors_match():
    for bad in (-1.0, float("nan"), float("inf")):
        with pytest.raises(ValueError):
            compiled.g_entropy(bad)
        with pytest.raises(ValueError):
            pure.g_entropy(bad)


def test_se_parity():
    rng = np.random.default_rng(3)
    for _ in range(200):
        tau = float(rng.uniform(0, 1))
        nu = float(10 ** rng.uniform(-8, 2))
        nbar = float(10 ** rng.uniform(-1, 4))
        assert _close(compiled.shannon_raw(tau, nu, nbar), pure.shannon_raw(tau, nu, nbar))
        assert _close(compiled.holevo_raw(tau, nu, nbar), pure.holevo_raw(tau, nu, nbar))


def test_chain_parity():
    rng = np.random.default_rng(4)
    for _ in range(50):
        n = int(rng.integers(0, 8))
        spans = rng.uniform(0, 50, n)
        gains = rng.uniform(1, 6, n)
        tail = float(rng.uniform(0, 40))
        a = compiled.chain_explicit(spans, gains, tail, 0.05)
        b = pure.chain_explicit(spans, gains, tail, 0.05)
        assert _close(a[0], b[0]) and _close(a[1], b[1])

        lengths = np.append(rng.uniform(0, 50, n), tail)
        a = compiled.chain_saturating(lengths, 0.05, 100.0)
        b = pure.chain_saturating(lengths, 0.05, 100.0)
        assert _close(a[0], b[0]) and _close(a[1], b[1])

        fracs = rng.uniform(-0.2, 1.2, n)
        a = compiled.chain_capped(lengths, fracs, 0.05, 100.0)
        b = pure.chain_capped(lengths, fracs, 0.05, 100.0)
        assert _close(a[0], b[0]) and _close(a[1], b[1])


def test_objective_parity():
    rng = np.random.default_rng(5)
    for n in (1, 2, 16, 64):
        for _ in range(10):
            logits = rng.normal(0, 3, n)
            for holevo in (True, False):
                a = compiled.saturating_se_logits(logits, 500.0, 0.05, 100.0, holevo)
                b = pure.saturating_se_logits(logits, 500.0, 0.05, 100.0, holevo)
                assert _close(a, b)
            x = np.concatenate([logits, rng.uniform(-0.2, 1.2, n)])
            a = compiled.capped_se_logits(x, n, 500.0, 0.05, 100.0, True)
            b = pure.capped_se_logits(x, n, 500.0, 0.05, 100.0, True)
            assert _close(a, b)


def test_backend_selector_reports():
    from linkcap import kernels

    assert kernels.backend_name() in ("cython", "python")
