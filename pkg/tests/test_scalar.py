import math

import numpy as np
import pytest

from bscbounds import (
    DomainError,
    binary_convolve,
    binary_entropy,
    entropy_taylor,
    inv_binary_entropy,
)


def test_entropy_known_values():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.11) == pytest.approx(0.499915958164528, abs=1e-14)
    assert binary_entropy(0.188) == pytest.approx(0.6972688157923281, abs=1e-14)
    # symmetry around 1/2
    for p in (0.03, 0.2, 0.41):
        assert binary_entropy(p) == pytest.approx(binary_entropy(1.0 - p), abs=1e-15)


def test_entropy_rejects_outside_unit_interval():
    with pytest.raises(DomainError):
        binary_entropy(-0.01)
    with pytest.raises(DomainError):
        binary_entropy(1.01)
    with pytest.raises(DomainError):
        binary_entropy(float("nan"))


def test_inverse_entropy_round_trip():
    assert inv_binary_entropy(0.0) == 0.0
    assert inv_binary_entropy(1.0) == 0.5
    assert inv_binary_entropy(0.5) == pytest.approx(0.110027864438, abs=1e-10)
    for u in np.linspace(0.0, 1.0, 257):
        u = float(u)
        p = inv_binary_entropy(u)
        assert 0.0 <= p <= 0.5
        assert binary_entropy(p) == pytest.approx(u, abs=1e-10)


def test_inverse_entropy_monotone():
    grid = [inv_binary_entropy(float(u)) for u in np.linspace(0.0, 1.0, 101)]
    assert all(b >= a for a, b in zip(grid, grid[1:]))


def test_convolve_basics():
    assert binary_convolve(0.0, 0.3) == 0.3
    assert binary_convolve(0.5, 0.05) == 0.5
    assert binary_convolve(0.2, 0.2) == pytest.approx(0.32, abs=1e-15)
    assert binary_convolve(0.11, 0.1) == pytest.approx(0.188, abs=1e-15)
    # commutative, and never below either argument on [0, 1/2]
    rng = np.random.default_rng(3)
    for _ in range(200):
        a, b = (float(v) * 0.5 for v in rng.random(2))
        c = binary_convolve(a, b)
        assert c == pytest.approx(binary_convolve(b, a), abs=1e-16)
        assert c >= max(a, b) - 1e-15
        assert c <= 0.5 + 1e-15


def test_taylor_one_term():
    # 1 - log2(e)/2 exactly, nothing else survives a single term at p=1
    assert entropy_taylor(1.0, 1) == pytest.approx(1.0 - math.log2(math.e) / 2.0, abs=1e-15)


def test_taylor_converges_to_entropy():
    # h(1/2 + p/2) at p = 0.2 is h(0.6)
    assert entropy_taylor(0.2, 50) == pytest.approx(binary_entropy(0.6), abs=1e-12)
    assert entropy_taylor(0.0, 5) == 1.0
    assert entropy_taylor(-0.2, 50) == pytest.approx(binary_entropy(0.6), abs=1e-12)


def test_taylor_partial_sums_decrease():
    vals = [entropy_taylor(0.9, k) for k in range(1, 40)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] >= binary_entropy(0.95) - 1e-6


def test_taylor_rejects_bad_arguments():
    with pytest.raises(DomainError):
        entropy_taylor(1.5, 10)
    with pytest.raises(DomainError):
        entropy_taylor(0.2, 0)
    with pytest.raises(DomainError):
        entropy_taylor(0.2, -3)
