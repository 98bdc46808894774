"""The qubit family: coordinates, construction, and canonicalization."""

import numpy as np
import pytest

from helpers import haar_unitary, hesse_sic
from semisic.errors import BOutOfFamilyRange, NotQubitSemiSic
from semisic.model import SIC, STRICT_SEMI_SIC, Povm, verify
from semisic.qubit import (
    B_MAX,
    B_MIN,
    canonicalize,
    construct,
    family_kets,
    family_point,
)

# interior overlaps plus the closed SIC endpoint
FAMILY_GRID = [0.065, 0.07, 2.0 / 25.0, 0.083, 1.0 / 12.0]


def test_family_point_oracle_values():
    point = family_point(2.0 / 25.0)
    assert point.r == pytest.approx(1.0 / np.sqrt(2.0), abs=1e-15)
    assert np.cos(point.theta) == pytest.approx(1.0 / (2.0 * np.sqrt(2.0)), abs=1e-15)
    assert point.params.k == 2
    assert point.params.a_minus == pytest.approx(0.4, abs=1e-15)
    assert point.params.a_plus == pytest.approx(0.6, abs=1e-15)


def test_family_point_sic_endpoint():
    point = family_point(1.0 / 12.0)
    assert point.r == pytest.approx(1.0 / np.sqrt(3.0), abs=1e-14)
    assert point.theta == pytest.approx(np.pi / 3.0, abs=1e-12)
    assert point.params.k == 4
    assert point.params.a_minus == 0.5


def test_theta_decreases_over_the_interval():
    thetas = [family_point(b).theta for b in (0.0635, 0.07, 0.08, 1.0 / 12.0)]
    assert all(t1 > t2 for t1, t2 in zip(thetas, thetas[1:]))
    assert thetas[-1] == pytest.approx(np.pi / 3.0, abs=1e-12)
    assert all(np.pi / 3.0 <= t < np.pi / 2.0 for t in thetas)


def test_family_range_gates():
    for bad in (0.05, B_MIN, 0.09, 1.0 / 11.0, -1.0, np.nan):
        with pytest.raises(BOutOfFamilyRange):
            family_point(bad)
    # the closed endpoint itself is fine
    assert family_point(B_MAX).b == B_MAX


@pytest.mark.parametrize("b", FAMILY_GRID)
def test_family_kets_are_normalized(b):
    kets = family_kets(family_point(b))
    assert kets.shape == (4, 2)
    assert np.allclose(np.linalg.norm(kets, axis=1), 1.0, atol=1e-14)


@pytest.mark.parametrize("b", FAMILY_GRID)
def test_construct_is_a_semisic(b):
    povm = construct(b)
    assert np.allclose(povm.elements.sum(axis=0), np.eye(2), atol=1e-14)
    gram = np.einsum("aij,bji->ab", povm.elements, povm.elements).real
    off = gram[~np.eye(4, dtype=bool)]
    assert np.max(np.abs(off - b)) < 1e-12
    report = verify(povm)
    assert report.classification == (SIC if b == 1.0 / 12.0 else STRICT_SEMI_SIC)


def test_construct_matches_frozen_member():
    # the b = 2/25 member written out by hand from the closed form
    theta = np.arccos(1.0 / (2.0 * np.sqrt(2.0)))
    w = np.sqrt(2.0) * np.exp(1j * theta)
    e1 = 0.4 * np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    e2 = 0.2 * np.array([[1.0, 1.0], [1.0, 1.0]], dtype=complex)
    e3 = 0.2 * np.array([[1.0, -w.conjugate()], [-w, 2.0]])
    e4 = 0.2 * np.array([[1.0, -w], [-w.conjugate(), 2.0]])
    povm = construct(2.0 / 25.0)
    for got, want in zip(povm.elements, (e1, e2, e3, e4)):
        assert np.max(np.abs(got - want)) < 1e-12
    assert np.allclose(povm.traces(), [0.4, 0.4, 0.6, 0.6], atol=1e-13)


def test_construct_sic_endpoint_traces():
    povm = construct(1.0 / 12.0)
    assert np.allclose(povm.traces(), 0.5, atol=1e-14)


def test_canonicalize_fixed_point():
    povm = construct(2.0 / 25.0)
    u, canon, b = canonicalize(povm)
    assert b == pytest.approx(2.0 / 25.0, abs=1e-14)
    assert np.max(np.abs(canon.elements - povm.elements)) < 1e-9
    assert np.allclose(u @ u.conj().T, np.eye(2), atol=1e-12)


@pytest.mark.parametrize("b", FAMILY_GRID)
def test_canonicalize_recovers_conjugated_family(b):
    rng = np.random.default_rng(int(b * 1e6))
    target = construct(b)
    for _ in range(5):
        u0 = haar_unitary(rng, 2)
        perm = rng.permutation(4)
        stack = np.einsum("ij,xjk,lk->xil", u0, target.elements[perm], u0.conj())
        got_u, canon, got_b = canonicalize(Povm(dim=2, elements=stack))
        assert abs(got_b - b) < 1e-6
        assert np.max(np.abs(canon.elements - target.elements)) < 1e-8
        # every canonical slot must map back onto one of the inputs
        mapped = np.einsum("ij,xjk,lk->xil", got_u, canon.elements, got_u.conj())
        for x in range(4):
            dev = np.min(np.max(np.abs(mapped[x][None] - stack), axis=(1, 2)))
            assert dev < 1e-9


def test_canonicalize_rejects_non_semisic():
    stack = np.array(construct(0.07).elements, copy=True)
    stack[0, 0, 0] += 1e-3
    with pytest.raises(NotQubitSemiSic):
        canonicalize(Povm(dim=2, elements=stack))


def test_canonicalize_rejects_wrong_dimension():
    with pytest.raises(NotQubitSemiSic):
        canonicalize(hesse_sic())
