import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from thermal_qubit import DomainError, MatsubaraFrequency
from thermal_qubit.propagators import (fermion_fourier_series, free_fermion_frequency,
                                       free_fermion_imaginary_time, free_photon_frequency,
                                       free_photon_retarded)


def test_fermion_frequency_examples():
    wn = MatsubaraFrequency.fermi(0, math.pi)
    s0 = free_fermion_frequency(wn, 0.0)
    assert s0.up == pytest.approx(-1j) and s0.down == pytest.approx(-1j)
    s1 = free_fermion_frequency(wn, 1.0)
    assert s1.up == pytest.approx((-1 - 1j) / 2, rel=1e-15)
    assert s1.down == pytest.approx((1 - 1j) / 2, rel=1e-15)
    assert s1.component(+1) == s1.up and s1.component(-1) == s1.down
    np.testing.assert_allclose(s1.as_array(), np.diag([s1.up, s1.down]))


def test_fermion_frequency_rejects_bosons():
    with pytest.raises(DomainError):
        free_fermion_frequency(MatsubaraFrequency.bose(1, 1.0), 1.0)


def test_imaginary_time_occupation():
    s = free_fermion_imaginary_time(1e-14, 1.0, 1.0)
    assert s.up.real == pytest.approx(-1 / (1 + math.exp(-1)), rel=1e-12)
    assert s.up == pytest.approx(-0.731059, abs=5e-7)


@given(st.floats(0.01, 0.99), st.floats(-50, 50), st.floats(0.1, 20))
def test_antiperiodicity(frac, m, beta):
    # tau - beta + beta rounds, and exp(-m tau) amplifies that by m beta
    tau = frac * beta
    pos = free_fermion_imaginary_time(tau, m, beta)
    neg = free_fermion_imaginary_time(tau - beta, m, beta)
    assert neg.up == pytest.approx(-pos.up, rel=1e-11, abs=1e-300)
    assert neg.down == pytest.approx(-pos.down, rel=1e-11, abs=1e-300)


def test_jump_at_zero_is_one():
    # S(0+) - S(0-) = -1 for each component
    for m in (-3.0, 0.5, 400.0):
        p = free_fermion_imaginary_time(1e-13, m, 2.0)
        n = free_fermion_imaginary_time(-1e-13, m, 2.0)
        assert p.up - n.up == pytest.approx(-1.0, abs=1e-10)
        assert p.down - n.down == pytest.approx(-1.0, abs=1e-10)


def test_no_overflow_at_large_beta_m():
    s = free_fermion_imaginary_time(0.5, 300.0, 10.0)
    assert np.isfinite(s.up) and np.isfinite(s.down)


@pytest.mark.parametrize("tau", [0.3, 0.77, -0.4])
def test_fourier_consistency(tau):
    m, beta = 1.3, 1.0
    series = fermion_fourier_series(tau, m, beta, 200_000)
    exact = free_fermion_imaginary_time(tau, m, beta)
    assert series.up == pytest.approx(exact.up, abs=2e-5)
    assert series.down == pytest.approx(exact.down, abs=2e-5)


def test_imaginary_time_domain():
    with pytest.raises(DomainError):
        free_fermion_imaginary_time(0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        free_fermion_imaginary_time(1.5, 1.0, 1.0)


def test_photon_kernels():
    assert free_photon_frequency(1.0, MatsubaraFrequency.bose(0, 1.0)).value == -1.0
    assert free_photon_frequency(1.0, MatsubaraFrequency.bose(1, 2 * math.pi)).value == -0.5
    assert free_photon_retarded(1.0, 0.0, 1e-12).value == pytest.approx(-1.0)
    r = free_photon_retarded(1.0, 2.0, 1e-6).value
    assert r.real == pytest.approx(1 / 3, rel=1e-10)
    assert abs(r.imag) < 1e-5
    with pytest.raises(DomainError):
        free_photon_frequency(1.0, MatsubaraFrequency.fermi(0, 1.0))


@given(st.floats(0.1, 5), st.floats(0.1, 5))
def test_retarded_continues_temperature_kernel(k, w):
    # at k0 = i w the retarded kernel equals the temperature kernel
    assert free_photon_retarded(k, 1j * w, 1e-300).value == pytest.approx(
        free_photon_frequency(k, w).value, rel=1e-14)


@given(st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.2, 5), st.floats(0.5, 4))
def test_scaling(m, k, w, c):
    wn = MatsubaraFrequency.fermi(0, math.pi / w)
    wc = MatsubaraFrequency.fermi(0, math.pi / (c * w))
    a, b = free_fermion_frequency(wn, m), free_fermion_frequency(wc, c * m)
    assert b.up == pytest.approx(a.up / c, rel=1e-13)
    assert free_photon_frequency(c * k, c * w).value == pytest.approx(
        free_photon_frequency(k, w).value / c ** 2, rel=1e-13)
