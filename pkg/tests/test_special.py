import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from thermal_qubit import special

finite = st.floats(-700, 700, allow_nan=False).filter(lambda x: x != 0)


@given(finite)
def test_coth_sech_against_mpmath(x):
    assert special.coth(x) == pytest.approx(float(mp.coth(x)), rel=4e-16)
    assert special.sech(x) == pytest.approx(float(mp.sech(x)), rel=4e-15, abs=1e-320)


@given(st.floats(1e-150, 700))
def test_csch2_positive_and_accurate(x):
    ref = float(mp.csch(x) ** 2)
    got = special.csch2(x)
    assert got > 0 or ref < 1e-300
    assert got == pytest.approx(ref, rel=1e-14, abs=1e-300)


@pytest.mark.parametrize("x", [0.0, 1e-12, 1e-5, 9.9e-5, 1e-4, 0.3, 20.0])
def test_x_coth_x_small_argument(x):
    ref = 1.0 if x == 0 else float(mp.mpf(x) * mp.coth(x))
    assert special.x_coth_x(x) == pytest.approx(ref, rel=1e-15)


def test_sinhc_is_even_and_unity_at_zero():
    assert special.sinhc(0.0) == 1.0
    assert special.sinhc(0.7) == special.sinhc(-0.7)
    assert special.sinhc(0.7) == pytest.approx(math.sinh(0.7) / 0.7, rel=1e-15)


def test_large_arguments_finite():
    for fn in (special.tanh, special.coth, special.sech, special.sech2):
        assert np.isfinite(fn(800.0))
    assert special.sech(800.0) == 0.0
