import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reltransients import MoshinskyArgs, PhysicalSetup, moshinsky_M, moshinsky_quadrature, psi_schrodinger_step, psi_source
from reltransients.nonrel import schrodinger_momentum


@given(st.floats(0, 20), st.floats(-4, 4), st.floats(0.05, 50))
@settings(max_examples=40, deadline=None)
def test_closed_form_matches_quadrature(x, q, t):
    a = MoshinskyArgs(x, q, t)
    ref = moshinsky_quadrature(a)
    assert abs(moshinsky_M(a) - ref) <= 1e-9 * max(1.0, abs(ref))


@given(st.floats(0.1, 3), st.floats(0.1, 40))
def test_source_boundary_sum_rule(q, t):
    # M(0, q) + M(0, -q) reproduces the source exp(-i q^2 t / beta) at x = 0
    total = moshinsky_M(MoshinskyArgs(0.0, q, t)) + moshinsky_M(MoshinskyArgs(0.0, -q, t))
    assert abs(total - cmath.exp(-1j * q * q * t / 2.0)) < 1e-12


def test_plane_wave_limit():
    # far behind the classical front M tends to the plane wave
    x, q, t = 2.0, 1.5, 400.0
    m = moshinsky_M(MoshinskyArgs(x, q, t))
    assert abs(m - cmath.exp(1j * q * x - 1j * q * q * t / 2.0)) < 0.02


def test_argument_validation():
    with pytest.raises(ValueError):
        MoshinskyArgs(1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        MoshinskyArgs(1.0, 1.0, 1.0, beta=-1.0)
    with pytest.raises(ValueError):
        schrodinger_momentum(PhysicalSetup(0.5))


def test_schrodinger_solution_tracks_klein_gordon_at_small_momentum():
    k = 0.1
    s = PhysicalSetup(1.0 + 0.5 * k * k)
    ts = np.linspace(10.0, 100.0, 91)
    kg = np.array([psi_source(1.0, t, s).psi for t in ts])
    nr = np.array([psi_schrodinger_step(1.0, t, s) for t in ts])
    assert np.abs(kg - nr).max() < 0.05


def test_schrodinger_vanishes_before_switch_on():
    assert psi_schrodinger_step(1.0, 0.0, PhysicalSetup(1.1)) == 0
