"""Property-based checks of the invariants that hold for every input."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recenter import (
    DiscreteDistribution,
    MomentFunction,
    central_moment_ratio,
    cf_ratio,
    compute_Cp,
    eval_R,
    eval_tb,
    find_bp,
)

ps = st.floats(1.01, 60.0).filter(lambda p: abs(p - 2.0) > 1e-3)
unit = st.floats(0.0, 1.0)


@st.composite
def distributions(draw, max_atoms=6):
    k = draw(st.integers(1, max_atoms))
    xs = draw(st.lists(st.floats(-1e3, 1e3), min_size=k, max_size=k, unique=True))
    ws = np.asarray(draw(st.lists(st.floats(0.01, 1.0), min_size=k, max_size=k)))
    ws = ws / ws.sum()
    if not any(xs):
        xs[0] = 1.0
    return DiscreteDistribution(tuple(xs), tuple(ws / math.fsum(ws)))


@settings(max_examples=200, deadline=None)
@given(ps, unit)
def test_R_bounded_by_Cp(p, b):
    pt = eval_R(p, b)
    # the outer power p - 1 scales the rounding of the inner sum
    assert pt.value >= 1.0 - 4.0 * p * np.finfo(float).eps
    assert pt.log_value <= compute_Cp(p).log_c_p + 1e-12


@settings(max_examples=100, deadline=None)
@given(ps, st.floats(0.5, 1.0))
def test_R_reflection(p, b):
    assert eval_R(p, b).value == eval_R(p, 1.0 - b).value


@settings(max_examples=200, deadline=None)
@given(ps, distributions())
def test_inequality_holds(p, d):
    assert central_moment_ratio(d, p) <= compute_Cp(p).c_p + 1e-9


@settings(max_examples=100, deadline=None)
@given(ps, distributions())
def test_negation_exact(p, d):
    assert central_moment_ratio(-d, p) == central_moment_ratio(d, p)


@settings(max_examples=100, deadline=None)
@given(ps, st.floats(0.01, 0.99))
def test_tb_in_support(p, b):
    assert b - 1.0 <= eval_tb(p, b) <= b


@settings(max_examples=60, deadline=None)
@given(st.floats(1.05, 30.0).filter(lambda p: abs(p - 2.0) > 1e-2))
def test_dual_maximizer(p):
    assert find_bp(p) == pytest.approx(find_bp(p / (p - 1.0)), abs=2e-14)


@settings(max_examples=100, deadline=None)
@given(
    st.floats(1.1, 6.0),
    st.floats(0.01, 10.0),
    st.floats(0.01, 10.0),
    st.floats(-1.0, 1.0),
    st.floats(0.01, 100.0),
)
def test_cf_ratio_scale(p, a, b, s, lam):
    f = MomentFunction.power(p)
    t = s * max(a, b)
    assert cf_ratio(f, lam * a, lam * b, lam * t) == pytest.approx(cf_ratio(f, a, b, t), rel=1e-11)
