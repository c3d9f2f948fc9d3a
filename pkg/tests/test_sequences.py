import io
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from opideal.sequences import (
    ExplicitFamily,
    FamilySum,
    MonotoneSequence,
    PowerLogFamily,
    SequenceFormatError,
    materialize,
    partial_sums,
    pointwise_product,
    read_csv,
    write_csv,
)

monotone_arrays = arrays(
    np.float64,
    st.integers(1, 50),
    elements=st.floats(0, 1e6, allow_nan=False, allow_infinity=False),
).map(lambda v: np.sort(v)[::-1])

families = st.builds(
    PowerLogFamily,
    C=st.floats(0.1, 10),
    a=st.floats(0, 2),
    b=st.floats(-2, 3),
)


# -- MonotoneSequence -------------------------------------------------------


def test_monotone_sequence_rejects_increase():
    with pytest.raises(ValueError):
        MonotoneSequence([1.0, 2.0])


@pytest.mark.parametrize("bad", [[], [-1.0], [1.0, math.nan], [math.inf]])
def test_monotone_sequence_rejects_invalid(bad):
    with pytest.raises(ValueError):
        MonotoneSequence(bad)


def test_monotone_sequence_is_read_only():
    mu = MonotoneSequence([2.0, 1.0])
    with pytest.raises(ValueError):
        mu.values[0] = 5.0


def test_padded_appends_zeros():
    assert list(MonotoneSequence([2.0, 1.0]).padded(4).values) == [2.0, 1.0, 0.0, 0.0]


# -- partial sums -------------------------------------------------------------


@pytest.mark.parametrize(
    "mu, expected",
    [
        ((3, 1), (3, 4)),
        ((0, 0, 0), (0, 0, 0)),
        ((1, 1 / 2, 1 / 3, 1 / 4), (1, 1.5, 11 / 6, 25 / 12)),
    ],
)
def test_partial_sums_examples(mu, expected):
    ps = partial_sums(MonotoneSequence(mu))
    np.testing.assert_allclose(ps.sums, expected, rtol=1e-15)
    assert ps.sigma(1) == mu[0]
    with pytest.raises(IndexError):
        ps.sigma(0)


@given(monotone_arrays)
def test_partial_sums_concave_and_dominate(v):
    mu = MonotoneSequence(v)
    s = partial_sums(mu).sums
    inc = np.diff(np.concatenate([[0.0], s]))
    tol = 1e-12 * max(1.0, s[-1]) * len(v)  # cumsum rounding scales with the sum
    np.testing.assert_allclose(inc, v, rtol=0, atol=tol)
    assert np.all(np.diff(inc) <= tol)
    n = np.arange(1, len(v) + 1)
    # sigma_n / n is the mean of the first n terms, hence >= mu_{n-1}
    assert np.all(s / n >= v * (1 - 1e-12) - 1e-12)


# -- families -------------------------------------------------------------------


@pytest.mark.parametrize(
    "f, N, expected",
    [
        (PowerLogFamily(1, 0, 0), 3, [1, 1, 1]),
        (PowerLogFamily(1, 1, 0), 3, [1, 1 / 2, 1 / 3]),
        (PowerLogFamily(2, 0.5, 0), 2, [2, 2 / math.sqrt(2)]),
    ],
)
def test_materialize_examples(f, N, expected):
    np.testing.assert_allclose(materialize(f, N).values, expected, rtol=1e-15)


def test_power_log_formula():
    f = PowerLogFamily(3, 0.7, 1.3)
    n = np.arange(5)
    np.testing.assert_allclose(f.terms(n), 3 * (n + 1.0) ** -0.7 * np.log(n + math.e) ** -1.3, rtol=1e-14)


@pytest.mark.parametrize("kw", [dict(C=0, a=1, b=0), dict(C=1, a=-0.1, b=0), dict(C=1, a=math.nan, b=0)])
def test_power_log_rejects(kw):
    with pytest.raises(ValueError):
        PowerLogFamily(**kw)


def test_materialize_clamps_increasing_head():
    # b < 0 with a = 0 increases forever; the running minimum flattens it
    mu = materialize(PowerLogFamily(1, 0, -1), 6)
    assert np.all(mu.values == 1.0)


@given(families, st.integers(1, 200), st.integers(0, 200))
def test_materialize_prefix_stable(f, N, extra):
    M = N + extra
    raw = f.terms(np.arange(M))
    long = materialize(f, M).values
    short = materialize(f, N).values
    if np.all(np.diff(raw) <= 0):
        np.testing.assert_array_equal(short, long[:N])
    # the running minimum is prefix-stable regardless
    np.testing.assert_array_equal(short, long[:N])


@given(families, families, st.integers(1, 300))
def test_pointwise_product_matches_summed_parameters(f, g, N):
    fg = f * g
    assert (fg.C, fg.a, fg.b) == pytest.approx((f.C * g.C, f.a + g.a, f.b + g.b))
    rawf, rawg = f.terms(np.arange(N)), g.terms(np.arange(N))
    if np.all(np.diff(rawf) <= 0) and np.all(np.diff(rawg) <= 0):
        prod = pointwise_product(materialize(f, N), materialize(g, N))
        np.testing.assert_allclose(prod.values, materialize(fg, N).values, rtol=1e-12)


def test_pointwise_product_examples():
    half = MonotoneSequence([1, 0.5])
    assert list(pointwise_product(half, half).values) == [1, 0.25]
    x = MonotoneSequence([3, 2, 2])
    assert pointwise_product(x, MonotoneSequence([1, 1, 1])) == x
    p = pointwise_product(materialize(PowerLogFamily(1, 0.75, 0), 4), materialize(PowerLogFamily(1, 0.25, 0), 4))
    np.testing.assert_allclose(p.values, [1, 0.5, 1 / 3, 0.25], rtol=1e-12)
    with pytest.raises(ValueError):
        pointwise_product(half, x)


def test_explicit_and_sum_families():
    h = ExplicitFamily(lambda n: 1.0 / (n + 1.0), "harmonic")
    s = FamilySum(h, PowerLogFamily(1, 1, 0), weights=(1.0, 2.0))
    np.testing.assert_allclose(materialize(s, 3).values, [3, 1.5, 1.0])


# -- CSV ---------------------------------------------------------------------------


@given(monotone_arrays)
def test_csv_round_trip(v):
    mu = MonotoneSequence(v)
    assert read_csv(io.StringIO(write_csv(mu))) == mu


@pytest.mark.parametrize(
    "text, line",
    [
        ("mu\n1\n2\n", 3),
        ("mu\n1\nabc\n", 3),
        ("mu\n1\n-1\n", 3),
        ("x\n1\n", 1),
        ("mu\n1,2\n", 2),
        ("mu\n", 1),
    ],
)
def test_csv_errors_carry_line(text, line):
    with pytest.raises(SequenceFormatError) as err:
        read_csv(io.StringIO(text), source="mu.csv")
    assert err.value.lineno == line
    assert f"mu.csv:{line}" in str(err.value)
