import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nbthermo.special import (
    ERFI_PLAIN_LIMIT,
    LOG_ZERO,
    ErfiOverflowError,
    LogSigned,
    dawson,
    erfi,
    erfi_scaled,
    log_erf_diff,
    log_erfc,
    log_signed_sum,
    log_sum_exp,
)

from oracles import dawson_asymptotic, erfi_from_dawson_asymptotic, erfi_maclaurin


def test_erfi_zero():
    assert erfi(0.0) == 0.0


def test_erfi_one_matches_series_oracle():
    # frozen from the Maclaurin oracle summed to machine convergence
    assert erfi(1.0) == pytest.approx(1.650425758797543, rel=1e-15)
    assert erfi(1.0) == pytest.approx(erfi_maclaurin(1.0), rel=1e-15)


@given(st.floats(min_value=1e-3, max_value=5.0))
def test_erfi_odd(x):
    assert erfi(-x) == -erfi(x)


@given(st.floats(min_value=0.01, max_value=10.0), st.floats(min_value=0.01, max_value=1.0))
@settings(max_examples=50)
def test_erfi_strictly_increasing(x, dx):
    assert erfi(x + dx) > erfi(x)


def test_erfi_overflow_guard():
    with pytest.raises(ErfiOverflowError, match="erfi_scaled"):
        erfi(ERFI_PLAIN_LIMIT + 0.5)
    with pytest.raises(ValueError):
        erfi(math.nan)


def test_erfi_against_maclaurin_oracle_core_range():
    for x in np.linspace(-4.0, 4.0, 201):
        if x == 0.0:
            continue
        assert erfi(float(x)) == pytest.approx(erfi_maclaurin(float(x)), rel=1e-14)


def test_erfi_against_oracles_outer_range():
    # the asymptotic oracle's own truncation error is ~exp(-x^2), so the
    # series oracle (valid to x ~ 26.3) covers the low end of the range
    for x in np.linspace(4.0, 5.5, 40):
        assert erfi(float(x)) == pytest.approx(erfi_maclaurin(float(x)), rel=1e-13)
    for x in np.linspace(5.5, 26.0, 100):
        assert erfi(float(x)) == pytest.approx(
            erfi_from_dawson_asymptotic(float(x)), rel=1e-11
        )


def test_branch_continuity_at_switch_points():
    # both regimes evaluated at the same seam point must agree
    from nbthermo.special import _dawson_asymptotic, _dawson_sampling

    # x = 4: series regime (oracle) vs the sampling-series regime (erfi here)
    assert erfi(4.0) == pytest.approx(erfi_maclaurin(4.0), rel=1e-12)
    # x = 8: sampling regime vs asymptotic regime
    assert _dawson_sampling(8.0) == pytest.approx(_dawson_asymptotic(8.0), rel=1e-12)


def test_dawson_against_oracles():
    for x in (4.0, 4.5, 5.0, 6.5, 7.9):
        want = SQRT_PI_HALF * math.exp(-x * x) * erfi_maclaurin(x)
        assert dawson(x) == pytest.approx(want, rel=1e-13)
    for x in (8.0, 12.0, 100.0, 1e6):
        assert dawson(x) == pytest.approx(dawson_asymptotic(x), rel=1e-13)
    assert dawson(-5.0) == -dawson(5.0)


SQRT_PI_HALF = math.sqrt(math.pi) / 2.0


def test_erfi_scaled_zero_sentinel():
    es = erfi_scaled(0.0)
    assert es.log_magnitude == LOG_ZERO
    assert es.value() == 0.0


def test_erfi_scaled_reconstructs_plain():
    es = erfi_scaled(1.0)
    assert es.value() == pytest.approx(erfi_maclaurin(1.0), rel=1e-13)
    assert erfi_scaled(-1.0).value() == pytest.approx(-erfi_maclaurin(1.0), rel=1e-13)


def test_erfi_scaled_reconstruction_invariant_small_range():
    for x in np.linspace(-3.0, 3.0, 61):
        if x == 0.0:
            continue
        assert erfi_scaled(float(x)).value() == pytest.approx(
            erfi_maclaurin(float(x)), rel=1e-12
        )


def test_erfi_scaled_x30_leading_order():
    es = erfi_scaled(30.0)
    f30 = dawson_asymptotic(30.0)
    assert f30 == pytest.approx(1.0 / 60.0, rel=1e-3)  # F ~ 1/(2x) leading order
    assert es.log_magnitude == pytest.approx(900.0 + math.log(2.0 * f30 / math.sqrt(math.pi)), rel=1e-13)
    assert es.sign == 1


def test_erfi_scaled_huge_arguments_stay_finite():
    for x in (50.0, 300.0, 3000.0):
        es = erfi_scaled(x)
        assert math.isfinite(es.log_magnitude)
        assert erfi_scaled(-x).sign == -1


# =============================================================================
# signed log arithmetic
# =============================================================================

def test_log_signed_roundtrip_and_sum():
    a = LogSigned.from_value(3.5)
    b = LogSigned.from_value(-1.25)
    assert a.value() == pytest.approx(3.5)
    assert a.times(b).value() == pytest.approx(-4.375)
    assert log_signed_sum([a, b]).value() == pytest.approx(2.25)
    assert log_signed_sum([a, LogSigned.from_value(-3.5)]).sign == 0
    assert log_signed_sum([]).value() == 0.0


def test_log_signed_sum_survives_huge_exponents():
    big = LogSigned.from_log(5000.0, 1)
    slightly_less = LogSigned.from_log(4999.0, -1)
    out = log_signed_sum([big, slightly_less])
    assert out.sign == 1
    assert out.log_abs == pytest.approx(5000.0 + math.log1p(-math.exp(-1.0)), rel=1e-14)


def test_log_sum_exp_plain():
    assert log_sum_exp([0.0, 0.0]) == pytest.approx(math.log(2.0))
    assert log_sum_exp([LOG_ZERO]) == LOG_ZERO
    assert log_sum_exp([1000.0, 1000.0]) == pytest.approx(1000.0 + math.log(2.0))


# =============================================================================
# erf helpers used by the closed-form partition function
# =============================================================================

def _log_erfc_asymptotic_oracle(x: float) -> float:
    inv = 1.0 / (2.0 * x * x)
    total, term, prev = 1.0, 1.0, 1.0
    for k in range(1, 40):
        term *= -(2 * k - 1) * inv
        if abs(term) >= prev:
            break
        prev = abs(term)
        total += term
    return -x * x - math.log(x * math.sqrt(math.pi)) + math.log(total)


def test_log_erfc_matches_stdlib_and_is_continuous():
    for x in (0.0, 1.0, 5.0, 20.0, 24.9):
        assert log_erfc(x) == pytest.approx(math.log(math.erfc(x)), rel=1e-14)
    # both branches at the seam point itself
    assert math.log(math.erfc(25.0)) == pytest.approx(_log_erfc_asymptotic_oracle(25.0), rel=1e-14)
    for x in (30.0, 100.0):
        assert log_erfc(x) == pytest.approx(_log_erfc_asymptotic_oracle(x), rel=1e-14)


def test_log_erf_diff_moderate_args():
    cases = [(1.3, -0.7), (0.5, 0.1), (-0.1, -2.0), (2.0, 1.0)]
    for a, b in cases:
        want = math.log(math.erf(a) - math.erf(b))
        assert log_erf_diff(a, b) == pytest.approx(want, rel=1e-13)


def test_log_erf_diff_saturated_tails():
    # both erf values round to 1.0; the difference must come out of the tails
    a, b = 40.0, 30.0
    got = log_erf_diff(a, b)
    want = log_erfc(b) + math.log1p(-math.exp(log_erfc(a) - log_erfc(b)))
    assert got == pytest.approx(want, rel=1e-14)
    assert math.isfinite(got) and got < -800.0
    # mirrored pair
    assert log_erf_diff(-30.0, -40.0) == pytest.approx(got, rel=1e-14)
    assert log_erf_diff(1.0, 1.0) == LOG_ZERO
    with pytest.raises(ValueError):
        log_erf_diff(0.0, 1.0)
