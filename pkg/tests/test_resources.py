"""Concatenation levels, control counts and the Shor resource report."""

import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holoft.errors import ConcatHarmful, DomainError
from holoft.resources import (CSV_HEADER, THRESHOLDS, ResourceParams, concat_level, controls_madd,
                              controls_semiglobal, controls_uadd, csv_row, delta_k, delta_k_prime,
                              levels_by_iteration, params_from_mapping, ratio_derived_form,
                              ratio_printed_form, recursion_check, recursion_iterate, report,
                              shor_params, significant_advantage)

P_TH = THRESHOLDS.p_thresh_toffoli


def test_threshold_constants():
    assert THRESHOLDS.p_h_anc_thresh == pytest.approx(0.1464466, abs=1e-7)
    assert THRESHOLDS.p_thresh_toffoli == 3.76e-5
    assert THRESHOLDS.p_thresh_measured == 1.2e-4


# ---------------------------------------------------------------------------
# counts

def test_semiglobal_counts():
    assert controls_semiglobal(1) == 33
    assert controls_semiglobal(4) == 27 * 729 + 6 * 27 == 19845
    with pytest.raises(ValueError):
        controls_semiglobal(0)


def test_addressable_counts():
    assert controls_uadd(1540, 3) == 1540 * (27 * 81 + 6 * 9) == 3451140
    assert controls_madd(1540, 3) == 1540 * 27 * 81
    with pytest.raises(ValueError):
        controls_madd(10, 0)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 10), st.integers(1, 10 ** 6))
def test_semiglobal_count_independent_of_register(k, n_c):
    assert controls_uadd(n_c, k) == n_c * controls_semiglobal(k)
    assert controls_semiglobal(k + 1) > controls_semiglobal(k)


def test_ratio_forms():
    n_u, n_s = controls_uadd(1540, 3), controls_semiglobal(4)
    assert ratio_derived_form(1540, 3, 4) == pytest.approx(n_u / n_s, rel=1e-12)
    # the printed closed form uses 3^(2+k) and is off by about one percent
    assert ratio_printed_form(1540, 3, 4) == pytest.approx(172.047424, abs=1e-6)


# ---------------------------------------------------------------------------
# levels

def test_recursion_closed_form_matches_iteration():
    for k in range(8):
        a = recursion_check(1e-6, P_TH, k)
        b = recursion_iterate(1e-6, P_TH, k)
        assert float(abs(a - b) / b) < 1e-12
    assert float(recursion_check(1e-6, P_TH, 0)) == pytest.approx(1e-6, rel=1e-15)
    assert float(recursion_check(P_TH, P_TH, 5)) == pytest.approx(P_TH, rel=1e-15)
    with pytest.raises(ValueError):
        recursion_check(1e-6, P_TH, -1)


def test_concat_level_meets_target():
    f = 2.783e12
    k = concat_level(0.03, 1e-6, P_TH, f)
    # at the real level the closed form lands exactly on epsilon / f
    p_k = P_TH * (1e-6 / P_TH) ** (2 ** float(k))
    assert p_k == pytest.approx(0.03 / f, rel=1e-9)
    assert levels_by_iteration(0.03, 1e-6, P_TH, f) == math.ceil(float(k))


@settings(max_examples=60, deadline=None)
@given(st.floats(1e3, 1e20), st.floats(1.01, 100))
def test_concat_level_monotone_in_circuit_size(f, mult):
    assert concat_level(0.03, 1e-6, P_TH, f * mult) > concat_level(0.03, 1e-6, P_TH, f)


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-9, 3e-5), st.floats(1.01, 1.2))
def test_concat_level_monotone_in_physical_rate(p0, mult):
    if p0 * mult >= P_TH:
        return
    assert concat_level(0.03, p0 * mult, P_TH, 1e12) > concat_level(0.03, p0, P_TH, 1e12)


def test_concat_level_domain():
    with pytest.raises(ConcatHarmful):
        concat_level(0.03, 5e-5, P_TH, 1e12)
    with pytest.raises(ConcatHarmful):
        concat_level(0.5, 1e-6, P_TH, 1.0)


# ---------------------------------------------------------------------------
# level differences

def test_delta_k_matches_level_difference():
    p = shor_params(768)
    r = report(p)
    assert r.delta_k == pytest.approx(r.k_sg_real - r.k_uadd_real, abs=1e-9)
    assert r.delta_k == pytest.approx(0.48, abs=0.01)
    assert float(delta_k(p.n_c, p.beta, p.t, p.p_thresh, p.epsilon)) == pytest.approx(r.delta_k, abs=1e-12)


def test_delta_k_prime_matches_level_difference():
    r = report(shor_params(768))
    assert float(delta_k_prime(r.params)) == pytest.approx(r.k_sg_real - r.k_prime_real, abs=1e-9)


def test_delta_k_domain():
    with pytest.raises(DomainError):
        delta_k(2, 1e-3, 1.0, P_TH, 0.03)


@pytest.mark.parametrize("bits", range(512, 8193, 256))
def test_level_jump_is_zero_or_one(bits):
    r = report(shor_params(bits))
    assert r.Delta_k in (0, 1)
    assert 0 <= r.delta_k < 1


def test_significant_advantage():
    assert significant_advantage(shor_params(768))
    assert not significant_advantage(ResourceParams(n_c=2, beta=1e-3, t=1.0, p0=1e-6))


# ---------------------------------------------------------------------------
# Shor report

def test_shor_params():
    p = shor_params(768)
    assert p.n_c == 1540
    assert float(p.f) == pytest.approx(8 * 768 ** 4, rel=1e-12)
    assert float(p.f) == pytest.approx(2.783e12, rel=1e-3)


def test_shor_768_report():
    r = report(shor_params(768))
    assert (r.k_uadd, r.k_sg, r.Delta_k) == (3, 4, 1)
    assert r.n_sg == 19845
    assert r.n_uadd == 3451140
    assert r.significant_advantage
    assert r.ratio_uadd == pytest.approx(3451140 / 19845)
    # printed quotients are reported, not asserted
    assert any("printed N_uAdd/N_sg" in w for w in r.warnings)


def test_report_text_is_stable():
    a = report(shor_params(2048)).to_text()
    assert a == report(shor_params(2048)).to_text()
    assert "n_sg=" in a and a.endswith("\n")


def test_csv_row_matches_header():
    row = csv_row(report(shor_params(768)))
    assert len(row.split(",")) == len(CSV_HEADER.split(","))
    assert row.startswith("768,1540,")


def test_params_from_mapping():
    p = params_from_mapping(json.loads('{"n_c": 100, "beta": 8.0, "t": 4}'))
    assert p.n_c == 100
    with pytest.raises(ValueError):
        params_from_mapping({"n_c": 1, "gamma": 2})
    with pytest.raises(ValueError):
        params_from_mapping({"beta": 2})
    with pytest.raises(ValueError):
        ResourceParams(n_c=10, p0=1e-3)
