import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twostep.combinat import binomial, dim_forms, macaulay_growth
from twostep.profiles import (
    NestedProfile,
    RegimeError,
    SyzygyRegime,
    TwoStepProfile,
    classify,
    expected_tangent_dims,
    smoothable_dim,
    stratum_dim_bound,
)


@st.composite
def admissible_profiles(draw, n_max=5, k_max=4):
    n = draw(st.integers(2, n_max))
    k = draw(st.integers(1, k_max))
    h = draw(st.integers(0, dim_forms(n, k)))
    lo = macaulay_growth(n, k, h)
    h1 = draw(st.integers(lo, dim_forms(n, k + 1)))
    return TwoStepProfile(n, k, h, h1)


def test_classify_paper_examples():
    assert classify(TwoStepProfile(3, 6, 11, 31)) == SyzygyRegime.VERY_FEW
    assert classify(TwoStepProfile(4, 2, 2, 15)) == SyzygyRegime.NO_SYZYGIES
    assert classify(TwoStepProfile(4, 3, 8, 27)) == SyzygyRegime.FEW
    assert classify(TwoStepProfile(4, 2, 7, 20)) == SyzygyRegime.DEGENERATE_1STEP
    assert classify(TwoStepProfile(2, 3, 3, 4)) == SyzygyRegime.FEW
    assert classify(TwoStepProfile(4, 2, 4, 10)) == SyzygyRegime.LOTS


@given(admissible_profiles())
@settings(max_examples=60)
def test_classify_partitions(p):
    reg = classify(p)
    if p.h_k == 0 or p.h_k1 == p.r_k1:
        assert reg == SyzygyRegime.DEGENERATE_1STEP
    elif p.s_h >= 0:
        assert reg == SyzygyRegime.NO_SYZYGIES
    elif p.n * (-p.s_h) <= p.h_k:
        assert reg == SyzygyRegime.VERY_FEW
    elif -p.s_h < p.h_k:
        assert reg == SyzygyRegime.FEW
    else:
        assert reg == SyzygyRegime.LOTS


def test_derived_invariants():
    p = TwoStepProfile(3, 6, 11, 31)
    assert (p.q_k, p.q_k1) == (17, 5)
    assert p.s_h == -2
    assert p.t_h == dim_forms(3, 8) - 3 * 31 + 3 * 11 == -15
    assert p.colength == 78


@given(admissible_profiles())
@settings(max_examples=60)
def test_colength_closed_forms_agree(p):
    lhs = binomial(p.k + p.n + 1, p.n) - p.h_k - p.h_k1
    rhs = binomial(p.k + p.n - 1, p.n) + p.q_k + p.q_k1
    assert p.colength == lhs == rhs
    assert p.colength == p.quotient_hf().colength()


def test_expected_tangent_dims():
    p = TwoStepProfile(3, 6, 11, 31)
    et = expected_tangent_dims(p)
    assert et.t1 == 55
    assert et.t0_lower == 11 * 17 + (-2) * 5 == 177
    assert expected_tangent_dims(TwoStepProfile(4, 2, 2, 15)).t1 == 10


def test_tneg1_lower_bound_validates_b():
    p = TwoStepProfile(4, 2, 2, 15)
    et = expected_tangent_dims(p)
    assert et.b_max == 0
    assert et.tneg1_lower(0) == 0  # raw value is -1, clamped at 0
    with pytest.raises(ValueError):
        et.tneg1_lower(1)


def test_stratum_dim_bound_examples():
    assert stratum_dim_bound(NestedProfile((TwoStepProfile(3, 6, 11, 31),))) == 232
    assert stratum_dim_bound(NestedProfile((TwoStepProfile(4, 2, 2, 15),))) == 61
    zeroish = NestedProfile((TwoStepProfile(2, 1, 0, 0),))
    assert stratum_dim_bound(zeroish) == 0


def test_stratum_dim_bound_refuses_few():
    p = TwoStepProfile(4, 3, 8, 27)
    with pytest.raises(RegimeError) as err:
        stratum_dim_bound(NestedProfile((p,)))
    assert err.value.level == 0


def test_stratum_equals_t1_plus_t0():
    for p in (TwoStepProfile(4, 2, 2, 15), TwoStepProfile(3, 6, 11, 31)):
        et = expected_tangent_dims(p)
        if et.t0_lower > 0:
            assert stratum_dim_bound(NestedProfile((p,))) == et.t1 + et.t0_lower


def test_smoothable_dim():
    assert smoothable_dim(3, 78) == 234
    assert smoothable_dim(2, 565) == 1130
    assert smoothable_dim(5, 0) == 0


def test_nested_profile_validation():
    fig7 = NestedProfile((TwoStepProfile(3, 2, 0, 6), TwoStepProfile(3, 3, 1, 10)))
    assert fig7.colengths == (14, 24)
    with pytest.raises(ValueError):
        NestedProfile((TwoStepProfile(3, 2, 0, 6), TwoStepProfile(3, 3, 7, 21)))
    with pytest.raises(ValueError):
        NestedProfile((TwoStepProfile(3, 2, 0, 6), TwoStepProfile(3, 4, 1, 10)))


def test_fig4a_nested_profile():
    pairs = [(14, 28), (11, 26), (9, 25), (8, 22)]
    np_ = NestedProfile(tuple(TwoStepProfile(2, 29 + i, a, b) for i, (a, b) in enumerate(pairs)))
    assert np_.colengths == (454, 491, 527, 565)
    assert np_.lattice_point() == (14, 28, 11, 26, 9, 25, 8, 22)
    assert stratum_dim_bound(np_) == 1128


def test_json_round_trip():
    pairs = [(0, 6), (1, 10)]
    np_ = NestedProfile(tuple(TwoStepProfile(3, 2 + i, a, b) for i, (a, b) in enumerate(pairs)))
    blob = json.dumps(np_.to_json_dict(), sort_keys=True)
    back = NestedProfile.from_json_dict(json.loads(blob))
    assert back == np_
    assert json.loads(blob) == {"n": 3, "k": 2, "pairs": [[0, 6], [1, 10]]}


def test_from_quotient_values():
    p = TwoStepProfile.from_quotient_values(6, (1, 6, 14, 13))
    assert (p.k, p.h_k, p.h_k1) == (2, 7, 43)
    p = TwoStepProfile.from_quotient_values(4, (1, 4, 3))
    assert (p.k, p.h_k, p.h_k1) == (2, 7, 20)
    with pytest.raises(ValueError):
        TwoStepProfile.from_quotient_values(3, (1, 3, 6, 10))  # no drop anywhere
